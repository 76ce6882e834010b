"""Chaining (1,n,1) blocks into (1,n_2,1,n_4,...,1) configurations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..config import Configuration, derive_residues, from_gaps, reverse_layers
from ..errors import BlockNotBalancedError, BlockNotNormalizedError, ConsistencyFailure
from ..forces import force
from ..poly.hypergeom import n1_config
from ..poly.lame import symmetric_block
from .analysis import profile_is_concave

BLOCK_TOL = 1e-10
OUTPUT_TOL = 1e-9


def _check_block(block: Configuration, r: int, tail: bool) -> None:
    shape_ok = len(block.layers) == (2 if tail else 3) and block.layers[0] == 1 and (tail or block.layers[2] == 1)
    if not shape_ok:
        raise BlockNotNormalizedError(f"block {r} has type {block.layers}")
    c = derive_residues(block).c
    if abs(c[2] - 1) > 1e-12 or abs(block.nodes[0][0] - 1) > 1e-12:
        raise BlockNotNormalizedError(f"block {r} needs c_2 = 1 and q_(1,1) = 1")
    res = force(block).max_abs_force
    if res > BLOCK_TOL:
        raise BlockNotBalancedError(f"block {r} has max|F| = {res:.3e}")


def concatenate(blocks: Sequence[Configuration], tail: bool = False, c_first: float | None = None) -> Configuration:
    """Glue blocks along their single-neck layers.

    Block r is rescaled (residues by c_{2r}, nodes by q_{2r-1,1}) so that its
    first layer coincides with the last layer of block r-1.  With ``tail`` the
    final block has type (1,n) and the chain ends on a layer with n necks.
    ``c_first`` sets c_1 (default: that of the first block, so a single block
    is returned unchanged); the gauge t_{1,0} = 0 is always used.
    """
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    for r, b in enumerate(blocks, start=1):
        _check_block(b, r, tail and r == len(blocks))
    layers, nodes, c, gaps = [], [], [], []
    c_odd = float(derive_residues(blocks[0]).c[1]) if c_first is None else float(c_first)
    q_odd = 1.0 + 0j
    prev_out = 0.0  # c_{2r-2} (g3 + c3) of the previous block
    for r, b in enumerate(blocks, start=1):
        cb = derive_residues(b).c
        gb = b.left_gaps()
        c_even = c_odd / cb[1]
        layers += [1, b.layers[1]]
        nodes += [[q_odd], q_odd * b.nodes[1]]
        c += [c_odd, c_even]
        gaps += [c_even * (gb[0] + cb[1]) + prev_out - c_odd, c_even * gb[1]]
        if len(b.layers) == 3:
            c_next = c_odd * cb[3] / cb[1]
            prev_out = c_even * (gb[2] + cb[3])
            q_odd = q_odd * b.nodes[2][0]
            c_odd = c_next
        else:
            c_odd = None
    if c_odd is not None:
        layers.append(1)
        nodes.append([q_odd])
        c.append(c_odd)
        gaps.append(prev_out - c_odd)
    out = from_gaps(layers, nodes, c, gaps, theta0=0.0)
    res = force(out).max_abs_force
    if res > OUTPUT_TOL:
        raise ConsistencyFailure(f"concatenation left max|F| = {res:.3e}")
    return out


def tail_block(n: int, b: float, c: float) -> Configuration:
    """(1,n) block: an (n,1) hypergeometric configuration turned upside down."""
    return reverse_layers(n1_config(n, b, c))


def symmetric_chain(sizes: Sequence[int], profile: Sequence[float]) -> Configuration:
    """Chain of symmetric blocks realizing a given profile n_l c_l.

    ``sizes`` lists n_2, n_4, ..., n_{2R}; ``profile`` lists n_l c_l for
    l = 1..2R+1.  Every odd layer has one neck at 1.
    """
    sizes = [int(n) for n in sizes]
    p = np.asarray(profile, dtype=float)
    if p.size != 2 * len(sizes) + 1:
        raise ValueError("profile must have 2R+1 entries")
    if not profile_is_concave(p):
        raise ValueError("profile n_l c_l must be concave for embeddedness")
    blocks = []
    for r, n in enumerate(sizes, start=1):
        c_even = p[2 * r - 1] / n
        blocks.append(symmetric_block(n, p[2 * r - 2] / c_even, p[2 * r] / c_even))
    return concatenate(blocks, c_first=p[0])
