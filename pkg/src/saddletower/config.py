"""Configuration data model: layer sizes, neck positions and end parameters.

A configuration is the pair ``(q, theta_dot)``.  Necks on layer ``l`` (the
slab between planes ``l`` and ``l+1``) sit at ``ln q[l][k] + 2 pi i m``; the
end parameters are kept as two arrays, ``theta_left[l-1]`` for the end
``0_l`` and ``theta_right[l-1]`` for the end ``inf_l``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ConsistencyFailure,
    DuplicateNodeError,
    ShapeMismatchError,
    Theta1NonzeroError,
    ZeroNodeError,
)

NODE_TOL = 1e-12
LINEAR_TOL = 1e-10


def _frozen(a) -> np.ndarray:
    arr = np.array(a)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Configuration:
    layers: tuple[int, ...]
    nodes: tuple[np.ndarray, ...]
    theta_left: np.ndarray
    theta_right: np.ndarray

    def __init__(self, layers, nodes, theta_left, theta_right):
        object.__setattr__(self, "layers", tuple(int(n) for n in layers))
        object.__setattr__(
            self,
            "nodes",
            tuple(_frozen(np.asarray(layer, dtype=complex)) for layer in nodes),
        )
        object.__setattr__(self, "theta_left", _frozen(np.asarray(theta_left, dtype=float)))
        object.__setattr__(self, "theta_right", _frozen(np.asarray(theta_right, dtype=float)))

    @classmethod
    def from_flat(cls, layers, nodes, theta) -> "Configuration":
        """Build from interleaved end parameters (t_{1,0}, t_{1,inf}, t_{2,0}, ...)."""
        theta = np.asarray(theta, dtype=float)
        if theta.size % 2:
            raise ShapeMismatchError(f"odd number of end parameters ({theta.size})")
        return cls(layers, nodes, theta[0::2], theta[1::2])

    @property
    def L(self) -> int:
        return len(self.layers)

    @property
    def N(self) -> int:
        return int(sum(self.layers))

    @property
    def genus(self) -> int:
        return self.N - self.L

    @property
    def flat_nodes(self) -> np.ndarray:
        """All nodes in lexicographic (l, k) order."""
        if not self.nodes:
            return np.zeros(0, dtype=complex)
        return np.concatenate(self.nodes)

    @property
    def theta_flat(self) -> np.ndarray:
        out = np.empty(2 * len(self.theta_left))
        out[0::2] = self.theta_left
        out[1::2] = self.theta_right
        return out

    def left_gaps(self) -> np.ndarray:
        """theta_{l+1,0} - theta_{l,0} for l = 1..L."""
        return np.diff(self.theta_left)

    def index(self) -> list[tuple[int, int]]:
        """1-based (l, k) labels in the flat ordering."""
        return [(l + 1, k + 1) for l, n in enumerate(self.layers) for k in range(n)]

    def with_nodes(self, nodes) -> "Configuration":
        if isinstance(nodes, np.ndarray) and nodes.ndim == 1 and len(self.nodes) and nodes.size == self.N:
            nodes = np.split(nodes, np.cumsum(self.layers)[:-1])
        return Configuration(self.layers, nodes, self.theta_left, self.theta_right)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.layers == other.layers
            and len(self.nodes) == len(other.nodes)
            and all(np.array_equal(a, b) for a, b in zip(self.nodes, other.nodes))
            and np.array_equal(self.theta_left, other.theta_left)
            and np.array_equal(self.theta_right, other.theta_right)
        )

    def __repr__(self) -> str:
        return (
            f"Configuration(layers={self.layers}, nodes={[list(a) for a in self.nodes]}, "
            f"theta_left={list(self.theta_left)}, theta_right={list(self.theta_right)})"
        )

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "layers": list(self.layers),
            "nodes": [[[float(z.real), float(z.imag)] for z in layer] for layer in self.nodes],
            "theta_dot": {
                "left": [float(t) for t in self.theta_left],
                "right": [float(t) for t in self.theta_right],
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Configuration":
        try:
            layers = doc["layers"]
            nodes = [[complex(re, im) for re, im in layer] for layer in doc["nodes"]]
            left = doc["theta_dot"]["left"]
            right = doc["theta_dot"]["right"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeMismatchError(f"malformed configuration document: {exc!r}") from exc
        return cls(layers, nodes, left, right)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ShapeMismatchError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)


@dataclass(frozen=True)
class LayerResidues:
    """c_0 .. c_{L+1}, with zero boundary entries."""

    c: np.ndarray = field(repr=True)

    @property
    def inner(self) -> np.ndarray:
        return self.c[1:-1]

    def __getitem__(self, l: int) -> float:
        return float(self.c[l])


def validate(config: Configuration) -> None:
    """Raise a ValidationError subclass if ``config`` is malformed."""
    L = len(config.layers)
    if L < 1:
        raise ShapeMismatchError("need at least one layer")
    if len(config.nodes) != L:
        raise ShapeMismatchError(f"{len(config.nodes)} node lists for {L} layers")
    for l, (n, q) in enumerate(zip(config.layers, config.nodes), start=1):
        if n < 1:
            raise ShapeMismatchError(f"layer {l} has n_l = {n} < 1")
        if q.size != n:
            raise ShapeMismatchError(f"layer {l}: expected {n} nodes, got {q.size}")
        if not np.all(np.isfinite(q)):
            raise ShapeMismatchError(f"layer {l}: non-finite node")
    if config.theta_left.size != L + 1 or config.theta_right.size != L + 1:
        raise ShapeMismatchError(
            f"expected 2(L+1) = {2 * (L + 1)} end parameters, got "
            f"{config.theta_left.size + config.theta_right.size}"
        )
    for l, q in enumerate(config.nodes, start=1):
        if np.any(q == 0):
            raise ZeroNodeError(f"layer {l} contains a node at 0")
        if q.size > 1:
            d = np.abs(q[:, None] - q[None, :])
            d[np.diag_indices_from(d)] = np.inf
            if d.min() <= NODE_TOL:
                i, j = np.unravel_index(np.argmin(d), d.shape)
                raise DuplicateNodeError(f"layer {l}: nodes {i + 1} and {j + 1} coincide")


def theta1(config: Configuration) -> float:
    return float(np.sum(config.theta_left) + np.sum(config.theta_right))


def theta2(config: Configuration) -> float:
    """Sum of squared end parameters, (t_inf^2 - t_0^2)/2 over all planes."""
    return float(0.5 * np.sum(config.theta_right**2 - config.theta_left**2))


def derive_residues(config: Configuration, tol: float = LINEAR_TOL) -> LayerResidues:
    t1 = theta1(config)
    if abs(t1) > tol:
        raise Theta1NonzeroError(f"Theta_1 = {t1:.3e} is not zero")
    L = config.L
    n = np.zeros(L + 2)
    n[1 : L + 1] = config.layers
    c = np.zeros(L + 2)
    ends = config.theta_left + config.theta_right
    for l in range(1, L + 1):
        c[l] = (n[l - 1] * c[l - 1] + ends[l - 1]) / n[l]
    last = n[L] * c[L] + ends[L]
    scale = 1.0 + np.max(np.abs(config.theta_left)) + np.max(np.abs(config.theta_right))
    if abs(last) > LINEAR_TOL * scale:
        raise ConsistencyFailure(f"residue relation at l = L+1 off by {last:.3e}")
    c.setflags(write=False)
    return LayerResidues(c)


def residue_relation_residuals(config: Configuration, residues: LayerResidues) -> np.ndarray:
    """-n_l c_l + n_{l-1} c_{l-1} + t_{l,0} + t_{l,inf} for l = 1..L+1."""
    L = config.L
    n = np.zeros(L + 2)
    n[1 : L + 1] = config.layers
    c = residues.c
    l = np.arange(1, L + 2)
    return -n[l] * c[l] + n[l - 1] * c[l - 1] + config.theta_left + config.theta_right


def from_residues(layers, nodes, c: Sequence[float], theta_left: Sequence[float]) -> Configuration:
    """Build a configuration from the alternative parameters (c_l, theta_{l,0}).

    ``c`` lists c_1..c_L; ``theta_left`` lists all L+1 left end parameters.  The
    right end parameters are chosen so the residue relations hold exactly, which
    also makes Theta_1 vanish.
    """
    L = len(layers)
    c = np.asarray(c, dtype=float)
    left = np.asarray(theta_left, dtype=float)
    if c.size != L or left.size != L + 1:
        raise ShapeMismatchError("need L residues and L+1 left end parameters")
    nc = np.zeros(L + 2)
    nc[1 : L + 1] = np.asarray(layers) * c
    right = nc[1:] - nc[:-1] - left
    return Configuration(layers, nodes, left, right)


def from_gaps(layers, nodes, c: Sequence[float], gaps: Sequence[float], theta0: float = 0.0) -> Configuration:
    """Like :func:`from_residues` but from the L left gaps theta_{l+1,0} - theta_{l,0}."""
    left = theta0 + np.concatenate([[0.0], np.cumsum(np.asarray(gaps, dtype=float))])
    return from_residues(layers, nodes, c, left)


def normalize_scale(config: Configuration) -> Configuration:
    validate(config)
    q11 = config.nodes[0][0]
    nodes = [q / q11 for q in config.nodes]
    # complex division need not give exactly 1; pin it so the map is idempotent
    nodes[0][0] = 1.0
    return config.with_nodes(nodes)


def reverse_layers(config: Configuration) -> Configuration:
    """Turn the configuration upside down (layer l becomes layer L+1-l).

    Balance is preserved: the residues are reversed and every end parameter
    changes sign.
    """
    return Configuration(
        config.layers[::-1],
        config.nodes[::-1],
        -config.theta_left[::-1],
        -config.theta_right[::-1],
    )
