"""Force map on neck positions, its alternative forms and its Jacobian.

All matrices and flat vectors use the lexicographic (l, k) ordering of
:attr:`Configuration.flat_nodes`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .config import (
    NODE_TOL,
    Configuration,
    LayerResidues,
    derive_residues,
    theta1,
    theta2,
    validate,
)
from .errors import CrossLayerCollisionError, ShapeMismatchError

INF = math.inf


@dataclass(frozen=True)
class PsiForm:
    """Pole data of the 1-form psi_l on the Riemann sphere.

    ``poles`` lists (location, residue); the location is a complex number for
    finite poles (the origin included) and ``math.inf`` for the point at
    infinity.
    """

    layer: int
    poles: tuple[tuple[complex | float, float], ...]

    @property
    def residue_sum(self) -> float:
        return float(sum(r for _, r in self.poles))

    def finite_poles(self) -> tuple[np.ndarray, np.ndarray]:
        locs = [p for p, _ in self.poles if p != INF]
        res = [r for p, r in self.poles if p != INF]
        return np.asarray(locs, dtype=complex), np.asarray(res, dtype=float)


@dataclass(frozen=True)
class ForceReport:
    forces: tuple[np.ndarray, ...]
    theta1: float
    theta2: float
    max_abs_force: float

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.forces)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("layer,k,re_F,im_F\n")
        for l, F in enumerate(self.forces, start=1):
            for k, f in enumerate(F, start=1):
                buf.write(f"{l},{k},{f.real:.17g},{f.imag:.17g}\n")
        buf.write(f"theta1,{self.theta1:.17g}\n")
        buf.write(f"theta2,{self.theta2:.17g}\n")
        buf.write(f"max_abs_force,{self.max_abs_force:.17g}\n")
        return buf.getvalue()


def _report(config: Configuration, forces: list[np.ndarray]) -> ForceReport:
    flat = np.concatenate(forces) if forces else np.zeros(0, complex)
    return ForceReport(
        forces=tuple(forces),
        theta1=theta1(config),
        theta2=theta2(config),
        max_abs_force=float(np.max(np.abs(flat))) if flat.size else 0.0,
    )


def _prepare(config: Configuration, residues: LayerResidues | None) -> LayerResidues:
    validate(config)
    if residues is None:
        residues = derive_residues(config)
    if residues.c.size != config.L + 2:
        raise ShapeMismatchError("residues do not match the number of layers")
    check_cross_layer(config)
    return residues


def check_cross_layer(config: Configuration, tol: float = NODE_TOL) -> None:
    for l in range(config.L - 1):
        d = np.abs(config.nodes[l][:, None] - config.nodes[l + 1][None, :])
        if d.min() <= tol:
            raise CrossLayerCollisionError(f"a node of layer {l + 1} coincides with one of layer {l + 2}")


def _layer(config: Configuration, l: int) -> np.ndarray:
    """Nodes of 1-based layer ``l``; empty outside 1..L."""
    if 1 <= l <= config.L:
        return config.nodes[l - 1]
    return np.zeros(0, dtype=complex)


def _ratio_sum(q: np.ndarray, other: np.ndarray) -> np.ndarray:
    """sum_j q_k / (q_k - other_j) for every k."""
    if other.size == 0:
        return np.zeros_like(q)
    return np.sum(q[:, None] / (q[:, None] - other[None, :]), axis=1)


def _self_sum(q: np.ndarray) -> np.ndarray:
    """sum_{j != k} q_k / (q_k - q_j)."""
    if q.size < 2:
        return np.zeros_like(q)
    diff = q[:, None] - q[None, :]
    np.fill_diagonal(diff, 1.0)
    terms = q[:, None] / diff
    np.fill_diagonal(terms, 0.0)
    return terms.sum(axis=1)


def layer_forces(config: Configuration, c: np.ndarray) -> list[np.ndarray]:
    """Unchecked force evaluation; ``c`` is indexed 0..L+1."""
    gaps = config.left_gaps()
    out = []
    for l in range(1, config.L + 1):
        q = _layer(config, l)
        F = (
            2 * c[l] ** 2 * _self_sum(q)
            - c[l] * c[l + 1] * _ratio_sum(q, _layer(config, l + 1))
            - c[l] * c[l - 1] * _ratio_sum(q, _layer(config, l - 1))
            + c[l] ** 2
            + c[l] * gaps[l - 1]
        )
        out.append(F)
    return out


def force(config: Configuration, residues: LayerResidues | None = None) -> ForceReport:
    residues = _prepare(config, residues)
    return _report(config, layer_forces(config, residues.c))


def psi_form(config: Configuration, residues: LayerResidues | None, l: int) -> PsiForm:
    if residues is None:
        residues = derive_residues(config)
    if not 1 <= l <= config.L + 1:
        raise IndexError(f"layer index {l} outside 1..{config.L + 1}")
    c = residues.c
    poles: list[tuple[complex | float, float]] = []
    poles += [(complex(z), -float(c[l])) for z in _layer(config, l)]
    poles += [(complex(z), float(c[l - 1])) for z in _layer(config, l - 1)]
    poles.append((0j, float(config.theta_left[l - 1])))
    poles.append((INF, float(config.theta_right[l - 1])))
    return PsiForm(layer=l, poles=tuple(poles))


def _residue_of_square(locs: np.ndarray, res: np.ndarray, a: int) -> complex:
    """Residue at locs[a] of z * (sum_i res_i / (z - locs_i))^2."""
    p = locs[a]
    others = np.arange(locs.size) != a
    cross = np.sum(res[others] * p / (p - locs[others]))
    return res[a] ** 2 + 2 * res[a] * cross


def force_residue_oracle(config: Configuration, residues: LayerResidues | None = None) -> ForceReport:
    """Forces as residues of (psi_l^2 + psi_{l+1}^2) z / (2 dz) at each neck.

    Works only from the pole data of the psi forms, so it is independent of the
    closed form used in :func:`force`.
    """
    residues = _prepare(config, residues)
    forces = []
    for l in range(1, config.L + 1):
        below = psi_form(config, residues, l).finite_poles()
        above = psi_form(config, residues, l + 1).finite_poles()
        n_l = config.layers[l - 1]
        # layer-l necks come first in psi_l, and after layer l+1 in psi_{l+1}
        offset = config.layers[l] if l < config.L else 0
        F = np.empty(n_l, dtype=complex)
        for k in range(n_l):
            F[k] = 0.5 * (
                _residue_of_square(*below, k) + _residue_of_square(*above, offset + k)
            )
        forces.append(F)
    return _report(config, forces)


def force_alt(
    config: Configuration, residues: LayerResidues | None = None, parity: str = "odd"
) -> ForceReport:
    """The two parity-dependent historical force expressions.

    ``parity`` is ``"odd"`` or ``"even"`` to apply that expression on every
    layer, or ``"layer"`` to pick it by the parity of each layer index.  Each
    differs from :func:`force` by a multiple of a residue relation, so all
    agree when the residues are derived from the end parameters.
    """
    if parity not in ("odd", "even", "layer"):
        raise ValueError(f"unknown parity {parity!r}")
    residues = _prepare(config, residues)
    c = residues.c
    tl, tr = config.theta_left, config.theta_right
    out = []
    for l in range(1, config.L + 1):
        use_odd = parity == "odd" or (parity == "layer" and l % 2 == 1)
        q = _layer(config, l)
        up, down = _layer(config, l + 1), _layer(config, l - 1)
        if q.size > 1:
            diff = q[:, None] - q[None, :]
            np.fill_diagonal(diff, 1.0)
            same = (q[:, None] + q[None, :]) / diff
            np.fill_diagonal(same, 0.0)
            same = same.sum(axis=1)
        else:
            same = np.zeros_like(q)
        F = c[l] ** 2 * same
        if use_odd:
            F = F - c[l] * c[l + 1] * _ratio_sum(q, up)
            if down.size:
                F = F - c[l] * c[l - 1] * np.sum(down[None, :] / (q[:, None] - down[None, :]), axis=1)
            F = F + c[l] * (tr[l - 1] + tl[l])
        else:
            if up.size:
                F = F - c[l] * c[l + 1] * np.sum(up[None, :] / (q[:, None] - up[None, :]), axis=1)
            F = F - c[l] * c[l - 1] * _ratio_sum(q, down)
            F = F - c[l] * (tl[l - 1] + tr[l])
        out.append(F)
    return _report(config, out)


def layer_force_sum(report: ForceReport, l: int) -> complex:
    """G_l, the sum of the forces on layer ``l`` (1-based)."""
    if not 1 <= l <= len(report.forces):
        raise IndexError(f"layer index {l} outside 1..{len(report.forces)}")
    return complex(np.sum(report.forces[l - 1]))


def jacobian(config: Configuration, residues: LayerResidues | None = None) -> np.ndarray:
    """Analytic complex Jacobian dF_{l,k}/dq_{l',j}, shape (N, N)."""
    residues = _prepare(config, residues)
    return jacobian_unchecked(config, residues.c)


def jacobian_unchecked(config: Configuration, c: np.ndarray) -> np.ndarray:
    N = config.N
    starts = np.concatenate([[0], np.cumsum(config.layers)])
    J = np.zeros((N, N), dtype=complex)
    for l in range(1, config.L + 1):
        q = config.nodes[l - 1]
        rows = slice(starts[l - 1], starts[l])
        if q.size > 1:
            diff = q[:, None] - q[None, :]
            np.fill_diagonal(diff, 1.0)
            off = 2 * c[l] ** 2 * q[:, None] / diff**2
            np.fill_diagonal(off, 0.0)
            diag = 2 * c[l] ** 2 * np.sum(np.where(np.eye(q.size, dtype=bool), 0.0, -q[None, :] / diff**2), axis=1)
            J[rows, rows] = off + np.diag(diag)
        for m in (l - 1, l + 1):
            if not 1 <= m <= config.L:
                continue
            p = config.nodes[m - 1]
            cols = slice(starts[m - 1], starts[m])
            cc = c[l] * c[m]
            d2 = (q[:, None] - p[None, :]) ** 2
            J[rows, cols] = -cc * q[:, None] / d2
            J[rows, rows] += np.diag(cc * np.sum(p[None, :] / d2, axis=1))
    return J
