"""Rigidity certification, embeddedness checks and symmetry detection."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..config import Configuration, LayerResidues, derive_residues
from ..forces import jacobian
from ..options import SolveOptions


@dataclass(frozen=True)
class RigidityReport:
    singular_values: np.ndarray
    numerical_rank: int
    rigid: bool

    def to_dict(self) -> dict:
        return {
            "singular_values": [float(s) for s in self.singular_values],
            "rank": int(self.numerical_rank),
            "rigid": bool(self.rigid),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def rigidity(
    config: Configuration,
    residues: LayerResidues | None = None,
    options: SolveOptions | None = None,
) -> RigidityReport:
    """Numerical rank of the complex Jacobian; rigid iff the rank is N - 1."""
    options = options or SolveOptions()
    J = jacobian(config, residues)
    s = np.linalg.svd(J, compute_uv=False)
    rank = int(np.sum(s > options.rank_rel_tol * s[0])) if s[0] > 0 else 0
    return RigidityReport(singular_values=s, numerical_rank=rank, rigid=rank == config.N - 1)


@dataclass(frozen=True)
class EmbeddednessReport:
    left_decreasing: bool
    right_decreasing: bool
    first_violation_left: int | None
    first_violation_right: int | None

    @property
    def embedded(self) -> bool:
        return self.left_decreasing and self.right_decreasing


def _first_violation(seq: np.ndarray) -> int | None:
    bad = np.nonzero(seq[:-1] <= seq[1:])[0]
    return int(bad[0]) + 1 if bad.size else None


def embeddedness_check(config: Configuration) -> EmbeddednessReport:
    """Strict decrease of the end parameters along both sides.

    A violation index l (1-based) means t_l <= t_{l+1}.
    """
    vl = _first_violation(config.theta_left)
    vr = _first_violation(config.theta_right)
    return EmbeddednessReport(vl is None, vr is None, vl, vr)


def concavity_values(config: Configuration, residues: LayerResidues | None = None) -> np.ndarray:
    """2 n_l c_l - n_{l-1} c_{l-1} - n_{l+1} c_{l+1} for l = 1..L."""
    c = (residues or derive_residues(config)).c
    nc = np.zeros(config.L + 2)
    nc[1:-1] = np.asarray(config.layers) * c[1:-1]
    return 2 * nc[1:-1] - nc[:-2] - nc[2:]


def concavity_check(config: Configuration, residues: LayerResidues | None = None) -> bool:
    return bool(np.all(concavity_values(config, residues) > 0))


def profile_is_concave(nc) -> bool:
    """The same criterion for a bare profile n_l c_l, l = 1..L."""
    p = np.r_[0.0, np.asarray(nc, dtype=float), 0.0]
    return bool(np.all(2 * p[1:-1] > p[:-2] + p[2:]))


# --- symmetries ----------------------------------------------------------------

_MAPS = {
    "inversion": lambda a, q: a / q,
    "inversion_conj": lambda a, q: a / np.conj(q),
    "reflection_conj": lambda a, q: a * np.conj(q),
}


def _same_multiset(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    used = np.zeros(b.size, dtype=bool)
    for z in a:
        d = np.where(used, np.inf, np.abs(b - z))
        j = int(np.argmin(d))
        if d[j] > tol * max(1.0, abs(z)):
            return False
        used[j] = True
    return True


def detect_symmetries(config: Configuration, tol: float = 1e-8) -> list[tuple[str, complex]]:
    """Involutions q -> a/q, a/conj(q), a conj(q) mapping every layer onto itself.

    Candidate constants a come from pairing q_{1,1} with each node of layer 1.
    Returns (name, a) for each map found.
    """
    q1 = config.nodes[0]
    found = []
    for name, f in _MAPS.items():
        for z in q1:
            if name == "inversion":
                a = q1[0] * z
            elif name == "inversion_conj":
                a = np.conj(q1[0]) * z
            else:
                a = z / np.conj(q1[0])
            if all(_same_multiset(f(a, q), q, tol) for q in config.nodes):
                if not any(n == name and abs(b - a) <= tol * abs(a) for n, b in found):
                    found.append((name, complex(a)))
    return found
