"""Closed-form balanced configurations with one neck per layer."""

from __future__ import annotations

import numpy as np

from ..config import Configuration, derive_residues, theta2
from ..errors import ConsistencyFailure, DegenerateQtildeError, Theta2NonzeroError
from ..forces import force
from .analysis import embeddedness_check

QTILDE_TOL = 1e-12


def genus0_solve(theta_left, theta_right, check_tol: float = 1e-12) -> Configuration:
    """The unique balanced configuration with all n_l = 1 and q_1 = 1.

    With c_l the partial sums of t_{i,0} + t_{i,inf} and
    Qt_l = sum_{i<=l} c_i (t_{i+1,0} + t_{i,inf}), the nodes follow from
    q_{l+1} = q_l (1 - c_{l+1} c_l / Qt_l).
    """
    left = np.asarray(theta_left, dtype=float)
    right = np.asarray(theta_right, dtype=float)
    L = left.size - 1
    cfg = Configuration([1] * L, [[1.0]] * L, left, right)
    c = derive_residues(cfg).c
    t2 = theta2(cfg)
    scale = 1.0 + np.max(np.abs(np.r_[left, right])) ** 2
    if abs(t2) > 1e-10 * scale:
        raise Theta2NonzeroError(f"Theta_2 = {t2:.3e}")
    if np.any(np.abs(c[1:-1]) <= QTILDE_TOL * scale):
        raise DegenerateQtildeError("some residue c_l vanishes")
    q = np.ones(L)
    Qt = 0.0
    for l in range(1, L):
        Qt += c[l] * (left[l] + right[l - 1])
        if abs(Qt) <= QTILDE_TOL * scale:
            raise DegenerateQtildeError(f"Qt_{l} vanishes")
        ratio = 1.0 - c[l + 1] * c[l] / Qt
        if abs(ratio) <= QTILDE_TOL:
            raise DegenerateQtildeError(f"q_{l + 1} would vanish")
        q[l] = q[l - 1] * ratio
    out = cfg.with_nodes([[x] for x in q])
    res = force(out).max_abs_force
    if res > check_tol * scale:
        raise ConsistencyFailure(f"closed form leaves max|F| = {res:.3e}")
    if embeddedness_check(out).embedded:
        signs = np.sign(q)
        if not np.all(signs == np.where(np.arange(L) % 2 == 0, 1.0, -1.0)):
            raise ConsistencyFailure("embedded genus-0 nodes do not alternate in sign")
    return out


def random_embedded_theta(L: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """End parameters with Theta_1 = Theta_2 = 0 that strictly decrease on both sides."""
    u = np.sort(rng.uniform(-1, 1, L + 1))[::-1]
    v = np.sort(rng.uniform(-1, 1, L + 1))[::-1]
    while np.any(np.diff(u) >= 0) or np.any(np.diff(v) >= 0):
        u = np.sort(rng.uniform(-1, 1, L + 1))[::-1]
        v = np.sort(rng.uniform(-1, 1, L + 1))[::-1]
    u = u - u.mean()
    v = v - v.mean()
    v = v * np.sqrt(np.sum(u**2) / np.sum(v**2))
    alpha = rng.uniform(-1, 1)
    return u + alpha, v - alpha
