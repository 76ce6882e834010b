"""Phase scan for two columns of necks at very different scales."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from ..config import Configuration
from ..forces import force, layer_force_sum


def glue_config(n1: int, n2: int, lam: float, phi: float, theta_left=None, theta_right=None) -> Configuration:
    """Column of n1 necks on the unit circle and n2 necks at scale lam, rotated by phi.

    The default end parameters give c_1 = c_2 = 1; only Im G_2 is scanned, and
    that depends on the end parameters only through c_1 c_2.
    """
    if theta_left is None:
        theta_left = [n1 / 2, (n2 - n1) / 2, -n2 / 2]
        theta_right = [n1 / 2, (n2 - n1) / 2, -n2 / 2]
    q1 = np.exp(2j * np.pi * np.arange(1, n1 + 1) / n1)
    q2 = lam * np.exp(1j * phi) * np.exp(2j * np.pi * np.arange(n2) / n2)
    return Configuration((n1, n2), [q1, q2], theta_left, theta_right)


def im_g2(n1: int, n2: int, lam: float, phi: float, theta_left=None, theta_right=None) -> float:
    return layer_force_sum(force(glue_config(n1, n2, lam, phi, theta_left, theta_right)), 2).imag


@dataclass(frozen=True)
class GlueScan:
    phi: np.ndarray
    im_g2: np.ndarray
    zeros: np.ndarray
    mu: int

    def to_csv(self) -> str:
        rows = ["phi,im_G2"] + [f"{p:.17g},{v:.17g}" for p, v in zip(self.phi, self.im_g2)]
        return "\n".join(rows) + "\n"

    def zero_offsets(self) -> np.ndarray:
        """Distance of each detected zero from the nearest multiple of pi/mu."""
        step = np.pi / self.mu
        return np.abs(self.zeros - step * np.round(self.zeros / step))


def find_zeros(phi: np.ndarray, values: np.ndarray, rel_zero: float = 1e-12) -> np.ndarray:
    """Grid zeros and sign changes, the latter located by linear interpolation."""
    v = np.asarray(values, dtype=float)
    tiny = rel_zero * max(np.max(np.abs(v)), np.finfo(float).tiny)
    s = np.where(np.abs(v) <= tiny, 0, np.sign(v))
    zeros = list(phi[s == 0])
    for i in range(len(v) - 1):
        if s[i] * s[i + 1] < 0:
            t = v[i] / (v[i] - v[i + 1])
            zeros.append(phi[i] + t * (phi[i + 1] - phi[i]))
    return np.sort(np.asarray(zeros, dtype=float))


def glue_phase_scan(n1: int, n2: int, lam: float = 0.1, phi=None, theta_left=None, theta_right=None) -> GlueScan:
    if n1 < 1 or n2 < 1:
        raise ValueError("column sizes must be positive")
    if not 0 < lam <= 0.3:
        raise ValueError("lambda must lie in (0, 0.3]")
    if phi is None:
        phi = np.linspace(0.0, 2 * np.pi, 401)[:-1]
    phi = np.asarray(phi, dtype=float)
    vals = np.array([im_g2(n1, n2, lam, p, theta_left, theta_right) for p in phi])
    return GlueScan(phi=phi, im_g2=vals, zeros=find_zeros(phi, vals), mu=lcm(n1, n2))


def glue_slope(n1: int, n2: int, lams=None, phi: float | None = None) -> float:
    """Log-log slope of |Im G_2| against lambda; should be lcm(n1, n2)."""
    mu = lcm(n1, n2)
    if phi is None:
        phi = np.pi / (2 * mu)
    lams = np.geomspace(0.01, 0.1, 7) if lams is None else np.asarray(lams, dtype=float)
    vals = np.abs([im_g2(n1, n2, lam, phi) for lam in lams])
    return float(np.polyfit(np.log(lams), np.log(vals), 1)[0])


def glue_series_leading(n1: int, n2: int, lam: float, phi: float, c1: float = 1.0, c2: float = 1.0) -> complex:
    """Leading term c1 c2 n1 n2 (lam e^{i phi})^mu of G_2's power series."""
    mu = lcm(n1, n2)
    return c1 * c2 * n1 * n2 * (lam * np.exp(1j * phi)) ** mu
