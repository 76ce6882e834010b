"""Exact polynomial-method solutions: roots of unity and (n,1) hypergeometric."""

from __future__ import annotations

from math import comb

import numpy as np

from ..config import Configuration, from_gaps
from ..errors import (
    BadCError,
    ConsistencyFailure,
    DegenerateDegreeError,
    NonSimpleRootsError,
    RootAtPunctureError,
    ZeroC2Error,
)
from ..forces import force
from .polynomial import ComplexPolynomial, poly_roots

SIMPLE_TOL = 1e-10


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1)."""
    out = 1.0
    for i in range(k):
        out *= x + i
    return out


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def hypergeometric_poly(n: int, b: float, c: float) -> ComplexPolynomial:
    """The terminating series 2F1(-n, b; c; z) as a degree-n polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    if _is_nonpositive_integer(c):
        raise BadCError(f"c = {c} is a non-positive integer")
    coeffs = np.empty(n + 1)
    term = 1.0
    coeffs[0] = 1.0
    for k in range(n):
        # ratio of consecutive coefficients (-1)^k C(n,k) (b)_k / (c)_k
        term *= -(n - k) * (b + k) / ((k + 1) * (c + k))
        coeffs[k + 1] = term
    if coeffs[-1] == 0:
        raise DegenerateDegreeError(f"(b)_n = 0 for b = {b}: degree drops below {n}")
    return ComplexPolynomial(coeffs, trim=False)


def hypergeometric_coefficient(n: int, b: float, c: float, k: int) -> float:
    """Closed-form coefficient (-1)^k C(n,k) (b)_k / (c)_k, for cross-checks."""
    return (-1) ** k * comb(n, k) * pochhammer(b, k) / pochhammer(c, k)


def hypergeometric_ode_residual(P: ComplexPolynomial, a: float, b: float, c: float) -> ComplexPolynomial:
    """z(1-z)P'' + [c - (a+b+1)z]P' - abP."""
    z = ComplexPolynomial([0, 1])
    return z * (1 - z) * P.deriv(2) + (c - (a + b + 1) * z) * P.deriv() - a * b * P


def four_end_config(n: int, theta_gap: float = 0.0) -> Configuration:
    """Balanced L=1 configuration with necks at the n-th roots of unity.

    The residue is normalized to c_1 = 1 and the left gap to -n.  The ends
    are paired symmetrically (t_{1,0} = -t_{2,inf}, t_{2,0} = -t_{1,inf}), and
    ``theta_gap`` = t_{1,0} - t_{1,inf} is the leftover rotation freedom.
    """
    if n < 1:
        raise ValueError("n must be positive")
    q = np.exp(2j * np.pi * np.arange(1, n + 1) / n)
    t10 = 0.5 * (n + theta_gap)
    t1i = 0.5 * (n - theta_gap)
    cfg = Configuration((n,), [q], [t10, -t1i], [t1i, -t10])
    P = ComplexPolynomial.from_roots(q)
    z = ComplexPolynomial([0, 1])
    unity = ComplexPolynomial(np.r_[-1, np.zeros(n - 1), 1])
    ode = z * unity.deriv(2) - (n - 1) * unity.deriv()
    if ode.norm() != 0 or np.max(np.abs(P.coeffs - unity.coeffs)) > 1e-12 * n:
        raise ConsistencyFailure("roots of unity do not reproduce z^n - 1")
    residual = force(cfg).max_abs_force
    if residual > 1e-12 * max(1, n):
        raise ConsistencyFailure(f"four-end configuration has residual {residual:.3e}")
    return cfg


def check_simple_roots(roots: np.ndarray, punctures=(), tol: float = SIMPLE_TOL) -> None:
    roots = np.asarray(roots, dtype=complex)
    scale = np.maximum(1.0, np.abs(roots))
    if roots.size > 1:
        d = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(d, np.inf)
        if np.any(d.min(axis=1) <= tol * scale):
            raise NonSimpleRootsError("polynomial has a repeated root")
    for p in punctures:
        if np.any(np.abs(roots - p) <= tol * scale):
            raise RootAtPunctureError(f"a root lies on the puncture {p}")


def n1_c2(n: int, b: float, c: float) -> float:
    return n - 1 - b + c


def n1_config(n: int, b: float, c: float) -> Configuration:
    """Balanced (n,1) configuration from the roots of 2F1(-n, b; c; z).

    Normalization c_1 = 1, q_{2,1} = 1 and t_{1,0} = 0.
    """
    c2 = n1_c2(n, b, c)
    if c2 == 0:
        raise ZeroC2Error("c_2 = n - 1 - b + c vanishes")
    P = hypergeometric_poly(n, b, c)
    roots = poly_roots(P)
    check_simple_roots(roots, punctures=(0.0, 1.0))
    gaps = (c - 1.0, -n * b / c2 - c2)
    cfg = from_gaps((n, 1), [roots, [1.0]], (1.0, c2), gaps)
    residual = force(cfg).max_abs_force
    if residual > 1e-9:
        raise ConsistencyFailure(f"(n,1) configuration has residual {residual:.3e}")
    return cfg


def n1_embedding_flags(n: int, b: float, c: float) -> dict[str, bool]:
    """The four strict inequalities behind embeddedness of an (n,1) configuration."""
    c2 = n1_c2(n, b, c)
    return {
        "t10>t20": c < 1,
        "t1inf>t2inf": b > -n,
        "t20>t30": c2**2 > -n * b,
        "t2inf>t3inf": c2**2 > n * (c2 + b),
    }


def hypergeom_recurrence_matrix(n: int, b: float, c: float) -> np.ndarray:
    """Linear map on coefficient perturbations (da_0 .. da_{n-1}), da_n = 0.

    Row j is the z^j coefficient of the hypergeometric operator applied to the
    perturbation: (b+j)(n-j) da_j + (j+1)(j+c) da_{j+1}.
    """
    M = np.zeros((n, n))
    for j in range(n):
        M[j, j] = (b + j) * (n - j)
        if j + 1 < n:
            M[j, j + 1] = (j + 1) * (j + c)
    return M


def hypergeom_rigidity_recurrence(n: int, b: float, c: float) -> bool:
    """True iff a monic first-order deformation that keeps balance is trivial."""
    if _is_nonpositive_integer(c) and -c <= n - 1:
        return False
    M = hypergeom_recurrence_matrix(n, b, c)
    # upper bidiagonal: invertible iff no diagonal entry vanishes
    return bool(np.all(np.diag(M) != 0))
