"""Stieltjes polynomials of the generalized Lame equation and (1,n,1) blocks.

With the outer layers held fixed, the necks of layer l balance exactly when
their polynomial P solves

    P'' + (c/z + sum_i kappa_i/(z - p_i)) P' + (g0/z + sum_i g_i/(z - p_i)) P = 0

where the p_i are the neck positions on layers l-1 and l+1, kappa_i the
corresponding -c_{l+-1}/c_l and the g's the accessory residues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import Configuration, derive_residues, from_gaps
from ..errors import (
    InvariantViolationError,
    NoSolutionsError,
    NonSimpleRootsError,
    RootAtPunctureError,
)
from ..forces import force
from .hypergeom import check_simple_roots
from .polynomial import ComplexPolynomial, poly_roots

INVARIANT_TOL = 1e-10


@dataclass(frozen=True)
class LameData:
    n: int
    punctures: np.ndarray
    kappa: np.ndarray
    gamma: np.ndarray
    gamma0: complex
    c: float
    b: float

    def __post_init__(self):
        for name in ("punctures", "kappa", "gamma"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=complex)))

    def invariant_residuals(self) -> np.ndarray:
        return np.array(
            [
                self.gamma0 + np.sum(self.gamma),
                np.sum(self.gamma * self.punctures) + self.n * self.b,
                self.c + np.sum(self.kappa) - (1 - self.n + self.b),
            ]
        )

    def check(self, tol: float = INVARIANT_TOL) -> None:
        scale = 1.0 + np.max(np.abs(np.r_[self.gamma, self.gamma0, self.kappa, self.c, self.b * self.n]))
        res = np.abs(self.invariant_residuals())
        if np.any(res > tol * scale):
            raise InvariantViolationError(f"Lame data invariants violated: {res}")


def _factors(points) -> list[ComplexPolynomial]:
    return [ComplexPolynomial([-p, 1]) for p in points]


def _product(polys) -> ComplexPolynomial:
    out = ComplexPolynomial([1])
    for p in polys:
        out = out * p
    return out


def _lame_terms(P: ComplexPolynomial, data: LameData) -> list[ComplexPolynomial]:
    facs = [ComplexPolynomial([0, 1])] + _factors(data.punctures)
    coef_dP = np.r_[data.c, data.kappa]
    coef_P = np.r_[data.gamma0, data.gamma]
    terms = [_product(facs) * P.deriv(2)]
    for i in range(len(facs)):
        rest = _product(facs[:i] + facs[i + 1 :])
        terms.append(rest * (coef_dP[i] * P.deriv()))
        terms.append(rest * (coef_P[i] * P))
    return terms


def lame_operator_residual(P: ComplexPolynomial, data: LameData, check: bool = True) -> ComplexPolynomial:
    """The Lame equation applied to P, multiplied through by z * prod(z - p_i)."""
    if check:
        data.check()
    R = ComplexPolynomial([0])
    for t in _lame_terms(P, data):
        R = R + t
    return R


def lame_residual_scale(P: ComplexPolynomial, data: LameData) -> float:
    """Largest coefficient among the individual terms of the residual."""
    return max(t.norm() for t in _lame_terms(P, data))


def lame_data_from_polynomial(P: ComplexPolynomial, punctures, kappa, c: float) -> LameData:
    """Accessory residues forced by P: g_i = -kappa_i P'(p_i)/P(p_i), g0 = -c P'(0)/P(0)."""
    punctures = np.atleast_1d(np.asarray(punctures, dtype=complex))
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    dP = P.deriv()
    gamma = -kappa * dP(punctures) / P(punctures)
    gamma0 = -c * dP(0.0) / P(0.0)
    n = P.degree
    b = c + np.sum(kappa) - 1 + n
    return LameData(n=n, punctures=punctures, kappa=kappa, gamma=gamma, gamma0=gamma0, c=c, b=float(b))


def lame_data_for_layer(config: Configuration, l: int) -> tuple[ComplexPolynomial, LameData]:
    """Polynomial of layer ``l`` and the Lame data seen from the adjacent layers."""
    c = derive_residues(config).c
    gaps = config.left_gaps()
    P = ComplexPolynomial.from_roots(config.nodes[l - 1])
    pts, kap = [], []
    for m in (l - 1, l + 1):
        if 1 <= m <= config.L:
            pts += list(config.nodes[m - 1])
            kap += [-c[m] / c[l]] * config.layers[m - 1]
    cz = 1.0 + gaps[l - 1] / c[l]
    return P, lame_data_from_polynomial(P, pts, kap, cz)


# --- (1, n, 1) blocks --------------------------------------------------------


def one_n_one_c(n: int, c1: float, c3: float, b: float) -> float:
    """The coefficient c at the origin fixed by c - c1 - c3 = 1 - n + b."""
    return 1 - n + b + c1 + c3


def heun_matrix(n: int, s: float, c1: float, c3: float, b: float) -> np.ndarray:
    """Matrix of P -> D P'' + A P' - n b z P on degree <= n polynomials.

    D = z (z-1)(z-s) and A collects the P' coefficients after clearing
    denominators.  The accessory parameter h enters as + h P, so polynomial
    solutions are eigenvectors with eigenvalue -h.
    """
    c = one_n_one_c(n, c1, c3, b)
    M = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        if j + 1 <= n:
            M[j + 1, j] = (j - n) * (j + b)
        M[j, j] = -j * (j - 1) * (1 + s) + j * (-c * (1 + s) + c1 * s + c3)
        if j >= 1:
            M[j - 1, j] = j * s * (j - 1 + c)
    return M


@dataclass(frozen=True)
class HeunSolution:
    poly: ComplexPolynomial
    accessory: complex
    data: LameData
    residual: float = field(default=0.0)


def heun_solutions(n: int, s: float, c1: float, c3: float, b: float, tol: float = 1e-9):
    """Monic degree-n Stieltjes polynomials for a (1,n,1) block.

    The outer necks sit at 1 and ``s``.  Returns ``(solutions, dropped)``
    where ``dropped`` lists (eigenvalue, reason) for rejected candidates.
    """
    c = one_n_one_c(n, c1, c3, b)
    M = heun_matrix(n, s, c1, c3, b)
    evals, evecs = np.linalg.eig(M)
    order = np.lexsort((evals.imag, evals.real))
    solutions, dropped = [], []
    for idx in order:
        lam, v = evals[idx], evecs[:, idx]
        if abs(v[n]) <= 1e-12 * np.max(np.abs(v)):
            dropped.append((lam, "degree drops below n"))
            continue
        P = ComplexPolynomial(v / v[n], trim=False)
        h = -lam
        gamma0 = h / s
        if s != 1:
            g3 = (-n * b + gamma0) / (s - 1)
            gamma = np.array([-gamma0 - g3, g3])
        else:
            gamma = np.array([-gamma0, 0.0])
        data = LameData(n=n, punctures=np.array([1.0, s]), kappa=np.array([-c1, -c3]),
                        gamma=gamma, gamma0=gamma0, c=c, b=b)
        try:
            data.check()
            roots = poly_roots(P)
            check_simple_roots(roots, punctures=(0.0, 1.0, s))
        except (InvariantViolationError, NonSimpleRootsError, RootAtPunctureError) as exc:
            dropped.append((lam, str(exc)))
            continue
        R = lame_operator_residual(P, data, check=False)
        rel = R.norm() / lame_residual_scale(P, data)
        if rel > tol:
            dropped.append((lam, f"residual {rel:.2e}"))
            continue
        solutions.append(HeunSolution(poly=P, accessory=h, data=data, residual=rel))
    if not solutions:
        raise NoSolutionsError(
            "no admissible Stieltjes polynomial",
            diagnostics={"eigenvalues": evals.tolist(), "dropped": dropped},
        )
    return solutions, dropped


def heun_polynomials(n: int, q_out=(1.0, 1.0), c1: float = 1.0, c3: float = 1.0, b: float = -1.0):
    """All admissible monic Stieltjes polynomials of a (1,n,1) block.

    ``q_out`` gives the outer neck positions; the first must be 1 (scaling
    gauge) and the second is real.
    """
    q11, s = q_out
    if q11 != 1:
        raise ValueError("the first outer neck must be normalized to 1")
    sols, _ = heun_solutions(n, float(np.real(s)), c1, c3, b)
    return [sol.poly for sol in sols]


def outer_gap(P: ComplexPolynomial, q: float, c_outer: float) -> complex:
    """Left gap that balances a lone outer neck at ``q`` against the roots of P.

    The lone neck feels sum_j q/(q - r_j) = q P'(q)/P(q); its force vanishes
    when the gap equals that minus its residue.
    """
    val = P(q)
    if abs(val) <= 1e-14 * P.norm() * max(1.0, abs(q)) ** P.degree:
        raise RootAtPunctureError(f"a root lies on the outer neck {q}")
    return complex(q * P.deriv()(q) / val) - c_outer


def one_n_one_config(P: ComplexPolynomial, s: float, c1: float, c3: float, c: float) -> Configuration:
    """(1,n,1) configuration with c_2 = 1, q_{1,1} = 1, q_{3,1} = s and middle necks at the roots of P."""
    n = P.degree
    roots = poly_roots(P)
    check_simple_roots(roots, punctures=(0.0, 1.0, s))
    g1 = outer_gap(P, 1.0, c1)
    g3 = outer_gap(P, s, c3)
    if abs(g1.imag) > 1e-9 * (1 + abs(g1)) or abs(g3.imag) > 1e-9 * (1 + abs(g3)):
        raise InvariantViolationError("end-parameter gaps are not real")
    gaps = (g1.real, c - 1.0, g3.real)
    return from_gaps((1, n, 1), [[1.0], roots, [s]], (c1, 1.0, c3), gaps)


def symmetric_block(n: int, c1: float, c3: float) -> Configuration:
    """Symmetric (1,n,1) block: outer necks both at 1, b + c = 1 - n.

    Then c1 + c3 = -2b and the middle necks are the roots of 2F1(-n, b; c; z).
    """
    from .hypergeom import hypergeometric_poly

    b = -(c1 + c3) / 2
    c = 1 - n - b
    P = hypergeometric_poly(n, b, c).monic()
    return one_n_one_config(P, 1.0, c1, c3, c)


def block_residual(config: Configuration) -> float:
    return force(config).max_abs_force
