"""Single polynomial residual combining all balance equations.

For per-layer polynomials P_l with P = prod P_l, the residual

    sum_l [ c_l^2 z P_l'' P/P_l - c_l c_{l+1} z P_l' P_{l+1}' P/(P_l P_{l+1})
            + (c_l^2 + c_l g_l) P_l' P/P_l ]

(g_l the left gap of layer l) has degree < N and vanishes identically
exactly when the configuration of roots is balanced.  Every term contains
each P_m exactly once, so the residual is multilinear in the P_m; the
solver below uses that to get its Jacobian for free.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..errors import InexactDivisionError, NoConvergenceError, SharedRootsError
from ..options import SolveOptions
from .polynomial import ComplexPolynomial, poly_roots

log = logging.getLogger(__name__)

ROOT_TOL = 1e-10
# a double root is only resolved to about sqrt(machine epsilon)
REPEAT_TOL = 1e-7


def _fp_terms(polys: Sequence[ComplexPolynomial], c, gaps) -> list[ComplexPolynomial]:
    L = len(polys)
    z = ComplexPolynomial([0, 1])
    terms = []

    def others(skip):
        out = ComplexPolynomial([1])
        for m, P in enumerate(polys):
            if m not in skip:
                out = out * P
        return out

    for l in range(L):
        Pl = polys[l]
        rest = others({l})
        terms.append((c[l] ** 2) * z * Pl.deriv(2) * rest)
        if l + 1 < L:
            terms.append((-c[l] * c[l + 1]) * z * Pl.deriv() * polys[l + 1].deriv() * others({l, l + 1}))
        terms.append((c[l] ** 2 + c[l] * gaps[l]) * Pl.deriv() * rest)
    return terms


def _sum(terms) -> ComplexPolynomial:
    out = ComplexPolynomial([0])
    for t in terms:
        out = out + t
    return out


def _check_roots(polys: Sequence[ComplexPolynomial], tol: float = ROOT_TOL) -> None:
    roots = [poly_roots(P) if P.degree else np.zeros(0, complex) for P in polys]
    for l, r in enumerate(roots):
        if r.size > 1:
            d = np.abs(r[:, None] - r[None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() <= REPEAT_TOL * max(1.0, np.max(np.abs(r))):
                raise InexactDivisionError(f"layer {l + 1} polynomial has a repeated root")
    for l in range(len(roots) - 1):
        a, b = roots[l], roots[l + 1]
        if a.size and b.size:
            d = np.abs(a[:, None] - b[None, :])
            if d.min() <= tol * max(1.0, np.max(np.abs(a)), np.max(np.abs(b))):
                raise SharedRootsError(f"layers {l + 1} and {l + 2} share a root")


def fp_residual(polys: Sequence[ComplexPolynomial], residues, theta_gaps, check: bool = True) -> ComplexPolynomial:
    """The combined residual polynomial.

    ``residues`` lists c_1..c_L and ``theta_gaps`` the L left gaps
    t_{l+1,0} - t_{l,0}.
    """
    polys = list(polys)
    c = np.asarray(residues, dtype=float)
    gaps = np.asarray(theta_gaps, dtype=float)
    if c.size != len(polys) or gaps.size != len(polys):
        raise ValueError("need one residue and one gap per layer")
    if check:
        _check_roots(polys)
    return _sum(_fp_terms(polys, c, gaps))


def fp_scale(polys: Sequence[ComplexPolynomial], residues, theta_gaps) -> float:
    """Largest coefficient among the individual terms of the residual."""
    return max(t.norm() for t in _fp_terms(list(polys), np.asarray(residues, float), np.asarray(theta_gaps, float)))


def _coeff_vector(P: ComplexPolynomial, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=complex)
    out[: P.coeffs.size] = P.coeffs[:size]
    return out


def fp_solve(
    layers: Sequence[int],
    residues,
    theta_gaps,
    seed_polys: Sequence[ComplexPolynomial],
    options: SolveOptions | None = None,
    pin: complex = 1.0,
) -> list[ComplexPolynomial]:
    """Damped Gauss-Newton on the coefficients of the monic P_l.

    The scaling freedom is removed by requiring P_1(pin) = 0.  Raises
    :class:`NoConvergenceError` with the best iterate when the residual cannot
    be driven below ``options.tol`` times the term scale, and
    :class:`SharedRootsError` when the solution has adjacent layers sharing
    a root.
    """
    options = options or SolveOptions()
    layers = [int(n) for n in layers]
    c = np.asarray(residues, dtype=float)
    gaps = np.asarray(theta_gaps, dtype=float)
    N = sum(layers)
    if [P.degree for P in seed_polys] != layers:
        raise ValueError("seed polynomial degrees must match the layer sizes")
    x = np.concatenate([P.monic().coeffs[:-1] for P in seed_polys])
    splits = np.cumsum(layers)[:-1]

    def unpack(v):
        return [ComplexPolynomial(np.r_[a, 1.0], trim=False) for a in np.split(v, splits)]

    def residual(v):
        polys = unpack(v)
        R = _coeff_vector(_sum(_fp_terms(polys, c, gaps)), N)
        return np.r_[R, polys[0](pin)], polys

    def jac(v):
        polys = unpack(v)
        J = np.zeros((N + 1, N), dtype=complex)
        col = 0
        for m, n in enumerate(layers):
            for i in range(n):
                trial = list(polys)
                trial[m] = ComplexPolynomial.monomial(i)
                J[:N, col] = _coeff_vector(_sum(_fp_terms(trial, c, gaps)), N)
                if m == 0:
                    J[N, col] = pin**i
                col += 1
        return J

    r, polys = residual(x)
    best = (np.max(np.abs(r)), x)
    history = []
    for it in range(options.max_iter):
        scale = max(1.0, fp_scale(polys, c, gaps))
        res = np.max(np.abs(r))
        history.append((it, res / scale))
        if res <= options.tol * scale:
            _check_roots(polys)
            return polys
        step = np.linalg.lstsq(jac(x), -r, rcond=None)[0]
        t, accepted = 1.0, False
        while t >= options.damping_floor:
            x_new = x + t * step
            r_new, polys_new = residual(x_new)
            if np.linalg.norm(r_new) < np.linalg.norm(r):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        x, r, polys = x_new, r_new, polys_new
        if np.max(np.abs(r)) < best[0]:
            best = (np.max(np.abs(r)), x)
    scale = max(1.0, fp_scale(polys, c, gaps))
    if np.max(np.abs(r)) <= options.tol * scale:
        _check_roots(polys)
        return polys
    top = _coeff_vector(_sum(_fp_terms(unpack(best[1]), c, gaps)), N)[N - 1]
    raise NoConvergenceError(
        f"residual stalled at {best[0]:.3e} (degree N-1 coefficient {abs(top):.3e})",
        best=unpack(best[1]),
        residual=best[0],
        history=history,
    )


def polys_from_nodes(nodes) -> list[ComplexPolynomial]:
    return [ComplexPolynomial.from_roots(q) for q in nodes]


def nodes_from_polys(polys: Sequence[ComplexPolynomial]) -> list[np.ndarray]:
    return [poly_roots(P) for P in polys]
