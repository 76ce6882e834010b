"""Dense complex polynomials (ascending coefficients) and an all-roots solver."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DegreeZeroError

TRIM_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    coeffs: np.ndarray

    def __init__(self, coeffs, trim: bool = True):
        a = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if a.size == 0:
            a = np.zeros(1, dtype=complex)
        if trim:
            a = _trim(a)
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @classmethod
    def from_roots(cls, roots) -> "ComplexPolynomial":
        """Monic polynomial with the given roots."""
        a = np.ones(1, dtype=complex)
        for r in np.atleast_1d(np.asarray(roots, dtype=complex)):
            a = np.concatenate([[0], a]) - r * np.concatenate([a, [0]])
        return cls(a, trim=False)

    @classmethod
    def monomial(cls, k: int) -> "ComplexPolynomial":
        a = np.zeros(k + 1, dtype=complex)
        a[k] = 1
        return cls(a, trim=False)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            acc = acc * z + a
        return acc if acc.ndim else complex(acc)

    def deriv(self, m: int = 1) -> "ComplexPolynomial":
        a = self.coeffs
        for _ in range(m):
            if a.size <= 1:
                return ComplexPolynomial([0])
            a = a[1:] * np.arange(1, a.size)
        return ComplexPolynomial(a)

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs))
        return ComplexPolynomial(self.coeffs * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ComplexPolynomial):
            other = ComplexPolynomial([other])
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] += self.coeffs
        a[: other.coeffs.size] += other.coeffs
        return ComplexPolynomial(a)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def divmod(self, other: "ComplexPolynomial"):
        """Quotient and remainder of polynomial long division."""
        num = self.coeffs.copy()
        den = other.coeffs
        if den.size > num.size:
            return ComplexPolynomial([0]), ComplexPolynomial(num)
        quot = np.zeros(num.size - den.size + 1, dtype=complex)
        for i in range(quot.size - 1, -1, -1):
            quot[i] = num[i + den.size - 1] / den[-1]
            num[i : i + den.size] -= quot[i] * den
        return ComplexPolynomial(quot), ComplexPolynomial(num[: den.size - 1] if den.size > 1 else [0])

    def monic(self) -> "ComplexPolynomial":
        return ComplexPolynomial(self.coeffs / self.coeffs[-1], trim=False)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def roots(self, **kwargs) -> np.ndarray:
        return poly_roots(self, **kwargs)

    def __repr__(self) -> str:
        return f"ComplexPolynomial({self.coeffs.tolist()})"

    def to_dict(self) -> dict:
        return {"coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs]}

    @classmethod
    def from_dict(cls, doc: dict) -> "ComplexPolynomial":
        return cls([complex(re, im) for re, im in doc["coeffs"]], trim=False)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _trim(a: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(a))
    if scale == 0:
        return a[:1]
    keep = np.nonzero(np.abs(a) > TRIM_TOL * scale)[0]
    return a[: keep[-1] + 1]


# functional aliases
def poly_eval(p: ComplexPolynomial, z):
    return p(z)


def poly_derive(p: ComplexPolynomial) -> ComplexPolynomial:
    return p.deriv()


def poly_mul(p: ComplexPolynomial, q: ComplexPolynomial) -> ComplexPolynomial:
    return p * q


def poly_from_roots(roots) -> ComplexPolynomial:
    return ComplexPolynomial.from_roots(roots)


def _horner_with_derivative(a: np.ndarray, z: np.ndarray):
    p = np.full_like(z, a[-1])
    dp = np.zeros_like(z)
    for c in a[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_guess(a: np.ndarray) -> np.ndarray:
    n = a.size - 1
    # radius: geometric mean of root moduli, clipped to the Cauchy bound
    nz = np.abs(a[0]) if a[0] != 0 else np.abs(a[np.nonzero(a)[0][0]])
    r = (nz / np.abs(a[-1])) ** (1.0 / n) if nz > 0 else 1.0
    cauchy = 1 + np.max(np.abs(a[:-1] / a[-1]))
    r = min(max(r, 1e-3), cauchy)
    k = np.arange(n)
    return r * np.exp(1j * (2 * np.pi * k / n + 0.4))


def poly_roots(p: ComplexPolynomial, max_sweeps: int = 200, tol: float = 1e-15) -> np.ndarray:
    """All roots by Aberth-Ehrlich iteration, then one Newton polish each.

    Roots of polynomials with real coefficients come back closed under
    conjugation.
    """
    a = np.asarray(p.coeffs, dtype=complex)
    n = a.size - 1
    if n < 1:
        raise DegreeZeroError("constant polynomial has no roots")
    # factor out roots at the origin
    zeros = 0
    while a[0] == 0 and a.size > 1:
        a = a[1:]
        zeros += 1
    m = a.size - 1
    z = _initial_guess(a) if m else np.zeros(0, dtype=complex)
    if m == 1:
        z = np.array([-a[0] / a[1]])
    elif m > 1:
        for _ in range(max_sweeps):
            pv, dpv = _horner_with_derivative(a, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = pv / dpv
                diff = z[:, None] - z[None, :]
                np.fill_diagonal(diff, 1.0)
                inv = 1.0 / diff
                np.fill_diagonal(inv, 0.0)
                step = ratio / (1 - ratio * inv.sum(axis=1))
            step = np.where(np.isfinite(step), step, 0.0)
            step = np.where(pv == 0, 0.0, step)
            z = z - step
            if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
                break
        pv, dpv = _horner_with_derivative(a, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            polish = np.where(dpv != 0, pv / dpv, 0.0)
        cand = z - np.where(np.isfinite(polish), polish, 0.0)
        better = np.abs(_horner_with_derivative(a, cand)[0]) <= np.abs(pv)
        z = np.where(better, cand, z)
    roots = np.concatenate([np.zeros(zeros, dtype=complex), z])
    if p.is_real:
        roots = _conjugate_close(roots)
    return roots


def _conjugate_close(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    free = list(range(z.size))
    while free:
        i = free.pop(0)
        cands = [i] + free
        j = min(cands, key=lambda k: abs(z[k] - np.conj(z[i])))
        if j == i:
            z[i] = z[i].real
        else:
            free.remove(j)
            w = 0.5 * (z[i] + np.conj(z[j]))
            z[i], z[j] = w, np.conj(w)
    return z


def backward_error_ok(p: ComplexPolynomial, roots, rel: float = 1e-10) -> bool:
    roots = np.asarray(roots, dtype=complex)
    bound = rel * np.max(np.abs(p.coeffs)) * np.maximum(1.0, np.abs(roots)) ** p.degree
    return bool(np.all(np.abs(p(roots)) <= bound))
