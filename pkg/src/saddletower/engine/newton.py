"""Damped Newton balancing of neck positions and multi-start seeding."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..config import Configuration, derive_residues, from_gaps, theta2, validate
from ..errors import (
    ConvergenceError,
    NoConvergenceError,
    SaddleTowerError,
    SingularStepError,
    Theta2NonzeroError,
)
from ..forces import force, jacobian_unchecked, layer_forces
from ..options import SolveOptions
from ..poly.fp import fp_solve, nodes_from_polys
from ..poly.polynomial import ComplexPolynomial

log = logging.getLogger(__name__)

THETA2_TOL = 1e-10
SINGULAR_RCOND = 1e-14


@dataclass
class SolveLog:
    """Iteration history: (iter, residual, step_norm) rows."""

    rows: list[tuple[int, float, float]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iter,residual,step_norm\n")
        for it, r, s in self.rows:
            buf.write(f"{it},{r:.17g},{s:.17g}\n")
        return buf.getvalue()


def _forces_flat(config: Configuration, c: np.ndarray) -> np.ndarray | None:
    with np.errstate(all="ignore"):
        F = np.concatenate(layer_forces(config, c))
    return F if np.all(np.isfinite(F)) else None


def newton_balance(
    config0: Configuration,
    options: SolveOptions | None = None,
    log_out: SolveLog | None = None,
) -> Configuration:
    """Solve F = 0 with q_{1,1} held fixed.

    Newton steps are taken in logarithmic coordinates, q <- q exp(du), with
    the Jacobian J diag(q) restricted to the equations and unknowns other
    than (1,1).  F_{1,1} then vanishes through sum F = Theta_2 = 0.
    """
    options = options or SolveOptions()
    validate(config0)
    t2 = theta2(config0)
    if abs(t2) > THETA2_TOL:
        raise Theta2NonzeroError(f"Theta_2 = {t2:.3e}: forces cannot all vanish")
    c = derive_residues(config0).c
    history = log_out if log_out is not None else SolveLog()
    q = config0.flat_nodes.copy()
    cfg = config0
    F = _forces_flat(cfg, c)
    if F is None:
        raise NoConvergenceError("forces are not finite at the seed", best=config0, residual=np.inf, history=[])
    best_cfg, best_res = cfg, float(np.max(np.abs(F)))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _newton_loop(cfg, c, q, F, best_cfg, best_res, history, options)


def _newton_loop(cfg, c, q, F, best_cfg, best_res, history, options):
    step_norm = 0.0
    for it in range(options.max_iter + 1):
        res = float(np.max(np.abs(F)))
        history.rows.append((it, res, step_norm))
        if res < best_res:
            best_cfg, best_res = cfg, res
        if res < options.tol:
            return cfg
        if it == options.max_iter:
            break
        Ju = jacobian_unchecked(cfg, c) * q[None, :]
        A = Ju[1:, 1:]
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] <= SINGULAR_RCOND * s[0]:
            raise SingularStepError(f"Newton matrix is singular (sigma ratio {s[-1] / s[0]:.2e})")
        du = np.linalg.solve(A, -F[1:])
        t, accepted = 1.0, False
        norm0 = np.linalg.norm(F[1:])
        while t >= options.damping_floor:
            q_new = q.copy()
            q_new[1:] = q[1:] * np.exp(t * du)
            try:
                cfg_new = cfg.with_nodes(q_new)
                validate(cfg_new)
            except SaddleTowerError:
                t *= 0.5
                continue
            F_new = _forces_flat(cfg_new, c)
            if F_new is not None and np.linalg.norm(F_new[1:]) < norm0:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        step_norm = float(t * np.linalg.norm(du))
        q, cfg, F = q_new, cfg_new, F_new
    if best_res < 10 * options.tol:
        return best_cfg
    raise NoConvergenceError(
        f"Newton stalled with max|F| = {best_res:.3e}",
        best=best_cfg,
        residual=best_res,
        history=list(history.rows),
    )


# --- multi-start --------------------------------------------------------------


def symmetric_seed(layers: Sequence[int], radius: float = 1.0) -> list[np.ndarray]:
    """Roots of unity on every layer, scaled by alternating sign and radius."""
    out = []
    for l, n in enumerate(layers):
        r = radius ** l * (1 if l % 2 == 0 else -1)
        out.append(r * np.exp(2j * np.pi * (np.arange(n) + 0.5 * (l % 2)) / n))
    out[0] = out[0] / out[0][0]
    return out


def random_seed(layers: Sequence[int], rng: np.random.Generator, spread: float = 1.0) -> list[np.ndarray]:
    out = [np.exp(rng.normal(0.0, spread, n) + 1j * rng.uniform(-np.pi, np.pi, n)) for n in layers]
    out[0] = out[0] / out[0][0]
    return out


def _admissible(cfg: Configuration, tol: float) -> float | None:
    try:
        validate(cfg)
        rep = force(cfg)
    except SaddleTowerError:
        return None
    q = cfg.flat_nodes
    # reject near-collisions that only look balanced through cancellation
    d = np.abs(q[:, None] - q[None, :]) / np.maximum(np.abs(q[:, None]), np.abs(q[None, :]))
    np.fill_diagonal(d, np.inf)
    if d.min() < 1e-6 or np.min(np.abs(q)) < 1e-8 or np.max(np.abs(q)) > 1e8:
        return None
    return rep.max_abs_force if rep.max_abs_force < tol else None


@dataclass(frozen=True)
class MultiStartResult:
    config: Configuration
    residual: float
    seed_index: int
    method: str
    attempts: int


def multistart_balance(
    layers: Sequence[int],
    residues: Sequence[float],
    theta_left: Sequence[float],
    seeds: int = 20,
    seed: int = 0,
    method: str = "fp",
    options: SolveOptions | None = None,
    accept_tol: float = 1e-9,
    stop_after: int = 1,
) -> list[MultiStartResult]:
    """Balance from a symmetric seed followed by seeded random ones.

    ``method`` is ``"newton"`` (Newton on the nodes) or ``"fp"`` (solve the
    polynomial residual, then polish with Newton).  Results are ordered by
    residual then seed index; the search stops once ``stop_after``
    admissible configurations are found.
    """
    if method not in ("newton", "fp"):
        raise ValueError(f"unknown method {method!r}")
    options = options or SolveOptions()
    layers = [int(n) for n in layers]
    c = np.asarray(residues, dtype=float)
    left = np.asarray(theta_left, dtype=float)
    gaps = np.diff(left)
    rng = np.random.default_rng(seed)
    seed_list = [symmetric_seed(layers)] + [random_seed(layers, rng) for _ in range(seeds)]
    found: list[MultiStartResult] = []
    for idx, nodes in enumerate(seed_list):
        try:
            if method == "fp":
                polys = fp_solve(layers, c, gaps, [ComplexPolynomial.from_roots(q) for q in nodes], options)
                nodes = nodes_from_polys(polys)
            cfg = from_gaps(layers, nodes, c, gaps, theta0=left[0])
            cfg = newton_balance(cfg, options)
        except (ConvergenceError, SaddleTowerError, np.linalg.LinAlgError) as exc:
            log.debug("seed %d failed: %s", idx, exc)
            continue
        res = _admissible(cfg, accept_tol)
        if res is None:
            continue
        found.append(MultiStartResult(cfg, res, idx, method, idx + 1))
        if len(found) >= stop_after:
            break
    if not found:
        raise NoConvergenceError(
            f"no admissible balanced configuration from {len(seed_list)} seeds",
            best=None,
            residual=np.inf,
            history=[],
        )
    return sorted(found, key=lambda r: (r.residual, r.seed_index))
