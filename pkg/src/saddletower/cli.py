"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 unmet precondition, 4 no convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import Configuration, derive_residues, validate
from .errors import ConvergenceError, NoConvergenceError, PreconditionError, SaddleTowerError, ValidationError
from .forces import force
from .options import SolveOptions

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

log = logging.getLogger("saddletower")


def _read_doc(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return doc


def _read_config(path: str) -> Configuration:
    cfg = Configuration.from_dict(_read_doc(path))
    validate(cfg)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config_text(cfg: Configuration) -> str:
    return cfg.to_json() + "\n"


def _options(args) -> SolveOptions:
    return SolveOptions(tol=args.tol, max_iter=args.max_iter)


# --- subcommands -----------------------------------------------------------------


def cmd_force(args) -> int:
    _emit(force(_read_config(args.config)).to_csv(), args.output)
    return EXIT_OK


def _residues_from_ends(layers, left, right) -> np.ndarray:
    from .engine.newton import symmetric_seed

    dummy = Configuration(layers, symmetric_seed(layers), left, right)
    return derive_residues(dummy).c[1:-1]


def cmd_balance(args) -> int:
    from .engine.newton import SolveLog, multistart_balance, newton_balance
    from .poly.fp import fp_solve, nodes_from_polys, polys_from_nodes

    doc = _read_doc(args.config)
    opts = _options(args)
    history = SolveLog()
    try:
        layers = [int(n) for n in doc["layers"]]
        left = [float(t) for t in doc["theta_dot"]["left"]]
        right = [float(t) for t in doc["theta_dot"]["right"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed configuration document: {exc!r}") from exc
    try:
        if "nodes" in doc and args.seeds == 0:
            cfg = Configuration.from_dict(doc)
            validate(cfg)
            if args.method == "fp":
                c = derive_residues(cfg).c[1:-1]
                polys = fp_solve(cfg.layers, c, cfg.left_gaps(), polys_from_nodes(cfg.nodes), opts)
                cfg = cfg.with_nodes(nodes_from_polys(polys))
            cfg = newton_balance(cfg, opts, log_out=history)
        else:
            c = _residues_from_ends(layers, left, right)
            results = multistart_balance(
                layers, c, left, seeds=max(args.seeds, 1), seed=args.seed, method=args.method, options=opts
            )
            cfg = newton_balance(results[0].config, opts, log_out=history)
    except NoConvergenceError as exc:
        if isinstance(exc.best, Configuration):
            _emit(_config_text(exc.best), args.output)
        if args.log:
            Path(args.log).write_text(history.to_csv())
        raise
    _emit(_config_text(cfg), args.output)
    if args.log:
        Path(args.log).write_text(history.to_csv())
    if args.plot:
        from .plotting import plot_strip

        plot_strip(cfg, args.plot)
    print(f"max_abs_force,{force(cfg).max_abs_force:.17g}", file=sys.stderr)
    return EXIT_OK


def cmd_rigidity(args) -> int:
    from .engine.analysis import rigidity

    cfg = _read_config(args.config)
    rep = rigidity(cfg, options=SolveOptions(rank_rel_tol=args.rank_tol))
    _emit(rep.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_embed(args) -> int:
    from .engine.analysis import concavity_check, embeddedness_check

    cfg = _read_config(args.config)
    rep = embeddedness_check(cfg)
    lines = [f"embedded: {str(rep.embedded).lower()}"]
    if rep.first_violation_left is not None:
        lines.append(f"left violation at: {rep.first_violation_left}")
    if rep.first_violation_right is not None:
        lines.append(f"right violation at: {rep.first_violation_right}")
    if args.concavity:
        lines.append(f"concave: {str(concavity_check(cfg)).lower()}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_concat(args) -> int:
    from .engine.concat import concatenate

    blocks = [_read_config(p) for p in args.blocks]
    _emit(_config_text(concatenate(blocks, tail=args.tail)), args.output)
    return EXIT_OK


def cmd_hypergeom(args) -> int:
    from .poly.hypergeom import n1_config

    _emit(_config_text(n1_config(args.n, args.b, args.c)), args.output)
    return EXIT_OK


def cmd_heun(args) -> int:
    from .poly.lame import heun_solutions, one_n_one_config

    sols, dropped = heun_solutions(args.n, args.s, args.c1, args.c3, args.b)
    out = []
    for sol in sols:
        entry = {
            "accessory": [float(sol.accessory.real), float(sol.accessory.imag)],
            "residual": float(sol.residual),
            "poly": sol.poly.to_dict()["coeffs"],
            "config": None,
        }
        try:
            entry["config"] = one_n_one_config(sol.poly, args.s, args.c1, args.c3, sol.data.c).to_dict()
        except SaddleTowerError as exc:
            entry["note"] = str(exc)
        out.append(entry)
    for lam, why in dropped:
        log.info("dropped eigenvalue %s: %s", lam, why)
    _emit(json.dumps({"solutions": out}, indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_glue_scan(args) -> int:
    from .engine.glue import glue_phase_scan

    phi = np.linspace(0.0, 2 * np.pi, args.points + 1)[:-1]
    scan = glue_phase_scan(args.n1, args.n2, args.lam, phi)
    _emit(scan.to_csv(), args.output)
    print("zeros," + ",".join(f"{z:.17g}" for z in scan.zeros), file=sys.stderr)
    if args.plot:
        from .plotting import plot_glue_scan

        plot_glue_scan(scan, args.plot)
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plotting import PlotSpec, plot_strip

    cfg = _read_config(args.config)
    plot_strip(cfg, args.output, PlotSpec(periods=args.periods))
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="saddletower", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        return sp

    sp = add("force", cmd_force, "force report as CSV")
    sp.add_argument("config")

    sp = add("balance", cmd_balance, "solve for balanced node positions")
    sp.add_argument("config", help="configuration JSON; nodes may be omitted")
    sp.add_argument("--method", choices=("newton", "fp"), default="newton")
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", type=int, default=100)
    sp.add_argument("--seeds", type=int, default=0, help="number of random restarts")
    sp.add_argument("--seed", type=int, default=0, help="RNG seed for restarts")
    sp.add_argument("--log", default=None, help="iteration log CSV")
    sp.add_argument("--plot", default=None, help="SVG plot of the solution")

    sp = add("rigidity", cmd_rigidity, "numerical rank of the Jacobian as JSON")
    sp.add_argument("config")
    sp.add_argument("--rank-tol", type=float, default=1e-8)

    sp = add("embed", cmd_embed, "embeddedness inequalities")
    sp.add_argument("config")
    sp.add_argument("--concavity", action="store_true", help="also test concavity of n_l c_l")

    sp = add("concat", cmd_concat, "chain (1,n,1) blocks")
    sp.add_argument("blocks", nargs="+")
    sp.add_argument("--tail", action="store_true", help="last block has type (1,n)")

    sp = add("hypergeom", cmd_hypergeom, "(n,1) configuration from 2F1(-n,b;c;z)")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-b", type=float, required=True)
    sp.add_argument("-c", type=float, required=True)

    sp = add("heun", cmd_heun, "(1,n,1) Stieltjes polynomials")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-b", type=float, required=True)
    sp.add_argument("--s", type=float, default=1.0, help="position of the second outer neck")
    sp.add_argument("--c1", type=float, required=True)
    sp.add_argument("--c3", type=float, required=True)

    sp = add("glue-scan", cmd_glue_scan, "Im G_2 over the phase of the small column")
    sp.add_argument("--n1", type=int, required=True)
    sp.add_argument("--n2", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.1)
    sp.add_argument("--points", type=int, default=400)
    sp.add_argument("--plot", default=None)

    sp = add("plot", cmd_plot, "SVG of the nodes in the periodic strip")
    sp.add_argument("config")
    sp.add_argument("--periods", type=int, default=1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "plot" and not args.output:
        parser.error("plot needs -o/--output")
    try:
        return args.func(args)
    except (ValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except SaddleTowerError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
