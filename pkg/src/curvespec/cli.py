"""Command-line front end: every experiment as a reproducible batch run.

Each subcommand validates its parameters, computes, writes CSV/JSON outputs
with fixed formatting, and drops a run-record sidecar. Flag values override
config-file values, which override built-in defaults. Exit codes: 0 success,
2 usage, 3 numerical failure, 4 geometry/validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, annulus, curves, functional, operator1d, optimizer, runio, shell
from .errors import GeometryError, NumericalError, ParameterError

SUBCOMMANDS = ("circle-spectrum", "stadium-sweep", "functional-minimize",
               "critical-g", "annulus-compare", "shell-sweep", "bound-check")

OUT_ENV_VAR = "CURVESPEC_OUT"

_DEFAULTS = {
    "circle-spectrum": {"g": 0.5, "N": 512, "k": 3},
    "stadium-sweep": {"g": 1.5, "eps": [0.05, 0.1, 0.15, 0.2, 0.25], "N": 4000,
                      "mollify_width": 0.01},
    "functional-minimize": {"g": 0.2, "N": 128, "seeds": 5, "tol": 2.5e-7,
                            "max_iter": 200000},
    "critical-g": {"g": [0.2, 1.5], "N": 512, "modes": 6, "seeds": 4,
                   "max_iter": 80},
    "annulus-compare": {"d": 0.3, "Ns": 96, "Nr": 160, "modes": 4, "seeds": 10,
                        "orientation": "both"},
    "shell-sweep": {"M0": [8 * math.pi + 0.5 * math.pi * i for i in range(9)],
                    "A0": 4 * math.pi, "V": 0.8, "Nr": 2048},
    "bound-check": {"domain": "circle", "d": 0.5, "orientation": "inner",
                    "Ns": 96, "Nr": 192},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=str, default=None,
                        help="output directory (default: $CURVESPEC_OUT or ./curvespec-out)")
    common.add_argument("--config", type=str, default=None,
                        help="JSON file with default parameter values")
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")

    parser = _Parser(prog="curvespec",
                     description="curvature-spectrum experiments with file outputs")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("circle-spectrum", parents=[common],
                       help="lowest eigenvalues on the circle vs the analytic values")
    p.add_argument("--g", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=int)

    p = sub.add_parser("stadium-sweep", parents=[common],
                       help="lambda1 over an eps grid with the trial-function bound")
    p.add_argument("--g", type=float)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--N", type=int)
    p.add_argument("--mollify-width", dest="mollify_width", type=float)

    p = sub.add_parser("functional-minimize", parents=[common],
                       help="minimize the reduced functional from random starts")
    p.add_argument("--g", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--seeds", type=int, help="number of random restarts")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)

    p = sub.add_parser("critical-g", parents=[common],
                       help="multistart eigenvalue minimization across couplings")
    p.add_argument("--g", type=float, nargs="+")
    p.add_argument("--N", type=int)
    p.add_argument("--modes", type=int)
    p.add_argument("--seeds", type=int, help="restarts per coupling")
    p.add_argument("--max-iter", dest="max_iter", type=int)

    p = sub.add_parser("annulus-compare", parents=[common],
                       help="perturbed annuli vs the circular annulus with the lower bound")
    p.add_argument("--d", type=float)
    p.add_argument("--Ns", type=int)
    p.add_argument("--Nr", type=int)
    p.add_argument("--modes", type=int)
    p.add_argument("--seeds", type=int, help="number of perturbed edges")
    p.add_argument("--orientation", choices=["inner", "outer", "both"])

    p = sub.add_parser("shell-sweep", parents=[common],
                       help="reduced shell eigenvalue across total mean curvatures")
    p.add_argument("--M0", type=float, nargs="+")
    p.add_argument("--A0", type=float)
    p.add_argument("--V", type=float)
    p.add_argument("--Nr", type=int)

    p = sub.add_parser("bound-check", parents=[common],
                       help="effective-potential lower bound vs the computed eigenvalue")
    p.add_argument("--domain", type=str, help="'circle' or a path to a domain JSON file")
    p.add_argument("--d", type=float)
    p.add_argument("--orientation", choices=["inner", "outer"])
    p.add_argument("--Ns", type=int)
    p.add_argument("--Nr", type=int)

    return parser


def _resolve(args: argparse.Namespace) -> dict:
    """flags > config file > built-in defaults."""
    opts = dict(_DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config) as handle:
                loaded = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError(f"config file {args.config} must hold a JSON object")
        for key, value in loaded.items():
            if key in opts:
                opts[key] = value
    for key in opts:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    opts["seed"] = args.seed
    return opts


def _out_dir(args: argparse.Namespace) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUT_ENV_VAR, "curvespec-out"))


def _cmd_circle_spectrum(opts, run):
    g, n, k = float(opts["g"]), int(opts["N"]), int(opts["k"])
    profile = curves.make_circle(1.0, n)
    result = operator1d.ground_state(operator1d.OperatorSpec(profile, g), n, k=k)
    rows = []
    for j, lam in enumerate(result.eigenvalues, start=1):
        m = j // 2
        analytic = (2 * math.pi * m) ** 2 + 4 * math.pi**2 * g
        rows.append((j, lam, analytic))
    runio.write_csv(run.add(run.out_dir / "circle_spectrum.csv"),
                    ("index", "lambda", "circle_analytic"), rows)
    runio.write_csv(run.add(run.out_dir / "circle_ground_state.csv"),
                    ("s", "psi"), operator1d.ground_state_rows(result))


def _cmd_stadium_sweep(opts, run):
    g, n = float(opts["g"]), int(opts["N"])
    width = float(opts["mollify_width"])
    rows = []
    for eps in [float(e) for e in opts["eps"]]:
        profile = curves.make_stadium(eps, n)
        lam = operator1d.ground_state(
            operator1d.OperatorSpec(profile, g), n, method="shift_invert").lambda1
        smooth = curves.mollify(profile, width)
        lam_smooth = operator1d.ground_state(
            operator1d.OperatorSpec(smooth, g), n, method="shift_invert").lambda1
        bound = (math.pi / (0.5 - eps)) ** 2
        rows.append((eps, lam, lam_smooth, bound))
    runio.write_csv(run.add(run.out_dir / "stadium_sweep.csv"),
                    ("eps", "lambda1", "lambda1_mollified", "rayleigh_bound"), rows)


def _cmd_functional_minimize(opts, run):
    g, n = float(opts["g"]), int(opts["N"])
    restarts, tol = int(opts["seeds"]), float(opts["tol"])
    max_iter, seed = int(opts["max_iter"]), int(opts["seed"])
    best = None
    energies = []
    for i in range(restarts):
        rng = np.random.default_rng((seed, i))
        report = functional.minimize_E(g, functional.random_density(n, rng),
                                       tol=tol, max_iter=max_iter)
        energies.append(report.energy)
        if best is None or report.energy < best.energy:
            best = report
    payload = {
        "g": g, "N": n, "restarts": restarts, "tol": tol,
        "restart_energies": energies,
        "best": {
            "energy": best.energy,
            "euler_residual": best.euler_residual,
            "iterations": best.iterations,
            "converged": best.converged,
            "circle_value": 4 * math.pi**2 * g,
        },
    }
    runio.write_json(run.add(run.out_dir / "functional_minimize.json"), payload)
    runio.write_csv(run.add(run.out_dir / "functional_trace.csv"),
                    ("iteration", "energy", "gradient_norm"),
                    [(it, e, gn) for it, e, gn in best.trace])


def _cmd_critical_g(opts, run):
    config = optimizer.OptimizationConfig(
        g=float(opts["g"][0]), n_modes=int(opts["modes"]),
        max_iter=int(opts["max_iter"]), n_grid=int(opts["N"]),
        restarts=int(opts["seeds"]), seed=int(opts["seed"]))
    result = optimizer.critical_g_scan([float(g) for g in opts["g"]], config)
    rows = [(r["g"], r["seed"], r["best_lambda1"], r["circle_value"], r["gap"],
             r["circle_optimal"]) for r in result.rows]
    runio.write_csv(run.add(run.out_dir / "critical_g.csv"),
                    ("g", "seed", "best_lambda1", "circle_value", "gap",
                     "circle_optimal"), rows)
    runio.write_json(run.add(run.out_dir / "critical_g.json"),
                     {"per_g": list(result.per_g), "g_star": result.g_star})
    for entry, profile in zip(result.per_g, result.best_profiles):
        name = f"best_profile_g{format(entry['g'], 'g')}.txt"
        path = run.add(run.out_dir / name)
        path.write_text(curves.profile_to_text(profile))


def _cmd_annulus_compare(opts, run):
    d, ns, nr = float(opts["d"]), int(opts["Ns"]), int(opts["Nr"])
    modes, count, seed = int(opts["modes"]), int(opts["seeds"]), int(opts["seed"])
    orientations = {
        "inner": [annulus.Orientation.INNER],
        "outer": [annulus.Orientation.OUTER],
        "both": [annulus.Orientation.INNER, annulus.Orientation.OUTER],
    }[str(opts["orientation"])]
    circle = curves.make_circle(2 * math.pi, ns)
    rows = []
    for orient in orientations:
        base = annulus.AnnularDomain(circle, d, orient)
        lam_circle = annulus.ground_state_2d(base, ns, nr).lambda1
        for i in range(count):
            target = 0.05 + 0.45 * (i / max(count - 1, 1))
            profile = annulus.perturbed_edge(ns, modes, d, (seed, i), target)
            domain = annulus.AnnularDomain(profile, d, orient)
            lam = annulus.ground_state_2d(domain, ns, nr).lambda1
            bound = annulus.corollary3_bound(domain, ns, nr)
            rows.append((i, orient.value, float(np.abs(profile.samples - 1).max()),
                         lam, lam_circle, bound["bound"], bound["inf_q"]))
    runio.write_csv(run.add(run.out_dir / "annulus_compare.csv"),
                    ("seed", "orientation", "sup_dev", "lambda1", "lambda1_circle",
                     "bound", "inf_q"), rows)


def _cmd_shell_sweep(opts, run):
    rows = [(r["M0"], r["d"], r["lambda1"], r["lambda1_sphere"], r["ratio_max"])
            for r in shell.sweep_total_mean_curvature(
                [float(m) for m in opts["M0"]], area=float(opts["A0"]),
                volume=float(opts["V"]), nr=int(opts["Nr"]))]
    runio.write_csv(run.add(run.out_dir / "shell_sweep.csv"),
                    ("M0", "d", "lambda1", "lambda1_sphere", "ratio_max"), rows)


def _cmd_bound_check(opts, run):
    ns, nr = int(opts["Ns"]), int(opts["Nr"])
    source = str(opts["domain"])
    if source == "circle":
        profile = curves.make_circle(2 * math.pi, ns)
        domain = annulus.AnnularDomain(profile, float(opts["d"]),
                                       str(opts["orientation"]))
    else:
        try:
            with open(source) as handle:
                domain = annulus.domain_from_dict(json.load(handle))
        except OSError as exc:
            raise UsageError(f"cannot read domain file {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParameterError(f"domain file {source} is not valid JSON: {exc}") from exc
    lam = annulus.ground_state_2d(domain, ns, nr).lambda1
    coarse = annulus.ground_state_2d(domain, max(ns // 2, 16), max(nr // 2, 16)).lambda1
    margin = 2 * abs(lam - coarse)
    bound = annulus.corollary3_bound(domain, ns, nr)
    satisfied = lam >= bound["bound"] - margin
    runio.write_csv(run.add(run.out_dir / "bound_check.csv"),
                    ("d", "orientation", "Ns", "Nr", "lambda1", "bound", "inf_q",
                     "margin", "satisfied"),
                    [(domain.d, domain.orientation.value, ns, nr, lam,
                      bound["bound"], bound["inf_q"], margin, satisfied)])


_HANDLERS = {
    "circle-spectrum": _cmd_circle_spectrum,
    "stadium-sweep": _cmd_stadium_sweep,
    "functional-minimize": _cmd_functional_minimize,
    "critical-g": _cmd_critical_g,
    "annulus-compare": _cmd_annulus_compare,
    "shell-sweep": _cmd_shell_sweep,
    "bound-check": _cmd_bound_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        opts = _resolve(args)
        out_dir = _out_dir(args)
        with runio.RecordedRun(args.command, {k: v for k, v in opts.items()},
                               int(args.seed), __version__, out_dir) as run:
            run.out_dir.mkdir(parents=True, exist_ok=True)
            _HANDLERS[args.command](opts, run)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
