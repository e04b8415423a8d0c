"""Command-line front end.

Subcommands: check, solve, density, simulate, errors, universality, example.
All outputs are CSV or JSON; every subcommand is deterministic given its
flags (the seed included). Exit codes: 0 success, 1 usage/parse/domain
error, 2 failed assumptions, 3 solver failure.

Complex flags use the syntax "a+bi" / "a-bi" (whitespace allowed), e.g.
--z "1.5+0.1i"; comma-separate lists, e.g. --z-list "1.5+1i,1.5+0.1i".
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import detequiv
from .benchmarks import ExampleSpec, build_example
from .detequiv import SolverOptions
from .ensemble import (
    build_Y,
    distribution_from_name,
    empirical_delta,
    empirical_trace,
    sample_covariances,
    sample_X,
)
from .errors import ConvergenceError, DomainError, NumericError, SepCovMixError
from .experiments import (
    eigenvalues_to_csv,
    run_density_overlay,
    run_error_study,
    run_universality,
)
from .linalg import hermitian_eig
from .model import check_assumptions, load_model_spec, matrix_to_json, model_to_spec

DEFAULT_SEED = 20250815  # fixed so repeated runs are byte-identical

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*"
    r"(?:(?P<sign>[+-])\s*(?P<im>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*i)?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse "a+bi" / "a-bi" (optional whitespace) into a complex number."""
    match = _COMPLEX_RE.match(text)
    if not match:
        raise ValueError(f"cannot parse complex number {text!r}; expected 'a+bi'")
    re_part = float(match.group("re"))
    im_part = 0.0
    if match.group("im") is not None:
        im_part = float(match.group("im"))
        if match.group("sign") == "-":
            im_part = -im_part
    return complex(re_part, im_part)


def _parse_complex_list(text: str):
    return [parse_complex(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _write_output(text: str, out: str):
    if out in (None, "stdout", "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _load_model_and_dist(path: str):
    """Load a model spec; if it is a whole-model generator for one of the
    benchmark examples, also return that example's native entry law."""
    with open(path) as fh:
        obj = json.load(fh)
    native = None
    if isinstance(obj, dict) and "generator" in obj and "A" not in obj:
        gen = obj["generator"]
        params = gen.get("params", {})
        spec = ExampleSpec(
            kind=gen.get("name", ""), n=int(params["n"]), R=params.get("R"),
            seed=int(gen.get("seed", 0)),
        )
        model, _, _, native = build_example(spec)
        return model, native
    return load_model_spec(obj), native


def _example_spec_from_args(args) -> ExampleSpec:
    return ExampleSpec(
        kind=args.example, n=args.n if hasattr(args, "n") else 0,
        R=args.R, seed=args.model_seed,
    )


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="master 64-bit seed (default %(default)s)")
    parser.add_argument("--threads", default="auto",
                        help="thread budget hint (numpy BLAS decides; accepted for compatibility)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default="stdout", help="output path or 'stdout'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepcovmix",
        description="Deterministic equivalents and Monte Carlo validation for "
                    "separable covariance mixture ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate the model assumption report")
    p.add_argument("model_spec")
    _add_common(p)

    p = sub.add_parser("solve", help="solve the dual system at one z")
    p.add_argument("model_spec")
    p.add_argument("--z", required=True, help="complex point, e.g. '1.5+0.1i'")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=20000)
    _add_common(p)

    p = sub.add_parser("density", help="limiting spectral density curve as CSV")
    p.add_argument("model_spec")
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--points", type=int, default=600)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("simulate", help="one-realization empirical dump as JSON")
    p.add_argument("model_spec")
    p.add_argument("--dist", default=None,
                   help="entry law (complex-gaussian, real-gaussian, rademacher, "
                        "student-t7, similar(...)); default: the model's native "
                        "law if known, else complex-gaussian")
    p.add_argument("--z-list", default="1.5+1i", help="comma-separated z points")
    _add_common(p)

    p = sub.add_parser("errors", help="error-decay study over n (Fig.-2 style)")
    p.add_argument("--example", required=True,
                   help="example1|example2|example3 (or kind names)")
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--model-seed", type=int, default=0)
    p.add_argument("--n-list", required=True, help="comma-separated n values")
    p.add_argument("--reps", type=int, default=25)
    p.add_argument("--z-list", required=True)
    _add_common(p)

    p = sub.add_parser("universality", help="native vs. similar-Gaussian trace comparison")
    p.add_argument("--example", required=True)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--model-seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--z", required=True)
    _add_common(p)

    p = sub.add_parser("example", help="emit a generated model-spec JSON")
    p.add_argument("--example", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--model-seed", type=int, default=0)
    _add_common(p)

    return parser


def _cmd_check(args) -> int:
    model, _ = _load_model_and_dist(args.model_spec)
    report = check_assumptions(model)
    _write_output(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0 if report.admissible else 2


def _cmd_solve(args) -> int:
    model, _ = _load_model_and_dist(args.model_spec)
    z = parse_complex(args.z)
    if z.imag <= 0:
        raise DomainError(f"--z must have positive imaginary part, got {z}")
    opts = SolverOptions(tolerance=args.tol, max_iterations=args.max_iter)
    sol = detequiv.solve_dual_system(model, z, opts)
    out = sol.to_json_dict()
    out["companion_stieltjes"] = [
        detequiv.companion_stieltjes(model, sol).real,
        detequiv.companion_stieltjes(model, sol).imag,
    ]
    _write_output(json.dumps(out, indent=2) + "\n", args.out)
    return 0


def _cmd_density(args) -> int:
    model, _ = _load_model_and_dist(args.model_spec)
    if args.eta <= 0:
        raise DomainError(f"--eta must be positive, got {args.eta}")
    bound = detequiv.support_bound(model)
    x_min = -0.05 * bound if args.x_min is None else args.x_min
    x_max = 1.05 * bound if args.x_max is None else args.x_max
    xs = np.linspace(x_min, x_max, args.points)
    curve = detequiv.density_curve(model, args.eta, xs)
    print(f"support_bound={bound!r} points={args.points} eta={args.eta!r}",
          file=sys.stderr)
    _write_output(curve.to_csv(), args.out)
    return 0


def _cmd_simulate(args) -> int:
    model, native = _load_model_and_dist(args.model_spec)
    if args.dist is not None:
        dist = distribution_from_name(args.dist)
    else:
        dist = native or distribution_from_name("complex-gaussian")
    zs = _parse_complex_list(args.z_list)
    for z in zs:
        if z.imag <= 0:
            raise DomainError(f"all z must have positive imaginary part, got {z}")
    x = sample_X(model.d, model.n, dist, args.seed)
    s, s_tilde = sample_covariances(build_Y(model, x))
    eig_a = hermitian_eig(s)
    eig_b = hermitian_eig(s_tilde)
    id_n = np.eye(model.n, dtype=np.complex128)

    def cmat(m):
        return [[[v.real, v.imag] for v in row] for row in np.asarray(m)]

    dump = {
        "d": model.d, "n": model.n, "R": model.R,
        "dist": dist.name, "seed": args.seed,
        "eigenvalues_S": [float(v) for v in eig_a.eigenvalues],
        "eigenvalues_S_tilde": [float(v) for v in eig_b.eigenvalues],
        "points": [
            {
                "z": [z.real, z.imag],
                "delta_A_hat": cmat(empirical_delta(model, eig_a, z, "A")),
                "delta_B_hat": cmat(empirical_delta(model, eig_b, z, "B")),
                "companion_stieltjes_hat": [
                    empirical_trace(model, eig_b, z, id_n, "B").real,
                    empirical_trace(model, eig_b, z, id_n, "B").imag,
                ],
            }
            for z in zs
        ],
    }
    _write_output(json.dumps(dump, indent=2) + "\n", args.out)
    return 0


def _cmd_errors(args) -> int:
    spec = ExampleSpec(kind=args.example, n=1, R=args.R, seed=args.model_seed)
    n_values = _parse_int_list(args.n_list)
    zs = _parse_complex_list(args.z_list)
    for z in zs:
        if z.imag <= 0:
            raise DomainError(f"all z must have positive imaginary part, got {z}")
    table = run_error_study(spec, n_values, args.reps, zs, master_seed=args.seed)
    if args.format == "json":
        payload = [dict(r, z=[r["z"].real, r["z"].imag]) for r in table.rows]
        _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _write_output(table.to_csv(), args.out)
    return 0


def _cmd_universality(args) -> int:
    spec = ExampleSpec(kind=args.example, n=args.n, R=args.R, seed=args.model_seed)
    z = parse_complex(args.z)
    if z.imag <= 0:
        raise DomainError(f"--z must have positive imaginary part, got {z}")
    summary = run_universality(spec, args.n, args.reps, z, master_seed=args.seed)
    _write_output(json.dumps(summary.to_json_dict(), indent=2) + "\n", args.out)
    return 0


def _cmd_example(args) -> int:
    spec = ExampleSpec(kind=args.example, n=args.n, R=args.R, seed=args.model_seed)
    model, m_test, mt_test, dist = build_example(spec)
    payload = model_to_spec(model)
    payload["test_matrix_M"] = matrix_to_json(m_test)
    payload["test_matrix_M_tilde"] = matrix_to_json(mt_test)
    payload["native_dist"] = dist.name
    _write_output(json.dumps(payload) + "\n", args.out)
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "solve": _cmd_solve,
    "density": _cmd_density,
    "simulate": _cmd_simulate,
    "errors": _cmd_errors,
    "universality": _cmd_universality,
    "example": _cmd_example,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConvergenceError, NumericError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except (DomainError, SepCovMixError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
