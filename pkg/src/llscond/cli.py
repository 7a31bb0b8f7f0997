"""Command-line front end.

Subcommands:
    analyze        geometry, chi_b, the chi_A bracket (and, with --exact, the
                   exact value), the literature catalog, and provenance.
    perturb        randomized perturbation trials against the error bound.
    catalog        the literature catalog alone.
    paper-example  the built-in example family with closed forms next to
                   computed values.

Problems come from files (MatrixMarket or CSV matrix plus a single-column
rhs) or from ``--example alpha=...,beta=...,phi=...``.  Output formats:
text (6 significant digits), json, csv (both 17 significant digits, exact
round trip for doubles).  Exit codes: 0 success, 2 input validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .catalog import DEFAULT_GRATTON_WEIGHTS, GrattonWeights, evaluate_catalog, overestimate_ratio
from .conditioning import (
    OptimizerConfig,
    ScaleFactors,
    chi_A_bounds,
    chi_b,
    chi_A_exact,
)
from .exceptions import LlsCondError, RankDeficientError, ValidationError, ZeroSolutionError
from .family import ExampleSpec, example_perturbation, example_problem
from .io import read_matrix, read_vector
from .linalg import RANK_TOLERANCE
from .perturb import perturbed_solve, run_trials, worst_case_perturbation
from .problem import build_problem, geometry, solve

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SEED_ENV_VAR = "LLSCOND_SEED"

_PI_PATTERN = re.compile(r"^(?P<sign>[+-]?)(?P<coef>\d+(?:\.\d+)?)?\s*pi(?:\s*/\s*(?P<den>\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    """Parse a plain number or a rational multiple of pi like 'pi/10' or '3pi/4'."""
    token = text.strip().lower().replace("*", "")
    match = _PI_PATTERN.match(token)
    if match:
        value = math.pi
        if match.group("coef"):
            value *= float(match.group("coef"))
        if match.group("den"):
            value /= float(match.group("den"))
        return -value if match.group("sign") == "-" else value
    try:
        return float(token)
    except ValueError:
        raise ValidationError(
            f"cannot parse angle {text!r}: use a number or a rational multiple of pi (e.g. pi/10)"
        ) from None


def parse_example(text: str) -> ExampleSpec:
    """Parse '--example alpha=0.1,beta=1,phi=pi/10[,epsilon=1e-8]'."""
    fields = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ValidationError(f"example parameter {piece!r} is not of the form key=value")
        key, _, value = piece.partition("=")
        key = key.strip()
        if key not in ("alpha", "beta", "phi", "epsilon"):
            raise ValidationError(f"unknown example parameter {key!r}")
        fields[key] = parse_angle(value) if key == "phi" else float(value)
    for required in ("alpha", "beta", "phi"):
        if required not in fields:
            raise ValidationError(f"example spec is missing {required!r}")
    return ExampleSpec(**fields)


def parse_scales(text: str) -> ScaleFactors | None:
    if text == "default":
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"--scales needs 'A,B,X' or 'default', got {text!r}")
    return ScaleFactors(*(float(p) for p in parts))


def parse_gratton(text: str) -> GrattonWeights:
    if text == "default":
        return DEFAULT_GRATTON_WEIGHTS
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"--gratton-weights needs 'a,b' or 'default', got {text!r}")
    return GrattonWeights(float(parts[0]), float(parts[1]))


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    return 0


# ---------------------------------------------------------------------------
# serialization

def format_float(value: float, digits: int = 17) -> str:
    return "%.*g" % (digits, value)


def to_json(obj, digits: int = 17) -> str:
    """JSON text with floats rendered at the requested significant digits."""
    if isinstance(obj, dict):
        items = ", ".join(f"{to_json(str(k))}: {to_json(v, digits)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v, digits) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise LlsCondError(f"cannot serialize non-finite value {obj}")
        return format_float(float(obj), digits)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise LlsCondError(f"cannot serialize {type(obj).__name__}")


def flatten(obj, prefix: str = ""):
    """Flatten nested dicts/lists into (dotted key, scalar) pairs."""
    if isinstance(obj, dict):
        for key, value in obj.items():
            yield from flatten(value, f"{prefix}{key}.")
    elif isinstance(obj, (list, tuple)):
        for index, value in enumerate(obj):
            yield from flatten(value, f"{prefix}{index}.")
    else:
        yield prefix[:-1], obj


def to_csv(obj) -> str:
    lines = ["key,value"]
    for key, value in flatten(obj):
        if isinstance(value, float):
            lines.append(f"{key},{format_float(value)}")
        else:
            lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def to_text(obj, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list, tuple)):
                lines.append(f"{pad}{key}:")
                lines.append(to_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key} = {_text_scalar(value)}")
    elif isinstance(obj, (list, tuple)):
        for index, value in enumerate(obj):
            if isinstance(value, (dict, list, tuple)):
                lines.append(f"{pad}[{index}]")
                lines.append(to_text(value, indent + 1))
            else:
                lines.append(f"{pad}[{index}] = {_text_scalar(value)}")
    else:
        lines.append(f"{pad}{_text_scalar(obj)}")
    return "\n".join(lines)


def _text_scalar(value) -> str:
    if isinstance(value, float):
        return format_float(value, 6)
    return str(value)


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report) + "\n"
    if fmt == "csv":
        return to_csv(report)
    return to_text(report) + "\n"


# ---------------------------------------------------------------------------
# report assembly

def _load_problem(args):
    """Problem from --example or from matrix/rhs paths; returns (problem, example|None)."""
    if args.example is not None:
        spec = parse_example(args.example)
        problem, _ = example_problem(spec)
        return problem, spec
    if not args.matrix or not args.rhs:
        raise ValidationError("provide a matrix file and a rhs file, or --example k=v,...")
    return build_problem(read_matrix(args.matrix), read_vector(args.rhs)), None


def _provenance(seed: int, config: OptimizerConfig, extra: dict | None = None) -> dict:
    block = {
        "version": __version__,
        "seed": seed,
        "restarts": config.restarts,
        "max_iterations": config.max_iterations,
        "step_tolerance": config.step_tolerance,
        "value_tolerance": config.value_tolerance,
        "rank_tolerance": RANK_TOLERANCE,
    }
    if extra:
        block.update(extra)
    return block


def _geometry_block(problem, solution, geom) -> dict:
    return {
        "rows": problem.m,
        "cols": problem.n,
        "sigma_min": geom.sigma_min,
        "sigma_max": problem.sigma_max,
        "norm_b": float(np.linalg.norm(problem.b)),
        "norm_x": float(np.linalg.norm(solution.x)),
        "norm_r": float(np.linalg.norm(solution.residual)),
        "kappa": geom.kappa,
        "nu": geom.nu,
        "tan_theta": geom.tan_theta,
        "sec_theta": geom.sec_theta,
    }


def _catalog_block(entries) -> list:
    return [
        {
            "name": entry.name,
            "value": entry.value,
            "norm_regime": entry.norm_regime.value,
            "status": entry.status.value,
        }
        for entry in entries
    ]


def cmd_analyze(args) -> dict:
    problem, spec = _load_problem(args)
    solution = solve(problem)
    geom = geometry(problem, solution)
    scales = parse_scales(args.scales) or ScaleFactors.default(problem, solution)
    seed = resolve_seed(args)
    config = OptimizerConfig(restarts=args.restarts, seed=seed)
    weights = parse_gratton(args.gratton_weights)

    lower, upper = chi_A_bounds(problem, solution, scales)
    condition = {
        "chi_b": chi_b(problem, scales),
        "chi_A_lower": lower,
        "chi_A_upper": upper,
    }
    if args.exact:
        result = chi_A_exact(problem, solution, scales, config)
        condition["chi_A_exact"] = result.value
        condition["maximizer"] = [float(v) for v in result.maximizer]
        condition["exact_certified"] = result.converged

    report = {
        "problem": _geometry_block(problem, solution, geom),
        "scales": {"phi_A": scales.phi_A, "phi_B": scales.phi_B, "phi_X": scales.phi_X},
        "condition": condition,
        "catalog": _catalog_block(
            evaluate_catalog(problem, solution, geom, scales, weights, args.eps)
        ),
        "overestimate_ratio": overestimate_ratio(problem, solution, geom),
        "provenance": _provenance(seed, config, {"eps": args.eps}),
    }
    if spec is not None:
        report["example"] = {
            "alpha": spec.alpha, "beta": spec.beta, "phi": spec.phi, "epsilon": spec.epsilon,
        }
    return report


def cmd_perturb(args) -> dict:
    problem, spec = _load_problem(args)
    seed = resolve_seed(args)
    if args.trials < 1:
        raise ValidationError(f"--trials must be >= 1, got {args.trials}")
    summary = run_trials(problem, trials=args.trials, eps=args.eps, seed=seed)
    report = {
        "trials": summary.trials,
        "max_ratio": summary.max_ratio,
        "mean_ratio": summary.mean_ratio,
        "eps_used": summary.eps_used,
        "violations": summary.violations,
        "slack": summary.slack,
        "failures": summary.failures,
        "in_first_order_regime": summary.in_first_order_regime,
        "provenance": _provenance(seed, OptimizerConfig(seed=seed), {"eps": args.eps}),
    }
    if spec is not None:
        report["example"] = {
            "alpha": spec.alpha, "beta": spec.beta, "phi": spec.phi, "epsilon": spec.epsilon,
        }
    return report


def cmd_catalog(args) -> dict:
    problem, spec = _load_problem(args)
    solution = solve(problem)
    geom = geometry(problem, solution)
    scales = parse_scales(args.scales) or ScaleFactors.default(problem, solution)
    weights = parse_gratton(args.gratton_weights)
    report = {
        "catalog": _catalog_block(
            evaluate_catalog(problem, solution, geom, scales, weights, args.eps)
        ),
        "overestimate_ratio": overestimate_ratio(problem, solution, geom),
    }
    if spec is not None:
        report["example"] = {
            "alpha": spec.alpha, "beta": spec.beta, "phi": spec.phi, "epsilon": spec.epsilon,
        }
    return report


def cmd_paper_example(args) -> dict:
    if args.example is None:
        raise ValidationError("paper-example requires --example alpha=...,beta=...,phi=...")
    spec = parse_example(args.example)
    problem, forms = example_problem(spec)
    solution = solve(problem)
    geom = geometry(problem, solution)
    d_a = example_perturbation(spec)
    seed = resolve_seed(args)
    _, achieved = worst_case_perturbation(problem, solution, spec.epsilon)
    dx = perturbed_solve(problem, d_a, np.zeros(3))
    observed_change = float(np.linalg.norm(dx)) / float(np.linalg.norm(solution.x))
    return {
        "example": {"alpha": spec.alpha, "beta": spec.beta, "phi": spec.phi, "epsilon": spec.epsilon},
        "matrix": [[float(v) for v in row] for row in problem.A],
        "rhs": [float(v) for v in problem.b],
        "perturbation": [[float(v) for v in row] for row in d_a],
        "closed_forms": {
            "x": [float(v) for v in forms.x],
            "residual": [float(v) for v in forms.residual],
            "kappa": forms.kappa,
            "nu": forms.nu,
            "tan_theta": forms.tan_theta,
            "perturbed_x": [float(v) for v in forms.perturbed_x],
            "predicted_relative_change": forms.predicted_relative_change,
        },
        "computed": {
            "x": [float(v) for v in solution.x],
            "residual": [float(v) for v in solution.residual],
            "kappa": geom.kappa,
            "nu": geom.nu,
            "tan_theta": geom.tan_theta,
            "observed_relative_change": observed_change,
            "worst_case_achieved_ratio": achieved,
        },
        "provenance": _provenance(seed, OptimizerConfig(seed=seed)),
    }


# ---------------------------------------------------------------------------
# wiring

def _add_common(parser: argparse.ArgumentParser, with_problem: bool = True) -> None:
    if with_problem:
        parser.add_argument("matrix", nargs="?", help="matrix file (MatrixMarket or CSV)")
        parser.add_argument("rhs", nargs="?", help="right-hand-side file (single column)")
        parser.add_argument("--example", help="built-in family, e.g. alpha=0.1,beta=1,phi=pi/10")
    parser.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"random seed (falls back to ${SEED_ENV_VAR}, then 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llscond",
        description="Condition numbers and perturbation experiments for "
                    "full-rank linear least-squares solutions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="condition report for a problem")
    _add_common(analyze)
    analyze.add_argument("--exact", action="store_true",
                         help="also maximize for the exact matrix condition number")
    analyze.add_argument("--scales", default="default", help="'A,B,X' or 'default'")
    analyze.add_argument("--restarts", type=int, default=8)
    analyze.add_argument("--gratton-weights", default="default", help="'a,b' or 'default'")
    analyze.add_argument("--eps", type=float, default=1e-8)
    analyze.set_defaults(handler=cmd_analyze)

    perturb = sub.add_parser("perturb", help="randomized perturbation trials")
    _add_common(perturb)
    perturb.add_argument("--trials", type=int, default=100)
    perturb.add_argument("--eps", type=float, default=1e-8)
    perturb.set_defaults(handler=cmd_perturb)

    catalog = sub.add_parser("catalog", help="literature bound catalog")
    _add_common(catalog)
    catalog.add_argument("--scales", default="default", help="'A,B,X' or 'default'")
    catalog.add_argument("--gratton-weights", default="default", help="'a,b' or 'default'")
    catalog.add_argument("--eps", type=float, default=1e-8)
    catalog.set_defaults(handler=cmd_catalog)

    example = sub.add_parser("paper-example",
                             help="built-in example family: closed forms next to computed values")
    example.add_argument("--example", required=False,
                         help="alpha=...,beta=...,phi=...[,epsilon=...]")
    _add_common(example, with_problem=False)
    example.set_defaults(handler=cmd_paper_example)
    return parser


def _emit_error(exc: Exception, code: int, fmt: str) -> None:
    if fmt == "json":
        payload = {"error": {"code": code, "type": type(exc).__name__, "message": str(exc)}}
        sys.stdout.write(to_json(payload) + "\n")
    else:
        sys.stderr.write(f"llscond: error: {exc}\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")
    try:
        report = args.handler(args)
    except (ValidationError, RankDeficientError, ZeroSolutionError, OSError) as exc:
        # Ill-posed input (bad files, rank-deficient matrix, zero solution).
        _emit_error(exc, EXIT_VALIDATION, fmt)
        return EXIT_VALIDATION
    except LlsCondError as exc:
        _emit_error(exc, EXIT_NUMERICAL, fmt)
        return EXIT_NUMERICAL
    sys.stdout.write(emit(report, fmt))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
