"""Command line front end for the experiment drivers.

Subcommands
-----------
``eigenbasis``
    Print the joint eigenvalue tables of the averaging operators.
``theta``
    Lift invariant eigenfunctions to newform q-expansions (exact route).
``identity-check``
    Run the central-value identity cross-check and print the report.
``mass`` / ``moments`` / ``third-moment``
    Run the corresponding experiment sweep and write CSV/JSON/SVG tables.
``lvalue``
    Print the central value of one of the curated level-2 L-series.

Exit codes: 0 on success, 1 on computational failure, 2 on configuration
errors (including command line errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .experiments import (
    ExperimentConfig,
    central_value_report,
    emit,
    run_identity,
    run_mass,
    run_moments,
    run_third_moment,
)

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", metavar="FILE", help="JSON file with ExperimentConfig fields"
    )
    common.add_argument(
        "--order",
        choices=("lipschitz", "hurwitz"),
        help="quaternion order (default hurwitz)",
    )
    common.add_argument("--nu-min", type=int, help="smallest harmonic degree")
    common.add_argument("--nu-max", type=int, help="largest harmonic degree")
    common.add_argument(
        "--primes", help="comma-separated odd primes to diagonalize jointly"
    )
    common.add_argument("--out", metavar="DIR", help="output directory")

    parser = argparse.ArgumentParser(
        prog="sphecke",
        description="Quaternionic eigenfunction experiments and L-value checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "eigenbasis",
        parents=[common],
        help="print joint eigenvalue tables per degree",
    )
    p.set_defaults(func=_cmd_eigenbasis)

    p = sub.add_parser(
        "theta",
        parents=[common],
        help="lift invariant eigenfunctions to newform q-expansions",
    )
    p.add_argument(
        "--n-max", type=int, default=24, help="coefficients to print (default 24)"
    )
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser(
        "identity-check",
        parents=[common],
        help="cross-check the two routes to the degree-8 central value",
    )
    p.add_argument(
        "--no-direct",
        action="store_true",
        help="skip the degree-8 functional-equation consistency route",
    )
    p.set_defaults(func=_cmd_identity)

    p = sub.add_parser(
        "mass",
        parents=[common],
        help="mass table of eigenfunction densities against a test function",
    )
    p.add_argument(
        "--test-degree", type=int, help="degree of the test eigenfunction (0 = 1)"
    )
    p.set_defaults(func=_cmd_mass)

    p = sub.add_parser(
        "moments", parents=[common], help="moment tables against Gaussian values"
    )
    p.add_argument("--q", help="comma-separated moment orders (default 1,2,3,4)")
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser(
        "third-moment",
        parents=[common],
        help="third moments of invariant eigenfunctions",
    )
    p.add_argument(
        "--exact-limit",
        type=int,
        help="largest degree to attempt the exact eigen-split (default 14)",
    )
    p.set_defaults(func=_cmd_third_moment)

    p = sub.add_parser(
        "lvalue", parents=[common], help="central value of a curated L-series"
    )
    p.add_argument(
        "--weight", type=int, required=True, choices=(8, 10, 14), help="newform weight"
    )
    p.add_argument(
        "--kind",
        choices=("gl2", "sym3", "triple"),
        default="gl2",
        help="which L-series (default gl2)",
    )
    p.add_argument(
        "--a2",
        choices=("plus", "minus"),
        default="plus",
        help="weight-14 branch by the sign of the coefficient at 2",
    )
    p.set_defaults(func=_cmd_lvalue)

    return parser


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = (
        ExperimentConfig.from_json(args.config)
        if args.config
        else ExperimentConfig()
    )
    overrides: dict[str, Any] = {}
    if args.order is not None:
        overrides["order_kind"] = args.order
    if args.nu_min is not None:
        overrides["nu_min"] = args.nu_min
    if args.nu_max is not None:
        overrides["nu_max"] = args.nu_max
    if args.primes is not None:
        overrides["primes"] = tuple(
            int(p) for p in str(args.primes).split(",") if p.strip()
        )
    if args.out is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "q", None) is not None:
        overrides["q_list"] = tuple(
            int(q) for q in str(args.q).split(",") if q.strip()
        )
    if getattr(args, "test_degree", None) is not None:
        overrides["test_degree"] = args.test_degree
    if getattr(args, "exact_limit", None) is not None:
        overrides["exact_limit"] = args.exact_limit
    return config.with_updates(**overrides) if overrides else config


def _cmd_eigenbasis(config: ExperimentConfig, args: argparse.Namespace) -> int:
    from .experiments import _system

    for nu in range(config.nu_min, config.nu_max + 1):
        system = _system(nu, config)
        print(f"# nu={nu} order={config.order_kind} residual={system.residual:.3e}")
        print(system.table(), end="")
    return 0


def _cmd_theta(config: ExperimentConfig, args: argparse.Namespace) -> int:
    from .hecke import invariant_eigen_split
    from .theta import newform_from_eigenvector

    for nu in range(config.nu_min, config.nu_max + 1):
        split = invariant_eigen_split(nu, config.order_spec, primes=config.primes)
        for index, (vec, eigenvalues) in enumerate(split):
            form = newform_from_eigenvector(vec, config.order_spec, args.n_max)
            lams = " ".join(
                f"lambda_{p}={lam}" for p, lam in zip(config.primes, eigenvalues)
            )
            print(f"# nu={nu} index={index} weight={form.weight} {lams}")
            for n in range(1, args.n_max + 1):
                print(f"{n} {form.a(n)}")
    return 0


def _cmd_identity(config: ExperimentConfig, args: argparse.Namespace) -> int:
    report = run_identity(config, direct_check=not args.no_direct)
    for t in report["triples"]:
        print(
            f"triple nu={t['nu']} (weight {t['weight']}): "
            f"ratio = {t['ratio']:.9f} +- {t['ratio_relative_error']:.1e} relative"
        )
        print(f"  LHS (sym3 x gl2^2, finite central) = {t['lhs_value']:.12e}")
        print(f"  RHS (predicted from sphere data)   = {t['rhs_value']:.12e}")
        print(
            f"  fitted sym3 sign {t['symmetric_cube']['fitted_sign']:+d}, "
            f"elliptic sign {t['elliptic_factor']['sign']:+d}"
        )
        if "direct_degree8" in t:
            d = t["direct_degree8"]
            print(
                f"  direct degree-8 route: finite central {d['finite_central']:.12e}"
                f" (fitted sign {d['fitted_sign']:+d})"
            )
    agreement = report["ratio_agreement"]
    print(
        f"ratio agreement: spread {agreement['relative_spread']:.2e} "
        f"(combined error {agreement['combined_relative_error']:.2e}) -> "
        f"{'consistent' if agreement['consistent'] else 'INCONSISTENT'}"
    )
    pz = report["parity_zero"]
    print(
        f"parity-zero degree 3: sphere integral {pz['sphere_triple_integral']}, "
        f"completed central {pz['sym3_completed_central']:.2e} +- "
        f"{pz['sym3_completed_error']:.1e} -> "
        f"{'consistent' if pz['consistent'] else 'INCONSISTENT'}"
    )
    if args.out is not None:
        path = Path(args.out)
        path.mkdir(parents=True, exist_ok=True)
        target = path / "identity.json"
        target.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        print(f"wrote {target}")
    return 0 if (agreement["consistent"] and pz["consistent"]) else 1


def _emit_and_report(records: list, config: ExperimentConfig, stem: str) -> int:
    paths = emit(records, config.out_dir, stem=stem)
    print(f"{len(records)} records")
    for fmt in sorted(paths):
        print(f"wrote {paths[fmt]}")
    return 0


def _cmd_mass(config: ExperimentConfig, args: argparse.Namespace) -> int:
    return _emit_and_report(run_mass(config), config, "mass")


def _cmd_moments(config: ExperimentConfig, args: argparse.Namespace) -> int:
    return _emit_and_report(run_moments(config), config, "moments")


def _cmd_third_moment(config: ExperimentConfig, args: argparse.Namespace) -> int:
    return _emit_and_report(run_third_moment(config), config, "third-moment")


def _cmd_lvalue(config: ExperimentConfig, args: argparse.Namespace) -> int:
    report = central_value_report(args.weight, args.kind, args.a2)
    for key in (
        "weight",
        "kind",
        "branch",
        "conductor",
        "finite_central",
        "completed_central",
        "completed_error",
        "sign",
        "fitted_sign",
        "coefficients_used",
    ):
        if key in report:
            print(f"{key}: {report[key]}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(config, args)
    except Exception as exc:  # computational failure -> exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
