"""Command-line interface.

    thetaspec eval theta|theta2|eis|eisstar|xi|f --at X Y [--s SIGMA T]
    thetaspec verify poisson|mellin|contour|means|theorem1|all [flags]
    thetaspec report --format csv|json --out PATH [flags]

Exit codes: 0 all checks pass, 1 any check fails, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys

from . import eisenstein as eis
from . import thetaforms as tf
from .harness import (
    RunConfig,
    load_config,
    reports_to_csv,
    reports_to_json,
    run_suite,
)
from .specfun import DomainError, PoleError, xi


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetaspec",
        description="numerical verification of theta/Eisenstein spectral identities",
    )
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--eps", type=float, help="truncation target for series/quadrature")
    parser.add_argument("--grid-Y", type=float, dest="grid_Y", help="cusp cutoff height")
    parser.add_argument("--grid-res", type=int, dest="grid_res", help="Gauss-Legendre resolution")
    parser.add_argument("--contour-T", type=float, dest="contour_T", help="contour truncation")
    parser.add_argument("--seed", type=int, help="seed for randomized panels")
    parser.add_argument("--threads", type=int, help="worker threads for node evaluation")

    sub = parser.add_subparsers(dest="command", required=True)

    evalp = sub.add_parser("eval", help="evaluate one object at a point")
    evalp.add_argument("object", choices=["theta", "theta2", "eis", "eisstar", "xi", "f"])
    evalp.add_argument("--at", nargs=2, type=float, metavar=("X", "Y"),
                       help="half-plane point (f uses the Y coordinate)")
    evalp.add_argument("--s", nargs=2, type=float, metavar=("SIGMA", "T"),
                       help="spectral parameter sigma + i t")

    verp = sub.add_parser("verify", help="run a verification suite")
    verp.add_argument("suite", choices=["poisson", "mellin", "contour", "means", "theorem1", "all"])

    repp = sub.add_parser("report", help="run suites and write a report file")
    repp.add_argument("--format", choices=["csv", "json"], default="csv")
    repp.add_argument("--out", required=True)
    repp.add_argument("--suite", default="all",
                      choices=["poisson", "mellin", "contour", "means", "theorem1", "all"])
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    overrides = {}
    for key in ("eps", "grid_Y", "grid_res", "contour_T", "seed", "threads"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _cmd_eval(args, cfg: RunConfig) -> int:
    pol = cfg.policy()
    if args.object in ("theta", "theta2", "f"):
        if args.at is None:
            print("eval: --at X Y is required for this object", file=sys.stderr)
            return 2
        x, y = args.at
        if args.object == "theta":
            print(tf.jacobi_theta(complex(x, y), pol))
        elif args.object == "theta2":
            print(tf.squared_theta_direct(complex(x, y), pol))
        else:
            print(tf.f_profile(y, pol))
        return 0
    if args.s is None:
        print("eval: --s SIGMA T is required for this object", file=sys.stderr)
        return 2
    s = complex(*args.s)
    if args.object == "xi":
        print(xi(s))
        return 0
    if args.at is None:
        print("eval: --at X Y is required for this object", file=sys.stderr)
        return 2
    z = complex(*args.at)
    if args.object == "eis":
        print(eis.eisenstein_fourier(s, z, eps=cfg.eps))
    else:
        print(eis.eisenstein_star(s, z, eps=cfg.eps))
    return 0


def _print_reports(reports) -> None:
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"[{status}] {r.suite}/{r.case_id}: |err| = {r.abs_error:.3e} "
            f"(tol {r.tolerance:.3e}, {r.wall_time_s:.2f}s)  [{r.provenance}]"
        )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _config_from_args(args)
    except (OSError, DomainError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "eval":
            return _cmd_eval(args, cfg)
        if args.command == "verify":
            reports = run_suite(args.suite, cfg)
            _print_reports(reports)
            failed = sum(not r.passed for r in reports)
            print(f"{len(reports) - failed}/{len(reports)} checks passed")
            return 0 if failed == 0 else 1
        if args.command == "report":
            reports = run_suite(args.suite, cfg)
            text = reports_to_csv(reports) if args.format == "csv" else reports_to_json(reports)
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            failed = sum(not r.passed for r in reports)
            print(f"wrote {len(reports)} rows to {args.out}; {failed} failures")
            return 0 if failed == 0 else 1
    except (DomainError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
