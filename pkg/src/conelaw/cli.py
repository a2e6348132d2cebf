"""Command-line entry point: ``conelaw --field photon --properties H,Cc --deduce``."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from conelaw.checkers import DEFAULT_TOL, FD_STEP
from conelaw.domain import SampleConfig
from conelaw.errors import ContractError
from conelaw.fields import CATALOG, SLOPE_MODES
from conelaw.report import FORMATS, PROPERTIES, RunConfig, UsageError, emit_report, run_suite

log = logging.getLogger("conelaw")


def parse_radii(text: str) -> list[float]:
    """``"a:b"`` gives one radius per decade from a down to b, ``"a:b:n"`` gives n
    geometric radii, anything else is a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"bad radii value {text!r}")
        a, b = float(parts[0]), float(parts[1])
        if not (a > b > 0):
            raise argparse.ArgumentTypeError("radii must decrease from a to b > 0")
        n = int(parts[2]) if len(parts) == 3 else int(round(math.log10(a / b))) + 1
        return [float(r) for r in np.geomspace(a, b, max(n, 1))]
    return [float(v) for v in text.split(",") if v]


def parse_expect(text: str) -> dict[str, bool]:
    out = {}
    for item in filter(None, text.split(",")):
        key, _, val = item.partition("=")
        if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise argparse.ArgumentTypeError(f"bad expectation {item!r}; use PROP=true|false")
        out[key] = val.lower() in ("true", "1", "yes")
    return out


def _csv_list(text: str) -> list[str]:
    return [p for p in text.split(",") if p]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conelaw",
        description="Check homogeneity, superadditivity, concavity and the apex liminf of catalog fields.",
    )
    p.add_argument("--field", required=True, help=f"one of: {', '.join(CATALOG)}")
    p.add_argument("--c", type=float, default=1.0, help="f0 parameter c > 0")
    p.add_argument("--slope-mode", choices=SLOPE_MODES, default="Tangent")
    p.add_argument("--dim", type=int, default=2, help="dimension of f0-multi")
    p.add_argument("--Q", type=float, default=0.0, help="black-hole charge")
    p.add_argument("--coeffs", type=lambda s: [float(v) for v in s.split(",")], default=None,
                   help="linear field coefficients, comma separated")
    p.add_argument("--properties", type=_csv_list, default=[],
                   help=f"comma list from: {', '.join(PROPERTIES)} (default: the field's declared ones)")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0, help="overridden by CONELAW_SEED when set")
    p.add_argument("--range", dest="coord_range", type=lambda s: tuple(float(v) for v in s.split(",")),
                   default=(1e-3, 1e3), help="coordinate magnitude range 'lo,hi'")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--fd-step", type=float, default=FD_STEP)
    p.add_argument("--radii", type=parse_radii, default="1e-1:1e-6")
    p.add_argument("--deduce", action="store_true", help="apply the two-implies-third rule table")
    p.add_argument("--falsify", type=_csv_list, default=[], help="run the witness search for H, Sp or Cc")
    p.add_argument("--expect", type=parse_expect, default={}, help="override expectations, e.g. H=false")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {
        "f0": {"c": args.c, "slope_mode": args.slope_mode},
        "f0-multi": {"c": args.c, "dim": args.dim},
        "bekenstein": {"Q": args.Q},
        "linear": {"coeffs": args.coeffs or [1.0]},
    }.get(args.field, {})
    seed = int(os.environ.get("CONELAW_SEED", args.seed))
    return RunConfig(
        field=args.field,
        field_params=params,
        properties=args.properties,
        sample=SampleConfig(seed, args.samples, args.coord_range),
        tol=args.tol,
        fd_step=args.fd_step,
        radii=args.radii,
        deduce=args.deduce,
        falsify=args.falsify,
        expect=args.expect,
        threads=args.threads,
        out=args.out,
        format=args.format,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        report = run_suite(cfg)
    except (UsageError, ContractError, ValueError) as exc:
        print(f"conelaw: error: {exc}", file=sys.stderr)
        return 2
    try:
        data = emit_report(report, cfg.format, cfg.out)
    except OSError as exc:
        print(f"conelaw: {exc.strerror}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(data.decode())
    else:
        log.info("report written to %s", cfg.out)
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
