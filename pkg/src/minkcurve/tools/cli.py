"""
argparse front end: parse flags into a RunConfig, dispatch, print, exit.
"""

import argparse
import json
import sys
import uuid
from typing import List, Optional

from pydantic import ValidationError

from minkcurve.core.errors import InvalidConfig
from minkcurve.services.log_service import LogService
from minkcurve.tools.commands import run
from minkcurve.tools.schemas import CommandResponse, RunConfig

KINDS = ["planar-circle", "tilted-ellipse", "graph-over-convex", "random-fourier"]


def _add_numeric(p: argparse.ArgumentParser, *names: str):
    flags = {
        "samples": dict(type=int, help="Arc-length samples"),
        "seed": dict(type=int, help="Random seed"),
        "grid": dict(help="Ruled grid as NsxNt, e.g. 512x64"),
        "start": dict(type=float, help="Arc length of the split point p"),
        "h": dict(type=float, help="Target mesh size"),
        "tol": dict(type=float, help="Newton tolerance on the area gradient"),
        "max_iter": dict(type=int, help="Newton iteration cap"),
        "trials": dict(type=int, help="Random triples for the section check"),
        "planes": dict(type=int, help="Random planes per kind"),
        "method": dict(choices=["spline", "fourier"], help="Resampling interpolant"),
    }
    for name in names:
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, **flags[name])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minkcurve", description="Closed strong spacelike curves in Minkowski 3-space")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a test curve")
    gen.add_argument("--kind", choices=KINDS, required=True)
    gen.add_argument("--radius", type=float)
    gen.add_argument("--a", type=float)
    gen.add_argument("--b", type=float)
    gen.add_argument("--c", type=float, help="Tilt slope, |c| < 1")
    gen.add_argument("--amplitudes", type=float, nargs="*", help="alpha_1 beta_1 alpha_2 beta_2 ...")
    gen.add_argument("--harmonics", type=int)
    gen.add_argument("--amplitude-cap", dest="amplitude_cap", type=float)
    gen.add_argument("-o", "--output")
    _add_numeric(gen, "samples", "seed")

    verify = sub.add_parser("verify", help="Check hypotheses and both lemmas")
    verify.add_argument("input")
    verify.add_argument("-o", "--report", dest="report")
    _add_numeric(verify, "samples", "seed", "trials", "planes", "method")

    curvature = sub.add_parser("curvature", help="Total curvature and Fenchel margin")
    curvature.add_argument("input")
    curvature.add_argument("--report")
    curvature.add_argument("--csv", help="Per-sample s, kappa, theta, phi; '-' prints the series to stdout")
    _add_numeric(curvature, "samples", "method")

    ruled = sub.add_parser("ruled", help="Ruled surface and Gauss-Bonnet check")
    ruled.add_argument("input")
    ruled.add_argument("-o", "--output")
    ruled.add_argument("--report")
    ruled.add_argument("--csv", help="Boundary curvature profile")
    _add_numeric(ruled, "samples", "grid", "start", "method")

    plateau = sub.add_parser("plateau", help="Maximal graph over the projected domain")
    plateau.add_argument("input")
    plateau.add_argument("-o", "--output")
    plateau.add_argument("--report")
    _add_numeric(plateau, "samples", "grid", "start", "h", "tol", "max_iter", "method")

    fuzz = sub.add_parser("fuzz", help="Random curves through the invariant suite")
    fuzz.add_argument("--count", type=int)
    fuzz.add_argument("--harmonics", type=int)
    fuzz.add_argument("--amplitude-cap", dest="amplitude_cap", type=float)
    fuzz.add_argument("-o", "--output")
    fuzz.add_argument("--plateau-h", dest="plateau_h", type=float, help="Also solve a coarse maximal graph per curve")
    _add_numeric(fuzz, "samples", "seed", "grid", "trials", "planes")
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    """Unset flags fall back to RunConfig defaults; validation errors become InvalidConfig."""
    values = {k: v for k, v in vars(args).items() if v is not None}
    try:
        return RunConfig(**values)
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise InvalidConfig(details) from None


def execute(argv: Optional[List[str]] = None) -> CommandResponse:
    run_id = str(uuid.uuid4())
    args = build_parser().parse_args(argv)
    try:
        cfg = to_config(args)
    except InvalidConfig as e:
        LogService.log_error(args.command, e.message, run_id)
        return CommandResponse(success=False, data=e.to_dict(), message=e.message, exit_code=e.exit_code)
    return run(cfg, run_id)


def main(argv: Optional[List[str]] = None) -> int:
    response = execute(argv)
    if response.stdout is not None:
        sys.stdout.write(response.stdout)
    if not response.success and response.data is not None and "error" in response.data:
        sys.stdout.write(json.dumps(response.data, sort_keys=True) + "\n")
    if response.message:
        print(response.message, file=sys.stderr)
    return response.exit_code


if __name__ == "__main__":
    sys.exit(main())
