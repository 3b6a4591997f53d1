"""command line: point, sweep, peaks and verify

exit codes: 0 success, 1 verification, numerical or i/o failure, 2 invalid arguments.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from .config import PRESETS, configure_logging, get_settings
from .exceptions import (
    InvalidParameterError,
    VerificationError,
    XYChainError,
)
from .schemas import ChainSpec, InputState
from .services import sweep_service
from .services.chain_model import build_chain, build_chain_from_exchange
from .utils import ParameterValidator, ResultFormatter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _chain_parent() -> argparse.ArgumentParser:
    settings = get_settings()
    parent = argparse.ArgumentParser(add_help=False)
    chain = parent.add_argument_group("chain")
    chain.add_argument("--preset", choices=sorted(PRESETS), help="regime preset for --field and --j")
    chain.add_argument("--n", type=int, default=settings.default_sites, help="number of sites N")
    chain.add_argument("--j", type=float, help="exchange J")
    chain.add_argument("--jx", type=float, help="exchange Jx (with --jy, instead of --j/--gamma)")
    chain.add_argument("--jy", type=float, help="exchange Jy")
    chain.add_argument("--field", type=float, help="transverse field h")
    chain.add_argument("--r", type=int, default=settings.default_receiver, help="receiver site (1-based)")

    state = parent.add_argument_group("input state")
    state.add_argument("--alpha", type=float, default=settings.default_alpha,
                       help="amplitude of |0>, beta = sqrt(1 - alpha^2)")
    state.add_argument("--vacuum", action="store_true", help="start from all spins down")

    parent.add_argument("--log-level", default=None, help="logging level (default from settings)")
    return parent


def _grid_arguments(parser: argparse.ArgumentParser, with_steps: bool = True) -> None:
    settings = get_settings()
    grid = parser.add_argument_group("grid")
    grid.add_argument("--t-min", type=float, default=settings.default_t_min)
    grid.add_argument("--t-max", type=float, default=settings.default_t_max)
    grid.add_argument("--gamma-min", type=float, default=settings.default_gamma_min)
    grid.add_argument("--gamma-max", type=float, default=settings.default_gamma_max)
    if with_steps:
        grid.add_argument("--t-steps", type=int, default=settings.default_t_steps)
        grid.add_argument("--gamma-steps", type=int, default=settings.default_gamma_steps)
        grid.add_argument("--unbounded-gamma", action="store_true", help="allow gamma outside [0, 1]")


def build_parser() -> argparse.ArgumentParser:
    """argument parser with the four subcommands"""
    settings = get_settings()
    parent = _chain_parent()

    parser = argparse.ArgumentParser(
        prog="xychain",
        description="state transfer and one-tangle through an anisotropic xy chain",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    point = commands.add_parser("point", parents=[parent], help="evaluate one (t, gamma) point")
    point.add_argument("--gamma", type=float, help="anisotropy gamma")
    point.add_argument("--t", type=float, required=True, help="time")
    point.add_argument("--format", choices=["json", "csv"], default="json")
    point.add_argument("--out", help="output path (default stdout)")

    sweep = commands.add_parser("sweep", parents=[parent], help="evaluate a (t, gamma) grid")
    _grid_arguments(sweep)
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--out", help="output path (default stdout)")
    sweep.add_argument("--workers", type=int, default=settings.workers, help="worker processes")
    sweep.add_argument("--timestamp", default=None,
                       help="metadata timestamp (default from SOURCE_DATE_EPOCH, 'now' for wall clock)")

    peaks = commands.add_parser("peaks", help="local maxima of a sweep file")
    peaks.add_argument("sweep_file", help="csv or json file written by sweep")
    peaks.add_argument("--quantity", choices=["fidelity", "tangle"], default="fidelity")
    peaks.add_argument("--top-k", type=int, default=10)
    peaks.add_argument(
        "--first-along-t",
        action="store_true",
        help="report only the earliest prominent maximum in t of one gamma column",
    )
    peaks.add_argument("--gamma", type=float, default=None, help="column for --first-along-t")
    peaks.add_argument("--prominence", type=float, default=0.1, help="fraction of the column range")
    peaks.add_argument("--out", help="output path (default stdout)")
    peaks.add_argument("--log-level", default=None)

    verify = commands.add_parser("verify", parents=[parent],
                                 help="compare the free-fermion pipeline with exact diagonalization")
    _grid_arguments(verify, with_steps=False)
    verify.add_argument("--points", type=int, default=settings.verify_points)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", help="report path (default stdout)")

    return parser


def _chain_couplings(args: argparse.Namespace) -> Tuple[float, float]:
    """(J, h) from explicit flags over the preset"""
    preset = PRESETS.get(args.preset or "", {})
    coupling = args.j if args.j is not None else preset.get("coupling")
    field = args.field if args.field is not None else preset.get("field")
    if args.jx is not None and args.jy is not None:
        coupling = 0.5 * (args.jx + args.jy)
    if coupling is None or field is None:
        raise InvalidParameterError("give --preset, or --field together with --j (or --jx/--jy)")
    return coupling, field


def _check_common(args: argparse.Namespace, exchange_allowed: bool) -> None:
    checks = [
        ParameterValidator.validate_sites(args.n),
        ParameterValidator.validate_receiver(args.r, args.n),
        ParameterValidator.validate_exchange(args.jx, args.jy),
    ]
    for is_valid, error in checks:
        if not is_valid:
            raise InvalidParameterError(error)
    if args.jx is not None and not exchange_allowed:
        raise InvalidParameterError("--jx/--jy fix gamma; sweep gamma with --j instead")


def _input_state(args: argparse.Namespace) -> InputState:
    return sweep_service.resolve_input_state(args.alpha, args.vacuum)


def _point_spec(args: argparse.Namespace) -> ChainSpec:
    _, field = _chain_couplings(args)
    if args.jx is not None:
        if args.gamma is not None:
            raise InvalidParameterError("--gamma cannot be combined with --jx/--jy")
        return build_chain_from_exchange(args.jx, args.jy, field, args.n)
    if args.gamma is None:
        raise InvalidParameterError("point needs --gamma (or --jx/--jy)")
    coupling, _ = _chain_couplings(args)
    return build_chain(coupling, args.gamma, field, args.n)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("wrote %s", out)


def cmd_point(args: argparse.Namespace) -> int:
    """print one (bloch vector, F, tau, S) record"""
    _check_common(args, exchange_allowed=True)
    spec = _point_spec(args)
    record = sweep_service.run_point(spec, args.t, args.r, _input_state(args))
    text = record.model_dump_json(indent=2) + "\n" if args.format == "json" else ResultFormatter.point_to_csv(record)
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """write the full grid as csv or json"""
    _check_common(args, exchange_allowed=False)
    coupling, field = _chain_couplings(args)
    config = sweep_service.build_sweep_config(
        n_sites=args.n,
        coupling=coupling,
        field=field,
        receiver=args.r,
        input_state=_input_state(args),
        t_min=args.t_min,
        t_max=args.t_max,
        t_steps=args.t_steps,
        gamma_min=args.gamma_min,
        gamma_max=args.gamma_max,
        gamma_steps=args.gamma_steps,
        unbounded_gamma=args.unbounded_gamma,
        workers=args.workers,
    )
    result = sweep_service.run_sweep(config, timestamp=args.timestamp)
    text = ResultFormatter.to_csv(result) if args.format == "csv" else ResultFormatter.to_json(result)
    _emit(text, args.out)
    return EXIT_OK


def cmd_peaks(args: argparse.Namespace) -> int:
    """print local maxima of a sweep file as a json list"""
    try:
        text = Path(args.sweep_file).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidParameterError(f"cannot read sweep file: {e}") from e
    result = ResultFormatter.parse_sweep_file(text)
    if args.first_along_t:
        peak = sweep_service.first_peak(result.rows, args.quantity, args.gamma, args.prominence)
        peaks = [peak] if peak is not None else []
    else:
        peaks = sweep_service.find_peaks(result.rows, args.quantity, args.top_k)
    _emit(ResultFormatter.peaks_to_json(peaks), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """print the verification report; exit 1 when it fails"""
    _check_common(args, exchange_allowed=False)
    coupling, field = _chain_couplings(args)
    report = sweep_service.run_verify(
        n_sites=args.n,
        coupling=coupling,
        field=field,
        receiver=args.r,
        input_state=_input_state(args),
        points=args.points,
        seed=args.seed,
        t_range=(args.t_min, args.t_max),
        gamma_range=(args.gamma_min, args.gamma_max),
    )
    _emit(report.model_dump_json(indent=2) + "\n", args.out)
    sweep_service.ensure_passed(report)
    return EXIT_OK


COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "peaks": cmd_peaks,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """run one subcommand and return its exit code"""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except InvalidParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.point:
            print(f"error: worst point {e.point}", file=sys.stderr)
        return EXIT_FAILURE
    except (XYChainError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
