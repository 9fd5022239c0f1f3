"""
Command-line entry point.

Exit codes: 0 success, 1 check or runtime failure, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from pydantic import ValidationError

from ..exceptions import ConfigError, EstimatorLabelError, InvalidDimensionsError, OrthoShrinkError
from ..export import OUTPUT_FORMATS
from ..montecarlo import APPENDIX_PRESETS, FIGURE_PRESETS
from ..utils.helpers import parse_float_list, resolve_seed
from .commands import COMMANDS
from .config import AppendixConfig, RiskConfig, SweepConfig, VerifyConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

USAGE_ERRORS = (ConfigError, EstimatorLabelError, InvalidDimensionsError, ValidationError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="master seed (default: $ORTHOSHRINK_SEED, else 42)")
    common.add_argument("--out", help="output file; tables print to stdout when omitted (csv or json only)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default='csv')
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    montecarlo = argparse.ArgumentParser(add_help=False)
    montecarlo.add_argument("--reps", type=int, help="Monte Carlo replications per point (default 100000)")
    montecarlo.add_argument("--threads", type=int, help="worker threads (default: $ORTHOSHRINK_THREADS, else min(cpus, 8))")

    parser = argparse.ArgumentParser(
        prog="orthoshrink",
        description="Matrix quadratic risk of orthogonally invariant estimators of a normal mean matrix.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="run the derivative and identity checks")
    verify.add_argument("--dims", help="comma-separated sizes, e.g. 10x3,8x5")
    verify.add_argument("--trials", type=int, help="finite-difference draws per size (default 100)")

    risk = commands.add_parser("risk", parents=[common, montecarlo], help="Monte Carlo risk at one mean")
    risk.add_argument("--n", type=int, required=True)
    risk.add_argument("--p", type=int, required=True)
    risk.add_argument("--sigma", required=True, help="singular values of the mean, e.g. 20,0,0")
    risk.add_argument("--estimator", default="stein")

    sweep = commands.add_parser("sweep", parents=[common, montecarlo], help="risk curves over a grid of singular values")
    sweep.add_argument("--figure", choices=tuple(FIGURE_PRESETS))
    sweep.add_argument("--n", type=int)
    sweep.add_argument("--p", type=int)
    sweep.add_argument("--sigma", help="fixed singular values; the swept one is overwritten")
    sweep.add_argument("--estimator", dest="estimators", action="append")
    sweep.add_argument("--axis", type=int, help="1-based index of the swept singular value")
    sweep.add_argument("--grid", help="start:stop[:step], stop inclusive")

    appendix = commands.add_parser("appendix", parents=[common, montecarlo], help="largest risk eigenvalue of Stein's estimator")
    appendix.add_argument("--figure", choices=tuple(APPENDIX_PRESETS))
    appendix.add_argument("--p", type=int)
    appendix.add_argument("--n", dest="n_range", help="inclusive range, e.g. 5..10")
    appendix.add_argument("--sigma", type=float)
    return parser


def _present(args, *names) -> dict:
    return {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}


def build_config(args):
    """Validated config for the parsed command."""
    shared = _present(args, 'reps', 'threads', 'out', 'format')
    shared['seed'] = resolve_seed(args.seed)

    if args.command == 'verify':
        fields = _present(args, 'trials')
        if args.dims is not None:
            fields['dims'] = tuple(part.strip() for part in args.dims.split(','))
        return VerifyConfig(**shared, **fields)

    if args.command == 'risk':
        return RiskConfig(**shared, n=args.n, p=args.p, sigma=parse_float_list(args.sigma),
                          estimator=args.estimator)

    if args.command == 'sweep':
        fields = _present(args, 'figure', 'n', 'p', 'axis', 'grid')
        if args.sigma is not None:
            fields['sigma'] = parse_float_list(args.sigma)
        if args.estimators:
            fields['estimators'] = tuple(args.estimators)
        return SweepConfig(**shared, **fields)

    return AppendixConfig(**shared, **_present(args, 'figure', 'p', 'n_range', 'sigma'))


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    configure_logging(args.verbose)

    try:
        config = build_config(args)
        return COMMANDS[args.command](config)
    except USAGE_ERRORS as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrthoShrinkError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
