"""
Command-line front end.

    scatterqubit levels   [--config PATH] [--set K=V ...] [--out PATH]
    scatterqubit sweep    [...] [--svg]
    scatterqubit sequence [...] [--seed N]
    scatterqubit fit INPUT --curve {from_d,from_u,spin_echo} [--method ...] [--calibrate]
    scatterqubit stark    [...] [--svg] [--measured PATH]

Exit codes: 0 ok, 2 configuration / input error, 3 output error,
4 physics or numerics precondition violated.
"""

import argparse
import sys
from typing import Callable, Dict, Optional, Sequence

from scatterqubit.cli import commands
from scatterqubit.cli.run_config import RunConfig, load_run_config
from scatterqubit.utils.constants import CurveKind, ExitCode, FitMethod
from scatterqubit.utils.exceptions import ConfigError, DomainError, OutputError
from scatterqubit.utils.logger import LoggerFactory, logger

COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], None]] = {
    "levels": commands.cmd_levels,
    "sweep": commands.cmd_sweep,
    "sequence": commands.cmd_sequence,
    "fit": commands.cmd_fit,
    "stark": commands.cmd_stark,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration (default: packaged default_run.json)")
    common.add_argument("--set", metavar="K=V", action="append", default=[],
                        help="override a configuration leaf, e.g. sweep.n_points=101 (repeatable)")
    common.add_argument("--out", metavar="PATH", help="write results to PATH instead of stdout")
    common.add_argument("--svg", action="store_true", help="also render an SVG chart")
    common.add_argument("--seed", type=int, help="override trajectories.seed")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="scatterqubit",
        description="Light-scattering decoherence of a trapped-ion spin qubit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("levels", parents=[common], help="level structure and resonances")
    sub.add_parser("sweep", parents=[common], help="scattering rates versus detuning")
    sub.add_parser("sequence", parents=[common], help="simulate a pulse sequence")
    fit = sub.add_parser("fit", parents=[common], help="fit a rate to a population time series")
    fit.add_argument("input", help="CSV of time,population[,sigma]")
    fit.add_argument("--curve", required=True, choices=CurveKind.values())
    fit.add_argument("--method", default=FitMethod.FULL_EXPONENTIAL.value, choices=FitMethod.values())
    fit.add_argument("--calibrate", action="store_true",
                     help="also infer the Rabi frequency from the fitted rate and the configured laser")
    stark = sub.add_parser("stark", parents=[common], help="differential light shift versus polarization angle")
    stark.add_argument("--measured", metavar="PATH",
                       help="CSV of angle_deg,shift_hz[,sigma_hz] to calibrate the Rabi frequency against")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        LoggerFactory.set_level(logger, "DEBUG")

    try:
        run_cfg = load_run_config(args.config, args.set, args.seed)
        logger.debug(f"Run configuration {run_cfg.config_hash} (seed {run_cfg.seed})")
        COMMANDS[args.command](args, run_cfg)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return int(ExitCode.CONFIG_ERROR)
    except OutputError as e:
        logger.error(f"Output error: {e}")
        return int(ExitCode.IO_ERROR)
    except DomainError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return int(ExitCode.DOMAIN_ERROR)
    return int(ExitCode.OK)


if __name__ == "__main__":
    sys.exit(main())
