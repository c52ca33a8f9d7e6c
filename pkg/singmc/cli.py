# -*- coding: utf-8 -*-
"""
singmc command line.

    singmc simplex   --alpha 0.5,0.5 --integrand "s2" --samples 100000 --seed 7
    singmc ball      --A 0,0 --integrand "s1^2" --samples 100000 --seed 7
    singmc direct    --alpha 0.25,0.25 --integrand "1" --samples 100000 --seed 7
    singmc compare   --alpha 0.5,0.5 --integrand "s1+s2" --samples 100000 --seed 7
    singmc param     --alpha 0.5,0.5 --integrand "exp(-t1*(s1+s2))" --grid 0:1:11 --samples 10000 --seed 7
    singmc sample    --alpha 0.5,0.5 --count 10 --seed 7
    singmc constants --alpha 0.5,0.5 --A 0,0
    singmc oracle    --alpha 0.5,0.5 --integrand "s2" --nodes 32

Reports go to standard output, diagnostics to standard error. Exit codes: 0 success, 2 usage or expression
error, 3 domain error, 4 numerical failure.

"""
import argparse
import logging
import sys

import singmc
from singmc.commands import COMMANDS
from singmc.errors import DomainError, ExpressionError, NumericalError, UsageError
from singmc.featureswitches import Features

logger = logging.getLogger(__name__)
logger.debug("importing...")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, default=None)
    common.add_argument("--feature", action="append", default=[], metavar="NAME",
                        help=f"toggle a feature switch ({', '.join(Features.names())})")

    parser = argparse.ArgumentParser(prog="singmc",
                                     description="Monte Carlo integration of weakly singular Volterra and ball "
                                                 "integrals")
    parser.add_argument("--version", action="version", version=f"%(prog)s {singmc.__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", metavar="COMMAND")
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers, [common])
    return parser


def _fail(code, message):
    sys.stderr.write(f"singmc: error: {message}\n")
    return code


def run(argv=None, out=None) -> int:
    """Parse argv, execute the sub-command, write its report to out (standard output) and return the exit code."""
    if out is None:
        out = sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else EXIT_USAGE

    if args.log_level:
        logging.getLogger().setLevel(args.log_level)
    toggled = []
    try:
        for name in args.feature:
            try:
                toggled.append(Features.toggle(name))
            except KeyError as ex:
                raise UsageError(ex.args[0])
        logger.debug("running %s", args.subcommand)
        args.command.execute(args, out)
    except (UsageError, ExpressionError) as ex:
        return _fail(EXIT_USAGE, ex)
    except DomainError as ex:
        return _fail(EXIT_DOMAIN, ex)
    except NumericalError as ex:
        return _fail(EXIT_NUMERICAL, ex)
    finally:
        # switches are process wide
        for name in toggled:
            Features.toggle(name)
    return EXIT_OK


def main(argv=None, configure_logging=True) -> int:
    if configure_logging:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr, force=True)
    return run(argv)


logger.debug("imported")
