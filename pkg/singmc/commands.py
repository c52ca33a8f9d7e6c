# -*- coding: utf-8 -*-
"""
The sub-commands of the command line.

Each command registers its own flags on an argparse sub-parser and executes against the parsed namespace,
writing its report to the given text stream.

"""
import abc
import argparse
import logging
from dataclasses import replace

from singmc import reports
from singmc.errors import UsageError
from singmc.estimate import compare_estimators, estimate_ball, estimate_direct, estimate_volterra
from singmc.factories import Factory
from singmc.oracle import SCHEMES, quad_ball_with_error, quad_volterra_with_error
from singmc.parametric import estimate_parametric, estimate_rho
from singmc.sampling import METHODS, sample_ball_beta, sample_polygonal_beta, sample_uniform_simplex
from singmc.settings import Settings
from singmc.specfun import ball_constant, simplex_constant, w_n

__all__ = ["Command", "COMMANDS"]

logger = logging.getLogger(__name__)
logger.debug("importing...")

FORMATS = ("json", "csv")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


class Command(metaclass=abc.ABCMeta):
    name = None
    help = None

    def register(self, subparsers, parents=()):
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help, parents=list(parents))
        self.add_arguments(parser)
        parser.set_defaults(command=self)
        return parser

    @abc.abstractmethod
    def add_arguments(self, parser):
        pass

    @abc.abstractmethod
    def execute(self, args, out):
        raise NotImplementedError

    # shared flag groups

    @staticmethod
    def _add_alpha(parser, required=True):
        parser.add_argument("--alpha", required=required, help="comma separated exponents alpha_k < 1")

    @staticmethod
    def _add_ball_exponents(parser, required=True):
        parser.add_argument("--A", dest="A", required=required, help="comma separated exponents A_k > -1")

    @staticmethod
    def _add_run(parser):
        parser.add_argument("--integrand", required=True, help="expression in s1..s9 (and t1..t9 for param)")
        parser.add_argument("--samples", type=int, required=True, help="sample count N >= 2")
        parser.add_argument("--confidence", type=float, default=Settings.default_confidence)
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--workers", type=_positive_int, default=Settings.default_workers)
        parser.add_argument("--format", choices=FORMATS, default="json")
        parser.add_argument("--skip-nonfinite", action="store_true",
                            help="skip and count points where the integrand is not finite (biases the estimate)")

    @staticmethod
    def _add_method(parser):
        parser.add_argument("--method", choices=METHODS, default=METHODS[0])


class SimplexCommand(Command):
    name = "simplex"
    help = "importance sampled integral of z R_alpha over the ordered simplex"

    def add_arguments(self, parser):
        self._add_alpha(parser)
        self._add_run(parser)
        self._add_method(parser)

    def execute(self, args, out):
        alpha = Factory.create_alpha(args.alpha)
        z = Factory.create_integrand(args.integrand, alpha.n)
        report = estimate_volterra(z, alpha, args.samples, args.confidence, Factory.create_rng(args.seed),
                                   n_workers=args.workers, method=args.method, skip_nonfinite=args.skip_nonfinite,
                                   dispatcher=Factory.create_dispatcher())
        reports.write_report(out, report, args.format)


class BallCommand(Command):
    name = "ball"
    help = "importance sampled integral of z |x|^A over the unit ball"

    def add_arguments(self, parser):
        self._add_ball_exponents(parser)
        self._add_run(parser)

    def execute(self, args, out):
        A = Factory.create_ball_exponents(args.A)
        z = Factory.create_integrand(args.integrand, A.n)
        report = estimate_ball(z, A, args.samples, args.confidence, Factory.create_rng(args.seed),
                               n_workers=args.workers, skip_nonfinite=args.skip_nonfinite,
                               dispatcher=Factory.create_dispatcher())
        reports.write_report(out, report, args.format)


class DirectCommand(Command):
    name = "direct"
    help = "uniform sampling with the kernel in the integrand (comparison only)"

    def add_arguments(self, parser):
        self._add_alpha(parser)
        self._add_run(parser)

    def execute(self, args, out):
        alpha = Factory.create_alpha(args.alpha)
        z = Factory.create_integrand(args.integrand, alpha.n)
        report = estimate_direct(z, alpha, args.samples, Factory.create_rng(args.seed), args.confidence,
                                 n_workers=args.workers, skip_nonfinite=args.skip_nonfinite,
                                 dispatcher=Factory.create_dispatcher())
        reports.write_report(out, report, args.format)


class CompareCommand(Command):
    name = "compare"
    help = "importance versus direct estimator on one integrand"

    def add_arguments(self, parser):
        self._add_alpha(parser)
        self._add_run(parser)
        self._add_method(parser)

    def execute(self, args, out):
        if args.skip_nonfinite:
            raise UsageError("compare does not support --skip-nonfinite")
        alpha = Factory.create_alpha(args.alpha)
        z = Factory.create_integrand(args.integrand, alpha.n)
        result = compare_estimators(z, alpha, args.samples, args.confidence, Factory.create_rng(args.seed),
                                    n_workers=args.workers, method=args.method,
                                    dispatcher=Factory.create_dispatcher())
        if args.format == "csv":
            header = ["estimator"] + list(result.importance.to_dict().keys())
            rows = [["importance"] + list(result.importance.to_dict().values()),
                    ["direct"] + list(result.direct.to_dict().values())]
            reports.write_csv(out, header, rows)
        else:
            reports.write_json(out, result.to_dict())


class ParamCommand(Command):
    name = "param"
    help = "dependent-trial curve Q(theta) on a grid with a uniform confidence band"

    def add_arguments(self, parser):
        self._add_alpha(parser)
        self._add_run(parser)
        self._add_method(parser)
        parser.add_argument("--grid", action="append", required=True, metavar="START:STOP:COUNT",
                            help="one per parameter dimension, the first varies slowest")
        parser.add_argument("--gaussian-draws", type=int, default=Settings.default_gaussian_draws)
        parser.add_argument("--covariance", action="store_true", default=Settings.include_covariance,
                            help="include the covariance matrix in the JSON report")
        parser.add_argument("--rho-probes", type=int, default=0,
                            help="polygonal beta probe points for the rho diagnostic (0: off)")

    def execute(self, args, out):
        alpha = Factory.create_alpha(args.alpha)
        grid = Factory.create_grid(args.grid)
        zfam = Factory.create_parametric_integrand(args.integrand, alpha.n, grid.dim)
        if args.rho_probes < 0:
            raise UsageError(f"--rho-probes must be >= 0, got {args.rho_probes}")
        rng = Factory.create_rng(args.seed)
        dispatcher = Factory.create_dispatcher()
        report = estimate_parametric(zfam, alpha, grid, args.samples, args.confidence, args.gaussian_draws, rng,
                                     n_workers=args.workers, method=args.method, skip_nonfinite=args.skip_nonfinite,
                                     dispatcher=dispatcher)
        if args.rho_probes:
            probe = sample_polygonal_beta(alpha, Factory.create_rng(args.seed).substream(Settings.rho_stream_key),
                                          args.method, size=args.rho_probes)
            report = replace(report, rho=estimate_rho(zfam, grid, probe, dispatcher))
        reports.write_band(out, report, args.format, args.covariance)


class SampleCommand(Command):
    name = "sample"
    help = "raw samples of the polygonal beta, ball beta or uniform simplex law"

    def add_arguments(self, parser):
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--alpha", help="polygonal beta exponents")
        group.add_argument("--A", dest="A", help="ball beta exponents")
        group.add_argument("--uniform", type=_positive_int, metavar="N", help="uniform simplex of dimension N")
        parser.add_argument("--count", type=_positive_int, required=True)
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--format", choices=FORMATS, default="csv")
        self._add_method(parser)

    def execute(self, args, out):
        rng = Factory.create_rng(args.seed)
        dispatcher = Factory.create_dispatcher()
        if args.alpha is not None:
            points = sample_polygonal_beta(Factory.create_alpha(args.alpha), rng, args.method, size=args.count,
                                           dispatcher=dispatcher)
            prefix = "s"
        elif args.A is not None:
            points = sample_ball_beta(Factory.create_ball_exponents(args.A), rng, size=args.count,
                                      dispatcher=dispatcher)
            prefix = "x"
        else:
            points = sample_uniform_simplex(args.uniform, rng, size=args.count, dispatcher=dispatcher)
            prefix = "s"
        reports.write_samples(out, points, prefix, args.format)


class ConstantsCommand(Command):
    name = "constants"
    help = "normalisation constants K_S(alpha), W_n(beta) and K_B(A)"

    def add_arguments(self, parser):
        self._add_alpha(parser, required=False)
        self._add_ball_exponents(parser, required=False)
        parser.add_argument("--format", choices=FORMATS, default="json")

    def execute(self, args, out):
        if args.alpha is None and args.A is None:
            raise UsageError("constants needs --alpha, --A or both")
        data = {"simplex_constant": None, "w_n": None, "ball_constant": None}
        if args.alpha is not None:
            alpha = Factory.create_alpha(args.alpha)
            data["simplex_constant"] = simplex_constant(alpha)
            first = alpha.alpha[0]
            if all(a == first for a in alpha.alpha) and first >= 0.0:
                data["w_n"] = w_n(1.0 - first, alpha.n)
        if args.A is not None:
            data["ball_constant"] = ball_constant(Factory.create_ball_exponents(args.A))
        if args.format == "csv":
            reports.write_csv(out, list(data.keys()), [list(data.values())])
        else:
            reports.write_json(out, data)


class OracleCommand(Command):
    name = "oracle"
    help = "deterministic quadrature value (simplex n <= 3, ball n <= 2)"

    def add_arguments(self, parser):
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--alpha", help="simplex exponents")
        group.add_argument("--A", dest="A", help="ball exponents")
        parser.add_argument("--integrand", required=True)
        parser.add_argument("--nodes", type=int, default=Settings.default_oracle_nodes, help="nodes per axis m")
        parser.add_argument("--scheme", choices=SCHEMES, default=Settings.default_quad_scheme)
        parser.add_argument("--format", choices=FORMATS, default="json")

    def execute(self, args, out):
        spec = Factory.create_quad_spec(args.nodes, args.scheme)
        if args.alpha is not None:
            alpha = Factory.create_alpha(args.alpha)
            value, error = quad_volterra_with_error(Factory.create_integrand(args.integrand, alpha.n), alpha, spec)
        else:
            A = Factory.create_ball_exponents(args.A)
            value, error = quad_ball_with_error(Factory.create_integrand(args.integrand, A.n), A, spec)
        data = {"value": value, "error_estimate": error, "nodes_per_axis": spec.nodes_per_axis,
                "scheme": spec.scheme}
        if args.format == "csv":
            reports.write_csv(out, list(data.keys()), [list(data.values())])
        else:
            reports.write_json(out, data)


COMMANDS = (SimplexCommand(), BallCommand(), DirectCommand(), CompareCommand(), ParamCommand(), SampleCommand(),
            ConstantsCommand(), OracleCommand())

logger.debug("imported")
