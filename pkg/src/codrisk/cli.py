"""CLI for codrisk."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn

from .const import (
    COD_TOL,
    DEPENDENCE_GRID,
    DMEASURE_TOL,
    ENV_GRID,
    ENV_SEED,
    ENV_TOL,
    ENV_WORKERS,
    MC_DEFAULT_BATCHES,
    MC_DEFAULT_SAMPLES,
    MC_DEFAULT_SEED,
    ORDER_GRID,
    PSI_GRID,
)
from .copula import DependenceNotion, check_dependence, concordance_leq
from .exceptions import CodDomainError, CodError, CodNumericalError
from .figures import (
    ExperimentSpec,
    figure_ids,
    gnuplot_script,
    panel_defaults,
    run_figure,
)
from .models import OrderVerdict, RiskResult
from .oracle import mc_cod, mc_delta_cod
from .orders import StochasticOrder, check_order
from .riskcore import (
    classic_measures,
    cod,
    cod_at,
    delta_cod,
    delta_cod_at,
    delta_cod_type2,
    evaluate_distortion_measure,
    psi_convexity,
    threshold_quantile,
)
from .utils import (
    format_float,
    parse_overrides,
    parse_copula,
    parse_distortion,
    parse_marginal,
    parse_model,
)

logging.basicConfig(level=logging.INFO, format="%(message)s")
_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 4

# Panel parameters filled from --grid unless given with --set
FIGURE_GRID_PARAMETERS = ("order_grid", "psi_grid")

MARGINAL_HELP = (
    "normal:mu,sigma | gamma:shape,rate | weibull:scale,shape | exp:rate"
    " | uniform:lo,hi"
)
MODEL_HELP = (
    "Copula and marginals of X and Y, e.g. gumbel:2,normal:0,1,gamma:0.5,1"
    f" (copulas gumbel:theta | fgm:alpha | indep | comono; marginals {MARGINAL_HELP})"
)


class CodArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with exit code 4."""

    def error(self, message: str) -> NoReturn:
        """Print usage and exit with the usage error code."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_or_default(
    value: Any, env_name: str, default: Any, cast: Callable[[str], Any]
) -> Any:
    """Resolve a setting: explicit flag, then environment, then default."""
    if value is not None:
        return value
    raw = os.getenv(env_name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise CodDomainError(f"Invalid value '{raw}' in {env_name}") from None


def _tol(args: argparse.Namespace, default: float = COD_TOL) -> float:
    return _env_or_default(args.tol, ENV_TOL, default, float)


def _grid(args: argparse.Namespace, default: int) -> int:
    return _env_or_default(args.grid, ENV_GRID, default, int)


def _seed(args: argparse.Namespace) -> int:
    return _env_or_default(args.seed, ENV_SEED, MC_DEFAULT_SEED, int)


def _workers(args: argparse.Namespace) -> int:
    return _env_or_default(args.workers, ENV_WORKERS, 1, int)


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value)
    return str(value)


def render_csv(records: list[dict[str, Any]]) -> str:
    """Render flat records as CSV with a header row and round-trip floats."""
    if not records:
        return ""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = list(records[0])
    writer.writerow(header)
    for record in records:
        writer.writerow([_csv_cell(record.get(key)) for key in header])
    return buffer.getvalue()


def _emit(
    args: argparse.Namespace, document: dict[str, Any], records: list[dict[str, Any]]
) -> None:
    """Write the JSON document or the CSV records to --out or stdout."""
    if args.format == "json":
        text = json.dumps(document, indent=2, default=str) + "\n"
    else:
        text = render_csv(records)

    if args.out:
        Path(args.out).write_text(text)
        _LOGGER.info("Wrote %s", args.out)
    else:
        sys.stdout.write(text)


def _emit_result(args: argparse.Namespace, result: RiskResult) -> int:
    document = result.to_dict()
    record = {key: value for key, value in document.items() if key != "components"}
    record.update(result.components)
    _emit(args, document, [record])
    return EXIT_OK


def _emit_verdict(args: argparse.Namespace, verdict: OrderVerdict) -> int:
    document = verdict.to_dict()
    record = {key: value for key, value in document.items() if key != "first_violation"}
    violation = document["first_violation"] or {}
    record["violation_location"] = violation.get("location")
    _emit(args, document, [record])
    return EXIT_OK if verdict.holds else EXIT_CHECK_FAILED


def cmd_dmeasure(args: argparse.Namespace) -> int:
    """Handle dmeasure command: D_g[X] with the cross-check diagnostics."""
    result = evaluate_distortion_measure(
        parse_distortion(args.g), parse_marginal(args.x), _tol(args, DMEASURE_TOL)
    )
    return _emit_result(args, result)


def cmd_threshold(args: argparse.Namespace) -> int:
    """Handle threshold command: u_g = F(D_g[X])."""
    g, x = parse_distortion(args.g), parse_marginal(args.x)
    record = {"g": g.label, "x": x.label, "u_g": threshold_quantile(g, x)}
    _emit(args, record, [record])
    return EXIT_OK


def cmd_cod(args: argparse.Namespace) -> int:
    """Handle cod command.

    With --u the conditioning level is taken as given, otherwise it is the
    threshold quantile of --g.
    """
    model, h = parse_model(args.model), parse_distortion(args.h)
    if args.u is not None:
        result = cod_at(model, args.u, h, _tol(args))
    else:
        result = cod(model, parse_distortion(args.g), h, _tol(args))
    return _emit_result(args, result)


def cmd_delta(args: argparse.Namespace) -> int:
    """Handle delta command (Type I risk contribution)."""
    model, h = parse_model(args.model), parse_distortion(args.h)
    if args.u is not None:
        result = delta_cod_at(model, args.u, h, _tol(args))
    else:
        result = delta_cod(model, parse_distortion(args.g), h, _tol(args))
    return _emit_result(args, result)


def cmd_delta2(args: argparse.Namespace) -> int:
    """Handle delta2 command (Type II risk contribution)."""
    result = delta_cod_type2(
        parse_model(args.model),
        parse_distortion(args.g),
        parse_distortion(args.g_tilde),
        parse_distortion(args.h),
        _tol(args),
    )
    return _emit_result(args, result)


def cmd_classic(args: argparse.Namespace) -> int:
    """Handle classic command: CoVaR, CoES and MES."""
    measures = classic_measures(
        parse_model(args.model), args.alpha, args.beta, _tol(args)
    )
    records = [
        {"measure": result.measure, "value": result.value, "u_g": result.u_g}
        for result in (measures.covar, measures.coes, measures.mes)
    ]
    _emit(args, measures.to_dict(), records)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    """Handle figure command.

    Emits the data table of a panel. Failing checks are logged and turn the
    exit code into the check-failure code.
    """
    defaults = panel_defaults(args.figure_id)
    overrides = parse_overrides(args.set or [], defaults)
    grid = _env_or_default(args.grid, ENV_GRID, None, int)
    if grid is not None:
        for key in FIGURE_GRID_PARAMETERS:
            if key in defaults:
                overrides.setdefault(key, grid)
    spec = ExperimentSpec(args.figure_id, overrides, _workers(args), _tol(args))
    table = run_figure(spec)
    records = [
        {"series": row.series, "x": row.x, "value": row.value} for row in table.rows
    ]
    _emit(args, table.to_dict(), records)

    if args.gnuplot:
        data_path = args.out or f"figure_{table.figure_id}.csv"
        Path(args.gnuplot).write_text(gnuplot_script(table, data_path))
        _LOGGER.info("Wrote gnuplot script %s", args.gnuplot)

    for check in table.checks:
        status = "passed" if check.passed else "FAILED"
        _LOGGER.info("Check %s: %s (margin %s)", status, check.name, check.margin)
    return EXIT_OK if table.passed else EXIT_CHECK_FAILED


def cmd_check_order(args: argparse.Namespace) -> int:
    """Handle check-order command."""
    verdict = check_order(
        parse_marginal(args.x),
        parse_marginal(args.y),
        args.order,
        _grid(args, ORDER_GRID),
    )
    return _emit_verdict(args, verdict)


def cmd_check_dep(args: argparse.Namespace) -> int:
    """Handle check-dep command."""
    verdict = check_dependence(
        parse_copula(args.copula), args.notion, _grid(args, DEPENDENCE_GRID)
    )
    return _emit_verdict(args, verdict)


def cmd_concordance(args: argparse.Namespace) -> int:
    """Handle concordance command: c1 ≺ c2."""
    verdict = concordance_leq(
        parse_copula(args.c1), parse_copula(args.c2), _grid(args, DEPENDENCE_GRID)
    )
    return _emit_verdict(args, verdict)


def cmd_psi(args: argparse.Namespace) -> int:
    """Handle psi command: convexity of Ψ for a copula, level and distortion."""
    verdict = psi_convexity(
        parse_copula(args.copula),
        args.u,
        parse_distortion(args.h),
        _grid(args, PSI_GRID),
    )
    return _emit_verdict(args, verdict)


def cmd_oracle(args: argparse.Namespace) -> int:
    """Handle oracle command: Monte Carlo CoD or Type I contribution."""
    estimator = mc_delta_cod if args.delta else mc_cod
    estimate = estimator(
        parse_model(args.model),
        parse_distortion(args.g),
        parse_distortion(args.h),
        args.n,
        _seed(args),
        args.batches,
    )
    document = estimate.to_dict()
    document["acceptance_rate"] = estimate.acceptance_rate
    _emit(args, document, [document])
    return EXIT_OK


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def build_parser() -> CodArgumentParser:  # noqa: PLR0915
    """Build the argument parser with all subcommands."""
    # Parent parser for common arguments
    common_parser = CodArgumentParser(add_help=False)
    common_parser.add_argument("--out", help="Write output to this path")
    common_parser.add_argument(
        "--format", choices=["csv", "json"], default="json", help="Output format"
    )
    common_parser.add_argument(
        "--tol", type=float, help=f"Absolute tolerance (env {ENV_TOL})"
    )
    common_parser.add_argument(
        "--grid", type=int, help=f"Verifier grid size (env {ENV_GRID})"
    )
    common_parser.add_argument(
        "--seed", type=int, help=f"Monte Carlo root seed (env {ENV_SEED})"
    )
    common_parser.add_argument(
        "--workers", type=int, help=f"Worker processes for figures (env {ENV_WORKERS})"
    )
    common_parser.add_argument(
        "--verbose", action="store_true", help="Enable debug logging"
    )

    parser = CodArgumentParser(
        prog="codrisk", description="Conditional distortion risk measures"
    )
    subparsers = parser.add_subparsers(dest="command", parser_class=CodArgumentParser)

    # D_g[X]
    parser_dmeasure = subparsers.add_parser(
        "dmeasure", help="Distortion risk measure D_g[X]", parents=[common_parser]
    )
    parser_dmeasure.add_argument("--g", required=True, help="Distortion (e.g. es:0.9)")
    parser_dmeasure.add_argument(
        "--x", required=True, help=f"Marginal of X ({MARGINAL_HELP})"
    )

    # Threshold quantile
    parser_threshold = subparsers.add_parser(
        "threshold", help="Threshold quantile u_g = F(D_g[X])", parents=[common_parser]
    )
    parser_threshold.add_argument("--g", required=True, help="Distortion of X")
    parser_threshold.add_argument(
        "--x", required=True, help=f"Marginal of X ({MARGINAL_HELP})"
    )

    # CoD and Type I contribution share their arguments
    for name, help_text in (
        ("cod", "CoD risk measure of Y given X"),
        ("delta", "Type I risk contribution"),
    ):
        sub = subparsers.add_parser(name, help=help_text, parents=[common_parser])
        sub.add_argument(
            "--model",
            required=True,
            help=MODEL_HELP,
        )
        conditioning = sub.add_mutually_exclusive_group(required=True)
        conditioning.add_argument("--g", help="Distortion of X")
        conditioning.add_argument(
            "--u", type=_unit_interval, help="Threshold quantile given directly"
        )
        sub.add_argument("--h", required=True, help="Distortion of Y")

    # Type II contribution
    parser_delta2 = subparsers.add_parser(
        "delta2", help="Type II risk contribution", parents=[common_parser]
    )
    parser_delta2.add_argument("--model", required=True, help=MODEL_HELP)
    parser_delta2.add_argument("--g", required=True, help="Stressed distortion of X")
    parser_delta2.add_argument(
        "--g-tilde", default="var:0.5", help="Benchmark distortion (default median)"
    )
    parser_delta2.add_argument("--h", required=True, help="Distortion of Y")

    # Classic measures
    parser_classic = subparsers.add_parser(
        "classic", help="CoVaR, CoES and MES", parents=[common_parser]
    )
    parser_classic.add_argument("--model", required=True, help=MODEL_HELP)
    parser_classic.add_argument("--alpha", type=_unit_interval, required=True)
    parser_classic.add_argument("--beta", type=_unit_interval, required=True)

    # Figures
    parser_figure = subparsers.add_parser(
        "figure", help="Reproduce the data of a figure panel", parents=[common_parser]
    )
    parser_figure.add_argument("figure_id", choices=figure_ids(), help="Panel")
    parser_figure.add_argument(
        "--set",
        nargs="*",
        help="Parameter overrides (key=value, or one JSON object); --grid fills"
        " order_grid and psi_grid unless set here",
    )
    parser_figure.add_argument("--gnuplot", help="Also write a gnuplot script")

    # Verifiers
    parser_order = subparsers.add_parser(
        "check-order",
        help="Check X <= Y in a stochastic order",
        parents=[common_parser],
    )
    parser_order.add_argument(
        "--x", required=True, help=f"Candidate smaller law ({MARGINAL_HELP})"
    )
    parser_order.add_argument(
        "--y", required=True, help=f"Candidate larger law ({MARGINAL_HELP})"
    )
    parser_order.add_argument(
        "--order", required=True, choices=[order.value for order in StochasticOrder]
    )

    parser_dep = subparsers.add_parser(
        "check-dep", help="Check a dependence notion", parents=[common_parser]
    )
    parser_dep.add_argument("--copula", required=True, help="Copula (e.g. fgm:-0.8)")
    parser_dep.add_argument(
        "--notion",
        required=True,
        choices=[notion.value for notion in DependenceNotion],
    )

    parser_concordance = subparsers.add_parser(
        "concordance", help="Check C1 <= C2 pointwise", parents=[common_parser]
    )
    parser_concordance.add_argument("--c1", required=True, help="Less concordant")
    parser_concordance.add_argument("--c2", required=True, help="More concordant")

    parser_psi = subparsers.add_parser(
        "psi", help="Check convexity of the Ψ transform", parents=[common_parser]
    )
    parser_psi.add_argument("--copula", required=True, help="Copula")
    parser_psi.add_argument("--u", type=_unit_interval, required=True)
    parser_psi.add_argument("--h", required=True, help="Distortion of Y")

    # Monte Carlo
    parser_oracle = subparsers.add_parser(
        "oracle", help="Monte Carlo estimate by rejection", parents=[common_parser]
    )
    parser_oracle.add_argument("--model", required=True, help=MODEL_HELP)
    parser_oracle.add_argument("--g", required=True, help="Distortion of X")
    parser_oracle.add_argument("--h", required=True, help="Distortion of Y")
    parser_oracle.add_argument("--n", type=int, default=MC_DEFAULT_SAMPLES)
    parser_oracle.add_argument("--batches", type=int, default=MC_DEFAULT_BATCHES)
    parser_oracle.add_argument(
        "--delta", action="store_true", help="Estimate the Type I contribution"
    )

    return parser


HANDLERS: dict[str, Callable[[argparse.Namespace], int]] = {
    "dmeasure": cmd_dmeasure,
    "threshold": cmd_threshold,
    "cod": cmd_cod,
    "delta": cmd_delta,
    "delta2": cmd_delta2,
    "classic": cmd_classic,
    "figure": cmd_figure,
    "check-order": cmd_check_order,
    "check-dep": cmd_check_dep,
    "concordance": cmd_concordance,
    "psi": cmd_psi,
    "oracle": cmd_oracle,
}


def dispatch(args: argparse.Namespace) -> int:
    """Run the handler of a parsed command and map errors to exit codes."""
    handler = HANDLERS[args.command]
    try:
        return handler(args)
    except CodNumericalError as e:
        _LOGGER.error("Error in %s: %s", args.command, e)
        if e.details:
            _LOGGER.error("Details: %s", e.details)
        return EXIT_NUMERICAL
    except CodError as e:
        _LOGGER.error("Error in %s: %s", args.command, e)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    """Entry point for console_scripts."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
