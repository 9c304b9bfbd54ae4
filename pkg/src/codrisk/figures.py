"""Reproduction of the numerical experiments as data tables with checks.

Each panel is registered with its default parameters. A panel builds the
point tasks of its series, evaluates them (optionally in a process pool)
and attaches the qualitative claims of the experiment as FigureChecks.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .const import (
    COD_TOL,
    DEPENDENCE_GRID,
    FIGURE_CHECK_TOL,
    FIGURE_POINTS,
    ORDER_GRID,
    PSI_GRID,
)
from .copula import FGM, Copula, DependenceNotion, Gumbel, check_dependence
from .distortion import Distortion, DistortionKind, build_distortion
from .exceptions import CodDomainError
from .marginal import Gamma, Marginal, Normal, Weibull
from .models import FigureCheck, FigureRow, FigureTable, OrderVerdict
from .orders import StochasticOrder, check_order
from .riskcore import (
    BivariateModel,
    cod_at,
    delta_cod_at,
    delta_cod_type2_at,
    psi_convexity,
    psi_curve,
    threshold_quantile,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointTask:
    """One measure evaluation behind a figure point.

    Attributes:
        series: Series the point belongs to.
        x: Abscissa.
        measure: 'cod', 'delta' or 'delta2'.
        model: The risk pair.
        u_g: Conditioning level.
        h: Distortion of the measured risk.
        u_g_tilde: Benchmark level for 'delta2'.
        tol: Absolute quadrature tolerance.
    """

    series: str
    x: float
    measure: str
    model: BivariateModel
    u_g: float
    h: Distortion
    u_g_tilde: float = math.nan
    tol: float = COD_TOL


def evaluate_point(task: PointTask) -> FigureRow:
    """Evaluate one task; a module-level function so that it pickles."""
    match task.measure:
        case "cod":
            result = cod_at(task.model, task.u_g, task.h, task.tol)
        case "delta":
            result = delta_cod_at(task.model, task.u_g, task.h, task.tol)
        case "delta2":
            result = delta_cod_type2_at(
                task.model, task.u_g, task.u_g_tilde, task.h, task.tol
            )
        case _:
            raise CodDomainError(f"Unknown figure measure '{task.measure}'")
    return FigureRow(series=task.series, x=task.x, value=result.value)


Evaluator = Callable[[list[PointTask]], list[FigureRow]]
PanelBuilder = Callable[
    [dict[str, Any], Evaluator], tuple[list[FigureRow], list[FigureCheck]]
]


@dataclass(frozen=True)
class Panel:
    """Registered figure panel."""

    title: str
    x_label: str
    defaults: dict[str, Any]
    build: PanelBuilder


@dataclass(frozen=True)
class ExperimentSpec:
    """Figure to reproduce with explicit parameter overrides.

    Attributes:
        figure_id: Panel identifier (e.g. '1a').
        overrides: Parameters replacing the registered defaults.
        workers: Number of worker processes (1 evaluates in-process).
        tol: Absolute quadrature tolerance of every point.
    """

    figure_id: str
    overrides: dict[str, Any] = field(default_factory=dict)
    workers: int = 1
    tol: float = COD_TOL


_PANELS: dict[str, Panel] = {}


def _panel(
    figure_id: str, title: str, x_label: str, **defaults: Any
) -> Callable[[PanelBuilder], PanelBuilder]:
    def register(build: PanelBuilder) -> PanelBuilder:
        _PANELS[figure_id] = Panel(
            title, x_label, {"points": FIGURE_POINTS, **defaults}, build
        )
        return build

    return register


def figure_ids() -> list[str]:
    """Registered panel identifiers in registration order."""
    return list(_PANELS)


def panel_defaults(figure_id: str) -> dict[str, Any]:
    """Default parameters of a panel."""
    return dict(_get_panel(figure_id).defaults)


def _get_panel(figure_id: str) -> Panel:
    try:
        return _PANELS[figure_id]
    except KeyError:
        raise CodDomainError(
            f"Unknown figure '{figure_id}'", {"known": figure_ids()}
        ) from None


def _evaluator(workers: int, tol: float) -> Evaluator:
    def evaluate(tasks: list[PointTask]) -> list[FigureRow]:
        tasks = [replace(task, tol=tol) for task in tasks]
        if workers > 1 and len(tasks) > 1:
            chunksize = max(1, len(tasks) // (4 * workers))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(evaluate_point, tasks, chunksize=chunksize))
        return [evaluate_point(task) for task in tasks]

    return evaluate


def run_figure(spec: ExperimentSpec) -> FigureTable:
    """Compute the data table of one panel together with its checks.

    Args:
        spec: Panel identifier, overrides and worker count.

    Returns:
        FigureTable with rows sorted by (series, x).

    Raises:
        CodDomainError: Unknown figure or unknown override key.
    """
    panel = _get_panel(spec.figure_id)
    unknown = sorted(set(spec.overrides) - set(panel.defaults))
    if unknown:
        raise CodDomainError(
            f"Unknown parameter(s) for figure {spec.figure_id}: {', '.join(unknown)}",
            {"allowed": sorted(panel.defaults)},
        )
    params = {**panel.defaults, **spec.overrides}
    if int(params["points"]) < 2:
        raise CodDomainError(f"points must be >= 2, got {params['points']}")

    _LOGGER.debug("Running figure %s with %s", spec.figure_id, params)
    rows, checks = panel.build(params, _evaluator(spec.workers, spec.tol))
    for check in checks:
        if not check.passed:
            _LOGGER.debug("Check failed: %s (margin %g)", check.name, check.margin)

    return FigureTable(
        figure_id=spec.figure_id,
        title=panel.title,
        x_label=panel.x_label,
        rows=sorted(rows, key=lambda row: (row.series, row.x)),
        checks=checks,
        parameters=params,
    )


def gnuplot_script(table: FigureTable, data_path: str) -> str:
    """Gnuplot commands plotting every series of a CSV written by the CLI.

    Args:
        table: The computed figure.
        data_path: Path of the CSV file with columns series,x,value.

    Returns:
        Script text.
    """
    plots = [
        f"'{data_path}' every ::1 using 2:(strcol(1) eq \"{name}\" ? $3 : 1/0) "
        f'with lines title "{name}"'
        for name in table.series_names
    ]
    return "\n".join(
        [
            'set datafile separator ","',
            f'set title "Figure {table.figure_id}: {table.title}"',
            f'set xlabel "{table.x_label}"',
            "set key outside",
            "plot " + ", \\\n     ".join(plots),
            "",
        ]
    )


# Check helpers


def _values(rows: list[FigureRow], series: str) -> np.ndarray:
    points = sorted((row.x, row.value) for row in rows if row.series == series)
    return np.array([value for _, value in points])


def _check(name: str, margin: float) -> FigureCheck:
    return FigureCheck(name=name, passed=margin >= -FIGURE_CHECK_TOL, margin=margin)


def _monotone(rows: list[FigureRow], series: str, increasing: bool) -> FigureCheck:
    steps = np.diff(_values(rows, series))
    steps = steps if increasing else -steps
    direction = "increasing" if increasing else "decreasing"
    margin = float(steps.min()) if steps.size else 0.0
    return _check(f"{series} {direction}", margin)


def _ordered(rows: list[FigureRow], lower: str, upper: str) -> FigureCheck:
    gap = _values(rows, upper) - _values(rows, lower)
    return _check(f"{lower} <= {upper}", float(gap.min()))


def _chain(rows: list[FigureRow], names: list[str]) -> FigureCheck:
    margins = [_ordered(rows, lo, hi).margin for lo, hi in zip(names, names[1:])]
    return _check(" <= ".join(names), min(margins))


def _nonpositive(rows: list[FigureRow], series: str) -> FigureCheck:
    return _check(f"{series} <= 0", float(-_values(rows, series).max()))


def _verdict(name: str, verdict: OrderVerdict, expected: bool = True) -> FigureCheck:
    if expected:
        return FigureCheck(name=name, passed=verdict.holds, margin=verdict.margin)
    return FigureCheck(name=name, passed=not verdict.holds, margin=-verdict.margin)


def _close(name: str, value: float, target: float, tolerance: float) -> FigureCheck:
    return FigureCheck(
        name=f"{name} = {target:g} ± {tolerance:g} (got {value:.6f})",
        passed=abs(value - target) <= tolerance,
        margin=tolerance - abs(value - target),
    )


def _flag(name: str, flag: bool) -> FigureCheck:
    return FigureCheck(name=name, passed=flag, margin=0.0 if flag else -1.0)


def _grid(params: dict[str, Any]) -> np.ndarray:
    return np.linspace(float(params["lo"]), float(params["hi"]), int(params["points"]))


def _power(gamma: float) -> Distortion:
    return build_distortion(DistortionKind.POWER, (gamma,))


def _dual_power(k: float) -> Distortion:
    return build_distortion(DistortionKind.DUAL_POWER, (k,))


def _model(copula: Copula, y: Marginal, x: Marginal | None = None) -> BivariateModel:
    return BivariateModel(copula, x or y, y)


# Gumbel copula: CoD risk measures


@_panel(
    "1a",
    "CoD vs gamma for several theta",
    "gamma",
    lo=0.1,
    hi=4.0,
    thetas=[1.0, 1.5, 2.0, 2.5, 4.0],
    u=0.95,
)
def _figure_1a(params: dict[str, Any], evaluate: Evaluator):
    y = Normal(0.0, 1.0)
    names = [f"theta={theta:g}" for theta in params["thetas"]]
    tasks = [
        PointTask(
            name, float(x), "cod", _model(Gumbel(theta), y), params["u"], _power(x)
        )
        for name, theta in zip(names, params["thetas"], strict=True)
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [_monotone(rows, name, increasing=False) for name in names]
    checks.append(_chain(rows, names))
    return rows, checks


@_panel(
    "1b",
    "CoD vs u_g for several theta",
    "u_g",
    lo=0.7,
    hi=0.99,
    thetas=[1.5, 2.0, 2.5, 3.0, 4.0],
    gamma=0.5,
)
def _figure_1b(params: dict[str, Any], evaluate: Evaluator):
    y = Normal(0.0, 1.0)
    h = _power(params["gamma"])
    names = [f"theta={theta:g}" for theta in params["thetas"]]
    tasks = [
        PointTask(name, float(x), "cod", _model(Gumbel(theta), y), float(x), h)
        for name, theta in zip(names, params["thetas"], strict=True)
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [_monotone(rows, name, increasing=True) for name in names]
    checks.append(_chain(rows, names))
    return rows, checks


@_panel(
    "1c",
    "CoD vs gamma for (Y, Y') and (X, X')",
    "gamma",
    lo=0.05,
    hi=1.0,
    theta=2.0,
    theta_prime=4.0,
    u=0.8,
    u_prime=0.99,
    order_grid=ORDER_GRID,
)
def _figure_1c(params: dict[str, Any], evaluate: Evaluator):
    y = Normal(0.0, 1.0)
    y_prime = Normal(0.0, math.sqrt(2.0))
    settings = {
        "Y|X": (params["theta"], params["u"], y),
        "Y|X'": (params["theta_prime"], params["u_prime"], y),
        "Y'|X": (params["theta"], params["u"], y_prime),
        "Y'|X'": (params["theta_prime"], params["u_prime"], y_prime),
    }
    tasks = [
        PointTask(name, float(x), "cod", _model(Gumbel(theta), law), u, _power(x))
        for name, (theta, u, law) in settings.items()
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    grid = int(params["order_grid"])
    checks = [_monotone(rows, name, increasing=False) for name in settings]
    checks += [
        _chain(rows, ["Y|X", "Y|X'", "Y'|X'"]),
        _chain(rows, ["Y|X", "Y'|X", "Y'|X'"]),
        _verdict("Y <=_icx Y'", check_order(y, y_prime, StochasticOrder.ICX, grid)),
        _verdict(
            "Y not <=_st Y'",
            check_order(y, y_prime, StochasticOrder.ST, grid),
            expected=False,
        ),
    ]
    return rows, checks


# Gumbel copula: risk contributions


@_panel(
    "2a",
    "Delta CoD vs theta for Y and Y'",
    "theta",
    lo=1.0,
    hi=6.0,
    shape=0.3,
    shape_prime=2.0,
    u=0.8,
    gamma=0.4,
    order_grid=ORDER_GRID,
)
def _figure_2a(params: dict[str, Any], evaluate: Evaluator):
    y, y_prime = Gamma(params["shape"], 1.0), Gamma(params["shape_prime"], 1.0)
    h = _power(params["gamma"])
    tasks = [
        PointTask(name, float(x), "delta", _model(Gumbel(x), law), params["u"], h)
        for name, law in (("Y", y), ("Y'", y_prime))
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [
        _monotone(rows, "Y", increasing=True),
        _monotone(rows, "Y'", increasing=True),
        _ordered(rows, "Y", "Y'"),
        _verdict(
            "Y <=_disp Y'",
            check_order(y, y_prime, StochasticOrder.DISP, int(params["order_grid"])),
        ),
    ]
    return rows, checks


@_panel(
    "2b",
    "Delta CoD vs gamma for a DFR Y",
    "gamma",
    lo=0.1,
    hi=4.0,
    shape=0.2,
    theta=2.0,
    u=0.9,
)
def _figure_2b(params: dict[str, Any], evaluate: Evaluator):
    y = Gamma(params["shape"], 1.0)
    model = _model(Gumbel(params["theta"]), y)
    tasks = [
        PointTask("Y", float(x), "delta", model, params["u"], _power(x))
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    return rows, [_monotone(rows, "Y", increasing=False), _flag("Y is DFR", y.is_dfr)]


@_panel(
    "2c",
    "Delta CoD vs u_g for (Y, h, theta) and (Y', h', theta')",
    "u_g",
    lo=0.6,
    hi=0.99,
    shape=0.2,
    shape_prime=2.0,
    gamma=3.0,
    gamma_prime=2.0,
    theta=2.0,
    theta_prime=3.0,
    order_grid=ORDER_GRID,
)
def _figure_2c(params: dict[str, Any], evaluate: Evaluator):
    y, y_prime = Gamma(params["shape"], 1.0), Gamma(params["shape_prime"], 1.0)
    settings = {
        "Y": (_model(Gumbel(params["theta"]), y), _power(params["gamma"])),
        "Y'": (
            _model(Gumbel(params["theta_prime"]), y_prime),
            _power(params["gamma_prime"]),
        ),
    }
    tasks = [
        PointTask(name, float(x), "delta", model, float(x), h)
        for name, (model, h) in settings.items()
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [
        _monotone(rows, "Y", increasing=True),
        _monotone(rows, "Y'", increasing=True),
        _ordered(rows, "Y", "Y'"),
        _verdict(
            "Y <=_disp Y'",
            check_order(y, y_prime, StochasticOrder.DISP, int(params["order_grid"])),
        ),
    ]
    return rows, checks


@_panel(
    "2d",
    "Type II Delta CoD of Y minus that of Y' vs a2",
    "a2",
    lo=0.3,
    hi=5.0,
    shape=0.3,
    u=0.9,
    u_tilde=0.8,
    theta=2.0,
    gamma=2.0,
)
def _figure_2d(params: dict[str, Any], evaluate: Evaluator):
    copula = Gumbel(params["theta"])
    h = _power(params["gamma"])
    u, u_tilde = params["u"], params["u_tilde"]
    tasks = [
        PointTask(
            "Y'", float(x), "delta2", _model(copula, Gamma(x, 1.0)), u, h, u_tilde
        )
        for x in _grid(params)
    ]
    base_task = PointTask(
        "Y",
        params["shape"],
        "delta2",
        _model(copula, Gamma(params["shape"], 1.0)),
        u,
        h,
        u_tilde,
    )
    *results, base = evaluate([*tasks, base_task])
    rows = [
        FigureRow("difference", row.x, base.value - row.value) for row in results
    ]
    checks = [
        _nonpositive(rows, "difference"),
        _flag("a2 >= a1", float(params["lo"]) >= params["shape"]),
        _flag(
            "C is PDS",
            check_dependence(copula, DependenceNotion.PDS, DEPENDENCE_GRID).holds,
        ),
    ]
    return rows, checks


# Gumbel copula: excess wealth condition


def _psi_panel(
    params: dict[str, Any], settings: dict[str, tuple[Copula, Distortion]]
) -> tuple[list[FigureRow], list[FigureCheck]]:
    t = _grid(params)
    rows = [
        FigureRow(name, float(x), float(value))
        for name, (copula, h) in settings.items()
        for x, value in zip(t, psi_curve(copula, params["u"], h, t), strict=True)
    ]
    checks = [
        _verdict(
            f"Ψ convex for {name}",
            psi_convexity(copula, params["u"], h, int(params["psi_grid"])),
        )
        for name, (copula, h) in settings.items()
    ]
    return rows, checks


@_panel(
    "3a",
    "Psi(t) for several theta",
    "t",
    lo=0.0,
    hi=1.0,
    thetas=[1.2, 1.8, 2.5, 3.0, 5.0],
    gamma=1.1,
    u=0.9,
    psi_grid=PSI_GRID,
)
def _figure_3a(params: dict[str, Any], evaluate: Evaluator):
    h = _dual_power(params["gamma"])
    return _psi_panel(
        params, {f"theta={theta:g}": (Gumbel(theta), h) for theta in params["thetas"]}
    )


@_panel(
    "3b",
    "Psi(t) for several gamma",
    "t",
    lo=0.0,
    hi=1.0,
    gammas=[1.2, 2.0, 3.0, 4.0, 5.0],
    theta=1.5,
    u=0.9,
    psi_grid=PSI_GRID,
)
def _figure_3b(params: dict[str, Any], evaluate: Evaluator):
    copula = Gumbel(params["theta"])
    return _psi_panel(
        params,
        {
            f"gamma={gamma:g}": (copula, _dual_power(gamma))
            for gamma in params["gammas"]
        },
    )


@_panel(
    "4",
    "Delta CoD vs u_g for Weibull Y and Y'",
    "u_g",
    lo=0.6,
    hi=0.99,
    theta=1.5,
    k=2.0,
    order_grid=ORDER_GRID,
)
def _figure_4(params: dict[str, Any], evaluate: Evaluator):
    y, y_prime = Weibull(1.0, 2.0), Weibull(1.0, 1.0)
    copula = Gumbel(params["theta"])
    h = _dual_power(params["k"])
    tasks = [
        PointTask(name, float(x), "delta", _model(copula, law), float(x), h)
        for name, law in (("Y", y), ("Y'", y_prime))
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    grid = int(params["order_grid"])
    checks = [
        _ordered(rows, "Y", "Y'"),
        _verdict("Y <=_ew Y'", check_order(y, y_prime, StochasticOrder.EW, grid)),
        _verdict(
            "Y not <=_disp Y'",
            check_order(y, y_prime, StochasticOrder.DISP, grid),
            expected=False,
        ),
        _verdict(
            "Y' not <=_disp Y",
            check_order(y_prime, y, StochasticOrder.DISP, grid),
            expected=False,
        ),
    ]
    return rows, checks


# Paired risks


def _paired_rows(
    params: dict[str, Any],
    evaluate: Evaluator,
    model: BivariateModel,
    measure: str,
) -> tuple[list[FigureRow], float, float]:
    """Rows of Y given X and of X given Y, each at its own threshold quantile."""
    g = _power(params["g_gamma"])
    swapped = model.swap()
    u_x = threshold_quantile(g, model.marginal_x)
    u_y = threshold_quantile(g, model.marginal_y)
    tasks = [
        PointTask(name, float(x), measure, pair, u, _power(x))
        for name, pair, u in (("Y|X", model, u_x), ("X|Y", swapped, u_y))
        for x in _grid(params)
    ]
    return evaluate(tasks), u_x, u_y


def _gumbel_pair(params: dict[str, Any]) -> BivariateModel:
    return BivariateModel(
        Gumbel(params["theta"]),
        Gamma(params["shape_x"], 1.0),
        Gamma(params["shape_y"], 1.0),
    )


_GUMBEL_PAIR = {
    "lo": 0.1,
    "hi": 4.0,
    "theta": 2.0,
    "g_gamma": 0.3,
    "shape_x": 0.5,
    "shape_y": 1.5,
    "order_grid": ORDER_GRID,
}


def _gumbel_pair_checks(
    params: dict[str, Any], model: BivariateModel, u_x: float, u_y: float
) -> list[FigureCheck]:
    grid = int(params["order_grid"])
    x, y = model.marginal_x, model.marginal_y
    return [
        _close("u_g^X", u_x, 0.9714, 2e-3),
        _close("u_g^Y", u_y, 0.9599, 2e-3),
        _verdict("X <=_st Y", check_order(x, y, StochasticOrder.ST, grid)),
        _verdict("X <=_disp Y", check_order(x, y, StochasticOrder.DISP, grid)),
    ]


@_panel("5a", "CoD of Y given X and of X given Y", "gamma2", **_GUMBEL_PAIR)
def _figure_5a(params: dict[str, Any], evaluate: Evaluator):
    model = _gumbel_pair(params)
    rows, u_x, u_y = _paired_rows(params, evaluate, model, "cod")
    return rows, [
        _ordered(rows, "X|Y", "Y|X"),
        *_gumbel_pair_checks(params, model, u_x, u_y),
    ]


@_panel("5b", "Delta CoD of Y given X and of X given Y", "gamma2", **_GUMBEL_PAIR)
def _figure_5b(params: dict[str, Any], evaluate: Evaluator):
    model = _gumbel_pair(params)
    rows, u_x, u_y = _paired_rows(params, evaluate, model, "delta")
    return rows, [
        _ordered(rows, "X|Y", "Y|X"),
        *_gumbel_pair_checks(params, model, u_x, u_y),
    ]


# FGM copula


@_panel(
    "6a",
    "CoD vs u_g for several alpha",
    "u_g",
    lo=0.0,
    hi=0.99,
    alphas=[-0.9, -0.7, -0.5, -0.3, -0.1],
    shape=0.8,
    rate=0.5,
    gamma=5.0,
)
def _figure_6a(params: dict[str, Any], evaluate: Evaluator):
    y = Gamma(params["shape"], params["rate"])
    h = _power(params["gamma"])
    alphas = sorted(params["alphas"])
    names = [f"alpha={alpha:g}" for alpha in alphas]
    tasks = [
        PointTask(name, float(x), "cod", _model(FGM(alpha), y), float(x), h)
        for name, alpha in zip(names, alphas, strict=True)
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [_monotone(rows, name, increasing=False) for name in names]
    checks.append(_chain(rows, names))
    checks += [
        _verdict(
            f"alpha={alpha:g} is RR2",
            check_dependence(FGM(alpha), DependenceNotion.RR2, DEPENDENCE_GRID),
        )
        for alpha in alphas
        if alpha < 0
    ]
    return rows, checks


@_panel(
    "6b",
    "Delta CoD vs gamma >= 1 for Y and Y'",
    "gamma",
    lo=1.0,
    hi=5.0,
    shape=0.8,
    shape_prime=1.8,
    rate=0.5,
    alpha=-0.9,
    alpha_prime=-0.3,
    u=0.95,
    order_grid=ORDER_GRID,
)
def _figure_6b(params: dict[str, Any], evaluate: Evaluator):
    y = Gamma(params["shape"], params["rate"])
    y_prime = Gamma(params["shape_prime"], params["rate"])
    settings = {
        "Y": _model(FGM(params["alpha"]), y),
        "Y'": _model(FGM(params["alpha_prime"]), y_prime),
    }
    tasks = [
        PointTask(name, float(x), "delta", model, params["u"], _power(x))
        for name, model in settings.items()
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [
        _ordered(rows, "Y", "Y'"),
        _verdict(
            "Y <=_icv Y'",
            check_order(y, y_prime, StochasticOrder.ICV, int(params["order_grid"])),
        ),
    ]
    return rows, checks


@_panel(
    "6c",
    "Delta CoD vs gamma for (Y, alpha, u_g) and (Y', alpha', u_g')",
    "gamma",
    lo=0.1,
    hi=5.0,
    shape=0.6,
    shape_prime=1.2,
    alpha=-0.3,
    alpha_prime=-0.9,
    u=0.95,
    u_prime=0.9,
    order_grid=ORDER_GRID,
)
def _figure_6c(params: dict[str, Any], evaluate: Evaluator):
    y, y_prime = Gamma(params["shape"], 1.0), Gamma(params["shape_prime"], 1.0)
    settings = {
        "Y": (_model(FGM(params["alpha"]), y), params["u"]),
        "Y'": (_model(FGM(params["alpha_prime"]), y_prime), params["u_prime"]),
    }
    tasks = [
        PointTask(name, float(x), "delta", model, u, _power(x))
        for name, (model, u) in settings.items()
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    checks = [
        _ordered(rows, "Y'", "Y"),
        _verdict(
            "Y <=_disp Y'",
            check_order(y, y_prime, StochasticOrder.DISP, int(params["order_grid"])),
        ),
    ]
    return rows, checks


@_panel(
    "6d",
    "Delta CoD vs gamma for a DFR Y",
    "gamma",
    lo=0.1,
    hi=5.0,
    shape=0.8,
    rate=0.5,
    alpha=-0.8,
    u=0.95,
)
def _figure_6d(params: dict[str, Any], evaluate: Evaluator):
    y = Gamma(params["shape"], params["rate"])
    model = _model(FGM(params["alpha"]), y)
    tasks = [
        PointTask("Y", float(x), "delta", model, params["u"], _power(x))
        for x in _grid(params)
    ]
    rows = evaluate(tasks)
    return rows, [_monotone(rows, "Y", increasing=True), _flag("Y is DFR", y.is_dfr)]


def _fgm_pair(params: dict[str, Any]) -> BivariateModel:
    return BivariateModel(
        FGM(params["alpha"]),
        Gamma(params["shape"], params["rate_x"]),
        Gamma(params["shape"], params["rate_y"]),
    )


_FGM_PAIR = {
    "lo": 0.1,
    "hi": 4.0,
    "alpha": -0.8,
    "g_gamma": 0.2,
    "shape": 0.8,
    "rate_x": 1.0,
    "rate_y": 0.5,
    "order_grid": ORDER_GRID,
}


def _fgm_pair_checks(
    params: dict[str, Any], model: BivariateModel, u_x: float, u_y: float
) -> list[FigureCheck]:
    x, y = model.marginal_x, model.marginal_y
    return [
        _close("u_g^X", u_x, 0.9937, 1.5e-3),
        _close("u_g^Y", u_y, 0.9937, 1.5e-3),
        _verdict(
            "X <=_hr Y",
            check_order(x, y, StochasticOrder.HR, int(params["order_grid"])),
        ),
    ]


@_panel("7a", "CoD of Y given X and of X given Y", "gamma2", **_FGM_PAIR)
def _figure_7a(params: dict[str, Any], evaluate: Evaluator):
    model = _fgm_pair(params)
    rows, u_x, u_y = _paired_rows(params, evaluate, model, "cod")
    return rows, [
        _ordered(rows, "X|Y", "Y|X"),
        *_fgm_pair_checks(params, model, u_x, u_y),
    ]


@_panel("7b", "Delta CoD of Y given X and of X given Y", "gamma2", **_FGM_PAIR)
def _figure_7b(params: dict[str, Any], evaluate: Evaluator):
    model = _fgm_pair(params)
    rows, u_x, u_y = _paired_rows(params, evaluate, model, "delta")
    return rows, [
        _ordered(rows, "Y|X", "X|Y"),
        *_fgm_pair_checks(params, model, u_x, u_y),
    ]
