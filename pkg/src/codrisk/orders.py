"""Grid verifiers for univariate stochastic orders."""

from __future__ import annotations

import logging
from enum import StrEnum

import numpy as np

from .const import EFFECTIVE_SUPPORT_EPS, ORDER_GRID, ORDER_TOL
from .exceptions import CodDomainError
from .marginal import Marginal
from .models import OrderVerdict

_LOGGER = logging.getLogger(__name__)


class StochasticOrder(StrEnum):
    """Supported univariate stochastic orders."""

    ST = "st"
    HR = "hr"
    LR = "lr"
    ICX = "icx"
    ICV = "icv"
    DISP = "disp"
    EW = "ew"


def _quantiles(m: Marginal, p: np.ndarray) -> np.ndarray:
    """Quantiles on a probability grid, from the upper quantile above 1/2."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p <= 0.5, m.ppf(p), m.isf(1.0 - p))


def _probability_grid(grid_size: int) -> np.ndarray:
    return np.linspace(EFFECTIVE_SUPPORT_EPS, 1.0 - EFFECTIVE_SUPPORT_EPS, grid_size)


def _x_grid(m1: Marginal, m2: Marginal, grid_size: int) -> np.ndarray:
    """Points spanning both effective supports, denser where mass sits."""
    p = _probability_grid(grid_size)
    return np.unique(np.concatenate([_quantiles(m1, p), _quantiles(m2, p)]))


def _increasing(
    relation: str, locations: np.ndarray, values: np.ndarray, grid_size: int
) -> OrderVerdict:
    return OrderVerdict.from_slack(
        relation,
        locations[1:].reshape(-1, 1),
        values[:-1],
        values[1:],
        ORDER_TOL,
        grid_size,
    )


def _upper_quantile_integral(m: Marginal, levels: np.ndarray) -> np.ndarray:
    """∫_u^1 F^-1(s) ds = (1 - u) F^-1(u) + integrated tail at u."""
    return np.array(
        [
            (1.0 - u) * m.quantile_from(u, 1.0 - u) + m.integrated_tail(u)
            for u in levels
        ]
    )


def check_order(
    m1: Marginal,
    m2: Marginal,
    order: StochasticOrder | str,
    grid_size: int = ORDER_GRID,
) -> OrderVerdict:
    """Check m1 <= m2 in a stochastic order on a grid.

    Survival-based orders are checked on the union of both quantile grids;
    quantile-based orders on a probability grid away from 0 and 1 by the
    effective-support epsilon.

    Args:
        m1: Candidate smaller law.
        m2: Candidate larger law.
        order: One of 'st', 'hr', 'lr', 'icx', 'icv', 'disp', 'ew'.
        grid_size: Number of probability levels (>= 3).

    Returns:
        Verdict with the minimal slack and the first violation.

    Raises:
        CodDomainError: Unknown order or grid_size < 3.
    """
    try:
        order = StochasticOrder(order)
    except ValueError:
        raise CodDomainError(f"Unknown stochastic order '{order}'") from None
    if grid_size < 3:
        raise CodDomainError(f"grid_size must be >= 3, got {grid_size}")

    _LOGGER.debug("Checking %s <=_%s %s", m1.label, order, m2.label)

    match order:
        case StochasticOrder.ST:
            x = _x_grid(m1, m2, grid_size)
            return OrderVerdict.from_slack(
                order, x.reshape(-1, 1), m1.sf(x), m2.sf(x), ORDER_TOL, grid_size
            )
        case StochasticOrder.HR:
            x = _x_grid(m1, m2, grid_size)
            with np.errstate(invalid="ignore"):
                ratio = np.asarray(m2.logsf(x)) - np.asarray(m1.logsf(x))
            return _increasing(order, x, ratio, grid_size)
        case StochasticOrder.LR:
            x = _x_grid(m1, m2, grid_size)
            with np.errstate(invalid="ignore"):
                ratio = np.asarray(m2.logpdf(x)) - np.asarray(m1.logpdf(x))
            return _increasing(order, x, ratio, grid_size)
        case StochasticOrder.ICX:
            levels = np.concatenate([[0.0], _probability_grid(grid_size)])
            lhs = _upper_quantile_integral(m1, levels[1:])
            rhs = _upper_quantile_integral(m2, levels[1:])
            return OrderVerdict.from_slack(
                order,
                levels.reshape(-1, 1),
                np.concatenate([[m1.mean], lhs]),
                np.concatenate([[m2.mean], rhs]),
                ORDER_TOL,
                grid_size,
            )
        case StochasticOrder.ICV:
            levels = np.concatenate([_probability_grid(grid_size), [1.0]])
            lhs = m1.mean - _upper_quantile_integral(m1, levels[:-1])
            rhs = m2.mean - _upper_quantile_integral(m2, levels[:-1])
            return OrderVerdict.from_slack(
                order,
                levels.reshape(-1, 1),
                np.concatenate([lhs, [m1.mean]]),
                np.concatenate([rhs, [m2.mean]]),
                ORDER_TOL,
                grid_size,
            )
        case StochasticOrder.DISP:
            p = _probability_grid(grid_size)
            spread = _quantiles(m2, p) - _quantiles(m1, p)
            return _increasing(order, p, spread, grid_size)
        case StochasticOrder.EW:
            p = _probability_grid(grid_size)
            return OrderVerdict.from_slack(
                order,
                p.reshape(-1, 1),
                np.array([m1.integrated_tail(u) for u in p]),
                np.array([m2.integrated_tail(u) for u in p]),
                ORDER_TOL,
                grid_size,
            )
    raise CodDomainError(f"Unknown stochastic order '{order}'")
