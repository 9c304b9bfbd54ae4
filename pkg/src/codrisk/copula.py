"""Bivariate copulas, conditional tail laws and dependence verifiers."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import astuple, dataclass
from enum import StrEnum
from functools import lru_cache
from typing import ClassVar

import numpy as np
from scipy import optimize
from scipy.optimize import elementwise

from .const import (
    BRACKET_SLACK,
    CONCORDANCE_TOL,
    DEPENDENCE_GRID,
    PQD_TOL,
    ROOT_RTOL,
    ROOT_XTOL,
    RTI_TOL,
    SAMPLER_XTOL,
    SI_TOL,
    TINY_PROB,
    TP2_TOL,
)
from .exceptions import CodDegenerateConditioningError, CodDomainError
from .models import OrderVerdict

_LOGGER = logging.getLogger(__name__)

ArrayLike = float | np.ndarray


class CopulaFamily(StrEnum):
    """Builtin copula families."""

    GUMBEL = "gumbel"
    FGM = "fgm"
    INDEPENDENCE = "indep"
    COMONOTONIC = "comono"


class DependenceNotion(StrEnum):
    """Positive and negative dependence notions checked on a grid."""

    PQD = "PQD"
    NQD = "NQD"
    RTI_V_IN_U = "RTI_V_in_U"
    RTD_V_IN_U = "RTD_V_in_U"
    RTI_U_IN_V = "RTI_U_in_V"
    RTD_U_IN_V = "RTD_U_in_V"
    SI_V_IN_U = "SI_V_in_U"
    SD_V_IN_U = "SD_V_in_U"
    SI_U_IN_V = "SI_U_in_V"
    SD_U_IN_V = "SD_U_in_V"
    TP2 = "TP2"
    RR2 = "RR2"
    PDS = "PDS"
    NDS = "NDS"


class Copula(ABC):
    """Bivariate copula C(u, v)."""

    family: ClassVar[str]
    uses_root_finding: ClassVar[bool] = True

    @property
    def params(self) -> tuple[float, ...]:
        """Family parameters."""
        return astuple(self)

    @property
    def label(self) -> str:
        """Spec string (e.g. 'gumbel:2')."""
        if not self.params:
            return str(self.family)
        return f"{self.family}:" + ",".join(f"{x:g}" for x in self.params)

    @abstractmethod
    def cdf(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Copula C(u, v)."""

    def joint_tail(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Joint survival P(U > u, V > v) = 1 - u - v + C(u, v)."""
        return 1.0 - u - v + self.cdf(u, v)

    def survival_copula(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Survival copula u + v - 1 + C(1 - u, 1 - v)."""
        return u + v - 1.0 + self.cdf(1.0 - u, 1.0 - v)

    def partial_u(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Conditional df P(V <= v | U = u) by central differences."""
        step = 1e-6
        return (self.cdf(u + step, v) - self.cdf(u - step, v)) / (2 * step)

    def cond_tail_cdf(self, u: float, v: ArrayLike) -> ArrayLike:
        """P(V <= v | U > u) = (v - C(u, v)) / (1 - u)."""
        return (v - self.cdf(u, v)) / (1.0 - u)

    def cond_tail_survival(self, u: float, t: ArrayLike) -> ArrayLike:
        """P(V > 1 - t | U > u), i.e. the joint tail at (u, 1 - t) over 1 - u."""
        return (t - u + self.cdf(u, 1.0 - t)) / (1.0 - u)

    def cond_tail_quantile(self, u: float, p: float) -> float:
        """Generalized inverse of v -> cond_tail_cdf(u, v)."""
        return optimize.brentq(
            lambda v: self.cond_tail_cdf(u, v) - p,
            0.0,
            1.0,
            xtol=ROOT_XTOL,
            rtol=ROOT_RTOL,
        )

    def cond_tail_upper_quantile(self, u: float, c: float) -> float:
        """Level t = 1 - v with P(V > v | U > u) = c, accurate for small c."""
        return optimize.brentq(
            lambda t: self.cond_tail_survival(u, t) - c,
            0.0,
            1.0,
            xtol=ROOT_XTOL,
            rtol=ROOT_RTOL,
        )

    def sample_conditional(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Invert v -> partial_u(u, v) at uniform levels w, elementwise.

        Args:
            u: First coordinates in (0, 1).
            w: Independent uniform levels.

        Returns:
            Second coordinates v with (u, v) distributed as C.
        """
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        result = elementwise.find_root(
            self._partial_residual,
            (np.full_like(w, TINY_PROB), np.ones_like(w)),
            args=(u, w),
            tolerances={"xatol": SAMPLER_XTOL},
        )
        if not np.all(result.success):
            _LOGGER.debug(
                "Conditional inversion did not converge for %d of %d points",
                int(np.sum(~result.success)),
                w.size,
            )
        return np.clip(result.x, 0.0, 1.0)

    def _partial_residual(
        self, v: np.ndarray, u: np.ndarray, w: np.ndarray
    ) -> np.ndarray:
        return self.partial_u(u, v) - w

    @property
    def is_symmetric(self) -> bool:
        """Whether C(u, v) = C(v, u) on an interior grid."""
        grid = np.arange(1, 21) / 21
        u, v = np.meshgrid(grid, grid, indexing="ij")
        return bool(np.max(np.abs(self.cdf(u, v) - self.cdf(v, u))) <= 1e-14)


def _gumbel_cdf(theta: float, u: ArrayLike, v: ArrayLike) -> ArrayLike:
    with np.errstate(divide="ignore"):
        a = (-np.log(u)) ** theta
        b = (-np.log(v)) ** theta
    return np.exp(-((a + b) ** (1.0 / theta)))


def _gumbel_tail_survival(theta: float, u: float, t: ArrayLike) -> ArrayLike:
    # u - C(u, 1 - t) via expm1/log1p so that tiny t keeps full precision
    if u == 0.0:
        return t
    a = (-math.log(u)) ** theta
    with np.errstate(divide="ignore"):
        b = (-np.log1p(-np.asarray(t, dtype=float))) ** theta
    gap = -u * np.expm1(-(a ** (1.0 / theta)) * np.expm1(np.log1p(b / a) / theta))
    return (t - gap) / (1.0 - u)


@lru_cache(maxsize=1 << 16)
def _gumbel_lower_quantile(theta: float, u: float, p: float) -> float:
    # PQD brackets: p <= v <= u + (1 - u) p
    lo = p * (1.0 - BRACKET_SLACK)
    hi = min(1.0, (u + (1.0 - u) * p) * (1.0 + BRACKET_SLACK))
    return optimize.brentq(
        lambda v: (v - _gumbel_cdf(theta, u, v)) / (1.0 - u) - p,
        lo,
        hi,
        xtol=ROOT_XTOL,
        rtol=ROOT_RTOL,
    )


@lru_cache(maxsize=1 << 16)
def _gumbel_upper_quantile(theta: float, u: float, c: float) -> float:
    # PQD brackets: c (1 - u) <= t <= c
    lo = c * (1.0 - u) * (1.0 - BRACKET_SLACK)
    hi = min(1.0, c * (1.0 + BRACKET_SLACK))
    return optimize.brentq(
        lambda t: float(_gumbel_tail_survival(theta, u, t)) - c,
        lo,
        hi,
        xtol=ROOT_XTOL,
        rtol=ROOT_RTOL,
    )


@dataclass(frozen=True)
class Gumbel(Copula):
    """Gumbel copula exp(-((-ln u)^theta + (-ln v)^theta)^(1/theta))."""

    family: ClassVar[str] = CopulaFamily.GUMBEL
    theta: float = 1.0

    def __post_init__(self) -> None:
        """Validate theta >= 1."""
        if not 1.0 <= self.theta < math.inf:
            raise CodDomainError(
                f"Gumbel theta must be >= 1, got {self.theta}", {"theta": self.theta}
            )

    def cdf(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Copula C(u, v)."""
        return _gumbel_cdf(self.theta, u, v)

    def partial_u(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Closed-form conditional df P(V <= v | U = u)."""
        theta = self.theta
        with np.errstate(divide="ignore", invalid="ignore"):
            x = -np.log(u)
            a = x**theta
            b = (-np.log(v)) ** theta
            s = a + b
            value = (
                np.exp(-(s ** (1.0 / theta)))
                * s ** (1.0 / theta - 1.0)
                * x ** (theta - 1.0)
                / u
            )
        return np.nan_to_num(value, nan=0.0)

    def cond_tail_survival(self, u: float, t: ArrayLike) -> ArrayLike:
        """P(V > 1 - t | U > u) without cancellation for small t."""
        return _gumbel_tail_survival(self.theta, u, t)

    def cond_tail_quantile(self, u: float, p: float) -> float:
        """Conditional tail quantile by bracketed root finding."""
        if u == 0.0:
            return p
        return _gumbel_lower_quantile(self.theta, u, p)

    def cond_tail_upper_quantile(self, u: float, c: float) -> float:
        """Upper conditional tail level by bracketed root finding."""
        if u == 0.0:
            return c
        return _gumbel_upper_quantile(self.theta, u, c)


@dataclass(frozen=True)
class FGM(Copula):
    """Farlie-Gumbel-Morgenstern copula uv[1 + alpha (1 - u)(1 - v)]."""

    family: ClassVar[str] = CopulaFamily.FGM
    uses_root_finding: ClassVar[bool] = False
    alpha: float = 0.0

    def __post_init__(self) -> None:
        """Validate alpha in [-1, 1]."""
        if not -1.0 <= self.alpha <= 1.0:
            raise CodDomainError(
                f"FGM alpha must lie in [-1, 1], got {self.alpha}",
                {"alpha": self.alpha},
            )

    def cdf(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Copula C(u, v)."""
        return u * v * (1.0 + self.alpha * (1.0 - u) * (1.0 - v))

    def partial_u(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Closed-form conditional df P(V <= v | U = u)."""
        return v * (1.0 + self.alpha * (1.0 - v) * (1.0 - 2.0 * u))

    def cond_tail_cdf(self, u: float, v: ArrayLike) -> ArrayLike:
        """P(V <= v | U > u) = v (1 - alpha u (1 - v))."""
        return v * (1.0 - self.alpha * u * (1.0 - v))

    def cond_tail_survival(self, u: float, t: ArrayLike) -> ArrayLike:
        """P(V > 1 - t | U > u) = t (1 + alpha u (1 - t))."""
        return t * (1.0 + self.alpha * u * (1.0 - t))

    def cond_tail_quantile(self, u: float, p: float) -> float:
        """Root of alpha u v^2 + (1 - alpha u) v - p = 0 in [0, 1]."""
        k = self.alpha * u
        return 2.0 * p / ((1.0 - k) + math.sqrt((1.0 - k) ** 2 + 4.0 * k * p))

    def cond_tail_upper_quantile(self, u: float, c: float) -> float:
        """Root of -alpha u t^2 + (1 + alpha u) t - c = 0 in [0, 1]."""
        k = self.alpha * u
        return 2.0 * c / ((1.0 + k) + math.sqrt((1.0 + k) ** 2 - 4.0 * k * c))

    def sample_conditional(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Closed-form inverse of the quadratic h-function."""
        k = self.alpha * (1.0 - 2.0 * np.asarray(u, dtype=float))
        w = np.asarray(w, dtype=float)
        return 2.0 * w / ((1.0 + k) + np.sqrt((1.0 + k) ** 2 - 4.0 * k * w))


@dataclass(frozen=True)
class Independence(Copula):
    """Independence copula uv."""

    family: ClassVar[str] = CopulaFamily.INDEPENDENCE
    uses_root_finding: ClassVar[bool] = False

    def cdf(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Copula C(u, v)."""
        return u * v

    def partial_u(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Conditional df P(V <= v | U = u) = v."""
        return v + 0.0 * u

    def cond_tail_cdf(self, u: float, v: ArrayLike) -> ArrayLike:
        """P(V <= v | U > u) = v."""
        return v

    def cond_tail_survival(self, u: float, t: ArrayLike) -> ArrayLike:
        """P(V > 1 - t | U > u) = t."""
        return t

    def cond_tail_quantile(self, u: float, p: float) -> float:
        """Identity."""
        return p

    def cond_tail_upper_quantile(self, u: float, c: float) -> float:
        """Identity."""
        return c

    def sample_conditional(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """V is independent of U."""
        return np.asarray(w, dtype=float)


@dataclass(frozen=True)
class Comonotonic(Copula):
    """Upper Frechet bound min(u, v)."""

    family: ClassVar[str] = CopulaFamily.COMONOTONIC
    uses_root_finding: ClassVar[bool] = False

    def cdf(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Copula C(u, v)."""
        return np.minimum(u, v)

    def partial_u(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        """Degenerate conditional df 1{v >= u}."""
        return np.where(np.asarray(v) >= u, 1.0, 0.0)

    def cond_tail_cdf(self, u: float, v: ArrayLike) -> ArrayLike:
        """P(V <= v | U > u) = max(0, (v - u) / (1 - u))."""
        return np.maximum(0.0, (np.asarray(v) - u) / (1.0 - u))

    def cond_tail_survival(self, u: float, t: ArrayLike) -> ArrayLike:
        """P(V > 1 - t | U > u) = min(1, t / (1 - u))."""
        return np.minimum(1.0, np.asarray(t) / (1.0 - u))

    def cond_tail_quantile(self, u: float, p: float) -> float:
        """u + (1 - u) p."""
        return u + (1.0 - u) * p

    def cond_tail_upper_quantile(self, u: float, c: float) -> float:
        """(1 - u) c."""
        return (1.0 - u) * c

    def sample_conditional(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """V equals U."""
        return np.asarray(u, dtype=float).copy()


_FAMILIES: dict[CopulaFamily, type[Copula]] = {
    CopulaFamily.GUMBEL: Gumbel,
    CopulaFamily.FGM: FGM,
    CopulaFamily.INDEPENDENCE: Independence,
    CopulaFamily.COMONOTONIC: Comonotonic,
}


def build_copula(family: CopulaFamily | str, params: Iterable[float] = ()) -> Copula:
    """Build a builtin copula.

    Args:
        family: Family tag ('gumbel', 'fgm', 'indep', 'comono').
        params: Family parameters.

    Returns:
        The validated Copula.

    Raises:
        CodDomainError: Unknown family, wrong arity or invalid parameter.
    """
    try:
        cls = _FAMILIES[CopulaFamily(family)]
    except ValueError:
        raise CodDomainError(f"Unknown copula family '{family}'") from None

    params = tuple(float(x) for x in params)
    try:
        return cls(*params)
    except TypeError:
        raise CodDomainError(
            f"Wrong number of parameters for copula '{family}': {params}"
        ) from None


def validate_conditioning(u: float) -> None:
    """Check that u is a usable conditioning level in [0, 1).

    Raises:
        CodDegenerateConditioningError: If u = 1.
        CodDomainError: If u lies outside [0, 1].
    """
    if u == 1.0:
        raise CodDegenerateConditioningError(
            "Conditioning on U > 1 has probability zero", {"u": u}
        )
    if not 0.0 <= u < 1.0:
        raise CodDomainError(f"u must lie in [0, 1), got {u}", {"u": u})


def cond_tail_cdf(c: Copula, u: float, v: float) -> float:
    """Conditional tail df F_{V|U>u}(v).

    Args:
        c: The copula.
        u: Conditioning level in [0, 1).
        v: Argument in [0, 1].

    Returns:
        (v - C(u, v)) / (1 - u).
    """
    validate_conditioning(u)
    if not 0.0 <= v <= 1.0:
        raise CodDomainError(f"v must lie in [0, 1], got {v}", {"v": v})
    return float(c.cond_tail_cdf(u, v))


def tail_weight(c: Copula, u: float, t: ArrayLike) -> ArrayLike:
    """Tail-weight function A(t) = 1 - C̄(u, t) / (1 - u)."""
    validate_conditioning(u)
    return c.cond_tail_cdf(u, t)


def cond_tail_quantile(c: Copula, u: float, p: float) -> float:
    """Generalized inverse of v -> F_{V|U>u}(v).

    Args:
        c: The copula.
        u: Conditioning level in [0, 1).
        p: Probability in (0, 1).

    Returns:
        The conditional tail quantile.
    """
    validate_conditioning(u)
    if not 0.0 < p < 1.0:
        raise CodDomainError(f"p must lie in (0, 1), got {p}", {"p": p})
    return float(c.cond_tail_quantile(u, p))


def cond_tail_upper_quantile(c: Copula, u: float, q: float) -> float:
    """Level t such that P(V > 1 - t | U > u) = q, for q in (0, 1)."""
    validate_conditioning(u)
    if not 0.0 < q < 1.0:
        raise CodDomainError(f"q must lie in (0, 1), got {q}", {"q": q})
    return float(c.cond_tail_upper_quantile(u, q))


def _interior_grid(grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    points = np.arange(1, grid_size + 1) / (grid_size + 1)
    return np.meshgrid(points, points, indexing="ij")


def concordance_leq(
    c1: Copula, c2: Copula, grid_size: int = DEPENDENCE_GRID
) -> OrderVerdict:
    """Check c1 ≺ c2, i.e. c1(u, v) <= c2(u, v) on an interior grid.

    Args:
        c1: Candidate less concordant copula.
        c2: Candidate more concordant copula.
        grid_size: Interior points per axis (>= 2).

    Returns:
        Verdict with the first violating (u, v) and the gap.
    """
    if grid_size < 2:
        raise CodDomainError(f"grid_size must be >= 2, got {grid_size}")
    u, v = _interior_grid(grid_size)
    return OrderVerdict.from_slack(
        "concordance",
        np.column_stack([u.ravel(), v.ravel()]),
        c1.cdf(u, v),
        c2.cdf(u, v),
        CONCORDANCE_TOL,
        grid_size,
    )


def _along(
    relation: str,
    u: np.ndarray,
    v: np.ndarray,
    values: np.ndarray,
    axis: int,
    increasing: bool,
    tolerance: float,
    grid_size: int,
) -> OrderVerdict:
    """Verdict for monotonicity of values along one grid axis."""
    head = [slice(None), slice(None)]
    tail = [slice(None), slice(None)]
    head[axis] = slice(None, -1)
    tail[axis] = slice(1, None)
    before = values[tuple(head)]
    after = values[tuple(tail)]
    locations = np.column_stack([u[tuple(tail)].ravel(), v[tuple(tail)].ravel()])
    if increasing:
        return OrderVerdict.from_slack(
            relation, locations, before, after, tolerance, grid_size
        )
    return OrderVerdict.from_slack(
        relation, locations, after, before, tolerance, grid_size
    )


def check_dependence(
    c: Copula, notion: DependenceNotion | str, grid_size: int = DEPENDENCE_GRID
) -> OrderVerdict:
    """Verify a dependence notion on an interior grid.

    Args:
        c: The copula.
        notion: One of the DependenceNotion values.
        grid_size: Interior points per axis (>= 3).

    Returns:
        Verdict with the first violation and the minimal slack.

    Raises:
        CodDomainError: Unknown notion or grid_size < 3.
    """
    try:
        notion = DependenceNotion(notion)
    except ValueError:
        raise CodDomainError(f"Unknown dependence notion '{notion}'") from None
    if grid_size < 3:
        raise CodDomainError(f"grid_size must be >= 3, got {grid_size}")

    if notion is DependenceNotion.PDS:
        return OrderVerdict.combine(
            notion,
            check_dependence(c, DependenceNotion.SI_V_IN_U, grid_size),
            check_dependence(c, DependenceNotion.SI_U_IN_V, grid_size),
        )
    if notion is DependenceNotion.NDS:
        return OrderVerdict.combine(
            notion,
            check_dependence(c, DependenceNotion.SD_V_IN_U, grid_size),
            check_dependence(c, DependenceNotion.SD_U_IN_V, grid_size),
        )

    u, v = _interior_grid(grid_size)
    locations = np.column_stack([u.ravel(), v.ravel()])
    step = 1.0 / (4 * grid_size)
    _LOGGER.debug("Checking %s for %s on a %d grid", notion, c.label, grid_size)

    match notion:
        case DependenceNotion.PQD:
            return OrderVerdict.from_slack(
                notion, locations, u * v, c.cdf(u, v), PQD_TOL, grid_size
            )
        case DependenceNotion.NQD:
            return OrderVerdict.from_slack(
                notion, locations, c.cdf(u, v), u * v, PQD_TOL, grid_size
            )
        case DependenceNotion.RTI_V_IN_U | DependenceNotion.RTD_V_IN_U:
            ratio = c.joint_tail(u, v) / (1.0 - u)
            increasing = notion is DependenceNotion.RTI_V_IN_U
            return _along(notion, u, v, ratio, 0, increasing, RTI_TOL, grid_size)
        case DependenceNotion.RTI_U_IN_V | DependenceNotion.RTD_U_IN_V:
            ratio = c.joint_tail(u, v) / (1.0 - v)
            increasing = notion is DependenceNotion.RTI_U_IN_V
            return _along(notion, u, v, ratio, 1, increasing, RTI_TOL, grid_size)
        case DependenceNotion.SI_V_IN_U | DependenceNotion.SD_V_IN_U:
            # P(V > v | U = u) = 1 - dC/du increasing in u under SI
            slope = (c.cdf(u + step, v) - c.cdf(u - step, v)) / (2 * step)
            increasing = notion is DependenceNotion.SD_V_IN_U
            return _along(notion, u, v, slope, 0, increasing, SI_TOL, grid_size)
        case DependenceNotion.SI_U_IN_V | DependenceNotion.SD_U_IN_V:
            slope = (c.cdf(u, v + step) - c.cdf(u, v - step)) / (2 * step)
            increasing = notion is DependenceNotion.SD_U_IN_V
            return _along(notion, u, v, slope, 1, increasing, SI_TOL, grid_size)
        case DependenceNotion.TP2 | DependenceNotion.RR2:
            values = c.cdf(u, v)
            diagonal = values[:-1, :-1] * values[1:, 1:]
            cross = values[:-1, 1:] * values[1:, :-1]
            corners = np.column_stack([u[1:, 1:].ravel(), v[1:, 1:].ravel()])
            if notion is DependenceNotion.TP2:
                return OrderVerdict.from_slack(
                    notion, corners, cross, diagonal, TP2_TOL, grid_size
                )
            return OrderVerdict.from_slack(
                notion, corners, diagonal, cross, TP2_TOL, grid_size
            )
    raise CodDomainError(f"Unknown dependence notion '{notion}'")
