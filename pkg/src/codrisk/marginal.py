"""Univariate continuous marginals."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import astuple, dataclass
from enum import StrEnum
from typing import ClassVar

import numpy as np
from scipy import integrate, special, stats

from .const import DMEASURE_TOL, QUAD_LIMIT
from .exceptions import CodDivergenceError, CodDomainError, CodUnsupportedError

_LOGGER = logging.getLogger(__name__)

ArrayLike = float | np.ndarray


class MarginalFamily(StrEnum):
    """Builtin marginal families."""

    NORMAL = "normal"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    EXPONENTIAL = "exp"
    UNIFORM = "uniform"


class Marginal(ABC):
    """Continuous, strictly increasing univariate distribution."""

    family: ClassVar[str]

    @property
    def params(self) -> tuple[float, ...]:
        """Family parameters in spec-string order."""
        return astuple(self)

    @property
    def label(self) -> str:
        """Spec string (e.g. 'gamma:0.5,1')."""
        return f"{self.family}:" + ",".join(f"{x:g}" for x in self.params)

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""

    @property
    @abstractmethod
    def mean(self) -> float:
        """Expectation."""

    @property
    def is_dfr(self) -> bool:
        """Whether the hazard rate is decreasing (log-convex survival)."""
        return False

    @abstractmethod
    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""

    @abstractmethod
    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x), accurate in the upper tail."""

    @abstractmethod
    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p), accurate for small p."""

    @abstractmethod
    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c), accurate for small c."""

    @abstractmethod
    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""

    def logpdf(self, x: ArrayLike) -> ArrayLike:
        """Log density (-inf off the support)."""
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def logsf(self, x: ArrayLike) -> ArrayLike:
        """Log survival function (-inf above the support)."""
        with np.errstate(divide="ignore"):
            return np.log(self.sf(x))

    def quantile_from(self, p: float, c: float) -> float:
        """Quantile at level p given both p and its complement c = 1 - p."""
        return float(self.ppf(p)) if p <= 0.5 else float(self.isf(c))

    def integrated_tail(self, u: float) -> float:
        """Integrated tail beyond the u-quantile by adaptive quadrature.

        Args:
            u: Probability level in (0, 1).

        Returns:
            The integral of the survival function from F^-1(u) upwards.
        """
        start = self.quantile_from(u, 1.0 - u)
        value, error = integrate.quad(
            self.sf, start, self.support[1], epsabs=1e-10, limit=QUAD_LIMIT
        )
        _LOGGER.debug("Integrated tail of %s at %g: %g (+-%g)", self, u, value, error)
        return value

    def mirror(self) -> Marginal:
        """Law of -X when it stays within the family."""
        raise CodUnsupportedError(f"Mirroring is not available for {self.label}")


@dataclass(frozen=True)
class Normal(Marginal):
    """Normal distribution N(mu, sigma^2)."""

    family: ClassVar[str] = MarginalFamily.NORMAL
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        _require(self.sigma > 0, "sigma", self.sigma)

    @property
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""
        return -math.inf, math.inf

    @property
    def mean(self) -> float:
        """Expectation."""
        return self.mu

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""
        return special.ndtr((np.asarray(x) - self.mu) / self.sigma)

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x)."""
        return special.ndtr((self.mu - np.asarray(x)) / self.sigma)

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p)."""
        return self.mu + self.sigma * special.ndtri(p)

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c)."""
        return self.mu - self.sigma * special.ndtri(c)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""
        return stats.norm.pdf(x, loc=self.mu, scale=self.sigma)

    def logpdf(self, x: ArrayLike) -> ArrayLike:
        """Log density."""
        return stats.norm.logpdf(x, loc=self.mu, scale=self.sigma)

    def logsf(self, x: ArrayLike) -> ArrayLike:
        """Log survival function."""
        return special.log_ndtr((self.mu - np.asarray(x)) / self.sigma)

    def integrated_tail(self, u: float) -> float:
        """Integrated tail sigma * (phi(z) - z * (1 - Phi(z))) at z = Phi^-1(u)."""
        z = float(special.ndtri(u)) if u <= 0.5 else -float(special.ndtri(1.0 - u))
        return self.sigma * (float(stats.norm.pdf(z)) - z * (1.0 - u))

    def mirror(self) -> Normal:
        """Law of -X."""
        return Normal(-self.mu, self.sigma)


@dataclass(frozen=True)
class Gamma(Marginal):
    """Gamma distribution with shape a and rate b."""

    family: ClassVar[str] = MarginalFamily.GAMMA
    shape: float = 1.0
    rate: float = 1.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        _require(self.shape > 0, "shape", self.shape)
        _require(self.rate > 0, "rate", self.rate)

    @property
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""
        return 0.0, math.inf

    @property
    def mean(self) -> float:
        """Expectation."""
        return self.shape / self.rate

    @property
    def is_dfr(self) -> bool:
        """DFR iff shape <= 1."""
        return self.shape <= 1.0

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""
        return special.gammainc(self.shape, self.rate * np.maximum(x, 0.0))

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x)."""
        return special.gammaincc(self.shape, self.rate * np.maximum(x, 0.0))

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p) from the inverse regularized incomplete gamma."""
        return special.gammaincinv(self.shape, p) / self.rate

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c)."""
        return special.gammainccinv(self.shape, c) / self.rate

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""
        return stats.gamma.pdf(x, self.shape, scale=1.0 / self.rate)

    def logpdf(self, x: ArrayLike) -> ArrayLike:
        """Log density."""
        return stats.gamma.logpdf(x, self.shape, scale=1.0 / self.rate)

    def integrated_tail(self, u: float) -> float:
        """Stop-loss transform E[(X - x)+] at x = F^-1(u)."""
        x = self.quantile_from(u, 1.0 - u)
        scaled = self.rate * x
        return float(
            self.mean * special.gammaincc(self.shape + 1.0, scaled)
            - x * special.gammaincc(self.shape, scaled)
        )


@dataclass(frozen=True)
class Weibull(Marginal):
    """Weibull distribution with survival exp(-(x / scale)^shape)."""

    family: ClassVar[str] = MarginalFamily.WEIBULL
    scale: float = 1.0
    shape: float = 1.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        _require(self.scale > 0, "scale", self.scale)
        _require(self.shape > 0, "shape", self.shape)

    @property
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""
        return 0.0, math.inf

    @property
    def mean(self) -> float:
        """Expectation."""
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    @property
    def is_dfr(self) -> bool:
        """DFR iff shape <= 1."""
        return self.shape <= 1.0

    def _cumulative_hazard(self, x: ArrayLike) -> ArrayLike:
        return (np.maximum(x, 0.0) / self.scale) ** self.shape

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""
        return -np.expm1(-self._cumulative_hazard(x))

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x)."""
        return np.exp(-self._cumulative_hazard(x))

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p)."""
        return self.scale * (-np.log1p(-np.asarray(p))) ** (1.0 / self.shape)

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c)."""
        with np.errstate(divide="ignore"):
            return self.scale * (-np.log(c)) ** (1.0 / self.shape)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""
        return stats.weibull_min.pdf(x, self.shape, scale=self.scale)

    def logpdf(self, x: ArrayLike) -> ArrayLike:
        """Log density."""
        return stats.weibull_min.logpdf(x, self.shape, scale=self.scale)

    def logsf(self, x: ArrayLike) -> ArrayLike:
        """Log survival function (minus the cumulative hazard)."""
        return -self._cumulative_hazard(x)

    def integrated_tail(self, u: float) -> float:
        """Closed form scale * Gamma(1 + 1/k) * Q(1/k, -log(1 - u))."""
        return float(
            self.mean * special.gammaincc(1.0 / self.shape, -math.log1p(-u))
        )


@dataclass(frozen=True)
class Exponential(Marginal):
    """Exponential distribution with the given rate."""

    family: ClassVar[str] = MarginalFamily.EXPONENTIAL
    rate: float = 1.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        _require(self.rate > 0, "rate", self.rate)

    @property
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""
        return 0.0, math.inf

    @property
    def mean(self) -> float:
        """Expectation."""
        return 1.0 / self.rate

    @property
    def is_dfr(self) -> bool:
        """Constant hazard counts as DFR."""
        return True

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""
        return -np.expm1(-self.rate * np.maximum(x, 0.0))

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x)."""
        return np.exp(-self.rate * np.maximum(x, 0.0))

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p)."""
        return -np.log1p(-np.asarray(p)) / self.rate

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c)."""
        with np.errstate(divide="ignore"):
            return -np.log(c) / self.rate

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""
        return stats.expon.pdf(x, scale=1.0 / self.rate)

    def logsf(self, x: ArrayLike) -> ArrayLike:
        """Log survival function."""
        return -self.rate * np.maximum(x, 0.0)

    def integrated_tail(self, u: float) -> float:
        """Closed form (1 - u) / rate."""
        return (1.0 - u) / self.rate


@dataclass(frozen=True)
class Uniform(Marginal):
    """Uniform distribution on (lo, hi)."""

    family: ClassVar[str] = MarginalFamily.UNIFORM
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        _require(self.lo < self.hi, "hi", self.hi)

    @property
    def support(self) -> tuple[float, float]:
        """Closure of the support as (lower, upper)."""
        return self.lo, self.hi

    @property
    def mean(self) -> float:
        """Expectation."""
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        """Length of the support."""
        return self.hi - self.lo

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Distribution function F(x)."""
        return np.clip((np.asarray(x) - self.lo) / self.width, 0.0, 1.0)

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x)."""
        return np.clip((self.hi - np.asarray(x)) / self.width, 0.0, 1.0)

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Quantile F^-1(p)."""
        return self.lo + np.asarray(p) * self.width

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Upper quantile F^-1(1 - c)."""
        return self.hi - np.asarray(c) * self.width

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density f(x)."""
        return stats.uniform.pdf(x, loc=self.lo, scale=self.width)

    def integrated_tail(self, u: float) -> float:
        """Closed form (1 - u)^2 * (hi - lo) / 2."""
        return 0.5 * (1.0 - u) ** 2 * self.width

    def mirror(self) -> Uniform:
        """Law of -X."""
        return Uniform(-self.hi, -self.lo)


_FAMILIES: dict[MarginalFamily, type[Marginal]] = {
    MarginalFamily.NORMAL: Normal,
    MarginalFamily.GAMMA: Gamma,
    MarginalFamily.WEIBULL: Weibull,
    MarginalFamily.EXPONENTIAL: Exponential,
    MarginalFamily.UNIFORM: Uniform,
}


def _require(condition: bool, name: str, value: float) -> None:
    if not condition or not math.isfinite(value):
        raise CodDomainError(
            f"Invalid marginal parameter {name}={value}", {name: value}
        )


def build_marginal(family: MarginalFamily | str, params: Iterable[float]) -> Marginal:
    """Build a builtin marginal.

    Args:
        family: Family tag ('normal', 'gamma', 'weibull', 'exp', 'uniform').
        params: Parameters in spec-string order.

    Returns:
        The validated Marginal.

    Raises:
        CodDomainError: Unknown family, wrong arity or invalid parameter.
    """
    try:
        cls = _FAMILIES[MarginalFamily(family)]
    except ValueError:
        raise CodDomainError(f"Unknown marginal family '{family}'") from None

    params = tuple(float(x) for x in params)
    try:
        return cls(*params)
    except TypeError:
        raise CodDomainError(
            f"Wrong number of parameters for marginal '{family}': {params}"
        ) from None


def _require_probability(p: float, name: str = "p") -> None:
    if not 0.0 < p < 1.0:
        raise CodDomainError(f"{name} must lie in (0, 1), got {p}", {name: p})


def quantile(m: Marginal, p: float) -> float:
    """Generalized lower inverse F^-1(p).

    Args:
        m: The marginal.
        p: Probability in (0, 1).

    Returns:
        The p-quantile.

    Raises:
        CodDomainError: If p is outside (0, 1).
    """
    _require_probability(p)
    return m.quantile_from(p, 1.0 - p)


def upper_quantile(m: Marginal, c: float) -> float:
    """Quantile F^-1(1 - c) for a tail probability c in (0, 1)."""
    _require_probability(c, "c")
    return float(m.isf(c))


def integrated_tail(m: Marginal, u: float) -> float:
    """Integral of the survival function beyond the u-quantile.

    Args:
        m: The marginal.
        u: Probability in (0, 1).

    Returns:
        The integrated tail at level u.

    Raises:
        CodDomainError: If u is outside (0, 1).
        CodDivergenceError: If the marginal has no finite mean.
    """
    _require_probability(u, "u")
    if not math.isfinite(m.mean):
        raise CodDivergenceError(f"{m.label} has no finite mean")
    return m.integrated_tail(u)


def is_dfr(m: Marginal) -> bool:
    """Analytic DFR classification."""
    return m.is_dfr


def mirror(m: Marginal) -> Marginal:
    """Law of -X for families closed under negation."""
    return m.mirror()
