"""Distortion functions, their duals and Stieltjes decompositions."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from enum import StrEnum

import numpy as np
from scipy import integrate, special

from .const import COD_TOL, DOMINANCE_GRID, QUAD_EPSREL, QUAD_LIMIT, TINY_PROB
from .exceptions import CodDivergenceError, CodDomainError, CodUnsupportedError

_LOGGER = logging.getLogger(__name__)

# Integrands and densities receive a probability together with its complement,
# both accurate, so that tails near 0 and near 1 are resolved alike.
ProbabilityFunction = Callable[[float, float], float]


class DistortionKind(StrEnum):
    """Builtin distortion families."""

    VAR = "var"
    ES = "es"
    POWER = "power"
    DUAL_POWER = "dualpower"
    WANG = "wang"
    IDENTITY = "id"


class Continuity(StrEnum):
    """Continuity class of a distortion function."""

    LEFT = "left_continuous"
    RIGHT = "right_continuous"
    CONTINUOUS = "continuous"


class Shape(StrEnum):
    """Analytic shape of a distortion function on [0, 1]."""

    CONCAVE = "concave"
    CONVEX = "convex"
    LINEAR = "linear"
    NEITHER = "neither"


_PARAM_COUNT = {
    DistortionKind.VAR: 1,
    DistortionKind.ES: 1,
    DistortionKind.POWER: 1,
    DistortionKind.DUAL_POWER: 1,
    DistortionKind.WANG: 1,
    DistortionKind.IDENTITY: 0,
}


@dataclass(frozen=True)
class Atom:
    """Point mass of a Stieltjes measure."""

    location: float
    mass: float


@dataclass(frozen=True)
class Segment:
    """Absolutely continuous part of a Stieltjes measure on (lo, hi).

    Attributes:
        lo: Left end of the segment.
        hi: Right end of the segment.
        density: Density as a function of (p, 1 - p).
        lower_exponent: e such that density ~ p^e as p -> 0 (only used at lo = 0).
        upper_exponent: e such that density ~ (1-p)^e as p -> 1 (only at hi = 1).
    """

    lo: float
    hi: float
    density: ProbabilityFunction = field(compare=False)
    lower_exponent: float = 0.0
    upper_exponent: float = 0.0


@dataclass(frozen=True)
class Integral:
    """Value of a Stieltjes integral with its quadrature diagnostics."""

    value: float
    error: float
    evaluations: int


@dataclass(frozen=True)
class StieltjesMeasure:
    """Finite measure on [0, 1] made of atoms and density segments.

    Attributes:
        atoms: Point masses.
        segments: Non-overlapping density segments.
    """

    atoms: tuple[Atom, ...] = ()
    segments: tuple[Segment, ...] = ()

    def integrate(self, func: ProbabilityFunction, tol: float = COD_TOL) -> Integral:
        """Integrate func(p, 1 - p) against the measure.

        Atoms are evaluated pointwise. Each segment is split at p = 1/2; the
        upper half is integrated in the complement variable c = 1 - p, and a
        power-law endpoint density x^e (e < 0) is removed by x = s^(1/(e+1)).

        Args:
            func: Integrand taking (p, 1 - p).
            tol: Absolute tolerance for the whole integral.

        Returns:
            Integral with value, summed error estimate and evaluation count.

        Raises:
            CodDivergenceError: If the integral is not finite.
        """
        value = 0.0
        error = 0.0
        evaluations = 0

        for atom in self.atoms:
            value += atom.mass * func(atom.location, 1.0 - atom.location)
            evaluations += 1

        pieces = [piece for segment in self.segments for piece in _pieces(segment)]
        piece_tol = tol / max(2 * len(pieces), 1)

        for integrand, lo, hi in pieces:
            counter = _CountingIntegrand(integrand, func)
            result = integrate.quad(
                counter,
                lo,
                hi,
                epsabs=piece_tol,
                epsrel=QUAD_EPSREL,
                limit=QUAD_LIMIT,
                full_output=1,
            )
            piece_value, piece_error = result[0], result[1]
            if len(result) > 3:
                _LOGGER.debug("Quadrature on [%g, %g]: %s", lo, hi, result[3])
            value += piece_value
            error += piece_error
            evaluations += counter.calls

        if not math.isfinite(value):
            raise CodDivergenceError(
                "Stieltjes integral is not finite", {"value": value}
            )
        if error > tol:
            _LOGGER.warning(
                "Quadrature error estimate %.3g exceeds tolerance %.3g", error, tol
            )
        return Integral(value=value, error=error, evaluations=evaluations)

    def total_mass(self, tol: float = 1e-12) -> float:
        """Total mass of the measure."""
        return self.integrate(lambda p, c: 1.0, tol=tol).value


class _CountingIntegrand:
    """Wraps a piece integrand and counts calls."""

    def __init__(
        self,
        integrand: Callable[[float, ProbabilityFunction], float],
        func: ProbabilityFunction,
    ) -> None:
        self._integrand = integrand
        self._func = func
        self.calls = 0

    def __call__(self, x: float) -> float:
        self.calls += 1
        return self._integrand(x, self._func)


def _pieces(
    segment: Segment,
) -> Iterable[tuple[Callable[[float, ProbabilityFunction], float], float, float]]:
    """Split a segment into quad-ready pieces (integrand, lo, hi)."""
    density = segment.density

    if segment.lo < 0.5:
        hi = min(segment.hi, 0.5)
        exponent = segment.lower_exponent
        if segment.lo == 0.0 and exponent < 0.0:
            power = 1.0 / (exponent + 1.0)

            def lower_substituted(s: float, func: ProbabilityFunction) -> float:
                p = max(s**power, TINY_PROB)
                return func(p, 1.0 - p) * density(p, 1.0 - p) * p**-exponent * power

            yield lower_substituted, 0.0, hi ** (exponent + 1.0)
        else:

            def lower(p: float, func: ProbabilityFunction) -> float:
                p = max(p, TINY_PROB)
                return func(p, 1.0 - p) * density(p, 1.0 - p)

            yield lower, segment.lo, hi

    if segment.hi > 0.5:
        lo = max(segment.lo, 0.5)
        exponent = segment.upper_exponent
        c_hi = 1.0 - lo
        if segment.hi == 1.0 and exponent < 0.0:
            power = 1.0 / (exponent + 1.0)

            def upper_substituted(s: float, func: ProbabilityFunction) -> float:
                c = max(s**power, TINY_PROB)
                return func(1.0 - c, c) * density(1.0 - c, c) * c**-exponent * power

            yield upper_substituted, 0.0, c_hi ** (exponent + 1.0)
        else:

            def upper(c: float, func: ProbabilityFunction) -> float:
                c = max(c, TINY_PROB)
                return func(1.0 - c, c) * density(1.0 - c, c)

            yield upper, 1.0 - segment.hi, c_hi


def _probit(p: float, c: float) -> float:
    """Standard normal quantile of p, using the complement in the upper half."""
    return float(special.ndtri(p)) if p <= 0.5 else -float(special.ndtri(c))


@dataclass(frozen=True)
class Distortion:
    """A builtin distortion function or the dual of one.

    Attributes:
        kind: Family tag.
        params: Family parameters (alpha, beta, gamma, k or lambda).
        dualized: True for the dual function p -> 1 - g(1 - p).
    """

    kind: DistortionKind
    params: tuple[float, ...] = ()
    dualized: bool = False

    def __post_init__(self) -> None:
        """Validate family parameters."""
        kind = DistortionKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(float(x) for x in self.params))

        if len(self.params) != _PARAM_COUNT[kind]:
            raise CodDomainError(
                f"Distortion '{kind}' expects {_PARAM_COUNT[kind]} parameter(s), "
                f"got {len(self.params)}",
                {"kind": str(kind), "params": self.params},
            )
        if kind is DistortionKind.IDENTITY:
            return

        value = self.params[0]
        valid = {
            DistortionKind.VAR: 0.0 < value < 1.0,
            DistortionKind.ES: 0.0 < value < 1.0,
            DistortionKind.POWER: 0.0 < value < math.inf,
            DistortionKind.DUAL_POWER: 1.0 <= value < math.inf,
            DistortionKind.WANG: math.isfinite(value),
        }[kind]
        if not valid:
            raise CodDomainError(
                f"Parameter {value} out of range for distortion '{kind}'",
                {"kind": str(kind), "value": value},
            )

    @property
    def parameter(self) -> float:
        """The single family parameter (NaN for identity)."""
        return self.params[0] if self.params else math.nan

    @property
    def label(self) -> str:
        """Spec string of the distortion (e.g. 'power:2', 'dual(var:0.95)')."""
        base = (
            str(self.kind)
            if not self.params
            else f"{self.kind}:{self.parameter:g}"
        )
        return f"dual({base})" if self.dualized else base

    @property
    def continuity(self) -> Continuity:
        """Continuity class; duality swaps left and right."""
        if self.kind is not DistortionKind.VAR:
            return Continuity.CONTINUOUS
        return Continuity.RIGHT if self.dualized else Continuity.LEFT

    @property
    def shape(self) -> Shape:
        """Analytic shape; duality swaps concave and convex."""
        shape = _base_shape(self.kind, self.parameter)
        if self.dualized and shape is Shape.CONCAVE:
            return Shape.CONVEX
        if self.dualized and shape is Shape.CONVEX:
            return Shape.CONCAVE
        return shape

    @property
    def is_concave(self) -> bool:
        """True for concave (including linear) distortions."""
        return self.shape in (Shape.CONCAVE, Shape.LINEAR)

    @property
    def is_convex(self) -> bool:
        """True for convex (including linear) distortions."""
        return self.shape in (Shape.CONVEX, Shape.LINEAR)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Probabilities where the function is not smooth."""
        if self.kind in (DistortionKind.VAR, DistortionKind.ES):
            level = self.parameter
            return (level,) if self.dualized else (1.0 - level,)
        return ()

    def eval(self, p: float | np.ndarray) -> float | np.ndarray:
        """Evaluate the distortion at p in [0, 1].

        Args:
            p: Probability or array of probabilities.

        Returns:
            g(p) with the same shape as p.
        """
        p = np.asarray(p, dtype=float)
        value = _evaluate(self.kind, self.parameter, self.dualized, p)
        return float(value) if value.ndim == 0 else value

    def inverse(self, t: float | np.ndarray) -> float | np.ndarray:
        """Generalized lower inverse inf{p : g(p) >= t}.

        Args:
            t: Level or array of levels in [0, 1].

        Returns:
            The inverse with the same shape as t.

        Raises:
            CodDomainError: For the VaR indicator, which is not invertible.
        """
        if self.kind is DistortionKind.VAR:
            raise CodDomainError(
                "The VaR indicator distortion has no inverse", {"label": self.label}
            )
        t = np.asarray(t, dtype=float)
        value = _invert(self.kind, self.parameter, self.dualized, t)
        return float(value) if value.ndim == 0 else value

    def dual(self) -> Distortion:
        """Return the dual distortion p -> 1 - g(1 - p)."""
        if self.kind is DistortionKind.IDENTITY:
            return self
        return replace(self, dualized=not self.dualized)


def _base_shape(kind: DistortionKind, value: float) -> Shape:
    match kind:
        case DistortionKind.VAR:
            return Shape.NEITHER
        case DistortionKind.ES:
            return Shape.CONCAVE
        case DistortionKind.POWER:
            if value == 1.0:
                return Shape.LINEAR
            return Shape.CONVEX if value > 1.0 else Shape.CONCAVE
        case DistortionKind.DUAL_POWER:
            return Shape.LINEAR if value == 1.0 else Shape.CONCAVE
        case DistortionKind.WANG:
            if value == 0.0:
                return Shape.LINEAR
            return Shape.CONCAVE if value > 0.0 else Shape.CONVEX
        case _:
            return Shape.LINEAR


def _evaluate(
    kind: DistortionKind, value: float, dualized: bool, p: np.ndarray
) -> np.ndarray:
    with np.errstate(divide="ignore"):
        match kind, dualized:
            case DistortionKind.VAR, False:
                return np.where(p > 1.0 - value, 1.0, 0.0)
            case DistortionKind.VAR, True:
                return np.where(p >= value, 1.0, 0.0)
            case DistortionKind.ES, False:
                return np.minimum(1.0, p / (1.0 - value))
            case DistortionKind.ES, True:
                return np.maximum(0.0, (p - value) / (1.0 - value))
            case DistortionKind.POWER, False:
                return p**value
            case DistortionKind.POWER, True:
                return -np.expm1(value * np.log1p(-p))
            case DistortionKind.DUAL_POWER, False:
                return -np.expm1(value * np.log1p(-p))
            case DistortionKind.DUAL_POWER, True:
                return p**value
            case DistortionKind.WANG, _:
                shift = -value if dualized else value
                return special.ndtr(special.ndtri(p) + shift)
            case _:
                return p.copy()


def _invert(
    kind: DistortionKind, value: float, dualized: bool, t: np.ndarray
) -> np.ndarray:
    with np.errstate(divide="ignore"):
        match kind, dualized:
            case DistortionKind.ES, False:
                return (1.0 - value) * t
            case DistortionKind.ES, True:
                return value + (1.0 - value) * t
            case DistortionKind.POWER, False:
                return t ** (1.0 / value)
            case DistortionKind.POWER, True:
                return -np.expm1(np.log1p(-t) / value)
            case DistortionKind.DUAL_POWER, False:
                return -np.expm1(np.log1p(-t) / value)
            case DistortionKind.DUAL_POWER, True:
                return t ** (1.0 / value)
            case DistortionKind.WANG, _:
                shift = -value if dualized else value
                return special.ndtr(special.ndtri(t) - shift)
            case _:
                return t.copy()


def build_distortion(
    kind: DistortionKind | str, params: Iterable[float] = ()
) -> Distortion:
    """Build a builtin distortion.

    Args:
        kind: Family tag ('var', 'es', 'power', 'dualpower', 'wang', 'id').
        params: Family parameters.

    Returns:
        The validated Distortion.

    Raises:
        CodDomainError: Unknown family or parameter out of range.
    """
    try:
        family = DistortionKind(kind)
    except ValueError:
        raise CodDomainError(f"Unknown distortion family '{kind}'") from None
    return Distortion(family, tuple(params))


def dual(d: Distortion) -> Distortion:
    """Return the dual distortion of d."""
    return d.dual()


def measure(d: Distortion) -> StieltjesMeasure:
    """Stieltjes decomposition of dg for g = d.

    Args:
        d: A builtin distortion or its dual.

    Returns:
        The measure with atoms and density segments.

    Raises:
        CodUnsupportedError: For an unknown family.
    """
    value = d.parameter
    match d.kind, d.dualized:
        case DistortionKind.VAR, False:
            return StieltjesMeasure(atoms=(Atom(1.0 - value, 1.0),))
        case DistortionKind.VAR, True:
            return StieltjesMeasure(atoms=(Atom(value, 1.0),))
        case DistortionKind.ES, False:
            return StieltjesMeasure(
                segments=(Segment(0.0, 1.0 - value, lambda p, c: 1.0 / (1.0 - value)),)
            )
        case DistortionKind.ES, True:
            return StieltjesMeasure(
                segments=(Segment(value, 1.0, lambda p, c: 1.0 / (1.0 - value)),)
            )
        case (DistortionKind.POWER, False) | (DistortionKind.DUAL_POWER, True):
            return StieltjesMeasure(
                segments=(
                    Segment(
                        0.0,
                        1.0,
                        lambda p, c: value * p ** (value - 1.0),
                        lower_exponent=value - 1.0,
                    ),
                )
            )
        case (DistortionKind.POWER, True) | (DistortionKind.DUAL_POWER, False):
            return StieltjesMeasure(
                segments=(
                    Segment(
                        0.0,
                        1.0,
                        lambda p, c: value * c ** (value - 1.0),
                        upper_exponent=value - 1.0,
                    ),
                )
            )
        case DistortionKind.WANG, _:
            shift = -value if d.dualized else value
            return StieltjesMeasure(
                segments=(
                    Segment(
                        0.0,
                        1.0,
                        lambda p, c: math.exp(-shift * _probit(p, c) - shift**2 / 2),
                    ),
                )
            )
        case DistortionKind.IDENTITY, _:
            return StieltjesMeasure(segments=(Segment(0.0, 1.0, lambda p, c: 1.0),))
    raise CodUnsupportedError(f"No Stieltjes decomposition for '{d.label}'")


def dual_measure(d: Distortion) -> StieltjesMeasure:
    """Stieltjes decomposition of the dual measure dh̄ for h = d."""
    return measure(d.dual())


def dominates(d: Distortion, d2: Distortion, grid_size: int = DOMINANCE_GRID) -> bool:
    """Check d(p) <= d2(p) on the uniform grid {i / grid_size}.

    Args:
        d: Candidate smaller distortion.
        d2: Candidate larger distortion.
        grid_size: Number of grid intervals (>= 2).

    Returns:
        True iff d is pointwise below d2 on the grid.

    Raises:
        CodDomainError: If grid_size < 2.
    """
    if grid_size < 2:
        raise CodDomainError(f"grid_size must be >= 2, got {grid_size}")
    grid = np.arange(grid_size + 1) / grid_size
    return bool(np.all(d.eval(grid) <= d2.eval(grid) + 1e-12))
