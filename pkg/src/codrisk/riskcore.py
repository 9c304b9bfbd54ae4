"""Distortion risk measures, CoD risk measures and risk contributions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import pairwise

import numpy as np
from scipy import integrate, optimize

from .const import (
    BRACKET_EXPANSIONS,
    COD_TOL,
    CROSS_CHECK_TOL,
    DMEASURE_TOL,
    PSI_GRID,
    PSI_TOL,
    QUAD_EPSREL,
    QUAD_LIMIT,
    ROOT_RTOL,
    VALUE_XTOL,
)
from .copula import Copula, validate_conditioning
from .distortion import (
    Continuity,
    Distortion,
    DistortionKind,
    ProbabilityFunction,
    build_distortion,
    dual_measure,
)
from .exceptions import (
    CodDivergenceError,
    CodDomainError,
    CodInconsistencyError,
    CodUnsupportedError,
)
from .marginal import ArrayLike, Marginal
from .models import ClassicMeasures, OrderVerdict, RiskResult

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BivariateModel:
    """Joint law H(x, y) = C(F(x), G(y)) of a risk pair (X, Y).

    Attributes:
        copula: Dependence structure of (U, V) = (F(X), G(Y)).
        marginal_x: Law of the conditioning risk X.
        marginal_y: Law of the measured risk Y.
    """

    copula: Copula
    marginal_x: Marginal
    marginal_y: Marginal

    @property
    def label(self) -> str:
        """Spec string '<copula>,<marginal_x>,<marginal_y>'."""
        return f"{self.copula.label},{self.marginal_x.label},{self.marginal_y.label}"

    def swap(self) -> BivariateModel:
        """Model of (Y, X), i.e. with the roles of the risks exchanged.

        Raises:
            CodUnsupportedError: If the copula is not symmetric.
        """
        if not self.copula.is_symmetric:
            raise CodUnsupportedError(
                f"Cannot swap a model with the non-symmetric copula {self.copula.label}"
            )
        return BivariateModel(self.copula, self.marginal_y, self.marginal_x)


def _tail_integral(d: Distortion, m: Marginal, tol: float) -> tuple[float, float]:
    """D_g[X] as -∫_{-inf}^0 ḡ(F(t)) dt + ∫_0^inf g(F̄(t)) dt."""
    lo, hi = m.support
    knots = {min(lo, 0.0), 0.0, max(hi, 0.0)}
    knots |= {float(m.isf(s)) for s in d.breakpoints}
    edges = sorted(x for x in knots if min(lo, 0.0) <= x <= max(hi, 0.0))
    dual_d = d.dual()

    value = 0.0
    error = 0.0
    piece_tol = tol / max(2 * (len(edges) - 1), 1)
    for a, b in pairwise(edges):
        if b <= 0.0:
            sign = -1.0

            def integrand(t: float) -> float:
                return float(dual_d.eval(m.cdf(t)))

        else:
            sign = 1.0

            def integrand(t: float) -> float:
                return float(d.eval(m.sf(t)))

        piece, piece_error = integrate.quad(
            integrand, a, b, epsabs=piece_tol, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT
        )
        value += sign * piece
        error += piece_error

    if not math.isfinite(value):
        raise CodDivergenceError(
            f"Tail integral of {d.label} for {m.label} is not finite", {"value": value}
        )
    return value, error


def evaluate_distortion_measure(
    d: Distortion, m: Marginal, tol: float = DMEASURE_TOL, cross_check: bool = True
) -> RiskResult:
    """Distortion risk measure D_g[X] with its diagnostics.

    The value is the quantile integral ∫ F^-1 dḡ. With cross_check the tail
    integral of the definition is evaluated as well and both must agree.

    Args:
        d: Distortion g.
        m: Law of X.
        tol: Absolute quadrature tolerance.
        cross_check: Whether to compare against the tail integral.

    Returns:
        RiskResult with measure 'dmeasure' and u_g = F(D_g[X]).

    Raises:
        CodInconsistencyError: If the two representations disagree.
        CodDivergenceError: If an integral is not finite.
    """
    integral = dual_measure(d).integrate(m.quantile_from, tol)
    components: dict[str, float] = {"quantile_integral": integral.value}
    error = integral.error

    if cross_check:
        tail, tail_error = _tail_integral(d, m, tol)
        components["tail_integral"] = tail
        error = max(error, tail_error)
        bound = CROSS_CHECK_TOL * max(1.0, abs(integral.value))
        if abs(tail - integral.value) > bound:
            raise CodInconsistencyError(
                f"Representations of D[{d.label}] for {m.label} disagree",
                {"quantile_integral": integral.value, "tail_integral": tail},
                bound,
            )
        _LOGGER.debug(
            "D[%s] for %s: %r (tail integral %r)",
            d.label,
            m.label,
            integral.value,
            tail,
        )

    return RiskResult(
        measure="dmeasure",
        value=integral.value,
        u_g=float(m.cdf(integral.value)),
        error_estimate=error,
        evaluations=integral.evaluations,
        components=components,
    )


def distortion_measure(d: Distortion, m: Marginal) -> float:
    """Distortion risk measure D_g[X], cross-checked between representations."""
    return evaluate_distortion_measure(d, m).value


def threshold_quantile(g: Distortion, m: Marginal) -> float:
    """Threshold quantile u_g = F(D_g[X]).

    Args:
        g: Distortion of the conditioning risk.
        m: Law of X.

    Returns:
        The probability level of D_g[X].
    """
    if g.kind is DistortionKind.VAR and not g.dualized:
        return g.parameter
    u_g = evaluate_distortion_measure(g, m).u_g
    _LOGGER.debug("Threshold quantile of %s for %s: %r", g.label, m.label, u_g)
    return u_g


def _conditional_quantile(model: BivariateModel, u_g: float) -> ProbabilityFunction:
    """p -> G^-1(F^-1_{V|U>u_g}(p)), taking p and its complement."""
    copula, y = model.copula, model.marginal_y

    def quantile(p: float, c: float) -> float:
        if p <= 0.5:
            v = copula.cond_tail_quantile(u_g, p)
            return y.quantile_from(v, 1.0 - v)
        t = copula.cond_tail_upper_quantile(u_g, c)
        return y.quantile_from(1.0 - t, t)

    return quantile


def _require_left_continuous(h: Distortion) -> None:
    if h.continuity is Continuity.RIGHT:
        raise CodDomainError(
            f"Distortion {h.label} of Y must be left-continuous or continuous",
            {"label": h.label},
        )


def _integrate_conditional(
    measure_name: str,
    model: BivariateModel,
    u_g: float,
    h: Distortion,
    func: ProbabilityFunction,
    tol: float,
    components: dict[str, float] | None = None,
) -> RiskResult:
    integral = dual_measure(h).integrate(func, tol)
    root_finds = integral.evaluations if model.copula.uses_root_finding else 0
    _LOGGER.debug(
        "%s for %s at u=%r, h=%s: %r (%d evaluations)",
        measure_name,
        model.label,
        u_g,
        h.label,
        integral.value,
        integral.evaluations,
    )
    return RiskResult(
        measure=measure_name,
        value=integral.value,
        u_g=u_g,
        error_estimate=integral.error,
        evaluations=integral.evaluations,
        root_finds=root_finds,
        components=components or {},
    )


def cod_at(
    model: BivariateModel, u_g: float, h: Distortion, tol: float = COD_TOL
) -> RiskResult:
    """CoD risk measure at a given threshold quantile.

    Args:
        model: The risk pair.
        u_g: Conditioning level in [0, 1).
        h: Distortion of Y (left-continuous or continuous).
        tol: Absolute tolerance in units of Y.

    Returns:
        RiskResult with measure 'cod'.

    Raises:
        CodDegenerateConditioningError: If u_g = 1.
        CodDomainError: If h is right-continuous.
    """
    validate_conditioning(u_g)
    _require_left_continuous(h)
    return _integrate_conditional(
        "cod", model, u_g, h, _conditional_quantile(model, u_g), tol
    )


def cod(
    model: BivariateModel, g: Distortion, h: Distortion, tol: float = COD_TOL
) -> RiskResult:
    """CoD risk measure D_h[Y | X > D_g[X]]."""
    return cod_at(model, threshold_quantile(g, model.marginal_x), h, tol)


def delta_cod_at(
    model: BivariateModel, u_g: float, h: Distortion, tol: float = COD_TOL
) -> RiskResult:
    """Type I risk contribution CoD - D_h[Y] at a given threshold quantile.

    The difference is integrated as one integral; both terms are reported
    separately in the components.

    Args:
        model: The risk pair.
        u_g: Conditioning level in [0, 1).
        h: Distortion of Y.
        tol: Absolute tolerance in units of Y.

    Returns:
        RiskResult with measure 'delta_cod' and components 'cod' and 'base'.
    """
    validate_conditioning(u_g)
    _require_left_continuous(h)
    conditional = _conditional_quantile(model, u_g)
    y = model.marginal_y

    def difference(p: float, c: float) -> float:
        return conditional(p, c) - y.quantile_from(p, c)

    components = {
        "cod": cod_at(model, u_g, h, tol).value,
        "base": evaluate_distortion_measure(h, y, tol, cross_check=False).value,
    }
    return _integrate_conditional(
        "delta_cod", model, u_g, h, difference, tol, components
    )


def delta_cod(
    model: BivariateModel, g: Distortion, h: Distortion, tol: float = COD_TOL
) -> RiskResult:
    """Type I risk contribution CoD_{g,h}[Y|X] - D_h[Y]."""
    return delta_cod_at(model, threshold_quantile(g, model.marginal_x), h, tol)


def delta_cod_type2_at(
    model: BivariateModel,
    u_g: float,
    u_g_tilde: float,
    h: Distortion,
    tol: float = COD_TOL,
) -> RiskResult:
    """Type II risk contribution between two threshold quantiles.

    Args:
        model: The risk pair.
        u_g: Stressed conditioning level.
        u_g_tilde: Benchmark conditioning level (0.5 for the median benchmark).
        h: Distortion of Y.
        tol: Absolute tolerance in units of Y.

    Returns:
        RiskResult with measure 'delta_cod_type2'; components carry both CoD
        values and the benchmark level.
    """
    validate_conditioning(u_g)
    validate_conditioning(u_g_tilde)
    _require_left_continuous(h)
    if u_g == u_g_tilde:
        return RiskResult(
            measure="delta_cod_type2",
            value=0.0,
            u_g=u_g,
            components={"u_g_tilde": u_g_tilde},
        )

    stressed = _conditional_quantile(model, u_g)
    benchmark = _conditional_quantile(model, u_g_tilde)

    def difference(p: float, c: float) -> float:
        return stressed(p, c) - benchmark(p, c)

    components = {
        "cod": cod_at(model, u_g, h, tol).value,
        "cod_tilde": cod_at(model, u_g_tilde, h, tol).value,
        "u_g_tilde": u_g_tilde,
    }
    return _integrate_conditional(
        "delta_cod_type2", model, u_g, h, difference, tol, components
    )


def delta_cod_type2(
    model: BivariateModel,
    g: Distortion,
    g_tilde: Distortion,
    h: Distortion,
    tol: float = COD_TOL,
) -> RiskResult:
    """Type II risk contribution CoD_{g,h} - CoD_{g̃,h}."""
    x = model.marginal_x
    return delta_cod_type2_at(
        model, threshold_quantile(g, x), threshold_quantile(g_tilde, x), h, tol
    )


def classic_measures(
    model: BivariateModel, alpha: float, beta: float, tol: float = COD_TOL
) -> ClassicMeasures:
    """CoVaR, CoES and MES as CoD risk measures with a VaR conditioning event.

    Args:
        model: The risk pair.
        alpha: Level of VaR_alpha[X].
        beta: Level of the VaR/ES of Y.
        tol: Absolute tolerance in units of Y.

    Returns:
        ClassicMeasures with covar, coes and mes.
    """
    g = build_distortion(DistortionKind.VAR, (alpha,))
    identity = build_distortion(DistortionKind.IDENTITY)
    var_beta = build_distortion(DistortionKind.VAR, (beta,))
    es_beta = build_distortion(DistortionKind.ES, (beta,))
    return ClassicMeasures(
        covar=_renamed(cod(model, g, var_beta, tol), "covar"),
        coes=_renamed(cod(model, g, es_beta, tol), "coes"),
        mes=_renamed(cod(model, g, identity, tol), "mes"),
    )


def _renamed(result: RiskResult, name: str) -> RiskResult:
    return RiskResult(
        measure=name,
        value=result.value,
        u_g=result.u_g,
        error_estimate=result.error_estimate,
        evaluations=result.evaluations,
        root_finds=result.root_finds,
        components=result.components,
    )


def psi_curve(c: Copula, u_g: float, h: Distortion, t: np.ndarray) -> np.ndarray:
    """Ψ(t) = h̄(A(h̄^-1(t))) on the given levels.

    Raises:
        CodDomainError: For VaR distortions, whose dual has no inverse.
    """
    validate_conditioning(u_g)
    if h.kind is DistortionKind.VAR:
        raise CodDomainError(
            f"Ψ needs an invertible dual distortion, got {h.label}", {"label": h.label}
        )
    h_bar = h.dual()
    a = c.cond_tail_cdf(u_g, h_bar.inverse(np.asarray(t, dtype=float)))
    return np.asarray(h_bar.eval(a), dtype=float)


def psi_convexity(
    c: Copula, u_g: float, h: Distortion, grid_size: int = PSI_GRID
) -> OrderVerdict:
    """Check convexity of Ψ(t) = h̄(A(h̄^-1(t))) with A the tail-weight function.

    Args:
        c: The copula.
        u_g: Conditioning level in [0, 1).
        h: Distortion of Y with strictly increasing dual.
        grid_size: Number of points of the uniform t-grid on [0, 1].

    Returns:
        Verdict on the second differences with the worst one as margin.

    Raises:
        CodDomainError: For VaR distortions or grid_size < 3.
    """
    if grid_size < 3:
        raise CodDomainError(f"grid_size must be >= 3, got {grid_size}")

    t = np.linspace(0.0, 1.0, grid_size)
    psi = psi_curve(c, u_g, h, t)
    second = psi[:-2] - 2.0 * psi[1:-1] + psi[2:]
    return OrderVerdict.from_slack(
        "psi_convex",
        t[1:-1].reshape(-1, 1),
        np.zeros_like(second),
        second,
        PSI_TOL,
        grid_size,
    )


@dataclass(frozen=True)
class ConditionalMarginal(Marginal):
    """Law of Y given X > F^-1(u_g), with G(Y) = V and F(X) = U.

    Attributes:
        model: The risk pair.
        u_g: Conditioning level in [0, 1).
    """

    family = "conditional"
    model: BivariateModel
    u_g: float

    def __post_init__(self) -> None:
        """Validate the conditioning level."""
        validate_conditioning(self.u_g)

    @property
    def params(self) -> tuple[float, ...]:
        """Conditioning level."""
        return (self.u_g,)

    @property
    def label(self) -> str:
        """Description of the conditioning."""
        y, copula = self.model.marginal_y, self.model.copula
        return f"{y.label} | U > {self.u_g:g} ({copula.label})"

    @property
    def support(self) -> tuple[float, float]:
        """Support of Y."""
        return self.model.marginal_y.support

    @property
    def mean(self) -> float:
        """Conditional expectation (MES at level u_g)."""
        return dual_measure(build_distortion(DistortionKind.IDENTITY)).integrate(
            self.quantile_from
        ).value

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """F_{V|U>u_g}(G(x))."""
        return self.model.copula.cond_tail_cdf(self.u_g, self.model.marginal_y.cdf(x))

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Conditional survival, from the survival of Y."""
        return self.model.copula.cond_tail_survival(
            self.u_g, self.model.marginal_y.sf(x)
        )

    def quantile_from(self, p: float, c: float) -> float:
        """Conditional quantile at level p given p and 1 - p."""
        return _conditional_quantile(self.model, self.u_g)(p, c)

    def ppf(self, p: ArrayLike) -> ArrayLike:
        """Conditional quantile."""
        return np.vectorize(lambda q: self.quantile_from(q, 1.0 - q))(p)

    def isf(self, c: ArrayLike) -> ArrayLike:
        """Conditional upper quantile, by a root of the conditional survival."""
        return np.vectorize(self._survival_root, otypes=[float])(c)

    def _survival_root(self, c: float) -> float:
        lo, hi = self.support
        if c >= 1.0:
            return lo
        if c <= 0.0:
            return hi

        start = float(self.model.marginal_y.isf(c))
        width = max(1.0, abs(start))
        a, b = max(start - width, lo), min(start + width, hi)
        for _ in range(BRACKET_EXPANSIONS):
            if self.sf(a) >= c and self.sf(b) <= c:
                break
            width *= 2.0
            a, b = max(start - width, lo), min(start + width, hi)
        else:
            raise CodDivergenceError(
                f"No bracket for the conditional upper quantile at {c!r}",
                {"start": start, "width": width},
            )
        return optimize.brentq(
            lambda x: float(self.sf(x)) - c, a, b, xtol=VALUE_XTOL, rtol=ROOT_RTOL
        )

    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Density by central differences of the conditional df."""
        step = 1e-6 * np.maximum(1.0, np.abs(x))
        return (self.cdf(x + step) - self.cdf(x - step)) / (2 * step)


def conditional_marginal(model: BivariateModel, u_g: float) -> ConditionalMarginal:
    """Law of Y given U > u_g as a marginal."""
    return ConditionalMarginal(model, u_g)


def cod_by_definition(
    model: BivariateModel, g: Distortion, h: Distortion, tol: float = DMEASURE_TOL
) -> float:
    """D_h of the conditional law of Y, by the tail integral of the definition.

    Only the conditional df and survival enter, including the knots at the
    kinks of h, so no conditional quantile of the representation used by
    cod() is computed.
    """
    u_g = threshold_quantile(g, model.marginal_x)
    value, _ = _tail_integral(h, conditional_marginal(model, u_g), tol)
    return value
