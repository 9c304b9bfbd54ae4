"""Monte Carlo estimates of CoD risk measures by rejection sampling."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np

from .const import (
    MC_DEFAULT_BATCHES,
    MC_DEFAULT_SAMPLES,
    MC_DEFAULT_SEED,
    MC_MAX_THRESHOLD,
    MC_MIN_ACCEPTED,
    MC_MIN_BATCHES,
    MC_MIN_SAMPLES,
)
from .copula import Copula
from .distortion import Continuity, Distortion
from .exceptions import CodDomainError, CodInsufficientAcceptanceError
from .models import McEstimate
from .riskcore import BivariateModel, threshold_quantile

_LOGGER = logging.getLogger(__name__)

# Keeps uniforms off the endpoints where conditional inversion degenerates.
_UNIFORM_EPS = 1e-16

Estimator = Callable[[np.ndarray, np.ndarray], float]


def sample_pairs(
    c: Copula, n: int, seed: int | np.random.SeedSequence = MC_DEFAULT_SEED
) -> np.ndarray:
    """Draw n pairs (U, V) from a copula by conditional inversion.

    U is uniform and V = ∂C/∂u(U, ·)^-1(W) for an independent uniform W.

    Args:
        c: The copula.
        n: Number of pairs (>= 1).
        seed: Root seed or seed sequence of the Philox stream.

    Returns:
        Array of shape (n, 2) with columns u and v.
    """
    if n < 1:
        raise CodDomainError(f"n must be >= 1, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    u = np.clip(rng.random(n), _UNIFORM_EPS, 1.0 - _UNIFORM_EPS)
    w = rng.random(n)
    return np.column_stack([u, c.sample_conditional(u, w)])


def l_statistic(sample: np.ndarray, h: Distortion) -> float:
    """Empirical distortion risk measure Σ y_(i) [h̄(i/m) - h̄((i-1)/m)].

    Args:
        sample: Observations (any order).
        h: Distortion of the observed risk.

    Returns:
        The L-statistic estimate of D_h.
    """
    m = sample.size
    weights = np.diff(h.dual().eval(np.arange(m + 1) / m))
    return float(np.sort(sample) @ weights)


def _quantiles(model: BivariateModel, v: np.ndarray) -> np.ndarray:
    y = model.marginal_y
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v <= 0.5, y.ppf(v), y.isf(1.0 - v))


def _validate(u_g: float, h: Distortion, n: int, batches: int) -> None:
    if n < MC_MIN_SAMPLES:
        raise CodDomainError(f"n must be >= {MC_MIN_SAMPLES}, got {n}", {"n": n})
    if batches < MC_MIN_BATCHES:
        raise CodDomainError(
            f"batches must be >= {MC_MIN_BATCHES}, got {batches}", {"batches": batches}
        )
    if not 0.0 <= u_g <= MC_MAX_THRESHOLD:
        raise CodDomainError(
            f"Threshold quantile {u_g} is too close to 1 for rejection sampling",
            {"u_g": u_g},
        )
    if h.continuity is Continuity.RIGHT:
        raise CodDomainError(f"Distortion {h.label} of Y must be left-continuous")


def _run_batches(
    model: BivariateModel,
    u_g: float,
    n: int,
    seed: int,
    batches: int,
    estimator: Estimator,
) -> McEstimate:
    """Estimate on independent Philox substreams and on the pooled sample."""
    sizes = [n // batches + (1 if i < n % batches else 0) for i in range(batches)]
    streams = np.random.SeedSequence(seed).spawn(batches)

    accepted_parts: list[np.ndarray] = []
    all_parts: list[np.ndarray] = []
    estimates: list[float] = []
    for index, (size, stream) in enumerate(zip(sizes, streams, strict=True)):
        pairs = sample_pairs(model.copula, size, stream)
        y = _quantiles(model, pairs[:, 1])
        accepted = y[pairs[:, 0] > u_g]
        if accepted.size == 0:
            raise CodInsufficientAcceptanceError(
                f"Batch {index} accepted no pairs above u_g={u_g}",
                {"batch": index, "u_g": u_g},
            )
        accepted_parts.append(accepted)
        all_parts.append(y)
        estimates.append(estimator(accepted, y))

    pooled = np.concatenate(accepted_parts)
    if pooled.size < MC_MIN_ACCEPTED:
        raise CodInsufficientAcceptanceError(
            f"Only {pooled.size} of {n} pairs accepted above u_g={u_g}",
            {"n_accepted": pooled.size, "u_g": u_g},
        )

    _LOGGER.debug(
        "Accepted %d of %d pairs (expected rate %.4g)", pooled.size, n, 1.0 - u_g
    )
    return McEstimate(
        mean=estimator(pooled, np.concatenate(all_parts)),
        stderr=float(np.std(estimates, ddof=1) / math.sqrt(batches)),
        n_accepted=int(pooled.size),
        n_total=n,
        seed=seed,
        batches=batches,
        u_g=u_g,
    )


def mc_cod_at(
    model: BivariateModel,
    u_g: float,
    h: Distortion,
    n: int = MC_DEFAULT_SAMPLES,
    seed: int = MC_DEFAULT_SEED,
    batches: int = MC_DEFAULT_BATCHES,
) -> McEstimate:
    """Monte Carlo CoD risk measure at a given threshold quantile.

    Pairs are drawn from the copula, those with U > u_g are kept and the
    L-statistic of G^-1(V) over the kept pairs estimates D_h[Y | U > u_g].

    Args:
        model: The risk pair.
        u_g: Conditioning level in [0, 0.999].
        h: Distortion of Y.
        n: Total number of pairs (>= 10^4).
        seed: Root seed.
        batches: Number of independent batches (>= 10).

    Returns:
        McEstimate with the pooled estimate and the batch standard error.

    Raises:
        CodDomainError: Invalid sample size, batch count or threshold.
        CodInsufficientAcceptanceError: Fewer than 100 accepted pairs.
    """
    _validate(u_g, h, n, batches)
    return _run_batches(
        model, u_g, n, seed, batches, lambda accepted, _: l_statistic(accepted, h)
    )


def mc_cod(
    model: BivariateModel,
    g: Distortion,
    h: Distortion,
    n: int = MC_DEFAULT_SAMPLES,
    seed: int = MC_DEFAULT_SEED,
    batches: int = MC_DEFAULT_BATCHES,
) -> McEstimate:
    """Monte Carlo CoD_{g,h}[Y|X], conditioning on U > F(D_g[X])."""
    u_g = threshold_quantile(g, model.marginal_x)
    return mc_cod_at(model, u_g, h, n, seed, batches)


def mc_delta_cod(
    model: BivariateModel,
    g: Distortion,
    h: Distortion,
    n: int = MC_DEFAULT_SAMPLES,
    seed: int = MC_DEFAULT_SEED,
    batches: int = MC_DEFAULT_BATCHES,
) -> McEstimate:
    """Monte Carlo Type I contribution: conditional minus unconditional L-statistic.

    Both terms are computed from the same sample.
    """
    u_g = threshold_quantile(g, model.marginal_x)
    _validate(u_g, h, n, batches)

    def estimator(accepted: np.ndarray, everything: np.ndarray) -> float:
        return l_statistic(accepted, h) - l_statistic(everything, h)

    return _run_batches(model, u_g, n, seed, batches, estimator)
