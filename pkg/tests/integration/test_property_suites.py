"""Property suites for the comparison results on randomized configurations.

Each suite draws configurations from the Gumbel, FGM, gamma and normal
families, keeps those whose hypotheses are confirmed by the verifiers and
asserts the concluded inequality with a slack of 1e-6.
"""

import numpy as np
import pytest

from codrisk.copula import FGM, DependenceNotion, Gumbel, check_dependence
from codrisk.distortion import build_distortion, dominates
from codrisk.marginal import Gamma, Normal, Weibull
from codrisk.orders import check_order
from codrisk.riskcore import (
    BivariateModel,
    cod,
    cod_at,
    delta_cod,
    delta_cod_at,
    delta_cod_type2_at,
    psi_convexity,
    threshold_quantile,
)

CONFIGURATIONS = 50
SLACK = 1e-6

pytestmark = pytest.mark.integration


def _smooth_distortion(rng: np.random.Generator):
    kind = rng.choice(["es", "power", "dualpower", "wang"])
    match kind:
        case "es":
            return build_distortion("es", (rng.uniform(0.1, 0.9),))
        case "power":
            return build_distortion("power", (rng.uniform(0.2, 3.0),))
        case "dualpower":
            return build_distortion("dualpower", (rng.uniform(1.0, 4.0),))
        case _:
            return build_distortion("wang", (rng.uniform(0.0, 1.0),))


def _ordered_pair(rng: np.random.Generator, order: str):
    """Draw two laws from a family in which the order can hold."""
    if order in ("st", "disp"):
        a, a_prime = np.sort(rng.uniform(0.2, 3.0, 2))
        return Gamma(a, 1.0), Gamma(a_prime, 1.0)
    # Normal laws: icx needs sigma <= sigma', icv needs sigma >= sigma'.
    mu, mu_prime = np.sort(rng.uniform(-1.0, 1.0, 2))
    low, high = np.sort(rng.uniform(0.5, 2.0, 2))
    sigma, sigma_prime = (low, high) if order == "icx" else (high, low)
    return Normal(mu, sigma), Normal(mu_prime, sigma_prime)


def _shaped_distortion(rng: np.random.Generator, shape: str | None):
    match shape:
        case "concave":
            return build_distortion("dualpower", (rng.uniform(1.0, 4.0),))
        case "convex":
            return build_distortion("power", (rng.uniform(1.0, 3.0),))
        case _:
            return _smooth_distortion(rng)


def test_concordance_and_distortion_monotonicity():
    """Test C <= C' and h <= h' give CoD <= CoD'."""
    rng = np.random.default_rng(41)
    y = Normal(0.0, 1.0)
    for _ in range(CONFIGURATIONS):
        # Arrange: theta <= theta' and power(gamma) <= power(gamma').
        theta, theta_prime = np.sort(rng.uniform(1.0, 5.0, 2))
        gamma_prime, gamma = np.sort(rng.uniform(0.2, 3.0, 2))
        h, h_prime = build_distortion("power", (gamma,)), build_distortion(
            "power", (gamma_prime,)
        )
        u = rng.uniform(0.5, 0.95)
        assert dominates(h, h_prime)

        # Act: Both CoDs.
        lower = cod_at(BivariateModel(Gumbel(theta), y, y), u, h).value
        upper = cod_at(BivariateModel(Gumbel(theta_prime), y, y), u, h_prime).value

        # Assert: Ordered.
        assert lower <= upper + SLACK, (theta, theta_prime, gamma, gamma_prime, u)


@pytest.mark.parametrize(
    ("copula", "notion", "increasing"),
    [
        (Gumbel(2.5), DependenceNotion.RTI_V_IN_U, True),
        (FGM(-0.7), DependenceNotion.RTD_V_IN_U, False),
    ],
)
def test_threshold_monotonicity(copula, notion, increasing):
    """Test CoD is monotone in the threshold under RTI and reversed under RTD."""
    # Arrange: Confirm the tail dependence hypothesis.
    assert check_dependence(copula, notion, grid_size=60).holds
    rng = np.random.default_rng(43)
    model = BivariateModel(copula, Normal(), Gamma(0.8, 1.0))

    for _ in range(CONFIGURATIONS):
        u, u_prime = np.sort(rng.uniform(0.0, 0.98, 2))
        h = _smooth_distortion(rng)

        # Act: CoD at both thresholds.
        low = cod_at(model, u, h).value
        high = cod_at(model, u_prime, h).value

        # Assert: Ordered in the direction of the dependence notion.
        if increasing:
            assert low <= high + SLACK, (u, u_prime, h.label)
        else:
            assert high <= low + SLACK, (u, u_prime, h.label)


def test_usual_order_of_the_measured_risk():
    """Test Y <=_st Y' gives CoD(Y) <= CoD(Y') under an SI copula."""
    rng = np.random.default_rng(47)
    x = Normal()
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: Gamma laws with shapes a <= a' and rates b >= b'.
        a, a_prime = np.sort(rng.uniform(0.2, 3.0, 2))
        b_prime, b = np.sort(rng.uniform(0.5, 2.0, 2))
        y, y_prime = Gamma(a, b), Gamma(a_prime, b_prime)
        if not check_order(y, y_prime, "st", grid_size=400).holds:
            continue
        copula = Gumbel(rng.uniform(1.0, 4.0))
        g, h = _smooth_distortion(rng), _smooth_distortion(rng)

        # Act: CoD of both measured risks.
        lower = cod(BivariateModel(copula, x, y), g, h).value
        upper = cod(BivariateModel(copula, x, y_prime), g, h).value

        # Assert: Ordered.
        assert lower <= upper + SLACK, (a, b, a_prime, b_prime)
        tested += 1


@pytest.mark.parametrize(
    ("copula", "notion", "order", "shape"),
    [
        (Gumbel(2.0), DependenceNotion.SI_V_IN_U, "icx", "concave"),
        (FGM(-0.8), DependenceNotion.NDS, "icv", "convex"),
    ],
)
def test_convex_orders_of_the_measured_risk(copula, notion, order, shape):
    """Test Y <=_icx Y' for concave h under SI, Y <=_icv Y' for convex h under NDS."""
    assert check_dependence(copula, notion, grid_size=60).holds
    rng = np.random.default_rng(71)
    x = Normal()
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: Normal laws ordered in the convex sense.
        y, y_prime = _ordered_pair(rng, order)
        if not check_order(y, y_prime, order, grid_size=400).holds:
            continue
        g = _smooth_distortion(rng)
        h = _shaped_distortion(rng, shape)
        assert h.is_concave if shape == "concave" else h.is_convex

        # Act: CoD of both measured risks.
        lower = cod(BivariateModel(copula, x, y), g, h).value
        upper = cod(BivariateModel(copula, x, y_prime), g, h).value

        # Assert: Ordered.
        assert lower <= upper + SLACK, (y.label, y_prime.label, g.label, h.label)
        tested += 1
    assert tested >= CONFIGURATIONS


def test_dispersive_order_of_contributions():
    """Test C <= C' and Y <=_disp Y' give Delta CoD(Y) <= Delta CoD(Y')."""
    rng = np.random.default_rng(53)
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: Common rate, shapes a <= a', concordance theta <= theta'.
        a, a_prime = np.sort(rng.uniform(0.2, 3.0, 2))
        rate = rng.uniform(0.5, 2.0)
        y, y_prime = Gamma(a, rate), Gamma(a_prime, rate)
        if not check_order(y, y_prime, "disp", grid_size=400).holds:
            continue
        theta, theta_prime = np.sort(rng.uniform(1.0, 4.0, 2))
        u = rng.uniform(0.5, 0.95)
        h = _smooth_distortion(rng)

        # Act: Both contributions.
        lower = delta_cod_at(BivariateModel(Gumbel(theta), y, y), u, h).value
        upper = delta_cod_at(
            BivariateModel(Gumbel(theta_prime), y_prime, y_prime), u, h
        ).value

        # Assert: Ordered.
        assert lower <= upper + SLACK, (a, a_prime, theta, theta_prime, u, h.label)
        tested += 1
    assert tested >= CONFIGURATIONS


@pytest.mark.parametrize(("copula", "sign"), [(Gumbel(2.0), 1.0), (FGM(-0.8), -1.0)])
def test_distortion_monotonicity_of_contributions_for_dfr_risks(copula, sign):
    """Test h <= h' orders Delta CoD for a DFR risk, reversed under FGM(alpha < 0)."""
    rng = np.random.default_rng(59)
    y = Gamma(0.2, 1.0)
    assert y.is_dfr
    model = BivariateModel(copula, Normal(), y)
    for _ in range(CONFIGURATIONS):
        # Arrange: power(gamma) <= power(gamma').
        gamma_prime, gamma = np.sort(rng.uniform(0.1, 4.0, 2))
        h, h_prime = build_distortion("power", (gamma,)), build_distortion(
            "power", (gamma_prime,)
        )
        u = rng.uniform(0.5, 0.95)

        # Act: Contributions for both distortions.
        small = delta_cod_at(model, u, h).value
        large = delta_cod_at(model, u, h_prime).value

        # Assert: Ordered with the sign of the dependence.
        assert sign * (large - small) >= -SLACK, (gamma, gamma_prime, u)


@pytest.mark.parametrize(
    ("copula", "notion", "stressed_above"),
    [(Gumbel(2.0), DependenceNotion.PDS, True), (FGM(-0.8), DependenceNotion.NDS, False)],
)
def test_type_two_contributions(copula, notion, stressed_above):
    """Test Y <=_disp Y' orders the Type II contribution.

    Under PDS the stressed level lies above the benchmark, under NDS below.
    """
    assert check_dependence(copula, notion, grid_size=60).holds
    rng = np.random.default_rng(61)
    x = Normal()
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: Dispersively ordered gamma risks and two levels.
        a, a_prime = np.sort(rng.uniform(0.2, 3.0, 2))
        y, y_prime = Gamma(a, 1.0), Gamma(a_prime, 1.0)
        if not check_order(y, y_prime, "disp", grid_size=400).holds:
            continue
        low, high = np.sort(rng.uniform(0.0, 0.95, 2))
        u_g, u_g_tilde = (high, low) if stressed_above else (low, high)
        h = _smooth_distortion(rng)

        # Act: Type II contributions of both risks.
        lower = delta_cod_type2_at(BivariateModel(copula, x, y), u_g, u_g_tilde, h)
        upper = delta_cod_type2_at(
            BivariateModel(copula, x, y_prime), u_g, u_g_tilde, h
        )

        # Assert: Ordered.
        assert lower.value <= upper.value + SLACK, (a, a_prime, u_g, u_g_tilde)
        tested += 1
    assert tested >= CONFIGURATIONS


def test_paired_risks():
    """Test X <=_st Y and u_g^X >= u_g^Y give CoD[X|Y] <= CoD[Y|X]."""
    rng = np.random.default_rng(67)
    tested = 0
    for _ in range(3 * CONFIGURATIONS):
        # Arrange: Gamma pair with X <=_st Y under a symmetric RTI copula.
        a, a_prime = np.sort(rng.uniform(0.2, 3.0, 2))
        x, y = Gamma(a, 1.0), Gamma(a_prime, 1.0)
        g = build_distortion("power", (rng.uniform(0.1, 0.9),))
        if threshold_quantile(g, x) < threshold_quantile(g, y):
            continue
        if not check_order(x, y, "st", grid_size=400).holds:
            continue
        model = BivariateModel(Gumbel(rng.uniform(1.0, 4.0)), x, y)
        h = _smooth_distortion(rng)

        # Act: CoD of Y given X and of X given Y.
        y_given_x = cod(model, g, h).value
        x_given_y = cod(model.swap(), g, h).value

        # Assert: Ordered.
        assert x_given_y <= y_given_x + SLACK, (a, a_prime, g.label, h.label)
        tested += 1
        if tested == CONFIGURATIONS:
            break
    assert tested >= CONFIGURATIONS


@pytest.mark.parametrize(
    ("copula", "notion", "order", "shape"),
    [
        (FGM(-0.7), DependenceNotion.RTD_V_IN_U, "st", None),
        (Gumbel(2.0), DependenceNotion.PDS, "icx", "concave"),
        (FGM(-0.7), DependenceNotion.NDS, "icv", "convex"),
    ],
)
def test_paired_risks_under_marginal_orders(copula, notion, order, shape):
    """Test X <= Y in st, icx or icv gives CoD[X|Y] <= CoD[Y|X].

    A VaR conditioning distortion puts both thresholds at its level, so both
    threshold hypotheses hold with equality.
    """
    assert copula.is_symmetric
    assert check_dependence(copula, notion, grid_size=60).holds
    rng = np.random.default_rng(73)
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: An ordered pair and a common threshold.
        x, y = _ordered_pair(rng, order)
        if not check_order(x, y, order, grid_size=400).holds:
            continue
        g = build_distortion("var", (rng.uniform(0.5, 0.95),))
        h = _shaped_distortion(rng, shape)
        model = BivariateModel(copula, x, y)

        # Act: CoD of Y given X and of X given Y.
        y_given_x = cod(model, g, h).value
        x_given_y = cod(model.swap(), g, h).value

        # Assert: Ordered.
        assert x_given_y <= y_given_x + SLACK, (x.label, y.label, g.label, h.label)
        tested += 1
    assert tested >= CONFIGURATIONS


@pytest.mark.parametrize(
    ("copula", "notion", "sign"),
    [(Gumbel(2.0), DependenceNotion.PDS, 1.0), (FGM(-0.7), DependenceNotion.NDS, -1.0)],
)
def test_paired_contributions_under_dispersive_order(copula, notion, sign):
    """Test X <=_disp Y orders Delta CoD[X|Y] below Delta CoD[Y|X], reversed under NDS."""
    assert check_dependence(copula, notion, grid_size=60).holds
    rng = np.random.default_rng(79)
    tested = 0
    for _ in range(CONFIGURATIONS + 10):
        # Arrange: Dispersively ordered gamma pair and a common threshold.
        x, y = _ordered_pair(rng, "disp")
        if not check_order(x, y, "disp", grid_size=400).holds:
            continue
        g = build_distortion("var", (rng.uniform(0.5, 0.95),))
        h = _smooth_distortion(rng)
        model = BivariateModel(copula, x, y)

        # Act: Contributions in both directions.
        y_given_x = delta_cod(model, g, h).value
        x_given_y = delta_cod(model.swap(), g, h).value

        # Assert: Ordered with the sign of the dependence.
        assert sign * (y_given_x - x_given_y) >= -SLACK, (x.label, y.label, h.label)
        tested += 1
    assert tested >= CONFIGURATIONS


@pytest.mark.parametrize("k", [1.2, 2.0, 3.0, 4.0, 5.0])
def test_paired_contributions_under_excess_wealth_order(k):
    """Test X <=_ew Y, concave h and convex Psi give Delta CoD[X|Y] <= Delta CoD[Y|X]."""
    # Arrange: Weibull pair ordered in excess wealth only, Gumbel(1.5) at u = 0.9.
    x, y = Weibull(1.0, 2.0), Weibull(1.0, 1.0)
    model = BivariateModel(Gumbel(1.5), x, y)
    g = build_distortion("var", (0.9,))
    h = build_distortion("dualpower", (k,))
    assert h.is_concave
    assert check_order(x, y, "ew", grid_size=400).holds
    assert not check_order(x, y, "disp", grid_size=400).holds
    assert check_dependence(model.copula, DependenceNotion.PDS, grid_size=60).holds
    psi = psi_convexity(model.copula, 0.9, h)
    assert psi.holds, psi.first_violation

    # Act: Contributions in both directions.
    y_given_x = delta_cod(model, g, h).value
    x_given_y = delta_cod(model.swap(), g, h).value

    # Assert: Ordered.
    assert x_given_y <= y_given_x + SLACK
