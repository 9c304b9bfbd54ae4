"""Unit tests for copulas, conditional tail laws and dependence notions."""

import numpy as np
import pytest

from codrisk.copula import (
    FGM,
    Comonotonic,
    Copula,
    DependenceNotion,
    Gumbel,
    Independence,
    build_copula,
    check_dependence,
    concordance_leq,
    cond_tail_cdf,
    cond_tail_quantile,
    cond_tail_upper_quantile,
    tail_weight,
)
from codrisk.exceptions import CodDegenerateConditioningError, CodDomainError

COPULAS = [Gumbel(1.0), Gumbel(2.0), Gumbel(5.0), FGM(-0.8), FGM(0.6), Independence()]


def test_reference_values(reference_values):
    """Test closed-form copula values."""
    # Arrange: Expected values.
    expected = reference_values["copula_values"]

    # Act and Assert: Gumbel(2) and FGM(0.8) at the center of the square.
    assert Gumbel(2.0).cdf(0.5, 0.5) == pytest.approx(expected["gumbel_2_at_half"])
    assert FGM(0.8).cdf(0.5, 0.5) == pytest.approx(expected["fgm_0.8_at_half"])


def test_gumbel_one_is_independence():
    """Test that theta = 1 gives the independence copula."""
    # Arrange: Interior grid.
    u, v = np.meshgrid(np.linspace(0.05, 0.95, 10), np.linspace(0.05, 0.95, 10))

    # Act and Assert: Same values.
    assert np.allclose(Gumbel(1.0).cdf(u, v), u * v, atol=1e-14)


@pytest.mark.parametrize("copula", [*COPULAS, Comonotonic()])
def test_frechet_bounds(copula):
    """Test W <= C <= M on a grid."""
    # Arrange: Interior grid.
    u, v = np.meshgrid(np.linspace(0.01, 0.99, 25), np.linspace(0.01, 0.99, 25))

    # Act: Evaluate the copula.
    values = copula.cdf(u, v)

    # Assert: Within the Frechet-Hoeffding bounds.
    assert np.all(values >= np.maximum(u + v - 1.0, 0.0) - 1e-14)
    assert np.all(values <= np.minimum(u, v) + 1e-14)


@pytest.mark.parametrize("copula", COPULAS)
def test_conditional_tail_quantile_inverts_cdf(copula):
    """Test cond_tail_quantile is the inverse of cond_tail_cdf."""
    for u in (0.0, 0.5, 0.95):
        for p in (0.01, 0.3, 0.7, 0.99):
            # Act: Quantile and back.
            v = cond_tail_quantile(copula, u, p)

            # Assert: Round trip within root-finding accuracy.
            assert cond_tail_cdf(copula, u, v) == pytest.approx(p, abs=1e-10)


@pytest.mark.parametrize("copula", COPULAS)
def test_upper_quantile_resolves_tiny_tail_probabilities(copula):
    """Test the upper conditional quantile for tail probabilities near zero."""
    for q in (1e-3, 1e-9, 1e-15):
        # Act: Solve for the level.
        t = cond_tail_upper_quantile(copula, 0.9, q)

        # Assert: Relative accuracy is kept.
        assert float(copula.cond_tail_survival(0.9, t)) == pytest.approx(q, rel=1e-8)


def test_gumbel_tail_survival_matches_generic_formula():
    """Test the cancellation-free Gumbel survival against the generic one."""
    # Arrange: Moderate levels where the generic formula is accurate.
    copula = Gumbel(2.5)
    t = np.array([0.05, 0.3, 0.7])

    # Act: Specialized and base-class evaluations.
    specialized = copula.cond_tail_survival(0.8, t)
    generic = Copula.cond_tail_survival(copula, 0.8, t)

    # Assert: Agreement.
    assert np.allclose(specialized, generic, atol=1e-12)


@pytest.mark.parametrize("copula", [Gumbel(2.0), FGM(-0.5)])
def test_partial_derivative_closed_forms(copula):
    """Test the closed-form h-functions against central differences."""
    # Arrange: Interior grid.
    u, v = np.meshgrid(np.linspace(0.1, 0.9, 9), np.linspace(0.1, 0.9, 9))

    # Act: Closed form and numerical derivative.
    closed = copula.partial_u(u, v)
    numeric = Copula.partial_u(copula, u, v)

    # Assert: Agreement.
    assert np.allclose(closed, numeric, atol=1e-6)


@pytest.mark.parametrize("copula", [Gumbel(3.0), FGM(0.9), FGM(-0.9), Independence()])
def test_sample_conditional_inverts_h_function(copula):
    """Test conditional inversion used by the sampler."""
    # Arrange: Grid of uniform pairs.
    u, w = (x.ravel() for x in np.meshgrid(np.linspace(0.1, 0.9, 5), np.linspace(0.05, 0.95, 7)))

    # Act: Invert the h-function.
    v = copula.sample_conditional(u, w)

    # Assert: The h-function maps v back to w.
    assert np.allclose(copula.partial_u(u, v), w, atol=1e-6)


def test_comonotonic_conditional_laws():
    """Test the degenerate conditional laws of the upper Frechet bound."""
    # Arrange: Comonotonic copula.
    copula = Comonotonic()

    # Act and Assert: Conditional tail quantiles are affine.
    assert cond_tail_quantile(copula, 0.8, 0.5) == pytest.approx(0.9)
    assert cond_tail_upper_quantile(copula, 0.8, 0.5) == pytest.approx(0.1)
    assert cond_tail_cdf(copula, 0.8, 0.5) == 0.0


def test_tail_weight_under_independence():
    """Test A(t) = t for the independence copula."""
    # Arrange: Levels.
    t = np.linspace(0.0, 1.0, 5)

    # Act and Assert: Identity.
    assert np.allclose(tail_weight(Independence(), 0.7, t), t)


def test_conditioning_validation():
    """Test degenerate and invalid conditioning levels."""
    # Act and Assert: u = 1 is degenerate, u > 1 and p = 0 are invalid.
    with pytest.raises(CodDegenerateConditioningError, match="probability zero"):
        cond_tail_quantile(Gumbel(2.0), 1.0, 0.5)
    with pytest.raises(CodDomainError, match="must lie in"):
        cond_tail_quantile(Gumbel(2.0), 1.5, 0.5)
    with pytest.raises(CodDomainError, match="p must lie in"):
        cond_tail_quantile(Gumbel(2.0), 0.5, 0.0)


def test_build_copula_validation():
    """Test the factory and parameter validation."""
    # Act and Assert: Valid builds and failures.
    assert build_copula("gumbel", (2,)) == Gumbel(2.0)
    assert build_copula("indep") == Independence()
    with pytest.raises(CodDomainError, match="theta must be >= 1"):
        build_copula("gumbel", (0.5,))
    with pytest.raises(CodDomainError, match=r"alpha must lie in \[-1, 1\]"):
        build_copula("fgm", (1.5,))
    with pytest.raises(CodDomainError, match="Unknown copula family"):
        build_copula("clayton", (2,))
    with pytest.raises(CodDomainError, match="Wrong number of parameters"):
        build_copula("indep", (1,))


def test_labels_and_symmetry():
    """Test spec labels and the symmetry flag."""
    # Act and Assert: Labels and exchangeability.
    assert Gumbel(2.0).label == "gumbel:2"
    assert FGM(-0.8).label == "fgm:-0.8"
    assert Independence().label == "indep"
    assert all(copula.is_symmetric for copula in COPULAS)


@pytest.mark.parametrize(
    "notion",
    [
        DependenceNotion.PQD,
        DependenceNotion.RTI_V_IN_U,
        DependenceNotion.RTI_U_IN_V,
        DependenceNotion.SI_V_IN_U,
        DependenceNotion.PDS,
        DependenceNotion.TP2,
    ],
)
def test_gumbel_positive_dependence(notion):
    """Test the positive dependence notions of the Gumbel copula."""
    # Act: Check the notion on a moderate grid.
    verdict = check_dependence(Gumbel(2.0), notion, grid_size=40)

    # Assert: It holds.
    assert verdict.holds, verdict.first_violation


@pytest.mark.parametrize(
    "notion",
    [
        DependenceNotion.NQD,
        DependenceNotion.RTD_V_IN_U,
        DependenceNotion.SD_U_IN_V,
        DependenceNotion.NDS,
        DependenceNotion.RR2,
    ],
)
def test_negative_fgm_dependence(notion):
    """Test the negative dependence notions of FGM with alpha < 0."""
    # Act: Check the notion.
    verdict = check_dependence(FGM(-0.8), notion, grid_size=40)

    # Assert: It holds.
    assert verdict.holds, verdict.first_violation


def test_failing_notion_reports_violation():
    """Test that a failing notion carries its first violation."""
    # Act: PQD of a negatively dependent copula.
    verdict = check_dependence(FGM(-0.8), "PQD", grid_size=20)

    # Assert: Fails with a located violation.
    assert not verdict.holds
    assert verdict.margin < 0
    assert verdict.first_violation is not None
    assert verdict.first_violation.gap < 0


def test_check_dependence_validation():
    """Test unknown notion and too small grid."""
    # Act and Assert: Domain errors.
    with pytest.raises(CodDomainError, match="Unknown dependence notion"):
        check_dependence(Gumbel(2.0), "LTD")
    with pytest.raises(CodDomainError, match="grid_size"):
        check_dependence(Gumbel(2.0), "PQD", grid_size=2)


def test_concordance_order():
    """Test the concordance order within the Gumbel and FGM families."""
    # Act and Assert: Increasing in the parameter, one way only.
    assert concordance_leq(Gumbel(1.5), Gumbel(3.0), grid_size=50).holds
    assert not concordance_leq(Gumbel(3.0), Gumbel(1.5), grid_size=50).holds
    assert concordance_leq(FGM(-0.8), FGM(-0.2), grid_size=50).holds
    assert concordance_leq(Independence(), Comonotonic(), grid_size=50).holds
