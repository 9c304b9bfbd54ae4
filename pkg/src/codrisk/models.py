"""Result models shared by the numerical modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class Violation:
    """Location and values of the first failing grid point of a check.

    Attributes:
        location: Grid coordinates of the failure (x, (u, v), p, ...).
        lhs: Value of the side that should be smaller.
        rhs: Value of the side that should be larger.
    """

    location: tuple[float, ...]
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        """Signed slack rhs - lhs (negative for a violation)."""
        return self.rhs - self.lhs


@dataclass(frozen=True)
class OrderVerdict:
    """Result of a grid-based order, dependence or convexity check.

    Attributes:
        relation: Name of the checked relation (e.g. 'st', 'TP2', 'psi').
        holds: True iff margin >= -tolerance.
        margin: Minimal signed slack observed over the grid.
        tolerance: Tolerance used for the verdict.
        grid_size: Number of grid points per axis.
        first_violation: First failing grid point, if any.
    """

    relation: str
    holds: bool
    margin: float
    tolerance: float
    grid_size: int
    first_violation: Violation | None = None

    @classmethod
    def from_slack(
        cls,
        relation: str,
        locations: np.ndarray,
        lhs: np.ndarray,
        rhs: np.ndarray,
        tolerance: float,
        grid_size: int,
    ) -> OrderVerdict:
        """Build a verdict from pointwise 'lhs <= rhs' comparisons.

        NaN slacks (both sides undefined at a point) carry no information and
        are skipped.

        Args:
            relation: Name of the checked relation.
            locations: Array of shape (n, k) with the coordinates of each point.
            lhs: Values that should not exceed rhs, shape (n,).
            rhs: Upper values, shape (n,).
            tolerance: Allowed negative slack.
            grid_size: Grid size reported with the verdict.

        Returns:
            A new OrderVerdict.
        """
        lhs = np.asarray(lhs, dtype=float).ravel()
        rhs = np.asarray(rhs, dtype=float).ravel()
        locations = np.asarray(locations, dtype=float).reshape(lhs.size, -1)

        with np.errstate(invalid="ignore"):
            slack = rhs - lhs
        # +inf <= +inf and -inf <= -inf are fine
        slack = np.where((lhs == rhs) & np.isinf(lhs), 0.0, slack)

        informative = ~np.isnan(slack)
        margin = float(np.min(slack[informative])) if informative.any() else 0.0

        failing = np.flatnonzero(informative & (slack < -tolerance))
        violation = None
        if failing.size:
            index = failing[0]
            violation = Violation(
                location=tuple(float(x) for x in locations[index]),
                lhs=float(lhs[index]),
                rhs=float(rhs[index]),
            )

        return cls(
            relation=relation,
            holds=violation is None,
            margin=margin,
            tolerance=tolerance,
            grid_size=grid_size,
            first_violation=violation,
        )

    @classmethod
    def combine(cls, relation: str, *verdicts: OrderVerdict) -> OrderVerdict:
        """Conjunction of several verdicts (e.g. PDS from both SI directions)."""
        failing = next((v for v in verdicts if not v.holds), None)
        return cls(
            relation=relation,
            holds=failing is None,
            margin=min(v.margin for v in verdicts),
            tolerance=max(v.tolerance for v in verdicts),
            grid_size=max(v.grid_size for v in verdicts),
            first_violation=failing.first_violation if failing else None,
        )

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready representation."""
        violation = None
        if self.first_violation is not None:
            violation = {
                "location": list(self.first_violation.location),
                "lhs": self.first_violation.lhs,
                "rhs": self.first_violation.rhs,
            }
        return {
            "relation": self.relation,
            "holds": self.holds,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "grid_size": self.grid_size,
            "first_violation": violation,
        }


@dataclass(frozen=True)
class RiskResult:
    """Value of a risk measure together with its numerical diagnostics.

    Attributes:
        measure: Name of the measure (e.g. 'cod', 'delta_cod').
        value: Measure value in units of the Y marginal.
        u_g: Threshold quantile used for conditioning (NaN if none).
        error_estimate: Sum of the absolute quadrature error estimates.
        evaluations: Number of integrand evaluations.
        root_finds: Number of conditional quantiles obtained by root finding.
        components: Named partial values (e.g. both terms of a contribution).
    """

    measure: str
    value: float
    u_g: float = math.nan
    error_estimate: float = 0.0
    evaluations: int = 0
    root_finds: int = 0
    components: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready representation."""
        return {
            "measure": self.measure,
            "value": self.value,
            "u_g": self.u_g,
            "err_estimate": self.error_estimate,
            "evaluations": self.evaluations,
            "root_finds": self.root_finds,
            "components": dict(self.components),
        }


@dataclass(frozen=True)
class ClassicMeasures:
    """CoVaR, CoES and MES of one model at levels (alpha, beta).

    Attributes:
        covar: VaR_beta of Y given X > VaR_alpha[X].
        coes: ES_beta of Y given X > VaR_alpha[X].
        mes: Mean of Y given X > VaR_alpha[X].
    """

    covar: RiskResult
    coes: RiskResult
    mes: RiskResult

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready representation."""
        return {
            "covar": self.covar.to_dict(),
            "coes": self.coes.to_dict(),
            "mes": self.mes.to_dict(),
        }


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate with batch standard error.

    Attributes:
        mean: Estimate computed on the pooled accepted sample.
        stderr: Standard error from the spread of the batch estimates.
        n_accepted: Number of pairs with U above the threshold.
        n_total: Number of pairs drawn.
        seed: Root seed of the random streams.
        batches: Number of independent batches.
        u_g: Conditioning threshold.
    """

    mean: float
    stderr: float
    n_accepted: int
    n_total: int
    seed: int
    batches: int
    u_g: float

    @property
    def acceptance_rate(self) -> float:
        """Share of drawn pairs that were accepted."""
        return self.n_accepted / self.n_total

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready representation."""
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "n_accepted": self.n_accepted,
            "n_total": self.n_total,
            "seed": self.seed,
            "batches": self.batches,
            "u_g": self.u_g,
        }


@dataclass(frozen=True)
class FigureRow:
    """One point of one figure series."""

    series: str
    x: float
    value: float


@dataclass(frozen=True)
class FigureCheck:
    """Outcome of one qualitative claim attached to a figure.

    Attributes:
        name: Human-readable claim.
        passed: Whether the claim holds on the computed grid.
        margin: Minimal signed slack (negative when violated).
    """

    name: str
    passed: bool
    margin: float


@dataclass(frozen=True)
class FigureTable:
    """Data and checks of one reproduced figure panel.

    Attributes:
        figure_id: Panel identifier (e.g. '1a').
        title: Short description of the plotted quantity.
        x_label: Name of the x-axis variable.
        rows: Points sorted by (series, x).
        checks: Qualitative claims evaluated on the rows.
        parameters: Effective parameters after overrides.
    """

    figure_id: str
    title: str
    x_label: str
    rows: list[FigureRow]
    checks: list[FigureCheck]
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def series_names(self) -> list[str]:
        """Series in output order."""
        return list(dict.fromkeys(row.series for row in self.rows))

    def series(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        """Return (x, value) arrays of one series sorted by x.

        Args:
            name: Series name.

        Returns:
            Tuple of x values and measure values.
        """
        points = sorted((row.x, row.value) for row in self.rows if row.series == name)
        if not points:
            return np.array([]), np.array([])
        xs, values = zip(*points, strict=True)
        return np.array(xs), np.array(values)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready representation."""
        return {
            "figure": self.figure_id,
            "title": self.title,
            "x_label": self.x_label,
            "parameters": self.parameters,
            "rows": [
                {"series": row.series, "x": row.x, "value": row.value}
                for row in self.rows
            ],
            "checks": [
                {"name": check.name, "passed": check.passed, "margin": check.margin}
                for check in self.checks
            ],
        }
