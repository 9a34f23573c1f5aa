"""Moment-based Brier score decompositions.

All operations here are pure functions of a :class:`MomentSummary`:

* ``bias_variance``  -- BS = Var(F - Y) + (mu_F - mu_Y)^2
* ``yates``          -- BS = var_F + var_Y - 2 cov_FY + (mu_F - mu_Y)^2
* ``alt_yates``      -- BS = (sigma_F - sigma_Y)^2
                            + 2 (sigma_F sigma_Y - cov_FY)
                            + (mu_F - mu_Y)^2

The third form rearranges the covariance decomposition into three
individually non-negative terms (variance mismatch, covariance deficit,
calibration-in-the-large): the Cauchy-Schwarz inequality bounds
|cov_FY| by sigma_F sigma_Y, so the deficit term can only dip below
zero through rounding, and a perfect forecast is exactly the case where
all three terms vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import DEFAULT_TOLERANCE, MomentSummary
from .errors import InternalConsistencyError, InvalidTolerance

__all__ = [
    "DecompositionReport",
    "OptimalityDiagnosis",
    "bias_variance",
    "yates",
    "alt_yates",
    "covariance_deficit_correlation_form",
    "check_optimality",
    "brier_from_moments",
]


def brier_from_moments(m: MomentSummary) -> float:
    """Reconstruct the Brier score from population moments.

    Exact (up to rounding) because BS = E[(F-Y)^2] expands to
    var_F + var_Y - 2 cov_FY + (mu_F - mu_Y)^2 under population moments.
    """
    d = m.mu_f - m.mu_y
    return m.var_f + m.var_y - 2.0 * m.cov_fy + d * d


@dataclass(frozen=True)
class DecompositionReport:
    """Named decomposition terms plus the score they must reconstruct.

    ``terms`` is an ordered tuple of (name, value) pairs; ``signs``
    records the sign convention (+1 adds, -1 subtracts) so consumers
    never have to guess which terms enter the reconstruction negatively
    (resolution and discrimination do). ``term_sum`` and ``residual``
    are recomputed on access, never stored.

    Exact schemes keep |residual| <= tolerance; the binned scheme in
    :mod:`brierdecomp.binning` may carry a larger residual, which is
    reported rather than hidden.
    """

    scheme: str
    terms: tuple[tuple[str, float], ...]
    brier: float
    tolerance: float = DEFAULT_TOLERANCE
    signs: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.signs:
            object.__setattr__(self, "signs", (1,) * len(self.terms))
        if len(self.signs) != len(self.terms):
            raise InternalConsistencyError("signs and terms length mismatch")
        names = [name for name, _ in self.terms]
        if len(set(names)) != len(names):
            raise InternalConsistencyError(f"duplicate term names in report: {names}")

    @property
    def term_sum(self) -> float:
        return math.fsum(s * v for s, (_, v) in zip(self.signs, self.terms))

    @property
    def residual(self) -> float:
        return self.brier - self.term_sum

    def value(self, name: str) -> float:
        for term_name, v in self.terms:
            if term_name == name:
                return v
        raise KeyError(name)


def bias_variance(m: MomentSummary, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Two-term split: variance of the forecast error plus squared bias."""
    d = m.mu_f - m.mu_y
    var_diff = m.var_f + m.var_y - 2.0 * m.cov_fy
    return DecompositionReport(
        scheme="bias_variance",
        terms=(("var_of_difference", var_diff), ("squared_bias", d * d)),
        brier=brier_from_moments(m),
        tolerance=tolerance,
    )


def yates(m: MomentSummary, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Covariance decomposition.

    The third term is -2 cov_FY and may be negative; this scheme makes
    no per-term non-negativity claim.
    """
    d = m.mu_f - m.mu_y
    return DecompositionReport(
        scheme="yates",
        terms=(
            ("forecast_variance", m.var_f),
            ("outcome_variance", m.var_y),
            ("minus_twice_covariance", -2.0 * m.cov_fy),
            ("squared_bias", d * d),
        ),
        brier=brier_from_moments(m),
        tolerance=tolerance,
    )


def alt_yates(m: MomentSummary, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Rearranged covariance decomposition with non-negative terms.

    Terms, in order: variance mismatch (sigma_F - sigma_Y)^2, covariance
    deficit 2 (sigma_F sigma_Y - cov_FY), calibration-in-the-large
    (mu_F - mu_Y)^2. A deficit in (-tolerance, 0) is rounding dust and
    is clamped to 0 (the pre-clamp value stays visible through the
    report residual); a deficit below -tolerance cannot arise from a
    valid summary and raises :class:`InternalConsistencyError`.
    """
    sf = m.sigma_f
    sy = m.sigma_y
    deficit = 2.0 * (sf * sy - m.cov_fy)
    if deficit < 0.0:
        if deficit <= -tolerance:
            raise InternalConsistencyError(
                f"covariance deficit {deficit!r} below -tolerance; summary violates Cauchy-Schwarz"
            )
        deficit = 0.0
    dmu = m.mu_f - m.mu_y
    dsig = sf - sy
    return DecompositionReport(
        scheme="alt_yates",
        terms=(
            ("variance_mismatch", dsig * dsig),
            ("covariance_deficit", deficit),
            ("calibration_in_the_large", dmu * dmu),
        ),
        brier=brier_from_moments(m),
        tolerance=tolerance,
    )


def covariance_deficit_correlation_form(m: MomentSummary) -> float | None:
    """Covariance deficit written as 2 sigma_F sigma_Y (1 - rho_FY).

    Requires both standard deviations to be positive for the correlation
    to exist; returns None (the distinguished "undefined" value, not an
    error) when either is zero. In that degenerate case the deficit
    itself is 0, since cov_FY must also vanish.
    """
    sf = m.sigma_f
    sy = m.sigma_y
    if sf == 0.0 or sy == 0.0:
        return None
    rho = m.cov_fy / (sf * sy)
    return 2.0 * sf * sy * (1.0 - rho)


@dataclass(frozen=True)
class OptimalityDiagnosis:
    """The three conditions a zero-Brier-score forecast must satisfy.

    Each gap is one term of the rearranged covariance decomposition:
    variance matching (sigma_F = sigma_Y), perfect positive correlation
    (cov_FY = sigma_F sigma_Y) and no bias (mu_F = mu_Y). The three
    conditions are reported independently; none is inferred from the
    others, since with finite samples any subset can hold on its own.
    """

    variance_gap: float
    correlation_gap: float
    bias_gap: float
    tolerance: float

    @property
    def variance_matched(self) -> bool:
        return self.variance_gap <= self.tolerance

    @property
    def perfectly_correlated(self) -> bool:
        return self.correlation_gap <= self.tolerance

    @property
    def unbiased(self) -> bool:
        return self.bias_gap <= self.tolerance

    @property
    def is_perfect(self) -> bool:
        return self.variance_matched and self.perfectly_correlated and self.unbiased


def check_optimality(m: MomentSummary, tol: float = DEFAULT_TOLERANCE) -> OptimalityDiagnosis:
    """Evaluate the three optimality gaps against a tolerance.

    ``is_perfect`` is true iff all three gaps are within ``tol``; since
    the gaps sum to the Brier score, that forces BS <= 3 * tol, the
    empirical reading of "BS is zero iff forecast equals outcome on
    every record".
    """
    if not isinstance(tol, (int, float)) or math.isnan(tol) or tol <= 0.0:
        raise InvalidTolerance(f"tolerance must be a positive real, got {tol!r}")
    report = alt_yates(m, tolerance=tol)
    return OptimalityDiagnosis(
        variance_gap=report.value("variance_mismatch"),
        correlation_gap=report.value("covariance_deficit"),
        bias_gap=report.value("calibration_in_the_large"),
        tolerance=float(tol),
    )
