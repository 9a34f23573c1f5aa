"""Conditioning-based decompositions, computed by exact grouping.

Grouping on the distinct forecast values gives the Sanders split
(sharpness + reliability) and, via the law of total variance, the
uncertainty / resolution / reliability (URR) form. Grouping on the two
outcome classes gives the excess + correctness split and the
refinement / discrimination / correctness (RDC) form. Exact grouping
keeps every identity tight to rounding; any coarser grouping belongs to
:mod:`brierdecomp.binning`, where the gap becomes an explicit residual.

Forecast values are grouped by float equality: values that differ below
representation precision form distinct groups, and callers who want
coarsening must opt into binning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import DEFAULT_TOLERANCE, Dataset, _OnlineMoments, accumulate_moments, brier_score
from .decomp import DecompositionReport

__all__ = [
    "Conditioning",
    "PartitionGroup",
    "Partition",
    "partition_by_forecast",
    "partition_by_outcome",
    "sanders",
    "urr",
    "excess_correctness",
    "rdc",
]


class Conditioning(Enum):
    ON_FORECAST_EXACT = "on_forecast_exact"
    ON_FORECAST_BINNED = "on_forecast_binned"
    ON_OUTCOME = "on_outcome"


@dataclass(frozen=True)
class PartitionGroup:
    """Per-group weight and conditional statistics.

    For forecast conditioning, ``key`` is the shared forecast value and
    the conditional statistics describe the outcomes in the group; for
    outcome conditioning, ``key`` is the outcome class and the
    statistics describe the forecasts.
    """

    key: float
    weight: float
    cond_mean: float
    cond_var: float
    members: int


@dataclass(frozen=True)
class Partition:
    groups: tuple[PartitionGroup, ...]
    conditioning: Conditioning
    n: int


def _grouped(dataset: Dataset, by_forecast: bool) -> Partition:
    # One stable accumulator per group; groups ordered by key.
    accs: dict[float, _OnlineMoments] = {}
    for f, y in zip(dataset.forecasts, dataset.outcomes):
        key = f if by_forecast else float(y)
        acc = accs.get(key)
        if acc is None:
            acc = accs[key] = _OnlineMoments()
        acc.add(f, float(y))
    n = len(dataset)
    groups = []
    for key in sorted(accs):
        s = accs[key].summary()
        cond_mean = s.mu_y if by_forecast else s.mu_f
        cond_var = s.var_y if by_forecast else s.var_f
        groups.append(PartitionGroup(key, s.n / n, cond_mean, cond_var, s.n))
    conditioning = Conditioning.ON_FORECAST_EXACT if by_forecast else Conditioning.ON_OUTCOME
    return Partition(tuple(groups), conditioning, n)


def partition_by_forecast(dataset: Dataset) -> Partition:
    """Group records by distinct forecast value.

    Each group carries the conditional outcome mean (the empirical
    event frequency at that forecast value) and the conditional outcome
    variance, both population-weighted.
    """
    return _grouped(dataset, by_forecast=True)


def partition_by_outcome(dataset: Dataset) -> Partition:
    """Group records by outcome class (at most two groups).

    Each group carries the conditional forecast mean and variance. A
    one-class dataset simply yields a single group.
    """
    return _grouped(dataset, by_forecast=False)


def sanders(dataset: Dataset, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Sharpness + reliability, conditioning on the forecast values.

    sharpness   = E[Var(Y | F)]         (weighted conditional variances)
    reliability = E[(F - E[Y | F])^2]   (calibration gap per group)
    """
    part = partition_by_forecast(dataset)
    sharpness = math.fsum(g.weight * g.cond_var for g in part.groups)
    reliability = math.fsum(g.weight * (g.key - g.cond_mean) ** 2 for g in part.groups)
    return DecompositionReport(
        scheme="sanders",
        terms=(("sharpness", sharpness), ("reliability", reliability)),
        brier=brier_score(dataset),
        tolerance=tolerance,
    )


def urr(dataset: Dataset, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Uncertainty - resolution + reliability, conditioning on forecasts.

    Splitting sharpness with the law of total variance gives
    uncertainty = Var(Y) and resolution = Var(E[Y | F]); the report's
    sign convention subtracts resolution, so the signed term sum equals
    the Brier score.
    """
    part = partition_by_forecast(dataset)
    moments = accumulate_moments(dataset)
    uncertainty = moments.var_y
    resolution = math.fsum(g.weight * (g.cond_mean - moments.mu_y) ** 2 for g in part.groups)
    reliability = math.fsum(g.weight * (g.key - g.cond_mean) ** 2 for g in part.groups)
    return DecompositionReport(
        scheme="urr",
        terms=(
            ("uncertainty", uncertainty),
            ("resolution", resolution),
            ("reliability", reliability),
        ),
        signs=(1, -1, 1),
        brier=brier_score(dataset),
        tolerance=tolerance,
    )


def excess_correctness(dataset: Dataset, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Excess + correctness, conditioning on the outcome classes.

    excess      = E[Var(F | Y)]         (within-class forecast spread)
    correctness = E[(E[F | Y] - Y)^2]   (class-mean forecast error)
    """
    part = partition_by_outcome(dataset)
    excess = math.fsum(g.weight * g.cond_var for g in part.groups)
    correctness = math.fsum(g.weight * (g.cond_mean - g.key) ** 2 for g in part.groups)
    return DecompositionReport(
        scheme="excess_correctness",
        terms=(("excess", excess), ("correctness", correctness)),
        brier=brier_score(dataset),
        tolerance=tolerance,
    )


def rdc(dataset: Dataset, tolerance: float = DEFAULT_TOLERANCE) -> DecompositionReport:
    """Refinement - discrimination + correctness, conditioning on outcomes.

    Splitting excess with the law of total variance gives refinement =
    Var(F) and discrimination = Var(E[F | Y]); discrimination enters
    with a minus sign, mirroring resolution in the URR form.
    """
    part = partition_by_outcome(dataset)
    moments = accumulate_moments(dataset)
    refinement = moments.var_f
    discrimination = math.fsum(g.weight * (g.cond_mean - moments.mu_f) ** 2 for g in part.groups)
    correctness = math.fsum(g.weight * (g.cond_mean - g.key) ** 2 for g in part.groups)
    return DecompositionReport(
        scheme="rdc",
        terms=(
            ("refinement", refinement),
            ("discrimination", discrimination),
            ("correctness", correctness),
        ),
        signs=(1, -1, 1),
        brier=brier_score(dataset),
        tolerance=tolerance,
    )
