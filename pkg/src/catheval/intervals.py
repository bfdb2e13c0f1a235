"""95% confidence intervals for proportion metrics via the logit transform.

Proportions are treated as binomial probability estimates. Bounds are
computed on the logit scale and mapped back through the inverse logit, which
keeps them strictly inside (0, 1). Point estimates of exactly 0 or 1 have
undefined bounds, rendered as "( - )" in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from .metrics import MetricValue

_STANDARD_NORMAL = NormalDist()


@dataclass(frozen=True)
class IntervalEstimate:
    """A binomial point estimate with (possibly undefined) confidence bounds."""

    point: float
    lower: float | None
    upper: float | None
    confidence: float
    z: float
    n: int
    successes: int

    def __post_init__(self) -> None:
        if self.lower is not None:
            if not (self.lower < self.point < self.upper):
                raise ValueError(
                    f"bounds ({self.lower}, {self.upper}) do not bracket {self.point}"
                )

    @property
    def defined(self) -> bool:
        return self.lower is not None


def z_for_confidence(confidence: float) -> float:
    """Two-sided standard normal quantile, e.g. 1.959964 at 95%."""
    if not (0.0 < confidence < 1.0):
        raise ValueError(f"confidence {confidence} outside (0, 1)")
    return _STANDARD_NORMAL.inv_cdf(1.0 - (1.0 - confidence) / 2.0)


def logit_interval(successes: int, n: int, confidence: float = 0.95) -> IntervalEstimate:
    """Logit-transform confidence interval for ``successes`` out of ``n`` trials.

    On the logit scale the bounds are ``logit(p) +/- z * sqrt(1/(n*p*(1-p)))``.
    Bounds are Undefined when the point estimate is exactly 0 or 1.
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    if not (0 <= successes <= n):
        raise ValueError(f"successes {successes} outside 0..{n}")
    z = z_for_confidence(confidence)
    p = successes / n
    if p == 0.0 or p == 1.0:
        return IntervalEstimate(p, None, None, confidence, z, n, successes)
    center = math.log(p / (1.0 - p))
    se = math.sqrt(1.0 / (n * p * (1.0 - p)))
    lo = center - z * se
    hi = center + z * se
    inv = lambda x: 1.0 / (1.0 + math.exp(-x))  # noqa: E731
    return IntervalEstimate(p, inv(lo), inv(hi), confidence, z, n, successes)


def interval_for_metric(metric: MetricValue, confidence: float = 0.95) -> IntervalEstimate:
    """Interval for any proportion-type metric carrying integer counts."""
    if not metric.defined:
        raise ValueError("cannot build an interval for an undefined metric")
    if not metric.is_ratio:
        raise ValueError("metric has no integer numerator/denominator")
    return logit_interval(metric.numerator, metric.denominator, confidence)
