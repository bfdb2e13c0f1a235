"""Threshold-sweep construction of PR and ROC curves and their areas.

Both areas are rank statistics: invariant under any strictly monotone
transform of the scores. Tied scores cross the threshold together, so curves
are deterministic for tied inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metrics import MetricValue, UndefinedReason
from .validation import as_binary_array, check_equal_length


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float
    threshold: float


@dataclass(frozen=True)
class Curve:
    """Ordered (x, y, threshold) triples with the area under the trace.

    PR curves carry (recall, precision); ROC curves carry (FPR, TPR) and an
    anchor point (0, 0) at threshold +inf. Every other threshold is an
    observed score value.
    """

    kind: str  # "PR" or "ROC"
    points: tuple[CurvePoint, ...]
    area: MetricValue

    @property
    def defined(self) -> bool:
        return self.area.defined


def _sweep(scores, truth) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cumulative (threshold, tp, fp) from the highest score downward.

    Samples sharing a score enter together, one row per distinct score.
    """
    s = np.asarray(scores, dtype=np.float64)
    t = as_binary_array(truth, "truth", ndim=1)
    check_equal_length(s, t, "scores", "truth")
    if s.size == 0:
        raise ValueError("empty input")
    order = np.argsort(-s, kind="stable")
    s = s[order]
    t = t[order].astype(np.int64)
    last_of_group = np.ones(len(s), dtype=bool)
    last_of_group[:-1] = s[:-1] != s[1:]
    tp = np.cumsum(t)[last_of_group]
    pp = np.flatnonzero(last_of_group) + 1  # predicted positives per threshold
    return s[last_of_group], tp, pp - tp


def pr_curve(scores, truth) -> Curve:
    """Precision-recall curve, one point per distinct score threshold.

    With no positive cases recall is undefined, so the curve has no points
    and its area is Undefined (there are no true positive cases to rank).
    """
    thresholds, tp, fp = _sweep(scores, truth)
    positives = int(np.asarray(truth).sum())
    if positives == 0:
        return Curve(
            "PR", (), MetricValue(None, reason=UndefinedReason.NO_POSITIVES)
        )
    points = tuple(
        CurvePoint(x=float(tpi / positives), y=float(tpi / (tpi + fpi)), threshold=float(thr))
        for thr, tpi, fpi in zip(thresholds, tp, fp)
    )
    return Curve("PR", points, _step_area(points))


def _step_area(points: tuple[CurvePoint, ...]) -> MetricValue:
    area = 0.0
    prev_recall = 0.0
    for p in points:
        area += (p.x - prev_recall) * p.y
        prev_recall = p.x
    return MetricValue(min(area, 1.0))


def average_precision(curve: Curve) -> MetricValue:
    """Step-interpolated area under a PR curve.

    Sum over threshold steps of (recall_n - recall_{n-1}) * precision_n.
    This is the conventional step rule; a trapezoidal rule would differ.
    """
    if curve.kind != "PR":
        raise ValueError(f"average_precision needs a PR curve, got {curve.kind}")
    if not curve.points:
        return MetricValue(None, reason=curve.area.reason or UndefinedReason.NO_POSITIVES)
    return _step_area(curve.points)


def roc_curve(scores, truth) -> Curve:
    """ROC curve with anchor points (0, 0) and (1, 1).

    The area is Undefined unless both classes are present (FPR needs a
    negative case, TPR a positive one).
    """
    thresholds, tp, fp = _sweep(scores, truth)
    t = np.asarray(truth)
    positives = int(t.sum())
    negatives = int(len(t) - positives)
    if positives == 0:
        return Curve("ROC", (), MetricValue(None, reason=UndefinedReason.NO_POSITIVES))
    if negatives == 0:
        return Curve("ROC", (), MetricValue(None, reason=UndefinedReason.NO_NEGATIVES))
    points = [CurvePoint(0.0, 0.0, math.inf)]
    points += [
        CurvePoint(x=float(fpi / negatives), y=float(tpi / positives), threshold=float(thr))
        for thr, tpi, fpi in zip(thresholds, tp, fp)
    ]
    # trapezoid accumulated in exact integer arithmetic, one division at the
    # end: twice the area times P*N is sum of dFP * (TP_prev + TP_cur), which
    # is also exactly 2*wins + ties of the Mann-Whitney pair count
    num = 0
    prev_tp = prev_fp = 0
    for tpi, fpi in zip(tp, fp):
        num += int(fpi - prev_fp) * int(tpi + prev_tp)
        prev_tp, prev_fp = int(tpi), int(fpi)
    area = num / (2 * positives * negatives)
    return Curve("ROC", tuple(points), MetricValue(area))


def auroc(curve: Curve) -> MetricValue:
    """Trapezoidal area under a ROC curve.

    The area is accumulated during the sweep in exact integer arithmetic, so
    it equals the Mann-Whitney pairwise statistic (tied positive-negative
    pairs counted 0.5) bit for bit.
    """
    if curve.kind != "ROC":
        raise ValueError(f"auroc needs a ROC curve, got {curve.kind}")
    if not curve.points:
        return MetricValue(None, reason=curve.area.reason or UndefinedReason.NO_NEGATIVES)
    return curve.area


def threshold_trace(curve: Curve) -> list[tuple[float, float]]:
    """(recall, threshold) pairs: the largest threshold achieving each recall.

    Works for PR curves (recall on x) and ROC curves (TPR on y); the ROC
    anchor at threshold +inf is skipped.
    """
    if not curve.defined:
        raise ValueError("cannot trace an undefined curve")
    trace: list[tuple[float, float]] = []
    seen: set[float] = set()
    for p in curve.points:
        if not math.isfinite(p.threshold):
            continue
        recall = p.x if curve.kind == "PR" else p.y
        if recall not in seen:
            # thresholds only decrease along the sweep, so the first
            # occurrence carries the largest threshold for this recall
            seen.add(recall)
            trace.append((recall, p.threshold))
    return trace
