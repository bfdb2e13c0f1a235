"""Full evaluation orchestration: per-label, per-cohort metric tables.

Every cell keeps its raw confusion counts so all derived numbers stay
recomputable; `EvaluationReport.self_check` asserts exactly that and runs
before any report is emitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import pr_curve, roc_curve
from .intervals import IntervalEstimate, interval_for_metric
from .metrics import (
    ConfusionCounts,
    MetricValue,
    UndefinedReason,
    confusion,
    hamming_loss_counts,
    sensitivity,
    specificity,
)
from .model import (
    CardinalityCohort,
    GroundTruthMatrix,
    ScoreMatrix,
    ThresholdVector,
    align,
    binarize,
    standard_cohorts,
)

PROPORTION_METRICS = ("sensitivity", "specificity", "hamming_loss")
CURVE_METRICS = ("average_precision", "auroc")
ALL_METRICS = PROPORTION_METRICS + CURVE_METRICS

POOLED_LABEL = "All"
POOLED_CAVEAT = (
    "Pooled rows sum decisions across labels; per-image label dependence "
    "makes the pooled metric not robust."
)


class SelfCheckError(RuntimeError):
    """A report cell is not recomputable from its stored counts."""


@dataclass(frozen=True)
class ReportCell:
    """Metrics for one (label, cohort) pair, with the counts behind them."""

    counts: ConfusionCounts
    metrics: dict[str, MetricValue]
    intervals: dict[str, IntervalEstimate | None]


@dataclass(frozen=True)
class EvaluationReport:
    label_names: tuple[str, ...]
    cohort_names: tuple[str, ...]
    cells: dict[tuple[str, str], ReportCell]  # (label, cohort) -> cell
    pooled: dict[str, ReportCell]  # cohort -> pooled-across-labels cell
    thresholds: ThresholdVector
    image_ids: tuple[str, ...]
    metadata: dict = field(default_factory=dict)

    def cell(self, label: str, cohort: str) -> ReportCell:
        return self.cells[(label, cohort)]

    def self_check(self) -> None:
        """Verify every displayed metric is recomputable from stored counts,
        and that per-cardinality counts add up to the aggregate cohorts."""
        for (label, cohort), cell in self.cells.items():
            _check_cell(cell, f"{label}/{cohort}")
        for cohort, cell in self.pooled.items():
            _check_cell(cell, f"{POOLED_LABEL}/{cohort}")
        k = len(self.label_names)
        exact = [str(c) for c in range(k + 1)]
        for agg_name, parts in ((f"0-{k}", exact), (">1", exact[2:])):
            if agg_name not in self.cohort_names:
                continue
            if any(p not in self.cohort_names for p in parts):
                continue
            for label in self.label_names:
                summed = _sum_counts([self.cells[(label, c)].counts for c in parts])
                total = self.cells[(label, agg_name)].counts
                if summed != total:
                    raise SelfCheckError(
                        f"{label}: per-cardinality counts {summed} do not sum "
                        f"to the {agg_name!r} cohort counts {total}"
                    )


def _sum_counts(counts: list[ConfusionCounts]) -> ConfusionCounts:
    total = ConfusionCounts(0, 0, 0, 0)
    for c in counts:
        total = total + c
    return total


def _check_cell(cell: ReportCell, where: str) -> None:
    c = cell.counts
    recomputed = {
        "sensitivity": sensitivity(c),
        "specificity": specificity(c),
        "hamming_loss": hamming_loss_counts(c),
    }
    for name, expect in recomputed.items():
        got = cell.metrics.get(name)
        if got is None:
            raise SelfCheckError(f"{where}: metric {name} missing")
        if got.value != expect.value or got.numerator != expect.numerator:
            raise SelfCheckError(
                f"{where}: stored {name} {got.value} does not recompute from "
                f"counts (expected {expect.value})"
            )
    for name in CURVE_METRICS:
        got = cell.metrics.get(name)
        if got is not None and got.defined and not (0.0 <= got.value <= 1.0):
            raise SelfCheckError(f"{where}: {name} outside [0, 1]")


def _metric_with_reason(mv: MetricValue, empty: bool) -> MetricValue:
    if empty and not mv.defined:
        return MetricValue(mv.value, mv.numerator, mv.denominator, UndefinedReason.EMPTY_COHORT)
    return mv


def _cell_for(
    truth_col: np.ndarray,
    score_col: np.ndarray,
    pred_col: np.ndarray,
    confidence: float,
) -> ReportCell:
    counts = confusion(truth_col, pred_col)
    empty = counts.total == 0
    metrics: dict[str, MetricValue] = {
        "sensitivity": _metric_with_reason(sensitivity(counts), empty),
        "specificity": _metric_with_reason(specificity(counts), empty),
        "hamming_loss": _metric_with_reason(hamming_loss_counts(counts), empty),
    }
    # curve metrics come from raw scores and need both classes in the cohort
    if empty:
        area = MetricValue(None, reason=UndefinedReason.EMPTY_COHORT)
        metrics["average_precision"] = area
        metrics["auroc"] = area
    elif counts.positives == 0:
        area = MetricValue(None, reason=UndefinedReason.NO_POSITIVES)
        metrics["average_precision"] = area
        metrics["auroc"] = area
    elif counts.negatives == 0:
        area = MetricValue(None, reason=UndefinedReason.NO_NEGATIVES)
        metrics["average_precision"] = area
        metrics["auroc"] = area
    else:
        metrics["average_precision"] = pr_curve(score_col, truth_col).area
        metrics["auroc"] = roc_curve(score_col, truth_col).area
    intervals: dict[str, IntervalEstimate | None] = {}
    for name in PROPORTION_METRICS:
        mv = metrics[name]
        intervals[name] = interval_for_metric(mv, confidence) if mv.defined else None
    return ReportCell(counts=counts, metrics=metrics, intervals=intervals)


def _pooled_cell(cells: list[ReportCell], confidence: float) -> ReportCell:
    counts = _sum_counts([c.counts for c in cells])
    empty = counts.total == 0
    metrics = {
        "sensitivity": _metric_with_reason(sensitivity(counts), empty),
        "specificity": _metric_with_reason(specificity(counts), empty),
        "hamming_loss": _metric_with_reason(hamming_loss_counts(counts), empty),
    }
    intervals = {
        name: interval_for_metric(mv, confidence) if mv.defined else None
        for name, mv in metrics.items()
    }
    return ReportCell(counts=counts, metrics=metrics, intervals=intervals)


def evaluate(
    test_scores: ScoreMatrix,
    test_truth: GroundTruthMatrix,
    thresholds: ThresholdVector,
    cohorts: list[CardinalityCohort] | None = None,
    confidence: float = 0.95,
    timestamp: str | None = None,
    notes: list[str] | None = None,
) -> EvaluationReport:
    """Evaluate thresholded predictions per label and per cardinality cohort.

    Curve metrics (AP, AUROC) are computed from the raw scores inside each
    cohort and do not depend on the thresholds. The pooled "All" row sums
    counts across labels and is tagged with the dependence caveat.
    """
    if test_truth.n == 0:
        raise ValueError("empty test set")
    scores = align(test_scores, test_truth)
    if thresholds.k != test_truth.k:
        raise ValueError(
            f"thresholds have {thresholds.k} labels, truth has {test_truth.k}"
        )
    if cohorts is None:
        cohorts = standard_cohorts(test_truth)
    pred = binarize(scores, thresholds)
    row_of = {i: p for p, i in enumerate(test_truth.image_ids)}
    k = test_truth.k
    names = test_truth.labels.names
    cohort_names = tuple(c.display(k) for c in cohorts)
    if len(set(cohort_names)) != len(cohort_names):
        raise ValueError("cohort display names collide")

    cells: dict[tuple[str, str], ReportCell] = {}
    pooled: dict[str, ReportCell] = {}
    for cohort, cname in zip(cohorts, cohort_names):
        rows = [row_of[i] for i in cohort.member_ids]
        per_label = []
        for j, label in enumerate(names):
            cell = _cell_for(
                test_truth.values[rows, j], scores.scores[rows, j], pred[rows, j], confidence
            )
            cells[(label, cname)] = cell
            per_label.append(cell)
        pooled[cname] = _pooled_cell(per_label, confidence)

    metadata = {
        "confidence": confidence,
        "pooled_caveat": POOLED_CAVEAT,
        "notes": list(notes) if notes else [],
    }
    if timestamp is not None:
        metadata["timestamp"] = timestamp
    return EvaluationReport(
        label_names=names,
        cohort_names=cohort_names,
        cells=cells,
        pooled=pooled,
        thresholds=thresholds,
        image_ids=test_truth.image_ids,
        metadata=metadata,
    )


@dataclass(frozen=True)
class ComparisonCell:
    a: MetricValue
    b: MetricValue
    delta: float | None  # b - a when both defined


@dataclass(frozen=True)
class ComparisonTable:
    label_names: tuple[str, ...]
    cohort_names: tuple[str, ...]
    cells: dict[tuple[str, str, str], ComparisonCell]  # (label, cohort, metric)


def compare_networks(report_a: EvaluationReport, report_b: EvaluationReport) -> ComparisonTable:
    """Side-by-side cells with per-cell deltas (b minus a)."""
    if report_a.label_names != report_b.label_names:
        raise ValueError(
            f"label sets differ: {report_a.label_names} vs {report_b.label_names}"
        )
    if report_a.cohort_names != report_b.cohort_names:
        raise ValueError(
            f"cohorts differ: {report_a.cohort_names} vs {report_b.cohort_names}"
        )
    cells: dict[tuple[str, str, str], ComparisonCell] = {}
    rows = [(label, False) for label in report_a.label_names] + [(POOLED_LABEL, True)]
    for label, is_pooled in rows:
        metric_names = PROPORTION_METRICS if is_pooled else ALL_METRICS
        for cohort in report_a.cohort_names:
            cell_a = report_a.pooled[cohort] if is_pooled else report_a.cell(label, cohort)
            cell_b = report_b.pooled[cohort] if is_pooled else report_b.cell(label, cohort)
            for metric in metric_names:
                a = cell_a.metrics[metric]
                b = cell_b.metrics[metric]
                delta = (b.value - a.value) if (a.defined and b.defined) else None
                cells[(label, cohort, metric)] = ComparisonCell(a, b, delta)
    return ComparisonTable(report_a.label_names, report_a.cohort_names, cells)
