"""Confusion counting and scalar metrics with explicit undefined-value semantics.

A metric whose denominator is zero is Undefined, a first-class state that is
rendered as a dash in reports. Undefined values are never coerced to 0 or 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .validation import as_binary_array, check_same_shape


class UndefinedReason(enum.Enum):
    """Why a report cell carries no value."""

    NO_POSITIVES = "NoPositives"
    NO_NEGATIVES = "NoNegatives"
    NO_TRUE_POSITIVE_POSSIBLE = "NoTruePositivePossible"
    EMPTY_COHORT = "EmptyCohort"


@dataclass(frozen=True)
class ConfusionCounts:
    """TN/FP/FN/TP tallies over a set of (image, label) decisions."""

    tn: int
    fp: int
    fn: int
    tp: int

    def __post_init__(self) -> None:
        for name in ("tn", "fp", "fn", "tp"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")
            object.__setattr__(self, name, int(v))

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tn + other.tn, self.fp + other.fp, self.fn + other.fn, self.tp + other.tp
        )


@dataclass(frozen=True)
class MetricValue:
    """A value in [0, 1], or Undefined with a reason.

    Proportion metrics keep their integer numerator/denominator so every
    derived number stays recomputable; curve areas carry a bare value.
    """

    value: float | None
    numerator: int | None = None
    denominator: int | None = None
    reason: UndefinedReason | None = None

    def __post_init__(self) -> None:
        if self.value is not None and not (0.0 <= self.value <= 1.0):
            raise ValueError(f"metric value {self.value} outside [0, 1]")
        if self.value is None and self.reason is None:
            raise ValueError("undefined metric needs a reason")

    @classmethod
    def from_ratio(
        cls, numerator: int, denominator: int, reason: UndefinedReason
    ) -> "MetricValue":
        """numerator/denominator, or Undefined(reason) when the denominator is 0."""
        if denominator == 0:
            return cls(None, numerator, 0, reason)
        return cls(numerator / denominator, numerator, denominator)

    @property
    def defined(self) -> bool:
        return self.value is not None

    @property
    def is_ratio(self) -> bool:
        return self.denominator is not None and self.denominator > 0


def confusion(truth, pred) -> ConfusionCounts:
    """Tally TN/FP/FN/TP over aligned binary vectors (or matrices)."""
    t = as_binary_array(truth, "truth")
    p = as_binary_array(pred, "pred")
    check_same_shape(t, p, "truth", "pred")
    t = t.astype(bool)
    p = p.astype(bool)
    return ConfusionCounts(
        tn=int((~t & ~p).sum()),
        fp=int((~t & p).sum()),
        fn=int((t & ~p).sum()),
        tp=int((t & p).sum()),
    )


def sensitivity(c: ConfusionCounts) -> MetricValue:
    """TP / (TP + FN); Undefined when there are no positive cases."""
    return MetricValue.from_ratio(c.tp, c.tp + c.fn, UndefinedReason.NO_POSITIVES)


def specificity(c: ConfusionCounts) -> MetricValue:
    """TN / (TN + FP); Undefined when there are no negative cases."""
    return MetricValue.from_ratio(c.tn, c.tn + c.fp, UndefinedReason.NO_NEGATIVES)


def precision(c: ConfusionCounts) -> MetricValue:
    """TP / (TP + FP); Undefined when nothing was predicted positive."""
    return MetricValue.from_ratio(
        c.tp, c.tp + c.fp, UndefinedReason.NO_TRUE_POSITIVE_POSSIBLE
    )


def accuracy(c: ConfusionCounts) -> MetricValue:
    """(TP + TN) / all decisions."""
    return MetricValue.from_ratio(c.tp + c.tn, c.total, UndefinedReason.EMPTY_COHORT)


def hamming_loss_counts(c: ConfusionCounts) -> MetricValue:
    """(FP + FN) / all decisions; exactly 1 - accuracy."""
    return MetricValue.from_ratio(c.fp + c.fn, c.total, UndefinedReason.EMPTY_COHORT)


def hamming_loss(truth, pred, label: int | None = None) -> MetricValue:
    """Fraction of incorrect (image, label) decisions.

    ``label`` selects a single column; ``None`` scores the whole matrix.
    """
    t = as_binary_array(truth, "truth", ndim=2)
    p = as_binary_array(pred, "pred", ndim=2)
    check_same_shape(t, p, "truth", "pred")
    if label is not None:
        t = t[:, label]
        p = p[:, label]
    return hamming_loss_counts(confusion(t, p))
