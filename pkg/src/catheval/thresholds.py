"""Validation-set threshold selection by maximizing sensitivity + specificity.

The objective is compared exactly via the integer statistic
``tp * negatives + tn * positives`` (the common denominator cancels), so ties
are detected without float noise. Tie-break: the largest tied threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .model import GroundTruthMatrix, ScoreMatrix, ThresholdVector
from .validation import as_binary_array, as_score_array, check_equal_length


class DegenerateTruthError(ValueError):
    """Validation truth contains only one class; the objective cannot rank thresholds."""


class ThresholdSelectionError(ValueError):
    """Per-label selection failed; carries the label identity."""

    def __init__(self, label: str, cause: Exception):
        super().__init__(f"threshold selection failed for label {label!r}: {cause}")
        self.label = label
        self.cause = cause


@dataclass(frozen=True)
class FixedStep:
    """Evaluate every multiple of ``step`` strictly inside (0, 1)."""

    step: float = 0.05

    def candidates(self, scores: np.ndarray) -> np.ndarray:
        if not (0.0 < self.step < 1.0):
            raise ValueError(f"step {self.step} outside (0, 1)")
        n = int(round(1.0 / self.step))
        # regenerate from integers so grid points print cleanly (0.8, not 0.8000...01)
        grid = [round(i * self.step, 12) for i in range(1, n + 1)]
        return np.asarray([g for g in grid if 0.0 < g < 1.0], dtype=np.float64)


@dataclass(frozen=True)
class ObservedScores:
    """Evaluate every distinct observed score; globally optimal since the
    objective is piecewise constant between observed scores. Scores of
    exactly 0 or 1 are excluded (thresholds must stay inside (0, 1))."""

    def candidates(self, scores: np.ndarray) -> np.ndarray:
        distinct = np.unique(scores)
        return distinct[(distinct > 0.0) & (distinct < 1.0)]


Grid = FixedStep | ObservedScores


@dataclass(frozen=True)
class ThresholdSearchResult:
    label_index: int
    chosen: float
    objective: float
    candidates_evaluated: int
    tie_set: tuple[float, ...]
    degenerate: bool = False  # objective never beat chance level 1.0


def select_threshold(
    val_scores, val_truth, grid: Grid = FixedStep(0.05), label_index: int = 0
) -> ThresholdSearchResult:
    """Pick the threshold maximizing sensitivity + specificity on validation data.

    The returned ``degenerate`` flag is set when no candidate exceeds the
    chance objective of 1.0.
    """
    s = as_score_array(val_scores, "val_scores", ndim=1)
    t = as_binary_array(val_truth, "val_truth", ndim=1)
    check_equal_length(s, t, "val_scores", "val_truth")
    positives = int(t.sum())
    negatives = int(len(t) - positives)
    if positives == 0 or negatives == 0:
        raise DegenerateTruthError(
            "validation truth must contain both classes "
            f"(positives={positives}, negatives={negatives})"
        )
    candidates = grid.candidates(s)
    if candidates.size == 0:
        raise ValueError("threshold grid produced no candidates inside (0, 1)")

    pred = s[np.newaxis, :] >= candidates[:, np.newaxis]  # candidates x samples
    tp = (pred & (t == 1)).sum(axis=1)
    tn = (~pred & (t == 0)).sum(axis=1)
    # exact integer surrogate for tp/P + tn/N (denominator P*N cancels)
    stat = tp * negatives + tn * positives
    best = int(stat.max())
    tie_mask = stat == best
    tie_set = tuple(float(c) for c in candidates[tie_mask])
    chosen = tie_set[-1]  # candidates are sorted ascending; take the largest
    objective = best / (positives * negatives)
    return ThresholdSearchResult(
        label_index=label_index,
        chosen=chosen,
        objective=float(objective),
        candidates_evaluated=int(candidates.size),
        tie_set=tie_set,
        degenerate=best <= positives * negatives,
    )


def select_all(
    val_scores: ScoreMatrix, val_truth: GroundTruthMatrix, grid: Grid = FixedStep(0.05)
) -> tuple[ThresholdVector, list[ThresholdSearchResult]]:
    """Run `select_threshold` independently on every label column."""
    if val_scores.image_ids != val_truth.image_ids:
        raise ValueError("validation scores and truth must be aligned by image id")
    if val_scores.k != val_truth.k:
        raise ValueError("validation scores and truth have different label counts")
    results = []
    for k in range(val_truth.k):
        try:
            results.append(
                select_threshold(val_scores.column(k), val_truth.column(k), grid, label_index=k)
            )
        except ValueError as e:
            raise ThresholdSelectionError(val_truth.labels.names[k], e) from e
    return ThresholdVector(tuple(r.chosen for r in results)), results


class YoudenThresholdSelector(BaseEstimator):
    """Estimator wrapper: fit learns per-label thresholds, predict binarizes.

    Parameters
    ----------
    grid : "fixed" or "observed"
        Candidate thresholds: a fixed-step lattice or the observed scores.
    step : float
        Lattice spacing when ``grid="fixed"``.
    """

    def __init__(self, grid: str = "fixed", step: float = 0.05):
        self.grid = grid
        self.step = step

    def _grid(self) -> Grid:
        if self.grid == "fixed":
            return FixedStep(self.step)
        if self.grid == "observed":
            return ObservedScores()
        raise ValueError(f"grid must be 'fixed' or 'observed', got {self.grid!r}")

    def fit(self, X, y) -> "YoudenThresholdSelector":
        """X: (n, K) validation scores; y: (n, K) binary ground truth."""
        s = as_score_array(X, "X", ndim=2)
        t = as_binary_array(y, "y", ndim=2)
        if s.shape != t.shape:
            raise ValueError(f"X and y shapes differ: {s.shape} vs {t.shape}")
        grid = self._grid()
        self.results_ = [
            select_threshold(s[:, k], t[:, k], grid, label_index=k)
            for k in range(s.shape[1])
        ]
        self.thresholds_ = np.asarray([r.chosen for r in self.results_])
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "thresholds_"):
            raise ValueError("YoudenThresholdSelector is not fitted yet")
        s = as_score_array(X, "X", ndim=2)
        if s.shape[1] != self.thresholds_.size:
            raise ValueError(
                f"X has {s.shape[1]} labels, fitted for {self.thresholds_.size}"
            )
        return (s >= self.thresholds_[np.newaxis, :]).astype(np.int8)

    def threshold_vector(self) -> ThresholdVector:
        if not hasattr(self, "thresholds_"):
            raise ValueError("YoudenThresholdSelector is not fitted yet")
        return ThresholdVector(tuple(float(t) for t in self.thresholds_))
