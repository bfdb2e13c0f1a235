"""Core data types: labels, datasets, scores, thresholds, splits, and cohorts.

Everything here is immutable after construction; the operations are pure
functions, safe to call from concurrent contexts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from .validation import (
    as_binary_array,
    as_score_array,
    check_unique_ids,
    frozen,
)

DEFAULT_LABEL_NAMES = ("NGT", "ETT", "UAC", "UVC")

PARTITIONS = ("Training", "Validation", "Testing")


@dataclass(frozen=True)
class LabelSet:
    """Ordered set of label identifiers; ordering is index-stable."""

    names: tuple[str, ...] = DEFAULT_LABEL_NAMES

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("LabelSet needs at least one label")
        if any(not n for n in names):
            raise ValueError("label names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("label names must be unique")

    @property
    def k(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown label {name!r}") from None


def _generic_labels(k: int) -> LabelSet:
    return LabelSet(tuple(f"label_{i + 1}" for i in range(k)))


@dataclass(frozen=True)
class GroundTruthMatrix:
    """Per-image binary presence of each label (1 = present)."""

    image_ids: tuple[str, ...]
    values: np.ndarray  # N x K, int8
    labels: LabelSet | None = None

    def __post_init__(self) -> None:
        ids = tuple(str(i) for i in self.image_ids)
        check_unique_ids(ids)
        values = frozen(as_binary_array(self.values, "truth", ndim=2))
        if values.shape[0] != len(ids):
            raise ValueError(
                f"truth has {values.shape[0]} rows for {len(ids)} image ids"
            )
        labels = self.labels if self.labels is not None else _generic_labels(values.shape[1])
        if labels.k != values.shape[1]:
            raise ValueError(f"truth has {values.shape[1]} columns for {labels.k} labels")
        object.__setattr__(self, "image_ids", ids)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.image_ids)

    @property
    def k(self) -> int:
        return self.labels.k

    def column(self, label: int) -> np.ndarray:
        return self.values[:, label]

    def cardinalities(self) -> np.ndarray:
        """Number of positive labels per image."""
        return self.values.sum(axis=1, dtype=np.int64)


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-image, per-label probabilities in [0, 1]."""

    image_ids: tuple[str, ...]
    scores: np.ndarray  # N x K, float64
    labels: LabelSet | None = None

    def __post_init__(self) -> None:
        ids = tuple(str(i) for i in self.image_ids)
        check_unique_ids(ids)
        scores = frozen(as_score_array(self.scores, "scores", ndim=2))
        if scores.shape[0] != len(ids):
            raise ValueError(
                f"scores has {scores.shape[0]} rows for {len(ids)} image ids"
            )
        labels = self.labels if self.labels is not None else _generic_labels(scores.shape[1])
        if labels.k != scores.shape[1]:
            raise ValueError(f"scores has {scores.shape[1]} columns for {labels.k} labels")
        object.__setattr__(self, "image_ids", ids)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.image_ids)

    @property
    def k(self) -> int:
        return self.labels.k

    def column(self, label: int) -> np.ndarray:
        return self.scores[:, label]

    def reindex(self, image_ids: Sequence[str]) -> "ScoreMatrix":
        """Reorder rows to follow ``image_ids``; id sets must match exactly."""
        pos = {i: p for p, i in enumerate(self.image_ids)}
        try:
            order = [pos[i] for i in image_ids]
        except KeyError as e:
            raise ValueError(f"scores missing image id {e.args[0]!r}") from None
        if len(image_ids) != self.n:
            raise ValueError(
                f"cannot reindex {self.n} rows onto {len(image_ids)} ids"
            )
        return ScoreMatrix(tuple(image_ids), self.scores[order], self.labels)


@dataclass(frozen=True)
class ThresholdVector:
    """One operating threshold per label, each strictly inside (0, 1)."""

    per_label: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(t) for t in self.per_label)
        if not values:
            raise ValueError("ThresholdVector needs at least one threshold")
        for t in values:
            if not (0.0 < t < 1.0):
                raise ValueError(f"threshold {t} not strictly inside (0, 1)")
        object.__setattr__(self, "per_label", values)

    @property
    def k(self) -> int:
        return len(self.per_label)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.per_label, dtype=np.float64)


@dataclass(frozen=True)
class SplitAssignment:
    """Partition of image ids into Training/Validation/Testing."""

    partition: dict[str, str]
    seed: int

    def __post_init__(self) -> None:
        bad = {p for p in self.partition.values() if p not in PARTITIONS}
        if bad:
            raise ValueError(f"unknown partition names: {sorted(bad)}")

    def ids_in(self, partition: str) -> tuple[str, ...]:
        return tuple(i for i, p in self.partition.items() if p == partition)

    def sizes(self) -> tuple[int, int, int]:
        sizes = {p: 0 for p in PARTITIONS}
        for p in self.partition.values():
            sizes[p] += 1
        return sizes["Training"], sizes["Validation"], sizes["Testing"]


# --- cardinality selectors -------------------------------------------------


@dataclass(frozen=True)
class Exactly:
    """Images containing exactly ``count`` positive labels."""

    count: int

    def display(self, k: int) -> str:
        return str(self.count)


@dataclass(frozen=True)
class MoreThanOne:
    """Images containing two or more positive labels."""

    def display(self, k: int) -> str:
        return ">1"


@dataclass(frozen=True)
class AllImages:
    """The full image set, regardless of label count."""

    def display(self, k: int) -> str:
        return f"0-{k}"


Selector = Exactly | MoreThanOne | AllImages


@dataclass(frozen=True)
class CardinalityCohort:
    """Subset of images selected by how many labels are present."""

    selector: Selector
    member_ids: tuple[str, ...]

    def display(self, k: int) -> str:
        return self.selector.display(k)

    def __len__(self) -> int:
        return len(self.member_ids)


# --- operations -------------------------------------------------------------


def binarize(scores: ScoreMatrix, thresholds: ThresholdVector) -> np.ndarray:
    """Turn probabilities into hard predictions, inclusive at the threshold.

    ``prediction[i][k] = 1`` iff ``scores[i][k] >= thresholds[k]``.
    """
    if scores.k != thresholds.k:
        raise ValueError(
            f"scores have {scores.k} labels but thresholds have {thresholds.k}"
        )
    return (scores.scores >= thresholds.as_array()[np.newaxis, :]).astype(np.int8)


def split_dataset(
    ids: Sequence[str], counts: tuple[int, int, int], seed: int
) -> SplitAssignment:
    """Seeded uniform shuffle followed by contiguous assignment to exact counts."""
    n_train, n_val, n_test = (int(c) for c in counts)
    if min(n_train, n_val, n_test) < 0:
        raise ValueError("counts must be non-negative")
    ids = [str(i) for i in ids]
    check_unique_ids(ids, "ids")
    if n_train + n_val + n_test != len(ids):
        raise ValueError(
            f"counts sum to {n_train + n_val + n_test} but there are {len(ids)} ids"
        )
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    partition: dict[str, str] = {}
    for rank, idx in enumerate(order):
        if rank < n_train:
            part = "Training"
        elif rank < n_train + n_val:
            part = "Validation"
        else:
            part = "Testing"
        partition[ids[idx]] = part
    return SplitAssignment(partition, seed=int(seed))


def cohort_by_cardinality(truth: GroundTruthMatrix, selector: Selector) -> CardinalityCohort:
    """Collect the image ids whose positive-label count matches ``selector``."""
    counts = truth.cardinalities()
    if isinstance(selector, Exactly):
        if not (0 <= selector.count <= truth.k):
            raise ValueError(
                f"cardinality {selector.count} outside 0..{truth.k}"
            )
        mask = counts == selector.count
    elif isinstance(selector, MoreThanOne):
        mask = counts > 1
    elif isinstance(selector, AllImages):
        mask = np.ones(truth.n, dtype=bool)
    else:
        raise TypeError(f"unknown selector {selector!r}")
    members = tuple(i for i, m in zip(truth.image_ids, mask) if m)
    return CardinalityCohort(selector, members)


def standard_cohorts(truth: GroundTruthMatrix) -> list[CardinalityCohort]:
    """Exactly(0..K), then MoreThanOne, then AllImages."""
    selectors: list[Selector] = [Exactly(c) for c in range(truth.k + 1)]
    selectors += [MoreThanOne(), AllImages()]
    return [cohort_by_cardinality(truth, s) for s in selectors]


def align(scores: ScoreMatrix, truth: GroundTruthMatrix) -> ScoreMatrix:
    """Pair a score matrix with a truth matrix by image id, order-independently."""
    if set(scores.image_ids) != set(truth.image_ids):
        raise ValueError("scores and truth cover different image id sets")
    if scores.labels.names != truth.labels.names:
        raise ValueError(
            f"label sets differ: {scores.labels.names} vs {truth.labels.names}"
        )
    return scores.reindex(truth.image_ids)
