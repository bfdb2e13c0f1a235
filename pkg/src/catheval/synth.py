"""Seeded synthetic fixtures with a closed-form expected AUROC.

Scores are sigmoid-squashed Gaussians: negatives draw a latent
``z ~ N(-d/2, 1)``, positives ``z ~ N(+d/2, 1)``, where ``d`` is the
separability. Because AUROC is invariant under the (monotone) sigmoid,

    expected AUROC = Phi(d / sqrt(2)),

which makes the generator usable as a statistical oracle: ``d = 0`` gives
chance level 0.5, and `separability_for_auroc` inverts the mapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .model import GroundTruthMatrix, LabelSet, ScoreMatrix

_NORMAL = NormalDist()


@dataclass(frozen=True)
class SyntheticSpec:
    prevalence: tuple[float, ...]  # per label, in (0, 1)
    separability: tuple[float, ...]  # per label, >= 0
    n: int
    seed: int
    labels: LabelSet | None = None

    def __post_init__(self) -> None:
        prevalence = tuple(float(p) for p in self.prevalence)
        separability = tuple(float(d) for d in self.separability)
        if len(prevalence) != len(separability):
            raise ValueError(
                f"{len(prevalence)} prevalences for {len(separability)} separabilities"
            )
        if not prevalence:
            raise ValueError("need at least one label")
        for p in prevalence:
            if not (0.0 < p < 1.0):
                raise ValueError(f"prevalence {p} outside (0, 1)")
        for d in separability:
            if not (math.isfinite(d) and d >= 0.0):
                raise ValueError(f"separability {d} must be finite and >= 0")
        if self.n <= 0:
            raise ValueError(f"image count {self.n} must be positive")
        labels = self.labels
        if labels is not None and labels.k != len(prevalence):
            raise ValueError(f"{labels.k} labels for {len(prevalence)} prevalences")
        object.__setattr__(self, "prevalence", prevalence)
        object.__setattr__(self, "separability", separability)

    @property
    def k(self) -> int:
        return len(self.prevalence)


def expected_auroc(separability: float) -> float:
    """Phi(d / sqrt(2)): the chance a positive latent outdraws a negative one."""
    return _NORMAL.cdf(separability / math.sqrt(2.0))


def separability_for_auroc(auroc: float) -> float:
    """Inverse of `expected_auroc`."""
    if not (0.5 <= auroc < 1.0):
        raise ValueError(f"target AUROC {auroc} outside [0.5, 1)")
    return math.sqrt(2.0) * _NORMAL.inv_cdf(auroc)


def generate_synthetic(spec: SyntheticSpec) -> tuple[GroundTruthMatrix, ScoreMatrix]:
    """Deterministic (truth, scores) pair for a fixed seed."""
    rng = np.random.default_rng(spec.seed)
    ids = tuple(f"synth_{i:05d}" for i in range(spec.n))
    truth = np.zeros((spec.n, spec.k), dtype=np.int8)
    scores = np.zeros((spec.n, spec.k), dtype=np.float64)
    for k, (prev, d) in enumerate(zip(spec.prevalence, spec.separability)):
        col = (rng.random(spec.n) < prev).astype(np.int8)
        z = rng.standard_normal(spec.n) + d * (col - 0.5)
        scores[:, k] = 1.0 / (1.0 + np.exp(-z))
        truth[:, k] = col
    labels = spec.labels if spec.labels is not None else None
    return (
        GroundTruthMatrix(ids, truth, labels),
        ScoreMatrix(ids, scores, labels),
    )
