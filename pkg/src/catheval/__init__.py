"""catheval: evaluation toolkit for multi-label classifiers.

Threshold selection on validation data, PR/ROC curves with AP/AUROC,
sensitivity/specificity/Hamming loss with logit-transform confidence
intervals, label-cardinality-stratified reports, and label activation map
rendering, all from portable score/label/tensor files.
"""

from .curves import Curve, average_precision, auroc, pr_curve, roc_curve, threshold_trace
from .intervals import IntervalEstimate, interval_for_metric, logit_interval
from .lam import ActivationMap, FeatureMapDump, HeadWeights, compute_lam, render_overlay, upsample
from .metrics import (
    ConfusionCounts,
    MetricValue,
    UndefinedReason,
    accuracy,
    confusion,
    hamming_loss,
    precision,
    sensitivity,
    specificity,
)
from .model import (
    AllImages,
    CardinalityCohort,
    Exactly,
    GroundTruthMatrix,
    LabelSet,
    MoreThanOne,
    ScoreMatrix,
    SplitAssignment,
    ThresholdVector,
    align,
    binarize,
    cohort_by_cardinality,
    split_dataset,
    standard_cohorts,
)
from .report import EvaluationReport, compare_networks, evaluate
from .synth import SyntheticSpec, expected_auroc, generate_synthetic, separability_for_auroc
from .thresholds import (
    FixedStep,
    ObservedScores,
    ThresholdSearchResult,
    YoudenThresholdSelector,
    select_all,
    select_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationMap",
    "AllImages",
    "CardinalityCohort",
    "ConfusionCounts",
    "Curve",
    "EvaluationReport",
    "Exactly",
    "FeatureMapDump",
    "FixedStep",
    "GroundTruthMatrix",
    "HeadWeights",
    "IntervalEstimate",
    "LabelSet",
    "MetricValue",
    "MoreThanOne",
    "ObservedScores",
    "ScoreMatrix",
    "SplitAssignment",
    "SyntheticSpec",
    "ThresholdSearchResult",
    "ThresholdVector",
    "UndefinedReason",
    "YoudenThresholdSelector",
    "accuracy",
    "align",
    "average_precision",
    "auroc",
    "binarize",
    "compare_networks",
    "compute_lam",
    "confusion",
    "cohort_by_cardinality",
    "evaluate",
    "expected_auroc",
    "generate_synthetic",
    "hamming_loss",
    "interval_for_metric",
    "logit_interval",
    "pr_curve",
    "precision",
    "render_overlay",
    "roc_curve",
    "select_all",
    "select_threshold",
    "sensitivity",
    "separability_for_auroc",
    "specificity",
    "split_dataset",
    "standard_cohorts",
    "threshold_trace",
    "upsample",
]
