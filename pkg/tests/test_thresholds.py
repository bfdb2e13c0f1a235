import numpy as np
import pytest
from sklearn.base import clone

from catheval.thresholds import (
    DegenerateTruthError,
    FixedStep,
    ObservedScores,
    ThresholdSelectionError,
    YoudenThresholdSelector,
    select_all,
    select_threshold,
)
from catheval.model import GroundTruthMatrix, LabelSet, ScoreMatrix


def brute_force_objective(scores, truth, t):
    scores = np.asarray(scores)
    truth = np.asarray(truth)
    pred = scores >= t
    tp = int((pred & (truth == 1)).sum())
    tn = int((~pred & (truth == 0)).sum())
    return tp / truth.sum() + tn / (len(truth) - truth.sum())


class TestSelectThreshold:
    def test_perfectly_separated_ties_resolve_to_largest(self):
        scores = [0.7, 0.8, 0.9, 0.1, 0.2, 0.3]
        truth = [1, 1, 1, 0, 0, 0]
        r = select_threshold(scores, truth, FixedStep(0.05))
        assert r.objective == 2.0
        assert r.chosen == 0.70
        assert r.tie_set == (0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7)
        assert not r.degenerate

    def test_identical_scores_flagged_degenerate(self):
        r = select_threshold([0.4] * 6, [1, 1, 1, 0, 0, 0], FixedStep(0.05))
        assert r.degenerate
        assert r.objective == 1.0

    def test_one_class_truth_is_an_error(self):
        with pytest.raises(DegenerateTruthError):
            select_threshold([0.2, 0.8], [1, 1], FixedStep(0.05))

    def test_objective_dominates_every_candidate(self):
        rng = np.random.default_rng(21)
        scores = rng.random(70)
        truth = (rng.random(70) < 0.5).astype(int)
        r = select_threshold(scores, truth, FixedStep(0.05))
        for t in FixedStep(0.05).candidates(scores):
            assert r.objective >= brute_force_objective(scores, truth, t) - 1e-12

    def test_observed_grid_is_globally_optimal(self):
        rng = np.random.default_rng(33)
        scores = rng.uniform(0.01, 0.99, 70)
        truth = (rng.random(70) < 0.4).astype(int)
        best = select_threshold(scores, truth, ObservedScores())
        fixed = select_threshold(scores, truth, FixedStep(0.05))
        assert fixed.objective <= best.objective + 1e-12
        # piecewise-constant objective: checking observed scores covers all reals
        for t in np.unique(scores):
            assert best.objective >= brute_force_objective(scores, truth, t) - 1e-12

    def test_monotone_transform_keeps_the_selected_partition(self):
        rng = np.random.default_rng(8)
        scores = rng.uniform(0.05, 0.95, 40)
        truth = (rng.random(40) < 0.5).astype(int)
        r1 = select_threshold(scores, truth, ObservedScores())
        transformed = scores**2  # strictly increasing on (0, 1)
        r2 = select_threshold(transformed, truth, ObservedScores())
        assert np.array_equal(scores >= r1.chosen, transformed >= r2.chosen)

    def test_fixed_grid_excludes_zero_and_one(self):
        grid = FixedStep(0.25).candidates(np.array([0.5]))
        assert grid.tolist() == [0.25, 0.5, 0.75]


class TestSelectAll:
    def test_paper_fixture_reproduces_published_thresholds(self, val_scores, val_truth):
        vec, results = select_all(val_scores, val_truth, FixedStep(0.05))
        assert vec.per_label == (0.8, 0.2, 0.8, 0.75)
        assert all(r.objective == 2.0 for r in results)

    def test_observed_grid_agrees_on_fixture(self, val_scores, val_truth):
        vec, _ = select_all(val_scores, val_truth, ObservedScores())
        assert vec.per_label == (0.8, 0.2, 0.8, 0.75)

    def test_single_label_reduces_to_select_threshold(self):
        ids = tuple(f"i{i}" for i in range(6))
        scores = ScoreMatrix(ids, [[v] for v in (0.9, 0.8, 0.7, 0.2, 0.3, 0.1)], LabelSet(("only",)))
        truth = GroundTruthMatrix(ids, [[t] for t in (1, 1, 1, 0, 0, 0)], LabelSet(("only",)))
        vec, results = select_all(scores, truth, FixedStep(0.05))
        direct = select_threshold(scores.column(0), truth.column(0), FixedStep(0.05))
        assert vec.per_label == (direct.chosen,)
        assert results[0].objective == direct.objective

    def test_two_label_synthetic_argmax_per_column(self):
        ids = tuple(f"i{i}" for i in range(4))
        scores = ScoreMatrix(ids, [[0.6, 0.95], [0.5, 0.9], [0.4, 0.3], [0.3, 0.2]])
        truth = GroundTruthMatrix(ids, [[1, 1], [1, 1], [0, 0], [0, 0]])
        vec, _ = select_all(scores, truth, FixedStep(0.05))
        assert vec.per_label == (0.5, 0.9)

    def test_error_carries_label_identity(self):
        ids = ("a", "b")
        scores = ScoreMatrix(ids, [[0.2, 0.3], [0.8, 0.4]], LabelSet(("ok", "bad")))
        truth = GroundTruthMatrix(ids, [[0, 1], [1, 1]], LabelSet(("ok", "bad")))
        with pytest.raises(ThresholdSelectionError, match="bad"):
            select_all(scores, truth, FixedStep(0.05))


class TestEstimator:
    def test_fit_predict_roundtrip(self, val_scores, val_truth):
        est = YoudenThresholdSelector(grid="fixed", step=0.05)
        est.fit(val_scores.scores, val_truth.values)
        assert est.thresholds_.tolist() == [0.8, 0.2, 0.8, 0.75]
        pred = est.predict(val_scores.scores)
        assert pred.shape == val_truth.values.shape
        # the fixture is perfectly separated, so predictions match truth
        assert np.array_equal(pred, val_truth.values)

    def test_sklearn_params_contract(self):
        est = YoudenThresholdSelector(grid="observed", step=0.1)
        assert est.get_params() == {"grid": "observed", "step": 0.1}
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()
        est.set_params(step=0.2)
        assert est.step == 0.2

    def test_unfitted_predict_raises(self):
        with pytest.raises(ValueError, match="not fitted"):
            YoudenThresholdSelector().predict(np.zeros((2, 2)))

    def test_threshold_vector_accessor(self, val_scores, val_truth):
        est = YoudenThresholdSelector().fit(val_scores.scores, val_truth.values)
        assert est.threshold_vector().per_label == (0.8, 0.2, 0.8, 0.75)
