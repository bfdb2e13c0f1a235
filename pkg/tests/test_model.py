import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catheval.model import (
    AllImages,
    Exactly,
    GroundTruthMatrix,
    LabelSet,
    MoreThanOne,
    ScoreMatrix,
    ThresholdVector,
    align,
    binarize,
    cohort_by_cardinality,
    split_dataset,
    standard_cohorts,
)


def _scores(rows, names=("A", "B")):
    ids = tuple(f"i{r}" for r in range(len(rows)))
    return ScoreMatrix(ids, np.asarray(rows), LabelSet(names))


class TestLabelSet:
    def test_default_is_the_four_catheters(self):
        assert LabelSet().names == ("NGT", "ETT", "UAC", "UVC")

    def test_rejects_duplicates_and_empty(self):
        with pytest.raises(ValueError):
            LabelSet(("a", "a"))
        with pytest.raises(ValueError):
            LabelSet(("a", ""))
        with pytest.raises(ValueError):
            LabelSet(())

    def test_index_is_stable(self):
        ls = LabelSet(("x", "y", "z"))
        assert [ls.index(n) for n in ls.names] == [0, 1, 2]
        with pytest.raises(KeyError):
            ls.index("nope")


class TestMatrices:
    def test_truth_rejects_non_binary_cells(self):
        with pytest.raises(ValueError):
            GroundTruthMatrix(("a",), np.array([[0.5, 1.0]]))

    def test_truth_rejects_duplicate_ids(self):
        with pytest.raises(ValueError):
            GroundTruthMatrix(("a", "a"), np.zeros((2, 1), dtype=int))

    def test_scores_reject_out_of_range(self):
        with pytest.raises(ValueError):
            ScoreMatrix(("a",), np.array([[1.5]]))
        with pytest.raises(ValueError):
            ScoreMatrix(("a",), np.array([[np.nan]]))

    def test_values_are_immutable(self):
        t = GroundTruthMatrix(("a",), np.array([[1, 0]]))
        with pytest.raises(ValueError):
            t.values[0, 0] = 0


class TestBinarize:
    def test_boundary_is_inclusive(self):
        m = _scores([[0.80, 0.10]])
        pred = binarize(m, ThresholdVector((0.80, 0.75)))
        assert pred[0, 0] == 1  # score equal to threshold counts as positive
        assert pred[0, 1] == 0

    def test_all_zero_scores_predict_nothing(self):
        m = _scores([[0.0, 0.0], [0.0, 0.0]])
        assert binarize(m, ThresholdVector((0.3, 0.9))).sum() == 0

    def test_hand_computed_example(self):
        m = _scores([[0.9, 0.1], [0.5, 0.75]])
        pred = binarize(m, ThresholdVector((0.8, 0.75)))
        assert pred.tolist() == [[1, 0], [0, 1]]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            binarize(_scores([[0.5, 0.5]]), ThresholdVector((0.5,)))

    @given(
        st.lists(st.floats(0, 1), min_size=1, max_size=20),
        st.floats(0.01, 0.98),
        st.floats(0.001, 0.01),
    )
    def test_monotone_raising_threshold_never_adds_positives(self, col, t, bump):
        m = _scores([[v] for v in col], names=("only",))
        lo = binarize(m, ThresholdVector((t,)))
        hi = binarize(m, ThresholdVector((min(t + bump, 0.999),)))
        assert not ((lo == 0) & (hi == 1)).any()


class TestSplit:
    def test_paper_sizes_are_exact(self):
        ids = [f"img{i}" for i in range(777)]
        split = split_dataset(ids, (629, 70, 78), seed=20200817)
        assert split.sizes() == (629, 70, 78)

    def test_everything_in_training(self):
        split = split_dataset(["a", "b", "c"], (3, 0, 0), seed=1)
        assert split.sizes() == (3, 0, 0)

    def test_deterministic_for_fixed_seed(self):
        ids = [f"x{i}" for i in range(50)]
        a = split_dataset(ids, (40, 5, 5), seed=9)
        b = split_dataset(ids, (40, 5, 5), seed=9)
        assert a.partition == b.partition

    def test_counts_must_sum(self):
        with pytest.raises(ValueError):
            split_dataset(["a", "b"], (2, 1, 0), seed=0)

    def test_permuted_ids_same_sizes(self):
        ids = [f"x{i}" for i in range(33)]
        a = split_dataset(ids, (20, 6, 7), seed=4)
        b = split_dataset(list(reversed(ids)), (20, 6, 7), seed=4)
        assert a.sizes() == b.sizes() == (20, 6, 7)


class TestCohorts:
    def test_paper_test_cohort_sizes(self, test_truth):
        sizes = [len(cohort_by_cardinality(test_truth, Exactly(c))) for c in range(5)]
        assert sizes == [7, 13, 24, 19, 15]

    def test_more_than_one_is_union_of_two_plus(self, test_truth):
        multi = cohort_by_cardinality(test_truth, MoreThanOne())
        assert len(multi) == 24 + 19 + 15

    def test_all_zero_truth_lands_in_exactly_zero(self):
        t = GroundTruthMatrix(("a", "b"), np.zeros((2, 3), dtype=int))
        assert cohort_by_cardinality(t, Exactly(0)).member_ids == ("a", "b")

    def test_selector_out_of_range(self, test_truth):
        with pytest.raises(ValueError):
            cohort_by_cardinality(test_truth, Exactly(5))

    def test_exact_cohorts_partition_the_image_set(self, test_truth):
        cohorts = [cohort_by_cardinality(test_truth, Exactly(c)) for c in range(5)]
        seen = [i for c in cohorts for i in c.member_ids]
        assert sorted(seen) == sorted(test_truth.image_ids)
        assert len(set(seen)) == len(seen)

    def test_standard_cohort_names(self, test_truth):
        names = [c.display(test_truth.k) for c in standard_cohorts(test_truth)]
        assert names == ["0", "1", "2", "3", "4", ">1", "0-4"]


class TestAlign:
    def test_row_shuffle_is_invisible_after_alignment(self, test_truth, test_scores_multi):
        rng = np.random.default_rng(5)
        perm = rng.permutation(test_truth.n)
        shuffled = ScoreMatrix(
            tuple(test_scores_multi.image_ids[i] for i in perm),
            test_scores_multi.scores[perm],
            test_scores_multi.labels,
        )
        back = align(shuffled, test_truth)
        assert back.image_ids == test_truth.image_ids
        assert np.array_equal(back.scores, test_scores_multi.scores)

    def test_mismatched_ids_rejected(self, test_truth, test_scores_multi):
        other = ScoreMatrix(("zzz",), [[0.5, 0.5, 0.5, 0.5]], test_scores_multi.labels)
        with pytest.raises(ValueError):
            align(other, test_truth)
