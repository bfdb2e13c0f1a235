import pytest
from hypothesis import given
from hypothesis import strategies as st

from catheval.intervals import interval_for_metric, logit_interval, z_for_confidence
from catheval.metrics import ConfusionCounts, MetricValue, UndefinedReason, hamming_loss_counts, specificity


PUBLISHED = [
    # (successes, n, lower, upper) recovered from the study's count tables
    (56, 59, 0.854, 0.984),  # NGT sensitivity
    (20, 27, 0.547, 0.871),  # UAC sensitivity
    (26, 33, 0.617, 0.895),  # UVC specificity
    (17, 19, 0.663, 0.974),  # NGT specificity
    (7, 78, 0.043, 0.176),  # UVC Hamming loss
]


class TestLogitInterval:
    @pytest.mark.parametrize("s,n,lo,hi", PUBLISHED)
    def test_reproduces_published_bounds(self, s, n, lo, hi):
        iv = logit_interval(s, n, 0.95)
        assert iv.lower == pytest.approx(lo, abs=1e-3)
        assert iv.upper == pytest.approx(hi, abs=1e-3)

    def test_degenerate_points_have_undefined_bounds(self):
        top = logit_interval(27, 27, 0.95)
        assert top.point == 1.0 and not top.defined
        bottom = logit_interval(0, 10, 0.95)
        assert bottom.point == 0.0 and not bottom.defined

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            logit_interval(1, 0)
        with pytest.raises(ValueError):
            logit_interval(5, 4)

    def test_z_default(self):
        assert z_for_confidence(0.95) == pytest.approx(1.959964, abs=1e-6)

    @given(st.integers(1, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 200))))
    def test_bounds_strictly_inside_unit_interval(self, pair):
        n_extra, s = pair
        n = s + n_extra  # guarantees 0 < s < n
        iv = logit_interval(s, n)
        assert 0.0 < iv.lower < iv.point < iv.upper < 1.0

    @given(st.tuples(st.integers(1, 99), st.integers(2, 100)).filter(lambda p: p[0] < p[1]))
    def test_mirror_symmetry(self, pair):
        s, n = pair
        a = logit_interval(s, n)
        b = logit_interval(n - s, n)
        assert a.lower == pytest.approx(1.0 - b.upper, abs=1e-12)
        assert a.upper == pytest.approx(1.0 - b.lower, abs=1e-12)

    def test_width_shrinks_with_n(self):
        widths = []
        for mult in (1, 2, 4, 8, 16):
            iv = logit_interval(3 * mult, 4 * mult)  # fixed p = 0.75
            widths.append(iv.upper - iv.lower)
        assert widths == sorted(widths, reverse=True)


class TestIntervalForMetric:
    def test_specificity_interval_from_counts(self):
        m = specificity(ConfusionCounts(26, 7, 0, 0))
        iv = interval_for_metric(m)
        assert iv.lower == pytest.approx(0.617, abs=1e-3)
        assert iv.upper == pytest.approx(0.895, abs=1e-3)

    def test_hamming_interval_from_counts(self):
        m = hamming_loss_counts(ConfusionCounts(26, 7, 0, 45))
        iv = interval_for_metric(m)
        assert iv.lower == pytest.approx(0.043, abs=1e-3)
        assert iv.upper == pytest.approx(0.176, abs=1e-3)

    def test_zero_point_has_undefined_bounds(self):
        iv = interval_for_metric(MetricValue.from_ratio(0, 12, UndefinedReason.NO_POSITIVES))
        assert iv.point == 0.0 and not iv.defined

    def test_undefined_metric_is_an_error(self):
        m = MetricValue(None, reason=UndefinedReason.NO_POSITIVES)
        with pytest.raises(ValueError):
            interval_for_metric(m)

    def test_value_only_metric_is_an_error(self):
        with pytest.raises(ValueError):
            interval_for_metric(MetricValue(0.9))
