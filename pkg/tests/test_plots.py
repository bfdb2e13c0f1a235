import pytest

from catheval.curves import pr_curve, roc_curve, threshold_trace
from catheval.plots import CurveSeries, LabelPanel, TraceSeries, emit_curves, render_panels


@pytest.fixture
def defined_panels():
    pr = pr_curve([0.9, 0.8, 0.7, 0.6], [1, 0, 1, 0])
    return [
        LabelPanel("A", (CurveSeries(pr, "solid", ">1"), CurveSeries(pr, "dashdot", "0-4"))),
        LabelPanel("B", (CurveSeries(pr, "solid"),)),
    ]


class TestRenderPanels:
    def test_annotations_and_panel_count(self, defined_panels):
        svg = render_panels(defined_panels)
        assert svg.count("<text") >= 2
        assert "AP 0.833 (&gt;1)" in svg or "AP 0.833 (>1)" in svg
        assert svg.count("font-weight=\"bold\"") == 2  # one title per panel

    def test_single_defined_curve_single_panel(self):
        pr = pr_curve([0.9, 0.2], [1, 0])
        undefined = pr_curve([0.5, 0.4], [0, 0])
        svg = render_panels(
            [LabelPanel("ok", (CurveSeries(pr),)), LabelPanel("nope", (CurveSeries(undefined),))]
        )
        assert svg.count("font-weight=\"bold\"") == 1

    def test_all_undefined_is_an_error(self, tmp_path):
        undefined = pr_curve([0.5, 0.4], [0, 0])
        out = tmp_path / "x.svg"
        with pytest.raises(ValueError):
            emit_curves([LabelPanel("nope", (CurveSeries(undefined),))], out)
        assert not out.exists()  # no file written on error

    def test_mixed_kinds_rejected(self):
        pr = pr_curve([0.9, 0.2], [1, 0])
        roc = roc_curve([0.9, 0.2], [1, 0])
        with pytest.raises(ValueError, match="kind"):
            render_panels([LabelPanel("x", (CurveSeries(pr), CurveSeries(roc)))])

    def test_deterministic_bytes(self, defined_panels, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        emit_curves(defined_panels, a)
        emit_curves(defined_panels, b)
        assert a.read_bytes() == b.read_bytes()

    def test_threshold_trace_drawn_dotted(self):
        pr = pr_curve([0.9, 0.7], [1, 1])
        panel = LabelPanel(
            "A",
            (CurveSeries(pr, "solid"),),
            (TraceSeries(tuple(threshold_trace(pr)), "threshold trace"),),
        )
        svg = render_panels([panel])
        assert 'stroke-dasharray="2,3"' in svg
        assert "threshold trace" in svg

    def test_roc_panels_include_origin_anchor(self):
        roc = roc_curve([0.9, 0.2], [1, 0])
        svg = render_panels([LabelPanel("A", (CurveSeries(roc, "dashdot"),))])
        assert "AUROC 1.000" in svg
