"""Report emission: aligned-text tables for humans, CSV for machines.

Rendering follows the dash conventions of the source tables: an undefined
metric prints as an en dash, and a defined point of exactly 0 or 1 prints
with "( - )" in place of its confidence interval. Display values use three
decimals, round-half-to-even; machine output keeps full precision.
"""

from __future__ import annotations

from pathlib import Path

from .intervals import IntervalEstimate, logit_interval
from .metrics import MetricValue
from .formats import atomic_write_text
from .report import (
    ALL_METRICS,
    CURVE_METRICS,
    POOLED_LABEL,
    PROPORTION_METRICS,
    EvaluationReport,
    ReportCell,
)

DASH = "–"  # matches the published tables' undefined-cell glyph

METRIC_TITLES = {
    "sensitivity": "Sensitivity",
    "specificity": "Specificity",
    "hamming_loss": "Hamming loss",
    "average_precision": "Average Precision",
    "auroc": "AUROC",
}


def format_point(value: float) -> str:
    if value == 0.0:
        return "0"
    if value == 1.0:
        return "1"
    return f"{value:.3f}"


def format_cell(metric: MetricValue, interval: IntervalEstimate | None) -> str:
    """e.g. '0.949 (0.854 - 0.984)', '1 ( - )', or a bare dash."""
    if not metric.defined:
        return DASH
    point = format_point(metric.value)
    if interval is None:
        return point
    if not interval.defined:
        return f"{point} ( - )"
    return f"{point} ({interval.lower:.3f} - {interval.upper:.3f})"


def _row_cells(report: EvaluationReport, label: str, metric: str) -> list[str]:
    cells = []
    for cohort in report.cohort_names:
        if label == POOLED_LABEL:
            if metric in CURVE_METRICS:
                cells.append(DASH)  # areas are not pooled across labels
                continue
            cell = report.pooled[cohort]
        else:
            cell = report.cell(label, cohort)
        cells.append(format_cell(cell.metrics[metric], cell.intervals.get(metric)))
    return cells


def _aligned(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]


def render_text_report(report: EvaluationReport) -> str:
    """One aligned table per metric plus a TN/FP/FN/TP counts table."""
    lines: list[str] = []
    header = ["label"] + list(report.cohort_names)
    for metric in ALL_METRICS:
        lines.append(METRIC_TITLES[metric])
        rows = [header]
        for label in report.label_names + (POOLED_LABEL,):
            rows.append([label] + _row_cells(report, label, metric))
        lines.extend(_aligned(rows))
        lines.append("")
    lines.append("Counts")
    rows = [["label", "count"] + list(report.cohort_names)]
    for label in report.label_names + (POOLED_LABEL,):
        for part in ("tn", "fp", "fn", "tp"):
            row = [label, part.upper()]
            for cohort in report.cohort_names:
                cell = report.pooled[cohort] if label == POOLED_LABEL else report.cell(label, cohort)
                row.append(str(getattr(cell.counts, part)))
            rows.append(row)
    lines.extend(_aligned(rows))
    lines.append("")
    lines.append(f"Thresholds: {', '.join(repr(t) for t in report.thresholds.per_label)}")
    lines.append(f"Images: {len(report.image_ids)}")
    lines.append(f"Note: {report.metadata['pooled_caveat']}")
    if report.metadata.get("timestamp"):
        lines.append(f"Generated: {report.metadata['timestamp']}")
    for note in report.metadata.get("notes", []):
        lines.append(f"Note: {note}")
    return "\n".join(lines) + "\n"


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_metrics_csv(report: EvaluationReport) -> str:
    out = ["label,cohort,metric,value,numerator,denominator,lower,upper,reason,pooled"]
    for label in report.label_names + (POOLED_LABEL,):
        pooled = label == POOLED_LABEL
        metric_names = PROPORTION_METRICS if pooled else ALL_METRICS
        for cohort in report.cohort_names:
            cell = report.pooled[cohort] if pooled else report.cell(label, cohort)
            for metric in metric_names:
                mv = cell.metrics[metric]
                iv = cell.intervals.get(metric)
                out.append(
                    ",".join(
                        [
                            label,
                            cohort,
                            metric,
                            _csv_value(mv.value),
                            _csv_value(mv.numerator),
                            _csv_value(mv.denominator),
                            _csv_value(iv.lower if iv else None),
                            _csv_value(iv.upper if iv else None),
                            mv.reason.value if mv.reason else "",
                            "1" if pooled else "0",
                        ]
                    )
                )
    return "\n".join(out) + "\n"


def render_counts_csv(report: EvaluationReport) -> str:
    out = ["label,cohort,tn,fp,fn,tp"]
    for label in report.label_names + (POOLED_LABEL,):
        for cohort in report.cohort_names:
            cell = report.pooled[cohort] if label == POOLED_LABEL else report.cell(label, cohort)
            c = cell.counts
            out.append(f"{label},{cohort},{c.tn},{c.fp},{c.fn},{c.tp}")
    return "\n".join(out) + "\n"


def write_report_files(report: EvaluationReport, outdir) -> dict[str, Path]:
    """Emit report.txt, metrics.csv, counts.csv after a passing self-check."""
    report.self_check()  # abort emission if counts do not reproduce the metrics
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": outdir / "report.txt",
        "metrics": outdir / "metrics.csv",
        "counts": outdir / "counts.csv",
    }
    atomic_write_text(paths["text"], render_text_report(report))
    atomic_write_text(paths["metrics"], render_metrics_csv(report))
    atomic_write_text(paths["counts"], render_counts_csv(report))
    return paths


# --- machine-report verification (CLI self-check) ---------------------------


def verify_report_files(metrics_csv, counts_csv) -> list[str]:
    """Recompute every metric row from the counts table; return problems found."""
    problems: list[str] = []
    counts: dict[tuple[str, str], dict[str, int]] = {}
    count_lines = Path(counts_csv).read_text(encoding="utf-8").strip().split("\n")
    if count_lines[0] != "label,cohort,tn,fp,fn,tp":
        return [f"{counts_csv}: unexpected header {count_lines[0]!r}"]
    for line in count_lines[1:]:
        label, cohort, tn, fp, fn, tp = line.split(",")
        counts[(label, cohort)] = {
            "tn": int(tn), "fp": int(fp), "fn": int(fn), "tp": int(tp)
        }
    metric_lines = Path(metrics_csv).read_text(encoding="utf-8").strip().split("\n")
    expected_header = "label,cohort,metric,value,numerator,denominator,lower,upper,reason,pooled"
    if metric_lines[0] != expected_header:
        return [f"{metrics_csv}: unexpected header {metric_lines[0]!r}"]
    numerators = {
        "sensitivity": ("tp", ("tp", "fn")),
        "specificity": ("tn", ("tn", "fp")),
        "hamming_loss": (("fp", "fn"), ("tn", "fp", "fn", "tp")),
    }
    for line in metric_lines[1:]:
        label, cohort, metric, value, num, den, lower, upper, reason, _pooled = line.split(",")
        where = f"{label}/{cohort}/{metric}"
        if metric in CURVE_METRICS:
            if value and not (0.0 <= float(value) <= 1.0):
                problems.append(f"{where}: area {value} outside [0, 1]")
            continue
        c = counts.get((label, cohort))
        if c is None:
            problems.append(f"{where}: no counts row")
            continue
        num_keys, den_keys = numerators[metric]
        expect_num = sum(c[k] for k in (num_keys if isinstance(num_keys, tuple) else (num_keys,)))
        expect_den = sum(c[k] for k in den_keys)
        if value == "":
            if expect_den != 0:
                problems.append(f"{where}: undefined but denominator is {expect_den}")
            if not reason:
                problems.append(f"{where}: undefined cell carries no reason")
            continue
        if int(num) != expect_num or int(den) != expect_den:
            problems.append(
                f"{where}: stored {num}/{den}, counts imply {expect_num}/{expect_den}"
            )
            continue
        if float(value) != expect_num / expect_den:
            problems.append(f"{where}: value {value} != {expect_num}/{expect_den}")
        if lower:
            iv = logit_interval(expect_num, expect_den)
            if repr(iv.lower) != lower or repr(iv.upper) != upper:
                problems.append(f"{where}: interval ({lower}, {upper}) does not recompute")
        elif float(value) not in (0.0, 1.0) and expect_den > 0:
            problems.append(f"{where}: interior point {value} is missing its interval")
    return problems
