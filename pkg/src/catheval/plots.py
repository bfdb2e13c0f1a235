"""Deterministic SVG emission for PR/ROC curve panels and threshold traces.

The output is a pure function of the inputs: fixed decimal formatting, no
timestamps, no generated ids, so repeated runs are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import Curve

PANEL_W = 250
PANEL_H = 230
MARGIN_L = 46
MARGIN_R = 14
MARGIN_T = 28
MARGIN_B = 40

_DASH = {"solid": None, "dashdot": "8,3,2,3", "dotted": "2,3"}
_COLOR = {"solid": "#1a1a1a", "dashdot": "#4a4a4a", "dotted": "#999999"}
_AXIS_LABELS = {
    "PR": ("Recall", "Precision"),
    "ROC": ("False positive rate", "True positive rate"),
}


@dataclass(frozen=True)
class CurveSeries:
    curve: Curve
    style: str = "solid"  # solid | dashdot | dotted
    name: str = ""  # cohort tag shown next to the in-panel area annotation


@dataclass(frozen=True)
class TraceSeries:
    """A (recall, threshold) trace drawn dotted grey on the same axes."""

    points: tuple[tuple[float, float], ...]
    name: str = "threshold"


@dataclass(frozen=True)
class LabelPanel:
    label: str
    series: tuple[CurveSeries, ...]
    traces: tuple[TraceSeries, ...] = ()


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _polyline(points, x0: float, y0: float, w: float, h: float) -> str:
    coords = " ".join(
        f"{_fmt(x0 + px * w)},{_fmt(y0 + (1.0 - py) * h)}" for px, py in points
    )
    return coords


def _panel_svg(panel: LabelPanel, kind: str, ox: float, oy: float) -> list[str]:
    x0 = ox + MARGIN_L
    y0 = oy + MARGIN_T
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    xl, yl = _AXIS_LABELS[kind]
    out = [
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(w)}" height="{_fmt(h)}" '
        'fill="none" stroke="#cccccc" stroke-width="1"/>',
        f'<text x="{_fmt(ox + PANEL_W / 2)}" y="{_fmt(oy + 18)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" font-weight="bold">{panel.label}</text>',
        f'<text x="{_fmt(x0 + w / 2)}" y="{_fmt(y0 + h + 30)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{xl}</text>',
        f'<text x="{_fmt(ox + 12)}" y="{_fmt(y0 + h / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 {_fmt(ox + 12)} {_fmt(y0 + h / 2)})">{yl}</text>',
    ]
    for i in range(6):
        t = i / 5.0
        tx = x0 + t * w
        ty = y0 + (1.0 - t) * h
        out.append(
            f'<line x1="{_fmt(tx)}" y1="{_fmt(y0 + h)}" x2="{_fmt(tx)}" y2="{_fmt(y0 + h + 4)}" '
            'stroke="#888888" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(y0 + h + 15)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="9">{t:.1f}</text>'
        )
        out.append(
            f'<line x1="{_fmt(x0 - 4)}" y1="{_fmt(ty)}" x2="{_fmt(x0)}" y2="{_fmt(ty)}" '
            'stroke="#888888" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 6)}" y="{_fmt(ty + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="9">{t:.1f}</text>'
        )
    annotations = []
    for s in panel.series:
        if not s.curve.defined:
            continue
        pts = [(p.x, p.y) for p in s.curve.points if abs(p.threshold) != float("inf")]
        if s.curve.kind == "ROC":
            pts = [(0.0, 0.0)] + pts
        dash = _DASH[s.style]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline points="{_polyline(pts, x0, y0, w, h)}" fill="none" '
            f'stroke="{_COLOR[s.style]}" stroke-width="1.5"{dash_attr}/>'
        )
        stat = "AP" if s.curve.kind == "PR" else "AUROC"
        tag = f" ({s.name})" if s.name else ""
        annotations.append(f"{stat} {s.curve.area.value:.3f}{tag}")
    for tr in panel.traces:
        out.append(
            f'<polyline points="{_polyline(tr.points, x0, y0, w, h)}" fill="none" '
            f'stroke="{_COLOR["dotted"]}" stroke-width="1.2" stroke-dasharray="{_DASH["dotted"]}"/>'
        )
        annotations.append(tr.name)
    for j, text in enumerate(annotations):
        out.append(
            f'<text x="{_fmt(x0 + 8)}" y="{_fmt(y0 + h - 8 - 12 * (len(annotations) - 1 - j))}" '
            f'font-family="sans-serif" font-size="10">{text}</text>'
        )
    return out


def render_panels(panels: list[LabelPanel]) -> str:
    """Lay defined panels out on a two-column grid and return SVG text."""
    kept = []
    for panel in panels:
        defined = tuple(s for s in panel.series if s.curve.defined)
        if defined:
            kept.append(LabelPanel(panel.label, defined, panel.traces))
    if not kept:
        raise ValueError("no defined curves to plot")
    kinds = {s.curve.kind for p in kept for s in p.series}
    if len(kinds) != 1:
        raise ValueError(f"panels mix curve kinds: {sorted(kinds)}")
    kind = kinds.pop()
    ncols = 2 if len(kept) > 1 else 1
    nrows = (len(kept) + ncols - 1) // ncols
    width = ncols * PANEL_W
    height = nrows * PANEL_H
    body: list[str] = [
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>'
    ]
    for i, panel in enumerate(kept):
        ox = (i % ncols) * PANEL_W
        oy = (i // ncols) * PANEL_H
        body.extend(_panel_svg(panel, kind, ox, oy))
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def emit_curves(panels: list[LabelPanel], path) -> None:
    """Render panels to an SVG file; errors (writing nothing) if no curve is defined."""
    from .formats import atomic_write_text

    atomic_write_text(path, render_panels(panels))
