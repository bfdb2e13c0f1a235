"""Command-line interface.

Subcommands: split, thresholds, eval, curves, lam, synth, self-check.
All randomness is seeded via explicit flags; outputs are deterministic
functions of the inputs, so repeated runs are byte-identical. Failures print
a single machine-parseable JSON line on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import emit, plots
from .curves import pr_curve, roc_curve, threshold_trace
from .formats import (
    atomic_write_bytes,
    parse_config,
    parse_labels,
    parse_scores,
    parse_thresholds,
    read_head_weights,
    read_tensor,
    write_labels,
    write_scores,
    write_split,
    write_thresholds,
)
from .lam import FeatureMapDump, compute_lam, render_overlay, upsample
from .model import (
    LabelSet,
    MoreThanOne,
    align,
    cohort_by_cardinality,
    split_dataset,
)
from .report import evaluate
from .synth import SyntheticSpec, generate_synthetic
from .thresholds import FixedStep, ObservedScores, select_all


def _parse_grid(text: str):
    if text == "observed":
        return ObservedScores()
    if text == "fixed":
        return FixedStep()
    if text.startswith("fixed:"):
        return FixedStep(float(text.split(":", 1)[1]))
    raise ValueError(f"grid must be 'observed', 'fixed', or 'fixed:<step>', got {text!r}")


def _csv_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _read_ids(path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    return [l for l in lines if l != ""]


# --- subcommand implementations ----------------------------------------------


def _cmd_split(args) -> int:
    ids = _read_ids(args.ids)
    counts = tuple(int(c) for c in args.counts.split(","))
    if len(counts) != 3:
        raise ValueError("counts must be train,validation,test")
    split = split_dataset(ids, counts, args.seed)
    write_split(split, args.out)
    print(f"wrote {args.out} ({counts[0]}/{counts[1]}/{counts[2]}, seed {args.seed})")
    return 0


def _cmd_thresholds(args) -> int:
    scores = parse_scores(args.scores)
    truth = parse_labels(args.labels)
    scores = align(scores, truth)
    grid = _parse_grid(args.grid)
    vector, results = select_all(scores, truth, grid)
    write_thresholds(vector, truth.labels, args.out)
    for name, r in zip(truth.labels.names, results):
        flag = " (degenerate: objective never beat chance)" if r.degenerate else ""
        print(
            f"{name}: threshold {r.chosen} objective {r.objective:.4f} "
            f"({r.candidates_evaluated} candidates, {len(r.tie_set)} tied){flag}"
        )
    if args.plot:
        panels = []
        for k, name in enumerate(truth.labels.names):
            curve = pr_curve(scores.column(k), truth.column(k))
            traces = ()
            if curve.defined:
                traces = (plots.TraceSeries(tuple(threshold_trace(curve)), "threshold trace"),)
            panels.append(
                plots.LabelPanel(
                    name, (plots.CurveSeries(curve, "solid", "validation"),), traces
                )
            )
        plots.emit_curves(panels, args.plot)
        print(f"wrote {args.plot}")
    return 0


def _cmd_eval(args) -> int:
    scores = parse_scores(args.scores)
    truth = parse_labels(args.labels)
    thresholds, tlabels = parse_thresholds(args.thresholds)
    if tlabels.names != truth.labels.names:
        raise ValueError(
            f"threshold labels {tlabels.names} do not match dataset labels {truth.labels.names}"
        )
    notes = None
    if args.notes:
        notes = [l for l in Path(args.notes).read_text(encoding="utf-8").split("\n") if l]
    report = evaluate(scores, truth, thresholds, timestamp=args.timestamp, notes=notes)
    paths = emit.write_report_files(report, args.outdir)
    for p in paths.values():
        print(f"wrote {p}")
    return 0


def _cmd_curves(args) -> int:
    scores = parse_scores(args.scores)
    truth = parse_labels(args.labels)
    scores = align(scores, truth)
    multi = cohort_by_cardinality(truth, MoreThanOne())
    rows_multi = [truth.image_ids.index(i) for i in multi.member_ids]
    all_name = f"0-{truth.k}"
    for kind, maker, out in (("PR", pr_curve, args.out_pr), ("ROC", roc_curve, args.out_roc)):
        if not out:
            continue
        panels = []
        for k, name in enumerate(truth.labels.names):
            series = [
                plots.CurveSeries(
                    maker(scores.scores[rows_multi, k], truth.values[rows_multi, k]),
                    "solid",
                    ">1",
                )
                if rows_multi
                else None,
                plots.CurveSeries(maker(scores.column(k), truth.column(k)), "dashdot", all_name),
            ]
            panels.append(plots.LabelPanel(name, tuple(s for s in series if s)))
        plots.emit_curves(panels, out)
        print(f"wrote {out}")
    return 0


def _cmd_lam(args) -> int:
    features_arr, header = read_tensor(args.features)
    if features_arr.ndim != 3:
        raise ValueError(f"feature dump must be C x H x W, got shape {list(features_arr.shape)}")
    weights = read_head_weights(args.weights)
    base = np.asarray(Image.open(args.image).convert("L"))
    features = FeatureMapDump(
        features_arr.astype(np.float64),
        source_image_id=str(header.get("source_image_id", "")),
        source_image_size=base.shape,
    )
    try:
        label = int(args.label)
    except ValueError:
        label = weights.label_names.index(args.label) if args.label in weights.label_names else -1
        if label < 0:
            raise ValueError(
                f"unknown label {args.label!r}; dump carries {weights.label_names}"
            ) from None
    amap = compute_lam(features, weights, label)
    amap = upsample(amap, base.shape)
    overlay = render_overlay(amap, base, opacity=args.opacity)
    buf = io.BytesIO()
    Image.fromarray(overlay).save(buf, format="PNG")
    atomic_write_bytes(args.out, buf.getvalue())
    print(f"wrote {args.out}")
    return 0


def _cmd_synth(args) -> int:
    prevalence = _csv_floats(args.prevalence)
    separability = _csv_floats(args.separability)
    labels = LabelSet(tuple(args.label_names.split(","))) if args.label_names else None
    spec = SyntheticSpec(prevalence, separability, args.n, args.seed, labels)
    truth, scores = generate_synthetic(spec)
    write_labels(truth, args.out_labels)
    write_scores(scores, args.out_scores)
    print(f"wrote {args.out_labels} and {args.out_scores} (n={args.n}, seed={args.seed})")
    return 0


def _cmd_self_check(args) -> int:
    problems = emit.verify_report_files(args.metrics, args.counts)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        raise ValueError(f"self-check failed with {len(problems)} problem(s)")
    print("self-check passed: every metric recomputes from its counts")
    return 0


# --- wiring --------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catheval",
        description="Evaluate multi-label classifiers: thresholds, metrics, curves, overlays.",
    )
    parser.add_argument("--config", help="key=value file supplying defaults for flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="seeded train/validation/test split with exact counts")
    p.add_argument("--ids", required=True, help="text file, one image id per line")
    p.add_argument("--counts", required=True, help="train,validation,test sizes")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("thresholds", help="select per-label thresholds on validation data")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--grid", default="fixed:0.05", help="'fixed:<step>' or 'observed'")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", help="also emit validation PR curves with threshold traces (SVG)")
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("eval", help="full per-label, per-cohort evaluation report")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--thresholds", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--notes", help="text file of notes to append to the report")
    p.add_argument("--timestamp", help="recorded in the report when given")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("curves", help="PR/ROC curve panels per label (SVG)")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out-pr", help="output path for PR panels")
    p.add_argument("--out-roc", help="output path for ROC panels")
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("lam", help="render a label activation map overlay")
    p.add_argument("--features", required=True, help="C x H x W tensor dump")
    p.add_argument("--weights", required=True, help="K x C head-weight dump")
    p.add_argument("--image", required=True, help="grayscale base image")
    p.add_argument("--label", required=True, help="label name or index")
    p.add_argument("--opacity", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output PNG")
    p.set_defaults(func=_cmd_lam)

    p = sub.add_parser("synth", help="generate a seeded synthetic truth/score fixture")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prevalence", required=True, help="comma-separated, per label")
    p.add_argument("--separability", required=True, help="comma-separated, per label")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--label-names", help="comma-separated label names")
    p.add_argument("--out-labels", required=True)
    p.add_argument("--out-scores", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("self-check", help="verify an emitted report recomputes from its counts")
    p.add_argument("--metrics", required=True, help="metrics.csv from eval")
    p.add_argument("--counts", required=True, help="counts.csv from eval")
    p.set_defaults(func=_cmd_self_check)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Config values act as flag defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    config = parse_config(argv[at + 1])
    rest = argv[:at] + argv[at + 2 :]
    given = {a.split("=", 1)[0] for a in rest if a.startswith("--")}
    extra: list[str] = []
    for key, value in config.items():
        flag = "--" + key.replace("_", "-")
        if flag not in given:
            extra += [flag, value]
    return rest + extra


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except Exception as e:  # single machine-parseable error line
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
