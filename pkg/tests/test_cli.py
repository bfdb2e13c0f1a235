import json
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from catheval.fixtures import paper_fixture_dir
from catheval.formats import parse_split, write_head_weights, write_tensor
from catheval.lam import HeadWeights


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "catheval", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


@pytest.fixture(scope="module")
def fixture_dir():
    return paper_fixture_dir()


class TestSplitCommand:
    def test_split_roundtrip_and_determinism(self, tmp_path):
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text("".join(f"img{i}\n" for i in range(777)))
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        for out in (out1, out2):
            r = run_cli("split", "--ids", str(ids_file), "--counts", "629,70,78",
                        "--seed", "41", "--out", str(out))
            assert r.returncode == 0, r.stderr
        assert out1.read_bytes() == out2.read_bytes()
        split = parse_split(out1)
        assert split.sizes() == (629, 70, 78)

    def test_bad_counts_fail_with_error_line(self, tmp_path):
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text("a\nb\n")
        r = run_cli("split", "--ids", str(ids_file), "--counts", "2,1,0",
                    "--seed", "1", "--out", str(tmp_path / "x.csv"))
        assert r.returncode == 1
        err = json.loads(r.stderr.strip().split("\n")[-1])
        assert err["error"] == "ValueError"


class TestThresholdsCommand:
    def test_reproduces_published_thresholds(self, tmp_path, fixture_dir):
        out = tmp_path / "thr.csv"
        plot = tmp_path / "fig.svg"
        r = run_cli(
            "thresholds",
            "--scores", str(fixture_dir / "scores_validation.csv"),
            "--labels", str(fixture_dir / "labels_validation.csv"),
            "--grid", "fixed:0.05",
            "--out", str(out), "--plot", str(plot),
        )
        assert r.returncode == 0, r.stderr
        assert out.read_text().splitlines()[1:] == [
            "NGT,0.8", "ETT,0.2", "UAC,0.8", "UVC,0.75"
        ]
        assert plot.exists()
        assert "threshold trace" in plot.read_text()


class TestEvalCommand:
    def test_eval_plus_self_check(self, tmp_path, fixture_dir):
        outdir = tmp_path / "report"
        r = run_cli(
            "eval",
            "--scores", str(fixture_dir / "scores_test_multilabel.csv"),
            "--labels", str(fixture_dir / "labels_test.csv"),
            "--thresholds", str(fixture_dir / "thresholds.csv"),
            "--outdir", str(outdir),
            "--notes", str(fixture_dir / "notes.txt"),
        )
        assert r.returncode == 0, r.stderr
        text = (outdir / "report.txt").read_text()
        assert "0.949 (0.854 - 0.984)" in text  # NGT sensitivity, whole test set
        assert "1 ( - )" in text  # UAC specificity dash convention
        assert "published 0.967 is inconsistent" in text
        check = run_cli("self-check", "--metrics", str(outdir / "metrics.csv"),
                        "--counts", str(outdir / "counts.csv"))
        assert check.returncode == 0, check.stderr

    def test_self_check_catches_corruption(self, tmp_path, fixture_dir):
        outdir = tmp_path / "report"
        run_cli(
            "eval",
            "--scores", str(fixture_dir / "scores_test_multilabel.csv"),
            "--labels", str(fixture_dir / "labels_test.csv"),
            "--thresholds", str(fixture_dir / "thresholds.csv"),
            "--outdir", str(outdir),
        )
        metrics = outdir / "metrics.csv"
        corrupted = metrics.read_text().replace("0.9491525423728814", "0.95")
        metrics.write_text(corrupted)
        r = run_cli("self-check", "--metrics", str(metrics), "--counts", str(outdir / "counts.csv"))
        assert r.returncode == 1
        assert "NGT/0-4/sensitivity" in r.stderr

    def test_repeated_runs_byte_identical(self, tmp_path, fixture_dir):
        outs = []
        for sub in ("one", "two"):
            outdir = tmp_path / sub
            r = run_cli(
                "eval",
                "--scores", str(fixture_dir / "scores_test_multilabel.csv"),
                "--labels", str(fixture_dir / "labels_test.csv"),
                "--thresholds", str(fixture_dir / "thresholds.csv"),
                "--outdir", str(outdir),
            )
            assert r.returncode == 0, r.stderr
            outs.append(outdir)
        for name in ("report.txt", "metrics.csv", "counts.csv"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


class TestCurvesCommand:
    def test_emits_both_panel_files(self, tmp_path, fixture_dir):
        pr = tmp_path / "pr.svg"
        roc = tmp_path / "roc.svg"
        r = run_cli(
            "curves",
            "--scores", str(fixture_dir / "scores_test_multilabel.csv"),
            "--labels", str(fixture_dir / "labels_test.csv"),
            "--out-pr", str(pr), "--out-roc", str(roc),
        )
        assert r.returncode == 0, r.stderr
        assert "AP " in pr.read_text()
        assert "AUROC " in roc.read_text()


class TestLamCommand:
    @pytest.fixture
    def lam_inputs(self, tmp_path):
        rng = np.random.default_rng(9)
        write_tensor(rng.standard_normal((6, 5, 5)).astype(np.float32),
                     tmp_path / "f.bin", source_image_id="img")
        write_head_weights(
            HeadWeights(rng.standard_normal((4, 6)), ("NGT", "ETT", "UAC", "UVC")),
            tmp_path / "w.bin",
        )
        img = (rng.random((64, 48)) * 255).astype(np.uint8)
        Image.fromarray(img, mode="L").save(tmp_path / "base.png")
        return tmp_path

    def test_overlay_determinism(self, lam_inputs):
        for name in ("o1.png", "o2.png"):
            r = run_cli(
                "lam",
                "--features", str(lam_inputs / "f.bin"),
                "--weights", str(lam_inputs / "w.bin"),
                "--image", str(lam_inputs / "base.png"),
                "--label", "UAC", "--out", str(lam_inputs / name),
            )
            assert r.returncode == 0, r.stderr
        assert (lam_inputs / "o1.png").read_bytes() == (lam_inputs / "o2.png").read_bytes()

    def test_channel_mismatch_diagnostic(self, lam_inputs):
        rng = np.random.default_rng(10)
        write_tensor(rng.standard_normal((3, 5, 5)).astype(np.float32), lam_inputs / "bad.bin")
        r = run_cli(
            "lam",
            "--features", str(lam_inputs / "bad.bin"),
            "--weights", str(lam_inputs / "w.bin"),
            "--image", str(lam_inputs / "base.png"),
            "--label", "0", "--out", str(lam_inputs / "x.png"),
        )
        assert r.returncode == 1
        err = json.loads(r.stderr.strip())
        assert "channels" in err["message"]


class TestSynthCommand:
    def test_same_seed_byte_identical(self, tmp_path):
        for sub in ("a", "b"):
            d = tmp_path / sub
            d.mkdir()
            r = run_cli(
                "synth", "--n", "200", "--prevalence", "0.5,0.3",
                "--separability", "1.5,0.0", "--seed", "123",
                "--out-labels", str(d / "l.csv"), "--out-scores", str(d / "s.csv"),
            )
            assert r.returncode == 0, r.stderr
        assert (tmp_path / "a" / "l.csv").read_bytes() == (tmp_path / "b" / "l.csv").read_bytes()
        assert (tmp_path / "a" / "s.csv").read_bytes() == (tmp_path / "b" / "s.csv").read_bytes()


class TestUsageAndConfig:
    def test_unknown_subcommand_prints_usage(self):
        r = run_cli("explode")
        assert r.returncode == 2
        assert "usage" in r.stderr.lower()

    def test_unknown_flag(self):
        r = run_cli("split", "--nope", "x")
        assert r.returncode == 2

    def test_config_file_supplies_defaults(self, tmp_path):
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text("a\nb\nc\nd\n")
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"counts=2,1,1\nseed=5\nout={tmp_path / 'split.csv'}\n")
        r = run_cli("--config", str(cfg), "split", "--ids", str(ids_file))
        assert r.returncode == 0, r.stderr
        assert parse_split(tmp_path / "split.csv").sizes() == (2, 1, 1)

    def test_explicit_flag_beats_config(self, tmp_path):
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text("a\nb\nc\nd\n")
        cfg = tmp_path / "run.cfg"
        cfg.write_text("counts=4,0,0\nseed=5\n")
        out = tmp_path / "split.csv"
        r = run_cli("--config", str(cfg), "split", "--ids", str(ids_file),
                    "--counts", "2,2,0", "--out", str(out))
        assert r.returncode == 0, r.stderr
        assert parse_split(out).sizes() == (2, 2, 0)
