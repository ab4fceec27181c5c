import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from mvsync.cli import main
from mvsync.ingest import serialize_clip_bundle
from mvsync.synth import OnBar, OnBeat, SynthSpec, synth_clip

from .test_ingest import minimal_doc


@pytest.fixture
def runner():
    return CliRunner()


def write_clip(directory: Path, clip_id: str, policy=None, **kwargs) -> Path:
    spec = SynthSpec(
        bpm=120.0,
        meter=4,
        duration_s=30.0,
        cut_policy=policy or OnBar(),
        clip_id=clip_id,
        **kwargs,
    )
    path = directory / f"{clip_id}.json"
    path.write_text(serialize_clip_bundle(synth_clip(spec)))
    return path


def write_dataset(directory: Path, n=10) -> Path:
    """Alternate bar-synced and beat-synced clips so genre fractions are exact."""
    lines = ["clip_id,bundle_path,music_genre,video_genre"]
    for i in range(n):
        clip_id = f"clip{i:02d}"
        policy = OnBar() if i % 2 == 0 else OnBeat()
        write_clip(directory, clip_id, policy=policy, seed=i)
        genre = "Pop" if i < 6 else "Rock"
        lines.append(f"{clip_id},{clip_id}.json,{genre},concept")
    manifest = directory / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


class TestAnalyze:
    def test_report_on_stdout(self, runner, tmp_path):
        path = write_clip(tmp_path, "solo")
        result = runner.invoke(main, ["analyze", str(path)])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["clip_id"] == "solo"
        assert report["agreement"]["bar_level"] is True

    def test_malformed_file_exits_1(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        result = runner.invoke(main, ["analyze", str(path)])
        assert result.exit_code == 1
        error = json.loads(result.stderr)
        assert error["error"]["kind"] == "syntax"

    def test_invalid_bundle_exits_2(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(minimal_doc(**{"music.meter": 5}))
        result = runner.invoke(main, ["analyze", str(path)])
        assert result.exit_code == 2
        assert json.loads(result.stderr)["error"]["code"] == "unsupported-meter"

    def test_missing_file_exits_1(self, runner, tmp_path):
        result = runner.invoke(main, ["analyze", str(tmp_path / "absent.json")])
        assert result.exit_code == 1

    def test_flags_reach_analysis(self, runner, tmp_path):
        path = write_clip(tmp_path, "flagged")
        result = runner.invoke(main, ["analyze", str(path), "--half-window", "0.3", "--tau", "0.4"])
        report = json.loads(result.output)
        assert report["params"]["tau"] == 0.4
        assert report["offset"]["half_window_s"] == 0.3

    def test_config_file_and_flag_precedence(self, runner, tmp_path):
        path = write_clip(tmp_path, "configured")
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"tau": 0.3, "sigma_frames": 3.0}))
        result = runner.invoke(main, ["analyze", str(path), "--config", str(config), "--tau", "0.6"])
        report = json.loads(result.output)
        assert report["params"]["tau"] == 0.6  # flag wins
        assert report["params"]["sigma_frames"] == 3.0  # file fills the rest

    def test_out_file(self, runner, tmp_path):
        path = write_clip(tmp_path, "towrite")
        out = tmp_path / "report.json"
        result = runner.invoke(main, ["analyze", str(path), "--out", str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text())["clip_id"] == "towrite"


class TestBatch:
    def test_reports_tables_summary(self, runner, tmp_path):
        manifest = write_dataset(tmp_path, n=10)
        out = tmp_path / "out"
        result = runner.invoke(main, ["batch", str(manifest), "--out", str(out), "--min-genre-count", "2"])
        assert result.exit_code == 0
        reports = sorted(p.name for p in (out / "reports").glob("*.json"))
        assert len(reports) == 10
        tables = sorted(p.name for p in (out / "tables").glob("*.csv"))
        assert tables == [
            "counts_by_music_genre.csv",
            "counts_by_video_genre.csv",
            "scores_by_music_genre.csv",
            "scores_by_video_genre.csv",
        ]
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n_clips"] == 10
        assert summary["n_failed"] == 0

    def test_planted_genre_fractions(self, runner, tmp_path):
        manifest = write_dataset(tmp_path, n=10)
        out = tmp_path / "out"
        runner.invoke(main, ["batch", str(manifest), "--out", str(out), "--min-genre-count", "2"])
        table = (out / "tables" / "counts_by_music_genre.csv").read_text().splitlines()
        # Pop got clips 0-5: even indices cut on the bar, odd ones on the beat
        assert "Pop,6,bar_level,3,50.0" in table
        assert "Pop,6,beat_level,3,50.0" in table
        assert "Rock,4,bar_level,2,50.0" in table

    def test_partial_failure_still_succeeds(self, runner, tmp_path):
        manifest = write_dataset(tmp_path, n=4)
        lines = manifest.read_text().splitlines()
        lines.append("ghost,ghost.json,Pop,concept")
        manifest.write_text("\n".join(lines) + "\n")
        out = tmp_path / "out"
        result = runner.invoke(main, ["batch", str(manifest), "--out", str(out)])
        assert result.exit_code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n_failed"] == 1
        assert summary["failures"][0]["clip_id"] == "ghost"
        assert "ghost" in result.stderr

    def test_empty_manifest_fails(self, runner, tmp_path):
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("clip_id,bundle_path,music_genre,video_genre\n")
        result = runner.invoke(main, ["batch", str(manifest), "--out", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert not (tmp_path / "out" / "tables").exists()

    def test_jobs_do_not_change_bytes(self, runner, tmp_path):
        manifest = write_dataset(tmp_path, n=6)

        def run(jobs, name):
            out = tmp_path / name
            result = runner.invoke(
                main,
                ["batch", str(manifest), "--out", str(out), "--jobs", str(jobs), "--min-genre-count", "1"],
            )
            assert result.exit_code == 0
            return {
                str(p.relative_to(out)): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()
            }

        assert run(1, "out1") == run(8, "out8")


class TestFigureCommand:
    def test_writes_svg(self, runner, tmp_path):
        path = write_clip(tmp_path, "fig")
        out = tmp_path / "fig.svg"
        result = runner.invoke(
            main, ["figure", str(path), "--from", "5", "--to", "15", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert out.read_text().startswith("<svg")

    def test_bad_window_fails(self, runner, tmp_path):
        path = write_clip(tmp_path, "figbad")
        result = runner.invoke(
            main,
            ["figure", str(path), "--from", "15", "--to", "5", "--out", str(tmp_path / "x.svg")],
        )
        assert result.exit_code == 1


class TestSynthCommand:
    def test_bundle_written_and_deterministic(self, runner, tmp_path):
        args = [
            "synth", "--bpm", "124", "--duration", "20", "--policy", "random",
            "--rate", "0.5", "--seed", "9",
        ]
        first = runner.invoke(main, args + ["--out", str(tmp_path / "a.json")])
        second = runner.invoke(main, args + ["--out", str(tmp_path / "b.json")])
        assert first.exit_code == second.exit_code == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_synth_then_analyze(self, runner, tmp_path):
        path = tmp_path / "gen.json"
        runner.invoke(main, ["synth", "--bpm", "120", "--duration", "40", "--out", str(path)])
        result = runner.invoke(main, ["analyze", str(path)])
        assert result.exit_code == 0
        assert json.loads(result.output)["agreement"]["bar_level"] is True

    def test_infeasible_spec_exits_2(self, runner):
        result = runner.invoke(
            main, ["synth", "--bpm", "120", "--duration", "5", "--policy", "random", "--rate", "99"]
        )
        assert result.exit_code == 2
