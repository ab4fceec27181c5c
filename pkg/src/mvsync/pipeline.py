"""Per-clip analysis and dataset-level aggregation.

This is the glue the service endpoints (and through them the CLI) drive:
one function turns a bundle into a flat report of every metric, another
folds a list of reports into the four genre tables plus a dataset
summary. Reports are plain dicts so they serialize unambiguously.
"""

from dataclasses import dataclass

from . import report as report_mod
from .cooccurrence import (
    DEFAULT_SIGMA_FRAMES,
    DEFAULT_TRUNCATION_SIGMAS,
    CooccurrenceResult,
    cooccurrence_score,
    offset_profile,
)
from .duration import (
    DEFAULT_THRESHOLD,
    DurationAgreement,
    classify_duration_agreement,
    modal_shot_duration,
    shot_boundaries,
    shot_durations,
)
from .model import ClipBundle, GenreLabel, VideoGenre
from .report import DEFAULT_MIN_COUNT, GenreTable, Grouping, aggregate_counts, aggregate_scores


@dataclass(frozen=True)
class RunConfig:
    """Analysis knobs; defaults are the reference operating point."""

    tau: float = DEFAULT_THRESHOLD
    sigma_frames: float = DEFAULT_SIGMA_FRAMES
    truncation_sigmas: float = DEFAULT_TRUNCATION_SIGMAS
    half_window_s: float | None = None  # None: half a bar, per clip
    min_genre_count: int = DEFAULT_MIN_COUNT


def analyze_bundle(bundle: ClipBundle, config: RunConfig = RunConfig()) -> dict:
    """Compute every per-clip metric: durations, agreement, scores, offsets."""
    grid = bundle.grid
    shots = shot_boundaries(bundle.curve, tau=config.tau)
    durations = shot_durations(shots, bundle.duration_s)
    modal = modal_shot_duration(durations, bundle.curve.frame_rate_hz)
    agreement = classify_duration_agreement(modal, grid)

    seg_score = cooccurrence_score(
        bundle.curve, bundle.segments, config.sigma_frames, config.truncation_sigmas
    )
    bar_score = cooccurrence_score(
        bundle.curve, bundle.downbeats, config.sigma_frames, config.truncation_sigmas
    )

    half_window = config.half_window_s if config.half_window_s is not None else 0.5 * grid.bar_s
    offsets = offset_profile(bundle.downbeats, shots, half_window)

    segment_durations = shot_durations(bundle.segments, bundle.duration_s)

    return {
        "clip_id": bundle.clip_id,
        "duration_s": bundle.duration_s,
        "music_genre": bundle.genres.music_genre if bundle.genres else None,
        "video_genre": bundle.genres.video_genre.value if bundle.genres else None,
        "bpm": grid.bpm,
        "meter": grid.meter,
        "beat_duration_s": grid.beat_s,
        "bar_duration_s": grid.bar_s,
        "pattern_duration_s": grid.pattern_s,
        "n_downbeats": len(bundle.downbeats),
        "n_segment_boundaries": len(bundle.segments),
        "n_shots": len(shots),
        "n_shot_durations": len(durations),
        "modal_shot_duration_s": modal,
        "mean_shot_duration_s": sum(durations) / len(durations),
        "n_segments": len(segment_durations),
        "mean_segment_duration_s": sum(segment_durations) / len(segment_durations),
        "agreement": {
            "beat_level": agreement.beat_level,
            "bar_level": agreement.bar_level,
            "pattern_level": agreement.pattern_level,
        },
        "segment_score": {"mean": seg_score.mean_score, "anchor_count": seg_score.anchor_count},
        "bar_score": {"mean": bar_score.mean_score, "anchor_count": bar_score.anchor_count},
        "offset": {
            "median_offset_s": offsets.median_offset_s,
            "anticipation_fraction": offsets.anticipation_fraction,
            "matched_fraction": offsets.matched_fraction,
            "n_matched": len(offsets.offsets_s),
            "half_window_s": offsets.half_window_s,
        },
        "params": {
            "tau": config.tau,
            "sigma_frames": config.sigma_frames,
            "half_window_s": half_window,
        },
    }


def _genres_of(report: dict) -> GenreLabel:
    if report.get("music_genre") is None or report.get("video_genre") is None:
        raise ValueError(
            f"report for {report.get('clip_id')!r} has no genres; aggregation needs "
            "clips loaded through a manifest"
        )
    return GenreLabel(report["music_genre"], VideoGenre(report["video_genre"]))


def _pooled_mean(reports: list[dict], mean_key: str, count_key: str) -> float | None:
    total = sum(r[count_key] for r in reports)
    if total == 0:
        return None
    return sum(r[mean_key] * r[count_key] for r in reports) / total


def aggregate_reports(
    reports: list[dict], min_count: int = DEFAULT_MIN_COUNT
) -> tuple[dict[str, GenreTable], dict]:
    """Fold per-clip reports into the four genre tables and a dataset summary.

    Tables: duration-agreement counts and co-occurrence scores, each
    grouped by music genre and by video genre. The summary reports average
    segment/bar/shot durations, pooled over all events and per clip.
    """
    if not reports:
        raise ValueError("no reports to aggregate")

    count_items = []
    score_items = []
    for r in reports:
        genres = _genres_of(r)
        count_items.append((genres, DurationAgreement(**r["agreement"])))
        score_items.append(
            (
                genres,
                (
                    CooccurrenceResult(
                        "segment", (), r["segment_score"]["mean"], r["segment_score"]["anchor_count"]
                    ),
                    CooccurrenceResult(
                        "downbeat", (), r["bar_score"]["mean"], r["bar_score"]["anchor_count"]
                    ),
                ),
            )
        )

    tables = {
        "counts_by_music_genre": aggregate_counts(count_items, Grouping.MUSIC_GENRE, min_count),
        "counts_by_video_genre": aggregate_counts(count_items, Grouping.VIDEO_GENRE, min_count),
        "scores_by_music_genre": aggregate_scores(score_items, Grouping.MUSIC_GENRE, min_count),
        "scores_by_video_genre": aggregate_scores(score_items, Grouping.VIDEO_GENRE, min_count),
    }
    n = len(reports)
    summary = {
        "n_clips": n,
        "avg_bar_duration_s": sum(r["bar_duration_s"] for r in reports) / n,
        "avg_segment_duration_s_pooled": _pooled_mean(
            reports, "mean_segment_duration_s", "n_segments"
        ),
        "avg_segment_duration_s_per_clip": sum(r["mean_segment_duration_s"] for r in reports) / n,
        "avg_shot_duration_s_pooled": _pooled_mean(
            reports, "mean_shot_duration_s", "n_shot_durations"
        ),
        "avg_shot_duration_s_per_clip": sum(r["mean_shot_duration_s"] for r in reports) / n,
    }
    return tables, summary


def render_tables(tables: dict[str, GenreTable], format: str = "csv") -> dict[str, str]:
    """Render each table to text in a stable key order."""
    return {
        name: report_mod.emit_table(tables[name], format).decode("utf-8")
        for name in sorted(tables)
    }
