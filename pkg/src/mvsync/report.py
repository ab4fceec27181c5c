"""Per-genre aggregation of clip metrics into count and score tables.

Clips group either by their free-form music genre or by the closed video
genre taxonomy. Count tables report how many clips in a genre agree with
the bar and beat durations; score tables report the mean co-occurrence
score with a 95% confidence interval (normal approximation). Genres with
fewer clips than min_count are left out.
"""

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

from .cooccurrence import CooccurrenceResult
from .duration import DurationAgreement
from .model import GenreLabel

DEFAULT_MIN_COUNT = 10

# Fixed metric orders keep emitted tables deterministic.
_COUNT_METRICS = ("bar_level", "beat_level")
_SCORE_METRICS = ("segment_score", "bar_score")

Z_95 = 1.96


class Grouping(str, Enum):
    MUSIC_GENRE = "music_genre"
    VIDEO_GENRE = "video_genre"


@dataclass(frozen=True)
class CountRow:
    genre: str
    n_clips: int
    metric: str
    n_matching: int
    percent: float  # 100 * n_matching / n_clips


@dataclass(frozen=True)
class ScoreRow:
    genre: str
    n_clips: int
    metric: str
    mean: float
    ci95_halfwidth: float


@dataclass(frozen=True)
class GenreTable:
    grouping: Grouping
    kind: str  # "counts" or "scores"
    rows: tuple[CountRow, ...] | tuple[ScoreRow, ...]


def ci95(values: list[float]) -> tuple[float, float]:
    """Mean and half-width of the normal-approximation 95% interval.

    Half-width is 1.96 * s / sqrt(n) with the n-1 sample standard
    deviation; a single value has half-width 0.
    """
    n = len(values)
    if n == 0:
        raise ValueError("ci95 needs at least one value")
    if min(values) == max(values):  # constant list, n == 1 included
        return values[0], 0.0
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, Z_95 * math.sqrt(variance) / math.sqrt(n)


def _genre_key(genres: GenreLabel, grouping: Grouping) -> str:
    if grouping is Grouping.MUSIC_GENRE:
        return genres.music_genre
    return genres.video_genre.value


def _grouped(items, grouping: Grouping) -> dict:
    buckets: dict[str, list] = {}
    for genres, payload in items:
        buckets.setdefault(_genre_key(genres, grouping), []).append(payload)
    return buckets


def aggregate_counts(
    results: list[tuple[GenreLabel, DurationAgreement]],
    grouping: Grouping,
    min_count: int = DEFAULT_MIN_COUNT,
) -> GenreTable:
    """Count clips per genre whose modal shot duration agrees at bar/beat level."""
    rows: list[CountRow] = []
    buckets = _grouped(results, grouping)
    for genre in sorted(buckets):
        agreements = buckets[genre]
        n = len(agreements)
        if n < min_count:
            continue
        for metric in _COUNT_METRICS:
            matching = sum(1 for a in agreements if getattr(a, metric))
            rows.append(CountRow(genre, n, metric, matching, 100.0 * matching / n))
    return GenreTable(grouping, "counts", tuple(rows))


def aggregate_scores(
    results: list[tuple[GenreLabel, tuple[CooccurrenceResult, CooccurrenceResult]]],
    grouping: Grouping,
    min_count: int = DEFAULT_MIN_COUNT,
) -> GenreTable:
    """Mean and 95% CI per genre of the clip-level segment and downbeat scores.

    Each result pairs (segment-anchored, downbeat-anchored) scores for one clip.
    """
    rows: list[ScoreRow] = []
    buckets = _grouped(results, grouping)
    for genre in sorted(buckets):
        pairs = buckets[genre]
        n = len(pairs)
        if n < min_count:
            continue
        for metric, scores in zip(
            _SCORE_METRICS,
            ([seg.mean_score for seg, _ in pairs], [bar.mean_score for _, bar in pairs]),
        ):
            mean, halfwidth = ci95(scores)
            rows.append(ScoreRow(genre, n, metric, mean, halfwidth))
    return GenreTable(grouping, "scores", tuple(rows))


def _format_rows(table: GenreTable) -> tuple[list[str], list[list[str]]]:
    if table.kind == "counts":
        header = ["genre", "n_clips", "metric", "n_matching", "percent"]
        body = [
            [r.genre, str(r.n_clips), r.metric, str(r.n_matching), f"{r.percent:.1f}"]
            for r in table.rows
        ]
    else:
        header = ["genre", "n_clips", "metric", "value", "ci95"]
        body = [
            [r.genre, str(r.n_clips), r.metric, f"{r.mean:.4f}", f"{r.ci95_halfwidth:.4f}"]
            for r in table.rows
        ]
    return header, body


def emit_table(table: GenreTable, format: str = "csv") -> bytes:
    """Render a table deterministically as UTF-8 CSV or markdown."""
    header, body = _format_rows(table)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue().encode("utf-8")
    if format == "markdown":
        lines = [
            "| " + " | ".join(header) + " |",
            "| " + " | ".join("---" for _ in header) + " |",
        ]
        lines += ["| " + " | ".join(row) + " |" for row in body]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown table format: {format!r}")
