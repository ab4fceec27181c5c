"""Shot extraction and duration agreement against the beat grid.

Shots come from thresholding the boundary-likelihood curve; their
duration histogram is quantized at the frame period, and its mode is
compared to the beat, bar, and pattern durations. Agreement at a level
means the modal shot duration falls strictly inside (0.5x, 1.5x) of that
level's duration.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .model import BeatGrid, BoundaryKind, BoundaryList, LikelihoodCurve, nearest_frame

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class DurationAgreement:
    """Each flag is an independent interval test for its grid level."""

    beat_level: bool
    bar_level: bool
    pattern_level: bool


@dataclass(frozen=True)
class ShotDurationProfile:
    durations_s: tuple[float, ...]
    modal_duration_s: float
    histogram: tuple[tuple[float, int], ...]  # (bin center seconds, count), frame-period bins


def shot_boundaries(curve: LikelihoodCurve, tau: float = DEFAULT_THRESHOLD) -> BoundaryList:
    """Extract shot transition times by thresholding the likelihood curve.

    Consecutive frames at or above tau are one transition, placed at the
    run's maximum-likelihood frame (earliest on ties): a single cut can
    light up several frames but produces one boundary.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    values = curve.values
    above = np.concatenate(([False], values >= tau, [False]))
    deltas = np.diff(above.astype(np.int8))
    starts = np.flatnonzero(deltas == 1)
    ends = np.flatnonzero(deltas == -1)  # exclusive

    times = []
    for start, end in zip(starts, ends):
        peak = int(start) + int(np.argmax(values[start:end]))  # argmax takes the earliest tie
        times.append(peak / curve.frame_rate_hz)
    return BoundaryList(BoundaryKind.SHOT, tuple(times))


def shot_durations(shots: BoundaryList, duration_s: float) -> list[float]:
    """Successive differences of the shot partition of [0, duration_s].

    The leading segment before the first boundary and the trailing one
    after the last are real shots and are included; zero-length end
    segments (boundary exactly at 0 or at the clip end) are dropped.
    """
    edges = [0.0, *shots.times_s, duration_s]
    durations = [b - a for a, b in zip(edges, edges[1:])]
    if durations and durations[0] == 0.0:
        durations = durations[1:]
    if durations and durations[-1] == 0.0:
        durations = durations[:-1]
    return durations


def modal_shot_duration(durations: list[float], frame_rate_hz: float) -> float:
    """Mode of the durations after quantizing each to the frame grid.

    Ties break toward the smaller duration so the result is deterministic.
    """
    if not durations:
        raise ValueError("cannot take the mode of an empty duration list")
    counts = Counter(nearest_frame(d, frame_rate_hz) for d in durations)
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    return best[0] / frame_rate_hz


def shot_duration_profile(
    shots: BoundaryList, duration_s: float, frame_rate_hz: float
) -> ShotDurationProfile:
    """Durations, frame-period histogram, and modal duration in one pass."""
    durations = shot_durations(shots, duration_s)
    if not durations:
        raise ValueError("clip has no shot durations")
    counts = Counter(nearest_frame(d, frame_rate_hz) for d in durations)
    histogram = tuple((frames / frame_rate_hz, n) for frames, n in sorted(counts.items()))
    return ShotDurationProfile(
        durations_s=tuple(durations),
        modal_duration_s=modal_shot_duration(durations, frame_rate_hz),
        histogram=histogram,
    )


def _within_half_band(value: float, reference: float) -> bool:
    return 0.5 * reference < value < 1.5 * reference


def classify_duration_agreement(modal_duration_s: float, grid: BeatGrid) -> DurationAgreement:
    """Test the modal shot duration against each grid level's interval.

    The inequalities are strict: a modal duration exactly at 0.5x or 1.5x
    does not count. For supported meters the beat and bar intervals never
    overlap, so at most one of those flags is true.
    """
    if not modal_duration_s > 0:
        raise ValueError(f"modal duration must be > 0, got {modal_duration_s}")
    return DurationAgreement(
        beat_level=_within_half_band(modal_duration_s, grid.beat_s),
        bar_level=_within_half_band(modal_duration_s, grid.bar_s),
        pattern_level=_within_half_band(modal_duration_s, grid.pattern_s),
    )
