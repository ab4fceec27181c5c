"""Core domain types for music-video synchronization analysis.

Everything downstream (ingestion, metrics, aggregation) works on these
immutable value types. Construction is deliberately permissive: invalid
data can be represented, and :func:`validate_bundle` reports every
violation with a machine-readable code instead of raising. Ingestion is
where violations become hard errors.

All event times are seconds (float64). Frame indices are derived by
rounding to the nearest frame of the likelihood curve's sampling grid.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Meters the beat grid supports. Bar duration is meter * beat duration;
# other time signatures are rejected at ingestion.
SUPPORTED_METERS = (3, 4)

# Bars per rhythmic pattern (the next grouping level above the bar).
BARS_PER_PATTERN = 4

DEFAULT_FRAME_RATE_HZ = 25.0


def nearest_frame(time_s: float, frame_rate_hz: float) -> int:
    """Map a time in seconds to the nearest frame index (half rounds up)."""
    return int(math.floor(time_s * frame_rate_hz + 0.5))


class BoundaryKind(str, Enum):
    DOWNBEAT = "downbeat"
    SEGMENT = "segment"
    SHOT = "shot"


class VideoGenre(str, Enum):
    """Closed five-value taxonomy of music-video visual styles."""

    PERFORMANCE = "performance"
    CONCEPT = "concept"
    NARRATIVE = "narrative"
    DANCE = "dance"
    OTHER = "other"

    @classmethod
    def parse(cls, token: str) -> "VideoGenre":
        """Normalize a genre token case-insensitively; raise on unknown."""
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown video genre: {token!r}") from None


@dataclass(frozen=True)
class BeatGrid:
    """Tempo- and meter-derived durations of the musical time grid.

    `beat_s` is 60/bpm, `bar_s` is meter beats, `pattern_s` is four bars.
    The derived fields are stored (not recomputed) so a grid read from
    disk can be checked for internal consistency.
    """

    bpm: float
    meter: int
    beat_s: float
    bar_s: float
    pattern_s: float

    @classmethod
    def from_tempo(cls, bpm: float, meter: int) -> "BeatGrid":
        """Derive the grid from tempo and meter.

        Non-positive or non-finite bpm yields NaN durations rather than
        raising, so ill-formed input survives until validation.
        """
        if bpm > 0 and math.isfinite(bpm):
            beat = 60.0 / bpm
            bar = meter * beat
            pattern = BARS_PER_PATTERN * bar
        else:
            beat = bar = pattern = math.nan
        return cls(bpm=bpm, meter=meter, beat_s=beat, bar_s=bar, pattern_s=pattern)


@dataclass(frozen=True)
class BoundaryList:
    """Ordered event times in seconds (downbeats, segment boundaries, or shots)."""

    kind: BoundaryKind
    times_s: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "times_s", tuple(float(t) for t in self.times_s))

    def __len__(self) -> int:
        return len(self.times_s)

    def __iter__(self):
        return iter(self.times_s)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.times_s, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class LikelihoodCurve:
    """Uniformly sampled shot-boundary probability, one value per frame."""

    values: np.ndarray
    frame_rate_hz: float = DEFAULT_FRAME_RATE_HZ

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_frames(self) -> int:
        return len(self.values)

    @property
    def frame_period_s(self) -> float:
        return 1.0 / self.frame_rate_hz

    @property
    def duration_s(self) -> float:
        return len(self.values) / self.frame_rate_hz

    def __eq__(self, other) -> bool:
        if not isinstance(other, LikelihoodCurve):
            return NotImplemented
        return self.frame_rate_hz == other.frame_rate_hz and np.array_equal(
            self.values, other.values
        )


@dataclass(frozen=True)
class GenreLabel:
    """Music genre is free-form metadata; video genre is the closed taxonomy."""

    music_genre: str
    video_genre: VideoGenre


@dataclass(frozen=True, eq=False)
class ClipBundle:
    """One music video's full structural description.

    Genres are attached when loading through a dataset manifest; a bundle
    parsed standalone carries none. Beat times are optional extra data
    from the interchange document and are not required by any metric.
    """

    clip_id: str
    duration_s: float
    grid: BeatGrid
    downbeats: BoundaryList
    segments: BoundaryList
    curve: LikelihoodCurve
    genres: GenreLabel | None = None
    beats_s: tuple[float, ...] | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClipBundle):
            return NotImplemented
        return (
            self.clip_id == other.clip_id
            and self.duration_s == other.duration_s
            and self.grid == other.grid
            and self.downbeats == other.downbeats
            and self.segments == other.segments
            and self.curve == other.curve
            and self.genres == other.genres
            and self.beats_s == other.beats_s
        )


# Machine-readable violation codes emitted by validate_bundle.
NON_POSITIVE_BPM = "non-positive-bpm"
UNSUPPORTED_METER = "unsupported-meter"
GRID_INCONSISTENT = "grid-inconsistent"
NON_MONOTONIC_BOUNDARIES = "non-monotonic-boundaries"
BOUNDARY_OUT_OF_RANGE = "boundary-out-of-range"
LIKELIHOOD_OUT_OF_UNIT_INTERVAL = "likelihood-out-of-unit-interval"
NON_POSITIVE_FRAME_RATE = "non-positive-frame-rate"
NON_POSITIVE_DURATION = "non-positive-duration"
CURVE_DURATION_MISMATCH = "curve-duration-mismatch"

# Relative tolerance for checking stored grid durations against bpm/meter.
_GRID_RTOL = 1e-9


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def _check_grid(grid: BeatGrid, issues: list[Violation]) -> None:
    bpm_ok = math.isfinite(grid.bpm) and grid.bpm > 0
    if not bpm_ok:
        issues.append(Violation(NON_POSITIVE_BPM, "music.bpm", f"bpm must be > 0, got {grid.bpm}"))
    if grid.meter not in SUPPORTED_METERS:
        issues.append(
            Violation(
                UNSUPPORTED_METER,
                "music.meter",
                f"meter must be one of {SUPPORTED_METERS}, got {grid.meter}",
            )
        )
        return
    if not bpm_ok:
        return
    expected = BeatGrid.from_tempo(grid.bpm, grid.meter)
    for name, got, want in (
        ("beat_s", grid.beat_s, expected.beat_s),
        ("bar_s", grid.bar_s, expected.bar_s),
        ("pattern_s", grid.pattern_s, expected.pattern_s),
    ):
        if not math.isclose(got, want, rel_tol=_GRID_RTOL, abs_tol=0.0):
            issues.append(
                Violation(
                    GRID_INCONSISTENT,
                    f"music.{name}",
                    f"{name}={got} inconsistent with bpm={grid.bpm}, meter={grid.meter}"
                    f" (expected {want})",
                )
            )


def _check_boundaries(
    boundaries: BoundaryList, duration_s: float, path: str, issues: list[Violation]
) -> None:
    times = boundaries.times_s
    for i, t in enumerate(times):
        if t < 0 or t > duration_s:
            issues.append(
                Violation(
                    BOUNDARY_OUT_OF_RANGE,
                    f"{path}[{i}]",
                    f"time {t} outside [0, {duration_s}]",
                )
            )
    for i in range(1, len(times)):
        if not times[i] > times[i - 1]:
            issues.append(
                Violation(
                    NON_MONOTONIC_BOUNDARIES,
                    f"{path}[{i}]",
                    f"time {times[i]} does not increase over {times[i - 1]}",
                )
            )


def validate_bundle(bundle: ClipBundle) -> ValidationReport:
    """Check every type invariant; violations are data, not failures.

    The report is empty exactly when the bundle is well-formed. Input is
    never mutated.
    """
    issues: list[Violation] = []

    if not (math.isfinite(bundle.duration_s) and bundle.duration_s > 0):
        issues.append(
            Violation(
                NON_POSITIVE_DURATION,
                "duration_s",
                f"duration must be > 0, got {bundle.duration_s}",
            )
        )

    _check_grid(bundle.grid, issues)
    _check_boundaries(bundle.downbeats, bundle.duration_s, "music.downbeats_s", issues)
    _check_boundaries(bundle.segments, bundle.duration_s, "music.segment_boundaries_s", issues)

    curve = bundle.curve
    if not (math.isfinite(curve.frame_rate_hz) and curve.frame_rate_hz > 0):
        issues.append(
            Violation(
                NON_POSITIVE_FRAME_RATE,
                "video.frame_rate_hz",
                f"frame rate must be > 0, got {curve.frame_rate_hz}",
            )
        )
    else:
        bad = np.flatnonzero((curve.values < 0.0) | (curve.values > 1.0) | ~np.isfinite(curve.values))
        for i in bad[:16]:  # cap per-sample reporting; one code per offending frame
            issues.append(
                Violation(
                    LIKELIHOOD_OUT_OF_UNIT_INTERVAL,
                    f"video.shot_likelihood[{int(i)}]",
                    f"value {curve.values[int(i)]} outside [0, 1]",
                )
            )
        if abs(curve.duration_s - bundle.duration_s) > curve.frame_period_s:
            issues.append(
                Violation(
                    CURVE_DURATION_MISMATCH,
                    "video.shot_likelihood",
                    f"curve spans {curve.duration_s} s but clip duration is "
                    f"{bundle.duration_s} s (tolerance: one frame period)",
                )
            )

    return ValidationReport(tuple(issues))
