"""Synthetic clips with planted editing policies, plus a brute-force scorer.

The generator lays downbeats on an exact tempo grid, places segment
boundaries every eight bars, and spikes the likelihood curve at cut times
chosen by a policy: cuts on every downbeat, on every beat, a fixed
anticipation before each downbeat, or uniformly random cuts. With a fixed
seed generation is fully deterministic, so pipeline tests can recover the
planted parameters end to end.

`oracle_cooccurrence` recomputes anchor scores as a plain full-curve sum
(no window truncation); it exists as an independent reference for tests.
"""

from dataclasses import dataclass

import numpy as np

from . import ingest
from .model import (
    BeatGrid,
    BoundaryKind,
    BoundaryList,
    ClipBundle,
    GenreLabel,
    LikelihoodCurve,
    VideoGenre,
    nearest_frame,
    validate_bundle,
)

SEGMENT_LENGTH_BARS = 8  # a typical pop phrase


class InfeasibleSynthSpec(ValueError):
    """The spec cannot be realized, e.g. two cuts land in one frame."""


@dataclass(frozen=True)
class OnBar:
    pass


@dataclass(frozen=True)
class OnBeat:
    pass


@dataclass(frozen=True)
class Anticipate:
    offset_s: float


@dataclass(frozen=True)
class RandomCuts:
    rate_hz: float


CutPolicy = OnBar | OnBeat | Anticipate | RandomCuts


@dataclass(frozen=True)
class SynthSpec:
    bpm: float
    meter: int
    duration_s: float
    cut_policy: CutPolicy
    jitter_s: float = 0.0
    impulse_value: float = 1.0
    peak_shape: str = "impulse"  # or "triangle": side frames at 3/4 height
    frame_rate_hz: float = 25.0
    seed: int = 0
    clip_id: str = "synth"
    music_genre: str = "Synthetic"
    video_genre: VideoGenre = VideoGenre.OTHER


def _grid_times(step_s: float, duration_s: float, start: int = 0) -> list[float]:
    times = []
    k = start
    while True:
        t = k * step_s
        if t >= duration_s:
            return times
        times.append(t)
        k += 1


def _cut_times(spec: SynthSpec, rng: np.random.Generator, grid: BeatGrid) -> list[float]:
    policy = spec.cut_policy
    if isinstance(policy, OnBar):
        return _grid_times(grid.bar_s, spec.duration_s)
    if isinstance(policy, OnBeat):
        return _grid_times(grid.beat_s, spec.duration_s)
    if isinstance(policy, Anticipate):
        return [t - policy.offset_s for t in _grid_times(grid.bar_s, spec.duration_s)
                if t - policy.offset_s >= 0]
    if isinstance(policy, RandomCuts):
        n_frames = int(round(spec.duration_s * spec.frame_rate_hz))
        n_cuts = int(round(policy.rate_hz * spec.duration_s))
        if n_cuts > n_frames:
            raise InfeasibleSynthSpec(
                f"cut rate {policy.rate_hz} Hz needs {n_cuts} cuts but the clip "
                f"has only {n_frames} frames"
            )
        # Sampling frames without replacement keeps cuts collision-free.
        frames = np.sort(rng.choice(n_frames, size=n_cuts, replace=False))
        return [float(f) / spec.frame_rate_hz for f in frames]
    raise TypeError(f"unknown cut policy: {policy!r}")


def synth_clip(spec: SynthSpec) -> ClipBundle:
    """Generate one bundle realizing the spec; deterministic for a fixed seed."""
    grid = BeatGrid.from_tempo(spec.bpm, spec.meter)
    if not grid.bar_s > 0:
        raise InfeasibleSynthSpec(f"bpm {spec.bpm} gives no usable grid")
    n_frames = int(round(spec.duration_s * spec.frame_rate_hz))
    if n_frames <= 0:
        raise InfeasibleSynthSpec(f"duration {spec.duration_s} s yields an empty curve")

    rng = np.random.default_rng(spec.seed)
    downbeats = _grid_times(grid.bar_s, spec.duration_s)
    segments = _grid_times(SEGMENT_LENGTH_BARS * grid.bar_s, spec.duration_s, start=1)

    cut_times = _cut_times(spec, rng, grid)
    if spec.jitter_s > 0:
        noise = rng.normal(0.0, spec.jitter_s, size=len(cut_times))
        cut_times = [t + dt for t, dt in zip(cut_times, noise)]
        cut_times = [t for t in cut_times if 0 <= t < spec.duration_s]

    frames = [nearest_frame(t, spec.frame_rate_hz) for t in cut_times]
    frames = [f for f in frames if 0 <= f < n_frames]
    if len(set(frames)) != len(frames):
        raise InfeasibleSynthSpec(
            "two cuts collide within one frame; lower the cut rate or jitter"
        )

    values = np.zeros(n_frames)
    for f in frames:
        values[f] = spec.impulse_value
        if spec.peak_shape == "triangle":
            side = 0.75 * spec.impulse_value
            if f > 0:
                values[f - 1] = max(values[f - 1], side)
            if f + 1 < n_frames:
                values[f + 1] = max(values[f + 1], side)

    bundle = ClipBundle(
        clip_id=spec.clip_id,
        duration_s=spec.duration_s,
        grid=grid,
        downbeats=BoundaryList(BoundaryKind.DOWNBEAT, tuple(downbeats)),
        segments=BoundaryList(BoundaryKind.SEGMENT, tuple(segments)),
        curve=LikelihoodCurve(values, spec.frame_rate_hz),
        genres=GenreLabel(spec.music_genre, spec.video_genre),
    )
    report = validate_bundle(bundle)
    if not report.ok:
        raise InfeasibleSynthSpec(f"generated bundle fails validation: {report.codes()}")
    return bundle


def write_fixture(bundle: ClipBundle, path) -> None:
    """Write a generated bundle in the interchange format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ingest.serialize_clip_bundle(bundle))


def oracle_cooccurrence(
    curve: LikelihoodCurve, anchors: BoundaryList, sigma_frames: float = 2.0
) -> list[float]:
    """Reference anchor scores: the full untruncated sum over every frame.

    Quadratic in curve length; meant for tests on small curves only.
    """
    values = curve.values
    frames = np.arange(len(values), dtype=np.float64)
    scores = []
    for t in anchors.times_s:
        center = min(nearest_frame(t, curve.frame_rate_hz), len(values) - 1)
        weights = np.exp(-((frames - center) ** 2) / (2.0 * sigma_frames**2))
        scores.append(min(1.0, float(np.dot(weights, values))))
    return scores
