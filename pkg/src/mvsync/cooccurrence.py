"""Co-occurrence of music boundaries with shot transitions.

Each music anchor (segment boundary or downbeat) gets a score: the
likelihood curve summed under a non-normalized Gaussian window centered
on the anchor, with unit peak weight. An anchor sitting exactly on a
full-confidence cut scores 1; an anchor far from any transition scores 0.
The clip-level score is the mean over anchors, a precision-like measure
of how many music boundaries a cut explains.

The window works in frame units: sigma is given in frames and the sum
runs at the curve's frame resolution.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .model import BoundaryList, LikelihoodCurve, nearest_frame

log = logging.getLogger(__name__)

DEFAULT_SIGMA_FRAMES = 2.0
# Truncating the window keeps cost linear in anchors. Six sigmas leaves
# out less than 1e-8 of score mass even on a curve pinned at 1, so the
# truncated sum tracks the full one to well below 1e-6.
DEFAULT_TRUNCATION_SIGMAS = 6.0


@dataclass(frozen=True)
class CooccurrenceResult:
    anchor_kind: str
    per_anchor_scores: tuple[float, ...]
    mean_score: float
    anchor_count: int

    @property
    def is_defined(self) -> bool:
        """False when there were no anchors; mean_score is 0 then by convention."""
        return self.anchor_count > 0


@dataclass(frozen=True)
class OffsetProfile:
    """Signed cut-vs-downbeat offsets; negative means the cut comes first."""

    offsets_s: tuple[float, ...]
    median_offset_s: float | None
    anticipation_fraction: float
    matched_fraction: float
    half_window_s: float


def _anchor_score(
    values: np.ndarray, center_frame: int, sigma_frames: float, radius: int
) -> float:
    lo = max(0, center_frame - radius)
    hi = min(len(values), center_frame + radius + 1)
    if lo >= hi:
        return 0.0
    offsets = np.arange(lo, hi) - center_frame
    weights = np.exp(-(offsets.astype(np.float64) ** 2) / (2.0 * sigma_frames**2))
    score = float(np.dot(weights, values[lo:hi]))
    if score > 1.0:
        log.debug("clamping anchor score %.4f at frame %d to 1", score, center_frame)
        return 1.0
    return score


def cooccurrence_score(
    curve: LikelihoodCurve,
    anchors: BoundaryList,
    sigma_frames: float = DEFAULT_SIGMA_FRAMES,
    truncation_sigmas: float = DEFAULT_TRUNCATION_SIGMAS,
) -> CooccurrenceResult:
    """Score every anchor and average.

    Scores are clamped at 1 so the range survives windows that capture
    more than one transition. An empty anchor list yields anchor_count 0
    and a zero mean (flagged via is_defined); an anchor beyond the curve
    is an error.
    """
    if not sigma_frames > 0:
        raise ValueError(f"sigma_frames must be > 0, got {sigma_frames}")
    duration = curve.duration_s
    for t in anchors.times_s:
        if t < 0 or t > duration:
            raise ValueError(f"anchor at {t} s outside curve duration {duration} s")

    if len(anchors) == 0:
        return CooccurrenceResult(anchors.kind.value, (), 0.0, 0)

    last_frame = curve.n_frames - 1
    radius = math.ceil(truncation_sigmas * sigma_frames)
    scores = []
    for t in anchors.times_s:
        frame = min(nearest_frame(t, curve.frame_rate_hz), last_frame)
        scores.append(_anchor_score(curve.values, frame, sigma_frames, radius))
    return CooccurrenceResult(
        anchor_kind=anchors.kind.value,
        per_anchor_scores=tuple(scores),
        mean_score=float(np.mean(scores)),
        anchor_count=len(scores),
    )


def offset_profile(
    anchors: BoundaryList, shots: BoundaryList, half_window_s: float
) -> OffsetProfile:
    """Signed offset of the nearest shot boundary around each anchor.

    Anchors with no shot within the window are unmatched: they are left
    out of the offsets but still count in matched_fraction's denominator.
    When the two neighbors are exactly equidistant the earlier one wins,
    biasing ties toward anticipation.
    """
    if not half_window_s > 0:
        raise ValueError(f"half_window_s must be > 0, got {half_window_s}")
    shot_times = shots.as_array()
    offsets: list[float] = []
    for t in anchors.times_s:
        if len(shot_times) == 0:
            continue
        right = int(np.searchsorted(shot_times, t))
        best: float | None = None
        if right > 0:
            best = float(shot_times[right - 1] - t)
        if right < len(shot_times):
            after = float(shot_times[right] - t)
            if best is None or abs(after) < abs(best):
                best = after
        if best is not None and abs(best) <= half_window_s:
            offsets.append(best)

    n_anchors = len(anchors)
    matched = len(offsets)
    return OffsetProfile(
        offsets_s=tuple(offsets),
        median_offset_s=float(np.median(offsets)) if offsets else None,
        anticipation_fraction=(sum(1 for o in offsets if o < 0) / matched) if matched else 0.0,
        matched_fraction=(matched / n_anchors) if n_anchors else 0.0,
        half_window_s=half_window_s,
    )


def rank_candidates(
    curve: LikelihoodCurve,
    candidates: list[tuple[str, BoundaryList, BoundaryList]],
    sigma_frames: float = DEFAULT_SIGMA_FRAMES,
) -> list[tuple[str, float]]:
    """Order (id, downbeats, segments) candidates by synchronization fit.

    The combined score weights segment-boundary and downbeat co-occurrence
    equally. Anchors past the curve end are dropped with a warning rather
    than failing the whole ranking; ties order by id.
    """
    if not candidates:
        raise ValueError("no candidates to rank")
    duration = curve.duration_s

    def clip_anchors(anchors: BoundaryList) -> BoundaryList:
        kept = tuple(t for t in anchors.times_s if 0 <= t <= duration)
        if len(kept) != len(anchors):
            log.warning(
                "dropping %d %s anchor(s) beyond curve duration %.3f s",
                len(anchors) - len(kept),
                anchors.kind.value,
                duration,
            )
        return BoundaryList(anchors.kind, kept)

    ranked = []
    for cand_id, downbeats, segments in candidates:
        s_bar = cooccurrence_score(curve, clip_anchors(downbeats), sigma_frames)
        s_seg = cooccurrence_score(curve, clip_anchors(segments), sigma_frames)
        ranked.append((cand_id, 0.5 * s_seg.mean_score + 0.5 * s_bar.mean_score))
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    return ranked
