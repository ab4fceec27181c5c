"""Timeline figures: cuts, downbeats, and segment boundaries as tick lanes.

Rendered by hand as a self-contained SVG so identical inputs always give
identical bytes; no plotting library is involved.
"""

from .duration import shot_boundaries
from .model import ClipBundle

_WIDTH = 800
_HEIGHT = 240
_MARGIN_LEFT = 110
_MARGIN_RIGHT = 20
_LANE_TOP = 30
_LANE_HEIGHT = 50
_LANE_GAP = 14
_AXIS_Y = _LANE_TOP + 3 * _LANE_HEIGHT + 2 * _LANE_GAP + 16

_LANES = (
    ("cuts", "#c0392b"),
    ("downbeats", "#2c3e50"),
    ("segments", "#2980b9"),
)


def _x(t: float, start_s: float, end_s: float) -> float:
    span = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    return _MARGIN_LEFT + span * (t - start_s) / (end_s - start_s)


def _axis_tick_times(start_s: float, end_s: float) -> list[float]:
    span = end_s - start_s
    # Pick a step of 1, 2, 5, 10... seconds giving at most ~10 labels.
    step = 1.0
    for candidate in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 60.0):
        step = candidate
        if span / candidate <= 10:
            break
    first = start_s if start_s % step == 0 else (start_s // step + 1) * step
    ticks = []
    t = first
    while t <= end_s + 1e-9:
        ticks.append(round(t, 6))
        t += step
    return ticks


def emit_timeline_figure(bundle: ClipBundle, window: tuple[float, float], tau: float = 0.5) -> str:
    """Render three event lanes over a shared time axis for one clip window.

    Cut times are extracted from the likelihood curve with the given
    threshold; downbeats and segment boundaries come straight from the
    bundle. The window must be non-empty and inside the clip.
    """
    start_s, end_s = window
    if not (0.0 <= start_s < end_s <= bundle.duration_s):
        raise ValueError(
            f"window [{start_s}, {end_s}] must be non-empty and within "
            f"[0, {bundle.duration_s}]"
        )

    cuts = shot_boundaries(bundle.curve, tau=tau).times_s
    lanes_events = (cuts, bundle.downbeats.times_s, bundle.segments.times_s)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_MARGIN_LEFT}" y="18" font-family="sans-serif" font-size="13">'
        f"{_escape(bundle.clip_id)} — {start_s:.2f}s to {end_s:.2f}s</text>",
    ]

    for lane_index, ((label, color), events) in enumerate(zip(_LANES, lanes_events)):
        top = _LANE_TOP + lane_index * (_LANE_HEIGHT + _LANE_GAP)
        mid = top + _LANE_HEIGHT / 2
        parts.append(
            f'<text x="{_MARGIN_LEFT - 10}" y="{mid + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{label}</text>'
        )
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{mid:.1f}" x2="{_WIDTH - _MARGIN_RIGHT}" '
            f'y2="{mid:.1f}" stroke="#dddddd" stroke-width="1"/>'
        )
        for t in events:
            if start_s <= t <= end_s:
                x = _x(t, start_s, end_s)
                parts.append(
                    f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{top + _LANE_HEIGHT}" '
                    f'stroke="{color}" stroke-width="2" class="tick tick-{label}"/>'
                )

    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_AXIS_Y}" x2="{_WIDTH - _MARGIN_RIGHT}" '
        f'y2="{_AXIS_Y}" stroke="black" stroke-width="1"/>'
    )
    for t in _axis_tick_times(start_s, end_s):
        x = _x(t, start_s, end_s)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_AXIS_Y}" x2="{x:.2f}" y2="{_AXIS_Y + 5}" '
            f'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_AXIS_Y + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:g}s</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
