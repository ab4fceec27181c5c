"""On-disk interchange formats: per-clip bundle documents and dataset manifests.

Bundle documents are UTF-8 JSON. A manifest is a CSV with header
``clip_id,bundle_path,music_genre,video_genre`` whose rows point at bundle
files and attach genre annotations. Parsing distinguishes syntax errors
(malformed document or wrong field type, reported with a field path) from
semantic errors (invariant violations, reported with validation codes).
"""

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .model import (
    BeatGrid,
    BoundaryKind,
    BoundaryList,
    ClipBundle,
    GenreLabel,
    LikelihoodCurve,
    ValidationReport,
    VideoGenre,
    validate_bundle,
)

log = logging.getLogger(__name__)

MANIFEST_HEADER = ("clip_id", "bundle_path", "music_genre", "video_genre")

_BUNDLE_FIELDS = {"clip_id", "duration_s", "music", "video"}
_MUSIC_FIELDS = {"bpm", "meter", "downbeats_s", "segment_boundaries_s", "beats_s"}
_VIDEO_FIELDS = {"frame_rate_hz", "shot_likelihood"}


class IngestError(Exception):
    """Base class for parse failures."""

    def __init__(self, message: str, *, path: str = "", code: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path
        self.code = code


class BundleSyntaxError(IngestError):
    """Document is malformed: bad JSON, missing field, or wrong type."""


class BundleSemanticError(IngestError):
    """Document parsed but violates a model invariant."""

    def __init__(self, report: ValidationReport):
        first = report.violations[0]
        super().__init__(first.message, path=first.path, code=first.code)
        self.report = report


class ManifestError(IngestError):
    """Manifest is malformed or inconsistent."""


def _require(obj: dict, key: str, kinds, path: str):
    if key not in obj:
        raise BundleSyntaxError(f"missing required field", path=f"{path}{key}", code="missing-field")
    value = obj[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise BundleSyntaxError(
            f"expected {kinds if not isinstance(kinds, tuple) else '/'.join(k.__name__ for k in kinds)},"
            f" got {type(value).__name__}",
            path=f"{path}{key}",
            code="wrong-type",
        )
    return value


def _number_list(obj: dict, key: str, path: str, *, required: bool) -> list[float] | None:
    if key not in obj:
        if required:
            raise BundleSyntaxError("missing required field", path=f"{path}{key}", code="missing-field")
        return None
    raw = _require(obj, key, list, path)
    out = []
    for i, v in enumerate(raw):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise BundleSyntaxError(
                f"expected number, got {type(v).__name__}",
                path=f"{path}{key}[{i}]",
                code="wrong-type",
            )
        out.append(float(v))
    return out


def _warn_unknown(obj: dict, known: set, path: str) -> None:
    for key in obj:
        if key not in known:
            log.warning("ignoring unknown field %s%s", path, key)


def parse_clip_bundle(data: bytes | str) -> ClipBundle:
    """Parse a clip-bundle document into a validated ClipBundle.

    Raises BundleSyntaxError for malformed documents and
    BundleSemanticError when the parsed bundle fails validation.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BundleSyntaxError(f"not valid UTF-8: {exc}", code="bad-encoding") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise BundleSyntaxError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            code="malformed-json",
        ) from exc
    if not isinstance(doc, dict):
        raise BundleSyntaxError("document root must be an object", code="wrong-type")

    _warn_unknown(doc, _BUNDLE_FIELDS, "")
    clip_id = _require(doc, "clip_id", str, "")
    duration_s = float(_require(doc, "duration_s", (int, float), ""))

    music = _require(doc, "music", dict, "")
    _warn_unknown(music, _MUSIC_FIELDS, "music.")
    bpm = float(_require(music, "bpm", (int, float), "music."))
    meter_raw = _require(music, "meter", (int, float), "music.")
    if isinstance(meter_raw, float) and not meter_raw.is_integer():
        raise BundleSyntaxError(
            f"meter must be an integer, got {meter_raw}", path="music.meter", code="wrong-type"
        )
    meter = int(meter_raw)
    downbeats = _number_list(music, "downbeats_s", "music.", required=True)
    segment_boundaries = _number_list(music, "segment_boundaries_s", "music.", required=True)
    beats = _number_list(music, "beats_s", "music.", required=False)

    video = _require(doc, "video", dict, "")
    _warn_unknown(video, _VIDEO_FIELDS, "video.")
    frame_rate = float(_require(video, "frame_rate_hz", (int, float), "video."))
    likelihood = _number_list(video, "shot_likelihood", "video.", required=True)

    bundle = ClipBundle(
        clip_id=clip_id,
        duration_s=duration_s,
        grid=BeatGrid.from_tempo(bpm, meter),
        downbeats=BoundaryList(BoundaryKind.DOWNBEAT, tuple(downbeats)),
        segments=BoundaryList(BoundaryKind.SEGMENT, tuple(segment_boundaries)),
        curve=LikelihoodCurve(likelihood, frame_rate),
        beats_s=tuple(beats) if beats is not None else None,
    )
    report = validate_bundle(bundle)
    if not report.ok:
        raise BundleSemanticError(report)
    return bundle


def serialize_clip_bundle(bundle: ClipBundle) -> str:
    """Render a bundle to its canonical document form.

    Output is deterministic and round-trips: parsing it yields a bundle
    equal field-for-field (genres are a manifest concern and not written).
    """
    music = {
        "bpm": bundle.grid.bpm,
        "meter": bundle.grid.meter,
        "downbeats_s": list(bundle.downbeats.times_s),
        "segment_boundaries_s": list(bundle.segments.times_s),
    }
    if bundle.beats_s is not None:
        music["beats_s"] = list(bundle.beats_s)
    doc = {
        "clip_id": bundle.clip_id,
        "duration_s": bundle.duration_s,
        "music": music,
        "video": {
            "frame_rate_hz": bundle.curve.frame_rate_hz,
            "shot_likelihood": bundle.curve.values.tolist(),
        },
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class ManifestRow:
    clip_id: str
    bundle_path: str
    music_genre: str
    video_genre: VideoGenre


@dataclass(frozen=True)
class Manifest:
    rows: tuple[ManifestRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def parse_manifest(data: bytes | str) -> Manifest:
    """Parse the dataset manifest CSV.

    Video genres are normalized case-insensitively to the five-value
    taxonomy; music genres are kept verbatim (stripped). Duplicate clip
    ids and unknown genres are errors.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ManifestError(f"not valid UTF-8: {exc}", code="bad-encoding") from exc
    reader = csv.reader(io.StringIO(data, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise ManifestError("empty manifest: missing header", code="missing-column") from None
    header = [h.strip() for h in header]
    if tuple(header) != MANIFEST_HEADER:
        missing = [c for c in MANIFEST_HEADER if c not in header]
        raise ManifestError(
            f"bad header {header}; expected {list(MANIFEST_HEADER)}"
            + (f" (missing: {missing})" if missing else ""),
            code="missing-column",
        )

    rows: list[ManifestRow] = []
    seen: set[str] = set()
    for lineno, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != len(MANIFEST_HEADER):
            raise ManifestError(
                f"line {lineno}: expected {len(MANIFEST_HEADER)} columns, got {len(record)}",
                path=f"line {lineno}",
                code="missing-column",
            )
        clip_id, bundle_path, music_genre, video_genre = (cell.strip() for cell in record)
        if clip_id in seen:
            raise ManifestError(
                f"line {lineno}: duplicate clip_id {clip_id!r}",
                path=f"line {lineno}",
                code="duplicate-clip-id",
            )
        seen.add(clip_id)
        try:
            genre = VideoGenre.parse(video_genre)
        except ValueError:
            raise ManifestError(
                f"line {lineno}: unknown video genre {video_genre!r}",
                path=f"line {lineno}",
                code="unknown-video-genre",
            ) from None
        rows.append(ManifestRow(clip_id, bundle_path, music_genre, genre))
    return Manifest(tuple(rows))


@dataclass(frozen=True)
class LoadError:
    clip_id: str
    code: str
    message: str


@dataclass(frozen=True)
class LoadedClip:
    row: ManifestRow
    bundle: ClipBundle


def _load_one(row: ManifestRow, base_dir: Path) -> ClipBundle:
    path = Path(row.bundle_path)
    if not path.is_absolute():
        path = base_dir / path
    data = path.read_bytes()
    bundle = parse_clip_bundle(data)
    genres = GenreLabel(music_genre=row.music_genre, video_genre=row.video_genre)
    return replace(bundle, genres=genres)


def load_dataset(
    manifest: Manifest, base_dir: Path | str = ".", jobs: int = 1
) -> tuple[list[LoadedClip], list[LoadError]]:
    """Load every bundle a manifest points at, attaching its genres.

    One bad clip never aborts the batch: failures come back as LoadError
    entries. Results follow manifest order regardless of how many loader
    threads run.
    """
    base = Path(base_dir)

    def attempt(row: ManifestRow) -> ClipBundle | LoadError:
        try:
            return _load_one(row, base)
        except OSError as exc:
            return LoadError(row.clip_id, "io-error", str(exc))
        except IngestError as exc:
            return LoadError(row.clip_id, exc.code or "parse-error", exc.message)

    if jobs > 1 and len(manifest) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(attempt, manifest.rows))
    else:
        outcomes = [attempt(row) for row in manifest.rows]

    loaded: list[LoadedClip] = []
    errors: list[LoadError] = []
    for row, outcome in zip(manifest.rows, outcomes):
        if isinstance(outcome, LoadError):
            errors.append(outcome)
        else:
            loaded.append(LoadedClip(row, outcome))
    return loaded, errors
