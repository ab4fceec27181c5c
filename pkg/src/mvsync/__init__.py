"""mvsync: temporal synchronization analysis of music structure and video cuts."""

__version__ = "0.1.0"

from .cooccurrence import (
    CooccurrenceResult,
    OffsetProfile,
    cooccurrence_score,
    offset_profile,
    rank_candidates,
)
from .duration import (
    DurationAgreement,
    ShotDurationProfile,
    classify_duration_agreement,
    modal_shot_duration,
    shot_boundaries,
    shot_duration_profile,
    shot_durations,
)
from .figure import emit_timeline_figure
from .ingest import (
    Manifest,
    ManifestRow,
    load_dataset,
    parse_clip_bundle,
    parse_manifest,
    serialize_clip_bundle,
)
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
from .pipeline import RunConfig, aggregate_reports, analyze_bundle
from .report import GenreTable, Grouping, aggregate_counts, aggregate_scores, ci95, emit_table
from .synth import SynthSpec, oracle_cooccurrence, synth_clip

__all__ = [
    "__version__",
    "BeatGrid",
    "BoundaryKind",
    "BoundaryList",
    "ClipBundle",
    "CooccurrenceResult",
    "DurationAgreement",
    "GenreLabel",
    "GenreTable",
    "Grouping",
    "LikelihoodCurve",
    "Manifest",
    "ManifestRow",
    "OffsetProfile",
    "RunConfig",
    "ShotDurationProfile",
    "SynthSpec",
    "ValidationReport",
    "VideoGenre",
    "aggregate_counts",
    "aggregate_reports",
    "aggregate_scores",
    "analyze_bundle",
    "ci95",
    "classify_duration_agreement",
    "cooccurrence_score",
    "emit_table",
    "emit_timeline_figure",
    "load_dataset",
    "modal_shot_duration",
    "offset_profile",
    "oracle_cooccurrence",
    "parse_clip_bundle",
    "parse_manifest",
    "rank_candidates",
    "serialize_clip_bundle",
    "shot_boundaries",
    "shot_duration_profile",
    "shot_durations",
    "synth_clip",
    "validate_bundle",
]
