"""Request/response models for the analysis service."""

from typing import Literal

from pydantic import BaseModel, Field


class Defaults(BaseModel):
    tau: float
    sigma_frames: float
    truncation_sigmas: float
    min_genre_count: int


class HealthResponse(BaseModel):
    status: str
    version: str
    defaults: Defaults


class ViolationModel(BaseModel):
    code: str
    path: str
    message: str


class ValidateResponse(BaseModel):
    valid: bool
    violations: list[ViolationModel]


class AgreementModel(BaseModel):
    beat_level: bool
    bar_level: bool
    pattern_level: bool


class ScoreModel(BaseModel):
    mean: float
    anchor_count: int


class OffsetModel(BaseModel):
    median_offset_s: float | None
    anticipation_fraction: float
    matched_fraction: float
    n_matched: int
    half_window_s: float


class ParamsModel(BaseModel):
    tau: float
    sigma_frames: float
    half_window_s: float


class ClipReport(BaseModel):
    """Per-clip analysis result; also the row type fed back to /aggregate."""

    clip_id: str
    duration_s: float
    music_genre: str | None
    video_genre: str | None
    bpm: float
    meter: int
    beat_duration_s: float
    bar_duration_s: float
    pattern_duration_s: float
    n_downbeats: int
    n_segment_boundaries: int
    n_shots: int
    n_shot_durations: int
    modal_shot_duration_s: float
    mean_shot_duration_s: float
    n_segments: int
    mean_segment_duration_s: float
    agreement: AgreementModel
    segment_score: ScoreModel
    bar_score: ScoreModel
    offset: OffsetModel
    params: ParamsModel


class ManifestRowModel(BaseModel):
    clip_id: str
    bundle_path: str
    music_genre: str
    video_genre: str


class ManifestResponse(BaseModel):
    rows: list[ManifestRowModel]


class AggregateRequest(BaseModel):
    reports: list[ClipReport] = Field(min_length=1)
    min_count: int = 10


class SummaryModel(BaseModel):
    n_clips: int
    avg_bar_duration_s: float
    avg_segment_duration_s_pooled: float | None
    avg_segment_duration_s_per_clip: float
    avg_shot_duration_s_pooled: float | None
    avg_shot_duration_s_per_clip: float


class AggregateResponse(BaseModel):
    tables_csv: dict[str, str]
    tables_markdown: dict[str, str]
    summary: SummaryModel


class SynthRequest(BaseModel):
    bpm: float
    meter: int = 4
    duration_s: float
    policy: Literal["on_bar", "on_beat", "anticipate", "random"]
    offset_s: float = 0.12
    rate_hz: float = 0.5
    jitter_s: float = 0.0
    impulse_value: float = 1.0
    peak_shape: Literal["impulse", "triangle"] = "impulse"
    frame_rate_hz: float = 25.0
    seed: int = 0
    clip_id: str = "synth"
    music_genre: str = "Synthetic"
    video_genre: str = "other"


class CurveModel(BaseModel):
    frame_rate_hz: float = 25.0
    values: list[float]


class CandidateModel(BaseModel):
    id: str
    downbeats_s: list[float]
    segments_s: list[float]


class RankRequest(BaseModel):
    curve: CurveModel
    candidates: list[CandidateModel] = Field(min_length=1)
    sigma_frames: float = 2.0


class RankedCandidate(BaseModel):
    id: str
    score: float


class RankResponse(BaseModel):
    ranking: list[RankedCandidate]


class ErrorDetail(BaseModel):
    kind: Literal["syntax", "semantic", "window", "infeasible", "internal"]
    code: str
    message: str
    path: str = ""
