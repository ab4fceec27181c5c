"""FastAPI service wrapping the analysis pipeline.

Bundle and manifest documents arrive as raw request bodies so malformed
files reach the real parser and come back with proper diagnostics:
syntax problems are HTTP 400, invariant violations HTTP 422, both with a
structured detail {kind, code, message, path}.
"""

from dataclasses import replace

from fastapi import FastAPI, HTTPException, Query, Request, Response

from .. import __version__, ingest, pipeline
from ..cooccurrence import rank_candidates
from ..figure import emit_timeline_figure
from ..ingest import BundleSemanticError, BundleSyntaxError, IngestError, ManifestError
from ..model import (
    BoundaryKind,
    BoundaryList,
    GenreLabel,
    LikelihoodCurve,
    VideoGenre,
)
from ..pipeline import RunConfig
from ..synth import (
    Anticipate,
    InfeasibleSynthSpec,
    OnBar,
    OnBeat,
    RandomCuts,
    SynthSpec,
    synth_clip,
)
from . import schemas

# Manifest problems that mean the file itself is malformed, not just wrong.
_MANIFEST_SYNTAX_CODES = {"missing-column", "bad-encoding"}

_POLICIES = {
    "on_bar": lambda req: OnBar(),
    "on_beat": lambda req: OnBeat(),
    "anticipate": lambda req: Anticipate(req.offset_s),
    "random": lambda req: RandomCuts(req.rate_hz),
}


def _http_error(status: int, kind: str, code: str, message: str, path: str = "") -> HTTPException:
    detail = schemas.ErrorDetail(kind=kind, code=code, message=message, path=path)
    return HTTPException(status_code=status, detail=detail.model_dump())


def _map_ingest_error(exc: IngestError) -> HTTPException:
    if isinstance(exc, BundleSemanticError):
        return _http_error(422, "semantic", exc.code, exc.message, exc.path)
    if isinstance(exc, ManifestError) and exc.code not in _MANIFEST_SYNTAX_CODES:
        return _http_error(422, "semantic", exc.code, exc.message, exc.path)
    return _http_error(400, "syntax", exc.code, exc.message, exc.path)


def _parse_half_window(raw: str | None) -> float | None:
    """Query form of the offset search window: 'half-bar' or seconds."""
    if raw is None or raw == "" or raw == "half-bar":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise _http_error(400, "syntax", "bad-parameter", f"half_window must be 'half-bar' or a number, got {raw!r}") from None
    if not value > 0:
        raise _http_error(400, "syntax", "bad-parameter", f"half_window must be > 0, got {value}")
    return value


def _parse_body_bundle(body: bytes):
    try:
        return ingest.parse_clip_bundle(body)
    except IngestError as exc:
        raise _map_ingest_error(exc) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="mvsync", version=__version__)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        cfg = RunConfig()
        return schemas.HealthResponse(
            status="ok",
            version=__version__,
            defaults=schemas.Defaults(
                tau=cfg.tau,
                sigma_frames=cfg.sigma_frames,
                truncation_sigmas=cfg.truncation_sigmas,
                min_genre_count=cfg.min_genre_count,
            ),
        )

    @app.post("/validate", response_model=schemas.ValidateResponse)
    async def validate(request: Request) -> schemas.ValidateResponse:
        body = await request.body()
        try:
            ingest.parse_clip_bundle(body)
        except BundleSemanticError as exc:
            return schemas.ValidateResponse(
                valid=False,
                violations=[
                    schemas.ViolationModel(code=v.code, path=v.path, message=v.message)
                    for v in exc.report
                ],
            )
        except IngestError as exc:
            raise _map_ingest_error(exc) from exc
        return schemas.ValidateResponse(valid=True, violations=[])

    @app.post("/analyze", response_model=schemas.ClipReport)
    async def analyze(
        request: Request,
        tau: float = Query(default=RunConfig.tau),
        sigma_frames: float = Query(default=RunConfig.sigma_frames),
        truncation_sigmas: float = Query(default=RunConfig.truncation_sigmas),
        half_window: str | None = Query(default=None),
        music_genre: str | None = Query(default=None),
        video_genre: str | None = Query(default=None),
    ):
        bundle = _parse_body_bundle(await request.body())
        if (music_genre is None) != (video_genre is None):
            raise _http_error(
                400, "syntax", "bad-parameter", "music_genre and video_genre go together"
            )
        if music_genre is not None:
            try:
                genre = VideoGenre.parse(video_genre)
            except ValueError:
                raise _http_error(
                    422, "semantic", "unknown-video-genre", f"unknown video genre {video_genre!r}"
                ) from None
            bundle = replace(bundle, genres=GenreLabel(music_genre, genre))
        config = RunConfig(
            tau=tau,
            sigma_frames=sigma_frames,
            truncation_sigmas=truncation_sigmas,
            half_window_s=_parse_half_window(half_window),
        )
        try:
            return pipeline.analyze_bundle(bundle, config)
        except ValueError as exc:
            raise _http_error(400, "syntax", "bad-parameter", str(exc)) from exc

    @app.post("/manifest", response_model=schemas.ManifestResponse)
    async def parse_manifest(request: Request) -> schemas.ManifestResponse:
        body = await request.body()
        try:
            manifest = ingest.parse_manifest(body)
        except IngestError as exc:
            raise _map_ingest_error(exc) from exc
        return schemas.ManifestResponse(
            rows=[
                schemas.ManifestRowModel(
                    clip_id=row.clip_id,
                    bundle_path=row.bundle_path,
                    music_genre=row.music_genre,
                    video_genre=row.video_genre.value,
                )
                for row in manifest
            ]
        )

    @app.post("/aggregate", response_model=schemas.AggregateResponse)
    def aggregate(body: schemas.AggregateRequest) -> schemas.AggregateResponse:
        reports = [r.model_dump() for r in body.reports]
        try:
            tables, summary = pipeline.aggregate_reports(reports, body.min_count)
        except ValueError as exc:
            raise _http_error(422, "semantic", "missing-genres", str(exc)) from exc
        return schemas.AggregateResponse(
            tables_csv=pipeline.render_tables(tables, "csv"),
            tables_markdown=pipeline.render_tables(tables, "markdown"),
            summary=schemas.SummaryModel(**summary),
        )

    @app.post("/figure")
    async def figure(
        request: Request,
        start_s: float = Query(...),
        end_s: float = Query(...),
        tau: float = Query(default=RunConfig.tau),
    ) -> Response:
        bundle = _parse_body_bundle(await request.body())
        try:
            svg = emit_timeline_figure(bundle, (start_s, end_s), tau=tau)
        except ValueError as exc:
            raise _http_error(400, "window", "bad-window", str(exc)) from exc
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/synth")
    def synth(body: schemas.SynthRequest) -> Response:
        try:
            genre = VideoGenre.parse(body.video_genre)
        except ValueError:
            raise _http_error(
                422, "semantic", "unknown-video-genre", f"unknown video genre {body.video_genre!r}"
            ) from None
        spec = SynthSpec(
            bpm=body.bpm,
            meter=body.meter,
            duration_s=body.duration_s,
            cut_policy=_POLICIES[body.policy](body),
            jitter_s=body.jitter_s,
            impulse_value=body.impulse_value,
            peak_shape=body.peak_shape,
            frame_rate_hz=body.frame_rate_hz,
            seed=body.seed,
            clip_id=body.clip_id,
            music_genre=body.music_genre,
            video_genre=genre,
        )
        try:
            bundle = synth_clip(spec)
        except InfeasibleSynthSpec as exc:
            raise _http_error(422, "infeasible", "infeasible-spec", str(exc)) from exc
        return Response(
            content=ingest.serialize_clip_bundle(bundle), media_type="application/json"
        )

    @app.post("/rank", response_model=schemas.RankResponse)
    def rank(body: schemas.RankRequest) -> schemas.RankResponse:
        curve = LikelihoodCurve(body.curve.values, body.curve.frame_rate_hz)
        candidates = [
            (
                cand.id,
                BoundaryList(BoundaryKind.DOWNBEAT, tuple(cand.downbeats_s)),
                BoundaryList(BoundaryKind.SEGMENT, tuple(cand.segments_s)),
            )
            for cand in body.candidates
        ]
        ranking = rank_candidates(curve, candidates, sigma_frames=body.sigma_frames)
        return schemas.RankResponse(
            ranking=[schemas.RankedCandidate(id=cid, score=score) for cid, score in ranking]
        )

    return app


app = create_app()
