import json

import pytest

from mvsync.ingest import serialize_clip_bundle
from mvsync.synth import OnBar, RandomCuts, SynthSpec, synth_clip

from .test_ingest import MANIFEST, minimal_doc


def synth_doc(**kwargs):
    defaults = dict(bpm=120.0, meter=4, duration_s=30.0, cut_policy=OnBar())
    defaults.update(kwargs)
    return serialize_clip_bundle(synth_clip(SynthSpec(**defaults)))


def test_health_reports_defaults(service_client):
    body = service_client.get("/health").json()
    assert body["status"] == "ok"
    assert body["defaults"] == {
        "tau": 0.5,
        "sigma_frames": 2.0,
        "truncation_sigmas": 6.0,
        "min_genre_count": 10,
    }


class TestValidate:
    def test_valid_document(self, service_client):
        resp = service_client.post("/validate", content=minimal_doc())
        assert resp.status_code == 200
        assert resp.json() == {"valid": True, "violations": []}

    def test_violations_are_payload_not_errors(self, service_client):
        resp = service_client.post("/validate", content=minimal_doc(**{"music.meter": 5}))
        assert resp.status_code == 200
        body = resp.json()
        assert not body["valid"]
        assert body["violations"][0]["code"] == "unsupported-meter"

    def test_malformed_json_is_400(self, service_client):
        resp = service_client.post("/validate", content=b"{nope")
        assert resp.status_code == 400
        assert resp.json()["detail"]["kind"] == "syntax"


class TestAnalyze:
    def test_full_report(self, service_client):
        resp = service_client.post("/analyze", content=synth_doc())
        assert resp.status_code == 200
        report = resp.json()
        assert report["agreement"]["bar_level"] is True
        assert report["bar_score"]["mean"] == pytest.approx(1.0)
        assert report["music_genre"] is None

    def test_genres_attached_via_params(self, service_client):
        resp = service_client.post(
            "/analyze",
            content=synth_doc(),
            params={"music_genre": "Pop", "video_genre": "Concept"},
        )
        assert resp.json()["video_genre"] == "concept"

    def test_unknown_video_genre_is_422(self, service_client):
        resp = service_client.post(
            "/analyze",
            content=synth_doc(),
            params={"music_genre": "Pop", "video_genre": "Lyric"},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["code"] == "unknown-video-genre"

    def test_semantic_error_is_422(self, service_client):
        resp = service_client.post("/analyze", content=minimal_doc(**{"music.bpm": -2}))
        assert resp.status_code == 422
        assert resp.json()["detail"]["kind"] == "semantic"

    def test_half_window_param(self, service_client):
        resp = service_client.post("/analyze", content=synth_doc(), params={"half_window": "0.25"})
        assert resp.json()["offset"]["half_window_s"] == 0.25
        resp = service_client.post("/analyze", content=synth_doc(), params={"half_window": "half-bar"})
        assert resp.json()["offset"]["half_window_s"] == 1.0

    def test_bad_half_window_is_400(self, service_client):
        resp = service_client.post("/analyze", content=synth_doc(), params={"half_window": "wide"})
        assert resp.status_code == 400


class TestManifest:
    def test_rows_round_trip(self, service_client):
        resp = service_client.post("/manifest", content=MANIFEST)
        assert resp.status_code == 200
        rows = resp.json()["rows"]
        assert [r["clip_id"] for r in rows] == ["a", "b", "c"]
        assert rows[0]["video_genre"] == "concept"

    def test_duplicate_id_is_422(self, service_client):
        resp = service_client.post("/manifest", content=MANIFEST + "a,x.json,Pop,other\n")
        assert resp.status_code == 422
        assert resp.json()["detail"]["code"] == "duplicate-clip-id"

    def test_bad_header_is_400(self, service_client):
        resp = service_client.post("/manifest", content="id,path\n1,a\n")
        assert resp.status_code == 400


class TestAggregate:
    def _reports(self, service_client, n=12):
        reports = []
        for i in range(n):
            doc = synth_doc(cut_policy=OnBar() if i % 2 else RandomCuts(0.5), seed=i, clip_id=f"c{i}")
            resp = service_client.post(
                "/analyze", content=doc, params={"music_genre": "Pop", "video_genre": "dance"}
            )
            reports.append(resp.json())
        return reports

    def test_tables_and_summary(self, service_client):
        reports = self._reports(service_client)
        resp = service_client.post("/aggregate", json={"reports": reports})
        assert resp.status_code == 200
        body = resp.json()
        assert set(body["tables_csv"]) == {
            "counts_by_music_genre",
            "counts_by_video_genre",
            "scores_by_music_genre",
            "scores_by_video_genre",
        }
        assert body["tables_csv"]["counts_by_music_genre"].startswith(
            "genre,n_clips,metric,n_matching,percent\n"
        )
        assert body["summary"]["n_clips"] == 12
        assert body["summary"]["avg_bar_duration_s"] == pytest.approx(2.0)

    def test_min_count_forwarded(self, service_client):
        reports = self._reports(service_client, n=4)
        resp = service_client.post("/aggregate", json={"reports": reports, "min_count": 5})
        assert resp.json()["tables_csv"]["counts_by_music_genre"].count("\n") == 1  # header only

    def test_reports_without_genres_rejected(self, service_client):
        report = service_client.post("/analyze", content=synth_doc()).json()
        resp = service_client.post("/aggregate", json={"reports": [report]})
        assert resp.status_code == 422

    def test_empty_reports_rejected(self, service_client):
        assert service_client.post("/aggregate", json={"reports": []}).status_code == 422


class TestFigure:
    def test_svg_response(self, service_client):
        resp = service_client.post("/figure", content=synth_doc(), params={"start_s": 5, "end_s": 15})
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("image/svg+xml")
        assert resp.text.startswith("<svg")

    def test_bad_window(self, service_client):
        resp = service_client.post("/figure", content=synth_doc(), params={"start_s": 5, "end_s": 5})
        assert resp.status_code == 400
        assert resp.json()["detail"]["kind"] == "window"


class TestSynth:
    def test_returns_parseable_deterministic_bundle(self, service_client):
        req = {"bpm": 100, "duration_s": 20, "policy": "random", "rate_hz": 0.5, "seed": 4}
        first = service_client.post("/synth", json=req)
        second = service_client.post("/synth", json=req)
        assert first.status_code == 200
        assert first.text == second.text
        assert service_client.post("/validate", content=first.text).json()["valid"]

    def test_infeasible_spec_is_422(self, service_client):
        resp = service_client.post(
            "/synth", json={"bpm": 100, "duration_s": 10, "policy": "random", "rate_hz": 100.0}
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["kind"] == "infeasible"


class TestRank:
    def test_orders_candidates(self, service_client):
        values = [0.0] * 200
        for frame in (50, 100, 150):
            values[frame] = 1.0
        body = {
            "curve": {"frame_rate_hz": 25.0, "values": values},
            "candidates": [
                {"id": "off", "downbeats_s": [1.0, 3.0], "segments_s": [5.0]},
                {"id": "hit", "downbeats_s": [2.0, 4.0], "segments_s": [6.0]},
            ],
        }
        resp = service_client.post("/rank", json=body)
        ranking = resp.json()["ranking"]
        assert ranking[0]["id"] == "hit"
        assert ranking[0]["score"] == pytest.approx(1.0)


def test_openapi_lists_all_endpoints(service_client):
    paths = service_client.get("/openapi.json").json()["paths"]
    assert {"/health", "/validate", "/analyze", "/manifest", "/aggregate", "/figure", "/synth", "/rank"} <= set(paths)
