"""Command-line client for the analysis service.

Every command speaks HTTP to the service: a remote instance when --server
is given, otherwise the app mounted in-process over an ASGI transport, so
batch work needs no running daemon. Analysis parameters can also come
from a JSON config file (--config); explicit flags win over the file.

Exit codes: 0 success, 1 unreadable/malformed input or transport failure,
2 validation (semantic) failure. Errors go to stderr as one JSON object
per line.
"""

import asyncio
import contextlib
import json
import sys
from pathlib import Path

import click
import httpx

CONFIG_KEYS = ("tau", "sigma_frames", "min_genre_count", "half_window", "jobs", "out")

_EXIT_BY_STATUS = {400: 1, 422: 2}


class CommandFailure(Exception):
    def __init__(self, exit_code: int, detail: dict):
        super().__init__(detail.get("message", ""))
        self.exit_code = exit_code
        self.detail = detail


def _failure(exit_code: int, kind: str, code: str, message: str) -> CommandFailure:
    return CommandFailure(exit_code, {"kind": kind, "code": code, "message": message, "path": ""})


def _failure_from_response(resp: httpx.Response) -> CommandFailure:
    try:
        detail = resp.json().get("detail", {})
    except ValueError:
        detail = {}
    if not isinstance(detail, dict) or "kind" not in detail:
        detail = {
            "kind": "internal",
            "code": f"http-{resp.status_code}",
            "message": resp.text[:500],
            "path": "",
        }
    return CommandFailure(_EXIT_BY_STATUS.get(resp.status_code, 1), detail)


@contextlib.asynccontextmanager
async def _client(server: str | None):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=300.0) as client:
            yield client
    else:
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://mvsync.internal", timeout=300.0
        ) as client:
            yield client


def _read_file(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise _failure(1, "syntax", "io-error", f"cannot read {path}: {exc}") from exc


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    raw = _read_file(Path(path))
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise _failure(1, "syntax", "bad-config", f"config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _failure(1, "syntax", "bad-config", f"config file {path}: expected an object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise _failure(1, "syntax", "bad-config", f"config file {path}: unknown keys {unknown}")
    return data


def _merged(flag_value, file_config: dict, key: str):
    return flag_value if flag_value is not None else file_config.get(key)


def _analysis_params(tau, sigma_frames, half_window, file_config) -> dict:
    params = {}
    tau = _merged(tau, file_config, "tau")
    sigma = _merged(sigma_frames, file_config, "sigma_frames")
    window = _merged(half_window, file_config, "half_window")
    if tau is not None:
        params["tau"] = tau
    if sigma is not None:
        params["sigma_frames"] = sigma
    if window is not None:
        params["half_window"] = str(window)
    return params


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _run(coro) -> None:
    try:
        asyncio.run(coro)
    except CommandFailure as failure:
        click.echo(json.dumps({"error": failure.detail}), err=True)
        sys.exit(failure.exit_code)
    except httpx.HTTPError as exc:
        click.echo(json.dumps({"error": {"kind": "internal", "code": "transport", "message": str(exc)}}), err=True)
        sys.exit(1)


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default: in-process.")
@click.pass_context
def main(ctx, server):
    """Music-video synchronization analysis."""
    ctx.obj = {"server": server}


@main.command()
@click.argument("bundle_path", type=click.Path(path_type=Path))
@click.option("--tau", type=float, default=None, help="Shot likelihood threshold.")
@click.option("--sigma-frames", type=float, default=None, help="Score window width in frames.")
@click.option("--half-window", default=None, help="Offset search window: seconds or 'half-bar'.")
@click.option("--music-genre", default=None)
@click.option("--video-genre", default=None)
@click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")
@click.option("--out", default=None, help="Write the report here instead of stdout.")
@click.pass_context
def analyze(ctx, bundle_path, tau, sigma_frames, half_window, music_genre, video_genre, config_path, out):
    """Analyze one clip bundle and emit its report."""

    async def go():
        file_config = _load_config_file(config_path)
        params = _analysis_params(tau, sigma_frames, half_window, file_config)
        if music_genre is not None:
            params["music_genre"] = music_genre
        if video_genre is not None:
            params["video_genre"] = video_genre
        body = _read_file(bundle_path)
        async with _client(ctx.obj["server"]) as client:
            resp = await client.post("/analyze", content=body, params=params)
            if resp.status_code != 200:
                raise _failure_from_response(resp)
            _emit(_dump(resp.json()), _merged(out, file_config, "out"))

    _run(go())


async def _analyze_row(client, semaphore, row, base_dir, params):
    async with semaphore:
        path = Path(row["bundle_path"])
        if not path.is_absolute():
            path = base_dir / path
        try:
            body = path.read_bytes()
        except OSError as exc:
            return {"clip_id": row["clip_id"], "kind": "syntax", "code": "io-error", "message": str(exc)}
        row_params = dict(params)
        row_params["music_genre"] = row["music_genre"]
        row_params["video_genre"] = row["video_genre"]
        resp = await client.post("/analyze", content=body, params=row_params)
        if resp.status_code != 200:
            detail = _failure_from_response(resp).detail
            return {"clip_id": row["clip_id"], **detail}
        return resp.json()


@main.command()
@click.argument("manifest_path", type=click.Path(path_type=Path))
@click.option("--tau", type=float, default=None)
@click.option("--sigma-frames", type=float, default=None)
@click.option("--half-window", default=None)
@click.option("--min-genre-count", type=int, default=None, help="Smallest genre kept in tables.")
@click.option("--jobs", type=int, default=None, help="Concurrent clip analyses (default 1).")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", default=None, help="Output directory (default mvsync-out).")
@click.pass_context
def batch(ctx, manifest_path, tau, sigma_frames, half_window, min_genre_count, jobs, config_path, out):
    """Analyze every clip in a manifest; write reports, genre tables, summary.

    Per-clip failures are reported and skipped; the command succeeds if at
    least one clip analyzed. Outputs are byte-identical for a given input
    regardless of --jobs.
    """

    async def go():
        file_config = _load_config_file(config_path)
        params = _analysis_params(tau, sigma_frames, half_window, file_config)
        n_jobs = _merged(jobs, file_config, "jobs") or 1
        min_count = _merged(min_genre_count, file_config, "min_genre_count")
        out_dir = Path(_merged(out, file_config, "out") or "mvsync-out")

        manifest_bytes = _read_file(manifest_path)
        async with _client(ctx.obj["server"]) as client:
            resp = await client.post("/manifest", content=manifest_bytes)
            if resp.status_code != 200:
                raise _failure_from_response(resp)
            rows = resp.json()["rows"]

            semaphore = asyncio.Semaphore(max(1, int(n_jobs)))
            outcomes = await asyncio.gather(
                *(
                    _analyze_row(client, semaphore, row, manifest_path.parent, params)
                    for row in rows
                )
            )
            reports = [o for o in outcomes if "kind" not in o]
            failures = [o for o in outcomes if "kind" in o]

            for failure in failures:
                click.echo(json.dumps({"error": failure}), err=True)
            if not reports:
                raise _failure(1, "semantic", "no-clips", "no clip analyzed successfully")

            agg_body = {"reports": reports}
            if min_count is not None:
                agg_body["min_count"] = min_count
            resp = await client.post("/aggregate", json=agg_body)
            if resp.status_code != 200:
                raise _failure_from_response(resp)
            aggregate = resp.json()

        reports_dir = out_dir / "reports"
        tables_dir = out_dir / "tables"
        reports_dir.mkdir(parents=True, exist_ok=True)
        tables_dir.mkdir(parents=True, exist_ok=True)
        for report in reports:
            (reports_dir / f"{report['clip_id']}.json").write_text(
                _dump(report), encoding="utf-8"
            )
        for name, csv_text in sorted(aggregate["tables_csv"].items()):
            (tables_dir / f"{name}.csv").write_text(csv_text, encoding="utf-8")
        summary = dict(aggregate["summary"])
        summary["n_failed"] = len(failures)
        summary["failures"] = failures
        (out_dir / "summary.json").write_text(_dump(summary), encoding="utf-8")
        click.echo(f"analyzed {len(reports)} clip(s), {len(failures)} failure(s) -> {out_dir}")

    _run(go())


@main.command()
@click.argument("bundle_path", type=click.Path(path_type=Path))
@click.option("--from", "from_s", type=float, required=True, help="Window start, seconds.")
@click.option("--to", "to_s", type=float, required=True, help="Window end, seconds.")
@click.option("--tau", type=float, default=None)
@click.option("--out", required=True, help="Output SVG path.")
@click.pass_context
def figure(ctx, bundle_path, from_s, to_s, tau, out):
    """Render the cut/downbeat/segment timeline of a clip window as SVG."""

    async def go():
        params = {"start_s": from_s, "end_s": to_s}
        if tau is not None:
            params["tau"] = tau
        body = _read_file(bundle_path)
        async with _client(ctx.obj["server"]) as client:
            resp = await client.post("/figure", content=body, params=params)
            if resp.status_code != 200:
                raise _failure_from_response(resp)
            Path(out).write_text(resp.text, encoding="utf-8")
        click.echo(f"wrote {out}")

    _run(go())


@main.command()
@click.option("--bpm", type=float, required=True)
@click.option("--meter", type=int, default=4)
@click.option("--duration", "duration_s", type=float, required=True)
@click.option(
    "--policy",
    type=click.Choice(["on_bar", "on_beat", "anticipate", "random"]),
    default="on_bar",
)
@click.option("--offset", "offset_s", type=float, default=0.12, help="Anticipation offset (s).")
@click.option("--rate", "rate_hz", type=float, default=0.5, help="Random cut rate (Hz).")
@click.option("--jitter", "jitter_s", type=float, default=0.0)
@click.option("--impulse", "impulse_value", type=float, default=1.0)
@click.option("--peak-shape", type=click.Choice(["impulse", "triangle"]), default="impulse")
@click.option("--frame-rate", "frame_rate_hz", type=float, default=25.0)
@click.option("--seed", type=int, default=0)
@click.option("--clip-id", default="synth")
@click.option("--music-genre", default="Synthetic")
@click.option("--video-genre", default="other")
@click.option("--out", default=None, help="Write the bundle here instead of stdout.")
@click.pass_context
def synth(ctx, out, **spec):
    """Generate a synthetic clip bundle with a planted editing policy."""

    async def go():
        async with _client(ctx.obj["server"]) as client:
            resp = await client.post("/synth", json=spec)
            if resp.status_code != 200:
                raise _failure_from_response(resp)
            _emit(resp.text, out)

    _run(go())


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the analysis service."""
    import uvicorn

    uvicorn.run("mvsync.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
