"""HTTP surface: admin ingest/delete plus open search and evaluation.

JSON field names are stable and documented in the README. Admin endpoints
(POST /api/videos, DELETE /api/videos/{id}) require the shared secret in
the ``X-Admin-Token`` header; search endpoints are open.
"""

from __future__ import annotations

import io
from pathlib import Path

from fastapi import FastAPI, File, Form, Header, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from .errors import (
    CorruptImageError,
    DimensionMismatchError,
    DuplicateFrameError,
    EmptyCatalogError,
    EmptyVideoError,
    FrameFinderError,
    MalformedFeatureStringError,
    NameRequiredError,
    NoQueriesError,
    UnknownIdError,
    UnsupportedFormatError,
)
from .imaging import load_frame
from .retrieval import DEFAULT_KS, FEATURE_KINDS, WeightProfile
from .service import Engine, IngestReport, SearchHit

_BAD_REQUEST = (
    CorruptImageError,
    UnsupportedFormatError,
    EmptyVideoError,
    NameRequiredError,
    MalformedFeatureStringError,
    DimensionMismatchError,
    NoQueriesError,
    ValueError,
)
_CONFLICT = (DuplicateFrameError, EmptyCatalogError)


def _error_status(exc: Exception) -> int:
    if isinstance(exc, UnknownIdError):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    if isinstance(exc, _BAD_REQUEST):
        return 400
    return 500


def _error_body(exc: Exception) -> dict:
    name = type(exc).__name__.removesuffix("Error")
    return {"error": name, "detail": str(exc)}


def _parse_weights(weights: str | None) -> WeightProfile | None:
    if not weights:
        return None
    parts = [p for p in weights.replace(",", " ").split() if p]
    if len(parts) != len(FEATURE_KINDS):
        raise ValueError(f"weights must hold {len(FEATURE_KINDS)} values")
    return WeightProfile(tuple(float(p) for p in parts))


def _report_json(report: IngestReport) -> dict:
    return {
        "v_id": report.v_id,
        "frames_in": report.frames_in,
        "key_frames_kept": report.key_frames_kept,
        "per_frame_timings_ms": list(report.per_frame_timings_ms),
    }


def _hit_json(hit: SearchHit) -> dict:
    return {
        "frame_id": hit.frame_id,
        "video_id": hit.video_id,
        "video_name": hit.video_name,
        "combined": hit.combined,
        "per_feature": hit.per_feature,
        "image_url": f"/api/frames/{hit.frame_id}/image",
    }


def create_app(engine: Engine, admin_token: str, ui_dir: str | None = None) -> FastAPI:
    """Build the API application around an engine instance."""
    app = FastAPI(title="framefinder", docs_url=None, redoc_url=None)

    @app.exception_handler(FrameFinderError)
    async def _domain_error(request: Request, exc: FrameFinderError):
        return JSONResponse(status_code=_error_status(exc), content=_error_body(exc))

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=_error_body(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "Malformed", "detail": str(exc.errors())}
        )

    def _require_admin(token: str | None):
        if token is None:
            return JSONResponse(status_code=401, content={"error": "AuthRequired", "detail": "missing X-Admin-Token header"})
        if token != admin_token:
            return JSONResponse(status_code=403, content={"error": "AuthFailed", "detail": "bad admin token"})
        return None

    @app.post("/api/videos")
    async def ingest_video(
        name: str = Form(...),
        frames: list[UploadFile] = File(default=[]),
        x_admin_token: str | None = Header(default=None),
    ):
        denied = _require_admin(x_admin_token)
        if denied:
            return denied
        decoded = []
        for f in frames:
            data = await f.read()
            try:
                decoded.append((f.filename or f"frame{len(decoded)}", load_frame(data)))
            except (CorruptImageError, UnsupportedFormatError) as e:
                raise CorruptImageError(f"{f.filename}: {e}") from e
        report = engine.ingest(name, decoded)
        return _report_json(report)

    @app.delete("/api/videos/{v_id}")
    async def delete_video(v_id: int, x_admin_token: str | None = Header(default=None)):
        denied = _require_admin(x_admin_token)
        if denied:
            return denied
        engine.catalog.delete_video(v_id)
        return {"deleted": v_id}

    @app.get("/api/videos")
    async def list_videos(name: str | None = None):
        videos = (
            engine.catalog.find_by_name(name) if name else engine.catalog.list_videos()
        )
        return {
            "videos": [
                {
                    "v_id": v.v_id,
                    "v_name": v.v_name,
                    "ingested_at": v.ingested_at,
                    "keyframe_ids": list(v.keyframe_ids),
                    "key_frames_kept": len(v.keyframe_ids),
                }
                for v in videos
            ]
        }

    async def _run_search(
        query: UploadFile,
        k: int,
        weights: str | None,
        exhaustive: bool,
    ):
        data = await query.read()
        hits = engine.search(
            data,
            k=k,
            weights=_parse_weights(weights),
            exhaustive=exhaustive,
        )
        return {"results": [_hit_json(h) for h in hits]}

    # GET is the documented verb; POST carries identical semantics for
    # clients (browsers) that cannot attach a body to GET.
    @app.get("/api/search")
    async def search_get(
        query: UploadFile = File(...),
        k: int = Form(default=20),
        weights: str | None = Form(default=None),
        exhaustive: bool = Form(default=False),
    ):
        return await _run_search(query, k, weights, exhaustive)

    @app.post("/api/search")
    async def search_post(
        query: UploadFile = File(...),
        k: int = Form(default=20),
        weights: str | None = Form(default=None),
        exhaustive: bool = Form(default=False),
    ):
        return await _run_search(query, k, weights, exhaustive)

    @app.get("/api/frames/{i_id}/image")
    async def frame_image(i_id: int):
        raster = engine.catalog.frame_image(i_id)
        from PIL import Image

        buf = io.BytesIO()
        Image.fromarray(raster.pixels, mode="RGB").save(buf, format="PNG")
        return Response(content=buf.getvalue(), media_type="image/png")

    async def _run_eval(payload: dict):
        queries = []
        for q in payload.get("queries", []):
            if "frame_id" in q:
                queries.append((int(q["frame_id"]), set(q.get("relevant", []))))
            else:
                raise ValueError("each eval query needs a frame_id")
        ks = tuple(int(k) for k in payload.get("ks", DEFAULT_KS))
        weights = None
        if payload.get("weights"):
            weights = WeightProfile(tuple(float(w) for w in payload["weights"]))
        report = engine.evaluate(queries, ks=ks, weights=weights)
        return {
            "ks": list(report.ks),
            "methods": list(report.methods),
            "means": [[float(x) for x in row] for row in report.means],
            "text": report.to_text(),
            "csv": report.to_csv(),
        }

    @app.get("/api/eval")
    async def eval_get(request: Request):
        return await _run_eval(await request.json())

    @app.post("/api/eval")
    async def eval_post(request: Request):
        return await _run_eval(await request.json())

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.responses import RedirectResponse
        from fastapi.staticfiles import StaticFiles

        @app.get("/")
        async def index():
            return RedirectResponse("/ui/")

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
