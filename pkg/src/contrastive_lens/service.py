"""Local HTTP/JSON service backing the interactive alpha explorer.

Single-session: one dataset pair is held at a time. POST /datasets is the
only mutating endpoint; it swaps in a fresh immutable snapshot (with the
covariance pair precomputed) under a lock and bumps the version counter.
Read endpoints grab the current snapshot once and compute against it, so a
request sees entirely-old or entirely-new state. Responses are cached as
rendered JSON keyed by (version, query), which makes repeated identical
queries byte-identical; the X-Cache header reports hit or miss.
"""

from __future__ import annotations

import io as _stdio
import json
import math
import threading
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, File, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import alpha_select, cpca
from . import io as cio
from .errors import NumericError, ValidationError
from .linalg import center_columns, covariance

MAX_UPLOAD_BYTES = 64 * 1024 * 1024
DEFAULT_PORT = 8787


@dataclass(frozen=True)
class Snapshot:
    """Immutable per-upload state: data, labels, and cached covariances."""

    version: int
    target: np.ndarray
    background: np.ndarray
    labels: np.ndarray | None
    cx: np.ndarray
    cy: np.ndarray
    target_mean: np.ndarray
    background_mean: np.ndarray


class SessionState:
    def __init__(self):
        self._lock = threading.Lock()
        self._snapshot: Snapshot | None = None
        self._cache: dict[tuple, str] = {}

    def replace(self, target, background, labels) -> Snapshot:
        tc, tmean = center_columns(target)
        bc, bmean = center_columns(background)
        with self._lock:
            version = (self._snapshot.version + 1) if self._snapshot else 1
            snap = Snapshot(
                version=version,
                target=target,
                background=background,
                labels=labels,
                cx=covariance(tc),
                cy=covariance(bc),
                target_mean=tmean,
                background_mean=bmean,
            )
            self._snapshot = snap
            self._cache.clear()
            return snap

    def snapshot(self) -> Snapshot | None:
        return self._snapshot

    def cached(self, key: tuple) -> str | None:
        with self._lock:
            return self._cache.get(key)

    def store(self, key: tuple, body: str) -> None:
        with self._lock:
            self._cache[key] = body


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _cached_json(state: SessionState, key: tuple, build) -> Response:
    body = state.cached(key)
    hit = body is not None
    if not hit:
        body = json.dumps(build())
        state.store(key, body)
    return Response(content=body, media_type="application/json",
                    headers={"X-Cache": "hit" if hit else "miss"})


def _parse_alpha_param(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    value = float(text)  # ValueError handled by caller
    if value < 0:
        raise ValidationError(f"alpha must be >= 0, got {value}")
    return value


def create_app(max_upload_bytes: int = MAX_UPLOAD_BYTES) -> FastAPI:
    app = FastAPI(title="contrastive-lens explorer service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state = SessionState()
    app.state.session = state

    def _read_upload(upload: UploadFile, name: str, label_column=None):
        raw = upload.file.read(max_upload_bytes + 1)
        if len(raw) > max_upload_bytes:
            raise _UploadTooLarge(name)
        return cio.parse_matrix_csv(
            _stdio.StringIO(raw.decode("utf-8")), label_column=label_column, name=name
        )

    class _UploadTooLarge(Exception):
        def __init__(self, name):
            self.name = name

    @app.post("/datasets")
    def upload_datasets(
        target: UploadFile = File(...),
        background: UploadFile = File(...),
        labels: UploadFile | None = File(default=None),
    ):
        try:
            target_ds = _read_upload(target, "target")
            background_ds = _read_upload(background, "background")
            label_values = None
            if labels is not None:
                label_ds = _read_upload(labels, "labels")
                label_values = label_ds.data[:, 0].astype(np.int64)
                if len(label_values) != target_ds.data.shape[0]:
                    return _error(400, f"labels has {len(label_values)} rows, "
                                       f"target has {target_ds.data.shape[0]}")
        except _UploadTooLarge as exc:
            return _error(413, f"{exc.name} exceeds the {max_upload_bytes} byte upload cap")
        except ValidationError as exc:
            return _error(400, str(exc))
        t, b = target_ds.data, background_ds.data
        if t.shape[1] != b.shape[1]:
            return _error(400, f"target has {t.shape[1]} features, "
                               f"background has {b.shape[1]} features")
        if t.shape[0] < 2 or b.shape[0] < 2:
            return _error(400, "target and background each need at least 2 rows")
        snap = state.replace(t, b, label_values)
        return {"d": t.shape[1], "n": t.shape[0], "m": b.shape[0], "version": snap.version}

    @app.get("/embedding")
    def embedding(alpha: str = "1.0", k: int = 2, include_background: int = 0):
        snap = state.snapshot()
        if snap is None:
            return _error(409, "no datasets uploaded")
        try:
            alpha_value = _parse_alpha_param(alpha)
        except (ValueError, ValidationError):
            return _error(422, f"cannot parse alpha {alpha!r} (non-negative number or 'inf')")
        d = snap.target.shape[1]
        if not 1 <= k <= d:
            return _error(422, f"k must be in [1, {d}], got {k}")

        def build():
            if math.isinf(alpha_value):
                model = cpca.fit_infinite(snap.target, snap.background, k)
            else:
                model = cpca.fit_covariances(
                    snap.cx, snap.cy, alpha_value, k, snap.target_mean, snap.background_mean
                )
            payload = {
                "alpha": "inf" if math.isinf(alpha_value) else alpha_value,
                "k": k,
                "points": cpca.transform(model, snap.target).tolist(),
                "labels": snap.labels.tolist() if snap.labels is not None else None,
                "variance_pairs": model.variance_pairs.tolist(),
                "eigenvalues": model.eigenvalues.tolist(),
                "version": snap.version,
            }
            if include_background:
                payload["background_points"] = cpca.transform(model, snap.background).tolist()
            return payload

        key = (snap.version, "embedding", alpha_value, k, bool(include_background))
        try:
            return _cached_json(state, key, build)
        except (ValidationError, NumericError) as exc:
            return _error(422, str(exc))

    @app.get("/sweep")
    def sweep(grid: str = "0.1:1000:40", k: int = 2, p: int = 3, seed: int = 0):
        snap = state.snapshot()
        if snap is None:
            return _error(409, "no datasets uploaded")
        parts = grid.split(":")
        if len(parts) != 3:
            return _error(422, f"grid must be lo:hi:count, got {grid!r}")
        try:
            grid_values = alpha_select.log_grid(float(parts[0]), float(parts[1]), int(parts[2]))
        except (ValueError, ValidationError) as exc:
            return _error(422, f"bad grid {grid!r}: {exc}")
        d = snap.target.shape[1]
        if not 1 <= k <= d:
            return _error(422, f"k must be in [1, {d}], got {k}")
        if not 1 <= p <= len(grid_values):
            return _error(422, f"p must be in [1, {len(grid_values)}], got {p}")

        def build():
            models = alpha_select.sweep_covariances(
                snap.cx, snap.cy, grid_values, k, snap.target_mean, snap.background_mean
            )
            result = alpha_select.select_from_models(models, p, seed)
            return {
                "alphas": [m.alpha for m in models],
                "variance_pairs": [m.variance_pairs[0].tolist() for m in models],
                "affinity": result.affinity.tolist(),
                "cluster_labels": result.cluster_labels.tolist(),
                "medoid_alphas": result.medoid_alphas.tolist(),
                "version": snap.version,
            }

        key = (snap.version, "sweep", grid, k, p, seed)
        try:
            return _cached_json(state, key, build)
        except (ValidationError, NumericError) as exc:
            return _error(422, str(exc))

    @app.get("/weights")
    def weights(alpha: str = "1.0", component: int = 0, k: int = 2):
        snap = state.snapshot()
        if snap is None:
            return _error(409, "no datasets uploaded")
        try:
            alpha_value = _parse_alpha_param(alpha)
        except (ValueError, ValidationError):
            return _error(422, f"cannot parse alpha {alpha!r}")
        d = snap.target.shape[1]
        if not 1 <= k <= d:
            return _error(422, f"k must be in [1, {d}], got {k}")
        if not 0 <= component < k:
            return _error(422, f"component must be in [0, {k}), got {component}")

        def build():
            if math.isinf(alpha_value):
                model = cpca.fit_infinite(snap.target, snap.background, k)
            else:
                model = cpca.fit_covariances(
                    snap.cx, snap.cy, alpha_value, k, snap.target_mean, snap.background_mean
                )
            return {
                "alpha": "inf" if math.isinf(alpha_value) else alpha_value,
                "component": component,
                "weights": cpca.feature_weights(model, component).tolist(),
                "version": snap.version,
            }

        key = (snap.version, "weights", alpha_value, component, k)
        try:
            return _cached_json(state, key, build)
        except (ValidationError, NumericError) as exc:
            return _error(422, str(exc))

    return app
