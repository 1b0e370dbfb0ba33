"""HTTP editing service exposing sessions over a small JSON API.

Endpoints (all JSON bodies carry/return ``schema_version`` 1):

- ``POST   /api/sessions``                        create a session from a bundle
- ``GET    /api/sessions/{sid}``                  session metadata
- ``GET    /api/sessions/{sid}/camera``           dense camera track (full precision)
- ``GET    /api/sessions/{sid}/dance``            dancer joints (rounded to 5 decimals)
- ``PATCH  /api/sessions/{sid}/tags``             add / remove / move a keyframe
- ``PATCH  /api/sessions/{sid}/keyframes/{frame}`` pin the pose at a tagged frame
- ``DELETE /api/sessions/{sid}/keyframes/{frame}`` unpin it again
- ``POST   /api/sessions/{sid}/resynthesize``     recompute every interval
- ``DELETE /api/sessions/{sid}``                  drop the session

Mutations accept an optional ``version`` for optimistic concurrency (mismatch
-> 409) and an optional ``policy`` (``cascade`` default, ``local``). Mutation
responses carry only the re-synthesized interval segments so clients can
splice them into their local copy of the track.
"""

from __future__ import annotations

import threading

import numpy as np
from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from tweencam.core import InvalidPoseError, KeyframeTags, SequenceBundle
from tweencam.editing import EditError, EditSession, VersionConflict
from tweencam.ingest import entry_pose, load_bundle, pose_entry
from tweencam.stage23 import Stage23Model

SCHEMA_VERSION = 1


class _Doc(dict):
    def __init__(self, **kw):
        super().__init__(schema_version=SCHEMA_VERSION, **kw)


def _segments(session: EditSession, pairs) -> list[dict]:
    return [
        {
            "start": int(t1),
            "end": int(t2),
            "frames": [pose_entry(row) for row in session.camera[t1:t2]],
        }
        for t1, t2 in pairs
    ]


def _mutation_response(session: EditSession, changed) -> JSONResponse:
    return JSONResponse(
        _Doc(session=session.describe(), changed=_segments(session, changed))
    )


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(_Doc(error=message), status_code=status)


def create_app(
    model: Stage23Model,
    bundles: dict[str, SequenceBundle] | None = None,
    data_root=None,
    detector=None,
) -> FastAPI:
    """Build the editing app.

    ``bundles`` serves named in-memory bundles; ``data_root`` additionally
    resolves names to bundle directories on disk. Sessions default to the
    bundle's own tags, fall back to the detector when one is supplied.
    """
    app = FastAPI(title="camera editing service")
    # the editor is a static page on another port; the API is localhost-only
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.sessions: dict[str, EditSession] = {}
    app.state.store_lock = threading.Lock()
    bundles = dict(bundles or {})

    def resolve_bundle(name: str) -> SequenceBundle:
        if name in bundles:
            return bundles[name]
        if data_root is not None and name and "/" not in name and ".." not in name:
            path = data_root / name
            if path.is_dir():
                return load_bundle(path)
        raise KeyError(name)

    @app.exception_handler(EditError)
    async def _edit_error(request, exc):
        return _error(400, str(exc))

    @app.exception_handler(InvalidPoseError)
    async def _pose_error(request, exc):
        return _error(400, str(exc))

    @app.exception_handler(VersionConflict)
    async def _conflict(request, exc):
        return _error(409, str(exc))

    @app.exception_handler(KeyError)
    async def _missing(request, exc):
        return _error(404, f"unknown resource: {exc}")

    def get_session(sid: str) -> EditSession:
        session = app.state.sessions.get(sid)
        if session is None:
            raise KeyError(sid)
        return session

    @app.post("/api/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        name = payload.get("bundle")
        if not isinstance(name, str):
            raise EditError("body must name a bundle")
        bundle = resolve_bundle(name)
        if payload.get("tags") is not None:
            tags = KeyframeTags.from_indices(
                bundle.n_frames, [int(i) for i in payload["tags"]], fps=bundle.fps
            ).canonicalized()
        elif bundle.tags is not None:
            tags = bundle.tags
        elif detector is not None:
            from tweencam.detector import detect_keyframes

            tags = detect_keyframes(bundle, detector)
        else:
            raise EditError("bundle has no keyframes and no detector is loaded")
        session = EditSession(bundle=bundle, model=model, tags=tags)
        with app.state.store_lock:
            app.state.sessions[session.session_id] = session
        return _Doc(session=session.describe())

    @app.get("/api/sessions/{sid}")
    def session_info(sid: str):
        return _Doc(session=get_session(sid).describe())

    @app.get("/api/sessions/{sid}/camera")
    def session_camera(sid: str):
        session = get_session(sid)
        with session.lock:
            frames = [pose_entry(row) for row in session.camera]
        return _Doc(fps=session.bundle.fps, version=session.version, frames=frames)

    @app.get("/api/sessions/{sid}/dance")
    def session_dance(sid: str):
        session = get_session(sid)
        joints = np.round(session.bundle.dance.astype(np.float64), 5)
        return _Doc(fps=session.bundle.fps, joints=joints.tolist())

    @app.patch("/api/sessions/{sid}/tags")
    def edit_tags(sid: str, payload: dict = Body(...)):
        session = get_session(sid)
        op = payload.get("op")
        frame = payload.get("frame")
        version = payload.get("version")
        policy = payload.get("policy", "cascade")
        if not isinstance(frame, int):
            raise EditError("body must carry an integer frame")
        if op == "add":
            changed = session.add_tag(frame, version=version, policy=policy)
        elif op == "remove":
            changed = session.remove_tag(frame, version=version, policy=policy)
        elif op == "move":
            if not isinstance(payload.get("to"), int):
                raise EditError("move needs an integer destination frame")
            changed = session.move_tag(frame, payload["to"], version=version, policy=policy)
        else:
            raise EditError("op must be add, remove, or move")
        return _mutation_response(session, changed)

    @app.patch("/api/sessions/{sid}/keyframes/{frame}")
    def edit_keyframe(sid: str, frame: int, payload: dict = Body(...)):
        session = get_session(sid)
        entry = payload.get("pose")
        if not isinstance(entry, dict):
            raise EditError("body must carry a pose object")
        try:
            pose = np.array(entry_pose(entry), dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise EditError(f"malformed pose: {exc}") from None
        changed = session.edit_pose(
            frame, pose, version=payload.get("version"), policy=payload.get("policy", "cascade")
        )
        return _mutation_response(session, changed)

    @app.delete("/api/sessions/{sid}/keyframes/{frame}")
    def clear_keyframe(sid: str, frame: int, version: int | None = None, policy: str = "cascade"):
        session = get_session(sid)
        changed = session.clear_pose(frame, version=version, policy=policy)
        return _mutation_response(session, changed)

    @app.post("/api/sessions/{sid}/resynthesize")
    def resynthesize(sid: str, payload: dict = Body(default={})):
        session = get_session(sid)
        changed = session.resynthesize_all(version=payload.get("version"))
        return _mutation_response(session, changed)

    @app.delete("/api/sessions/{sid}", status_code=204)
    def drop_session(sid: str):
        with app.state.store_lock:
            if app.state.sessions.pop(sid, None) is None:
                raise KeyError(sid)
        return None

    return app
