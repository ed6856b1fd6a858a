"""HTTP service over a precomputed analysis run directory.

The run data (session.json, clips/*.wav) is immutable; the only mutable
state is the session store, guarded by optimistic revision checks. All GET
endpoints are pure reads.
"""

from __future__ import annotations

import json
import os
import threading

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, Response

from sonolens.exports import dumps_canonical


class SessionStore:
    """File-backed session states with optimistic concurrency by revision."""

    def __init__(self, path: str):
        self.path = path
        self.lock = threading.Lock()
        self._data: dict[str, dict] = {}
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                self._data = json.load(fh)

    def get(self, session_id: str) -> dict | None:
        with self.lock:
            return self._data.get(session_id)

    def put(self, session_id: str, state: dict, revision: int) -> tuple[bool, int]:
        """Store when the caller's revision matches; returns (ok, current)."""
        with self.lock:
            current = self._data.get(session_id, {"revision": 0})["revision"]
            if revision != current:
                return False, current
            self._data[session_id] = {"revision": current + 1, "state": state}
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(self._data, fh)
            os.replace(tmp, self.path)
            return True, current + 1


def create_app(run_dir: str) -> FastAPI:
    """Build the API app over an analysis run directory."""
    session_path = os.path.join(run_dir, "session.json")
    doc = None
    if os.path.exists(session_path):
        with open(session_path, encoding="utf-8") as fh:
            doc = json.load(fh)
    store = SessionStore(os.path.join(run_dir, "sessions.json"))

    app = FastAPI(title="sonolens", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    def require_run() -> dict:
        if doc is None:
            raise HTTPException(status_code=404, detail="no analysis run loaded")
        return doc

    @app.get("/api/collection")
    def collection():
        if doc is None:
            raise HTTPException(status_code=404, detail="no analysis run loaded")
        clips: dict[str, dict] = {}
        for p in doc.get("plots", []):
            entry = clips.setdefault(p["clip_id"], {
                "clip_id": p["clip_id"],
                "group_key": p["clip_id"].rsplit("_", 1)[0],
                "duration_s": None,
                "methods": [],
                "digest": doc.get("manifest", {}).get("input_digests", {}).get(p["clip_id"]),
            })
            if p["method"] not in entry["methods"]:
                entry["methods"].append(p["method"])
            sg = p.get("spectrogram")
            if entry["duration_s"] is None and sg and sg.get("times_s"):
                entry["duration_s"] = sg["times_s"][-1]
        return list(clips.values())

    @app.get("/api/clip/{clip_id}/spectral")
    def spectral(clip_id: str, method: str):
        d = require_run()
        for p in d.get("plots", []):
            if p["clip_id"] == clip_id and p["method"] == method:
                # byte-identical to the JSON export's plot entry
                return Response(content=dumps_canonical(p),
                                media_type="application/json")
        raise HTTPException(status_code=404,
                            detail=f"no plot for {clip_id}/{method}")

    @app.get("/api/clip/{clip_id}/audio")
    def audio(clip_id: str):
        path = os.path.join(run_dir, "clips", f"{clip_id}.wav")
        if not os.path.exists(path):
            raise HTTPException(status_code=404, detail=f"no audio for {clip_id}")
        with open(path, "rb") as fh:
            return Response(content=fh.read(), media_type="audio/wav")

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str):
        entry = store.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return entry

    @app.put("/api/session/{session_id}")
    async def put_session(session_id: str, request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise HTTPException(status_code=400, detail="invalid JSON body")
        if not isinstance(body, dict) or "state" not in body or "revision" not in body:
            raise HTTPException(status_code=400,
                                detail="body must carry 'state' and 'revision'")
        ok, current = store.put(session_id, body["state"], int(body["revision"]))
        if not ok:
            raise HTTPException(status_code=409,
                                detail=f"stale revision; current is {current}")
        return {"revision": current}

    @app.get("/", response_class=HTMLResponse)
    def index():
        report = os.path.join(run_dir, "report.html")
        if os.path.exists(report):
            with open(report, encoding="utf-8") as fh:
                return fh.read()
        return "<!DOCTYPE html><html><body><h1>sonolens</h1><p>No report in run directory.</p></body></html>"

    return app
