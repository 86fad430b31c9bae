"""Steering service: minimization sessions over HTTP JSON + SSE events.

One logical worker per session (a per-session lock serializes commands);
sessions are independent. Events are buffered per session and streamed
over /sessions/{id}/events as server-sent events. No persistence beyond
explicitly exported orbit records.
"""
from __future__ import annotations

import json
import secrets
import threading
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .errors import InitFailure, VarorbitError
from .groups import group_from_dict, is_coercive
from .optimize import (
    MinimizeConfig,
    Minimizer,
    continue_with,
    random_init,
)
from .paths import (
    FourierPath,
    QuadratureParams,
    default_nu,
    extend_to_full_period,
    symmetry_violation,
)
from .records import OrbitRecord, group_to_dict

HISTORY_CAP = 10_000
SNAPSHOT_INTERVAL = 25
UI_POINTS_PER_SEGMENT = 256
SNAPSHOT_SYMMETRY_TOL = 1e-8


class CreateSession(BaseModel):
    group: dict
    s: int = 8
    nu: int = 0
    seed: int = 0
    amplitude: float = 1.0
    grad_tol: float = 1e-8
    max_iters: int = 100_000


class StepRequest(BaseModel):
    iterations: int = 25


class PerturbRequest(BaseModel):
    amplitude: float
    seed: int = 0


class ReshapeRequest(BaseModel):
    s: int | None = None
    nu: int | None = None
    truncate: bool = False


@dataclass
class Session:
    id: str
    group: object
    minimizer: Minimizer
    cfg: MinimizeConfig
    coercive: bool
    state: str = "idle"  # idle | running | converged | failed
    history: deque = field(default_factory=lambda: deque(maxlen=HISTORY_CAP))
    emitted_rows: int = 0
    events: list = field(default_factory=list)
    event_cond: threading.Condition = field(default_factory=threading.Condition)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def path(self) -> FourierPath:
        return self.minimizer.path

    @property
    def quad(self) -> QuadratureParams:
        return self.minimizer.quad

    @property
    def iteration(self) -> int:
        return self.minimizer.iterations

    def emit(self, etype: str, payload: dict):
        with self.event_cond:
            self.events.append({"type": etype, **payload})
            self.event_cond.notify_all()

    def drain_progress(self):
        """Mirror new optimizer history rows into events and the ring buffer."""
        rows = self.minimizer.history[self.emitted_rows:]
        self.emitted_rows = len(self.minimizer.history)
        for (it, action, gnorm, mind) in rows:
            self.history.append((it, action, gnorm, mind))
            self.emit("progress", {
                "iter": it, "action": action, "grad_norm": gnorm,
                "min_distance": mind,
            })

    def reset_minimizer(self, path: FourierPath, quad: QuadratureParams):
        keep_iters = self.minimizer.iterations
        m = Minimizer(path, quad, self.cfg)
        m.iterations = keep_iters
        self.minimizer = m
        self.emitted_rows = 0
        self.state = "failed" if m.status == "collision-stalled" else "idle"


def _trajectory_payload(session: Session, points_per_segment: int):
    try:
        _, traj = extend_to_full_period(
            session.path, QuadratureParams(points_per_segment))
    except VarorbitError:
        return None
    sym = symmetry_violation(session.path)
    if sym > SNAPSHOT_SYMMETRY_TOL:
        return None
    n = session.path.system.n
    # per-body point lists, [[ [x, y, ...], ... ] per body]
    return [traj[:, j, :].tolist() for j in range(n)]


def _state_payload(session: Session, with_trajectory: bool = True):
    sys_ = session.path.system
    rep = session.minimizer.rep
    if rep is not None and not np.isfinite(rep.action):
        rep = None
    out = {
        "id": session.id,
        "state": session.state,
        "status": session.minimizer.status or "",
        "n": sys_.n,
        "d": sys_.d,
        "l": session.group.l,
        "group_type": session.group.gtype,
        "group_order": session.group.order,
        "coercive": session.coercive,
        "warnings": [] if session.coercive else ["group is not coercive"],
        "s": session.path.s,
        "nu": session.quad.nu,
        "iteration": session.iteration,
        "action": rep.action if rep else None,
        "grad_norm": session.minimizer.grad_norm if rep else None,
        "min_distance": rep.min_mutual_distance if rep else None,
        "coeffs": session.path.coeffs.reshape(
            session.path.s + 2, -1).tolist(),
        "history": [list(h) for h in session.history],
    }
    if with_trajectory:
        out["trajectory"] = _trajectory_payload(session, UI_POINTS_PER_SEGMENT)
    return out


def create_app() -> FastAPI:
    app = FastAPI(title="varorbit steering service")
    sessions: dict[str, Session] = {}

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(404, f"no session {sid}")
        return s

    @app.post("/sessions")
    def create_session(req: CreateSession):
        try:
            group = group_from_dict(req.group)
        except VarorbitError as exc:
            raise HTTPException(422, str(exc))
        nu = req.nu or default_nu(req.s)
        cfg = MinimizeConfig(grad_tol=req.grad_tol, seed=req.seed,
                             amplitude=req.amplitude,
                             max_iters=req.max_iters)
        try:
            path = random_init(group, req.s, seed=req.seed,
                               amplitude=req.amplitude, nu=nu)
        except InitFailure as exc:
            raise HTTPException(422, str(exc))
        session = Session(
            id=secrets.token_hex(8),
            group=group,
            minimizer=Minimizer(path, QuadratureParams(nu), cfg),
            cfg=cfg,
            coercive=is_coercive(group),
        )
        sessions[session.id] = session
        session.emit("status", {"state": "idle", "iteration": 0})
        return _state_payload(session)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return _state_payload(session)

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        session = get_session(sid)
        session.emit("status", {"state": "deleted"})
        del sessions[sid]
        return {"deleted": sid}

    @app.post("/sessions/{sid}/step")
    def step(sid: str, req: StepRequest):
        session = get_session(sid)
        if req.iterations < 0:
            raise HTTPException(422, "iterations must be >= 0")
        with session.lock:
            if session.state == "failed":
                raise HTTPException(409, "session is in failed state")
            if req.iterations == 0:
                return _state_payload(session)
            session.state = "running"
            done = 0
            while done < req.iterations and session.minimizer.status is None:
                chunk = min(SNAPSHOT_INTERVAL, req.iterations - done)
                done += session.minimizer.advance(chunk)
                session.drain_progress()
                traj = _trajectory_payload(session, 64)
                if traj is not None:
                    session.emit("snapshot", {
                        "iter": session.iteration, "trajectory": traj,
                    })
            status = session.minimizer.status
            if status == "converged":
                session.state = "converged"
            elif status in ("collision-stalled", "diverged", "iteration-cap"):
                # last good path is retained; perturb/reshape reopens it
                session.state = "failed"
            else:
                session.state = "idle"
            session.emit("status", {
                "state": session.state, "status": status or "",
                "iteration": session.iteration,
            })
            return _state_payload(session)

    @app.post("/sessions/{sid}/perturb")
    def perturb(sid: str, req: PerturbRequest):
        session = get_session(sid)
        with session.lock:
            path, quad = continue_with(
                session.path, perturb_amplitude=req.amplitude,
                seed=req.seed, nu=session.quad.nu)
            session.reset_minimizer(path, quad)
            session.emit("status", {"state": session.state,
                                    "iteration": session.iteration})
            return _state_payload(session)

    @app.post("/sessions/{sid}/reshape")
    def reshape(sid: str, req: ReshapeRequest):
        session = get_session(sid)
        with session.lock:
            try:
                path, quad = continue_with(
                    session.path, s=req.s, nu=req.nu or session.quad.nu,
                    truncate=req.truncate)
            except VarorbitError as exc:
                raise HTTPException(422, str(exc))
            session.reset_minimizer(path, quad)
            session.emit("status", {"state": session.state,
                                    "iteration": session.iteration})
            return _state_payload(session)

    @app.get("/sessions/{sid}/orbit")
    def export_orbit(sid: str):
        session = get_session(sid)
        with session.lock:
            rep = session.minimizer.rep
            rec = OrbitRecord(
                session.group, session.path, session.quad.nu,
                rep.action if rep else float("nan"),
                session.minimizer.grad_norm,
                rep.min_mutual_distance if rep else float("nan"),
            )
            return JSONResponse(rec.to_dict())

    @app.get("/sessions/{sid}/events")
    def events(sid: str, start: int = 0, follow: bool = False,
               timeout: float = 30.0):
        """SSE stream of buffered events; follow=false closes at the buffer end."""
        session = get_session(sid)

        def gen():
            idx = start
            deadline = time.monotonic() + timeout
            while True:
                with session.event_cond:
                    while idx >= len(session.events):
                        if not follow or time.monotonic() > deadline:
                            return
                        session.event_cond.wait(timeout=0.5)
                    batch = session.events[idx:]
                    idx = len(session.events)
                for ev in batch:
                    yield f"data: {json.dumps(ev)}\n\n"

        return StreamingResponse(gen(), media_type="text/event-stream")

    return app
