"""Line-delimited JSON step service over TCP.

Lets non-Python clients (the browser playground, loggers, hardware
rigs) drive the engine remotely: open a session with engine
parameters, stream timestamped input frames, and get back the same
pointer deltas the library computes offline.  One engine per
connection; messages are single-line JSON objects, replies likewise.

Message types:

  {"type": "open", "params": {...}}          -> {"type": "ready", "params": {...}}
  {"type": "frame", "t_s": .., "x_mm": ..,
   "y_mm": .., "contact": true}              -> {"type": "frame", "dx_mm": .., ...}
  {"type": "reset"}                          -> {"type": "ready", ...}
  {"type": "calibrate", "boundary": [[x,y]..],
   "pushes": [[x,y]..]}                      -> {"type": "calibration", ...}
  {"type": "close"}                          -> {"type": "closed"}

Errors come back as {"type": "error", "message": ...} and leave the
session usable.
"""

from __future__ import annotations

import json
import socketserver
import threading

from . import calibration, protocol
from .engine import EngineParams, HybridEngine


class _Session:
    """Per-connection engine wrapper; translates messages to engine calls."""

    def __init__(self):
        self.engine: HybridEngine | None = None

    def handle(self, msg: dict) -> tuple[dict, bool]:
        mtype = msg.get("type")
        if mtype == "open":
            params = EngineParams.from_dict(msg.get("params") or {})
            self.engine = HybridEngine(params)
            return {"type": "ready", "params": params.to_dict()}, False
        if mtype == "frame":
            if self.engine is None:
                raise ValueError("no session open; send an open message first")
            res = self.engine.feed(protocol.frame_from_dict(msg))
            out = protocol.result_to_dict(res)
            out["type"] = "frame"
            return out, False
        if mtype == "reset":
            if self.engine is None:
                raise ValueError("no session open; send an open message first")
            self.engine.reset()
            return {"type": "ready", "params": self.engine.params.to_dict()}, False
        if mtype == "calibrate":
            boundary = [(float(x), float(y)) for x, y in msg.get("boundary") or []]
            pushes = [(float(x), float(y)) for x, y in msg.get("pushes") or []]
            fit = calibration.fit_boundary(boundary)
            prof = calibration.build_force_profile(fit, pushes)
            return {"type": "calibration",
                    "fit": {"centre": list(fit.centre), "radius": fit.radius,
                            "rms_residual": fit.rms_residual},
                    "profile": prof.to_dict()}, False
        if mtype == "close":
            return {"type": "closed"}, True
        raise ValueError(f"unknown message type {mtype!r}")


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        session = _Session()
        for raw in self.rfile:
            line = raw.strip()
            if not line:
                continue
            try:
                msg = json.loads(line)
                if not isinstance(msg, dict):
                    raise ValueError("messages must be JSON objects")
                reply, done = session.handle(msg)
            except Exception as e:
                reply, done = {"type": "error", "message": str(e)}, False
            self.wfile.write((json.dumps(reply) + "\n").encode())
            self.wfile.flush()
            if done:
                break


class StepServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def make_server(host: str = "127.0.0.1", port: int = 0) -> StepServer:
    """Bind a step server; port 0 picks a free port (see server_address)."""
    return StepServer((host, port), _Handler)


def serve_forever(host: str = "127.0.0.1", port: int = 8377) -> None:
    with make_server(host, port) as server:
        addr = server.server_address
        print(f"posrate step service listening on {addr[0]}:{addr[1]}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass


def start_background(host: str = "127.0.0.1", port: int = 0) -> tuple[StepServer, threading.Thread]:
    """Spawn a server on a daemon thread (used by tests and notebooks)."""
    server = make_server(host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
