"""Wire and file formats: step-protocol JSON records and the CSV
layouts for trial logs, model sweeps and aggregates.

Every CSV starts with comment lines carrying a format version and the
full parameter set as JSON, so any log can be interpreted (and
replayed) without outside context.  Floats are written with repr, which
round-trips exactly and keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

from .engine import ControlFrame, Mode, StepResult

CSV_FORMAT = "posrate-csv 1"

TRIAL_COLUMNS = ("t", "x_in", "y_in", "contact", "x_ptr", "y_ptr", "mode")
MODEL_COLUMNS = ("D", "W", "technique", "T", "T1", "T2", "N", "D2")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(v)


# -- step protocol JSON -------------------------------------------------------

def frame_to_dict(frame: ControlFrame) -> dict:
    return {"t_s": frame.t_s, "x_mm": frame.x_mm, "y_mm": frame.y_mm,
            "contact": frame.contact}


def frame_from_dict(d: dict) -> ControlFrame:
    try:
        return ControlFrame(float(d["t_s"]), float(d["x_mm"]), float(d["y_mm"]),
                            bool(d.get("contact", True)))
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed frame record: {e}") from e


def result_to_dict(result: StepResult) -> dict:
    return {
        "dx_mm": result.dx_mm,
        "dy_mm": result.dy_mm,
        "mode": result.mode.value,
        "penetration_mm": result.penetration_mm,
        "n_x": result.n_x,
        "n_y": result.n_y,
    }


def result_from_dict(d: dict) -> StepResult:
    return StepResult(float(d["dx_mm"]), float(d["dy_mm"]), Mode(d["mode"]),
                      float(d["penetration_mm"]),
                      None if d.get("n_x") is None else float(d["n_x"]),
                      None if d.get("n_y") is None else float(d["n_y"]))


# -- trial log CSV ------------------------------------------------------------

def write_trial_csv(path, rows, params: dict, meta: dict):
    """Write one trial log.

    ``rows`` yields (frame, pointer_x, pointer_y, mode) tuples; pointer
    coordinates are the accumulated display position after the frame.
    """
    lines = [f"# {CSV_FORMAT} trial"]
    lines.append("# params " + json.dumps(params, sort_keys=True))
    lines.append("# meta " + json.dumps(meta, sort_keys=True))
    lines.append(",".join(TRIAL_COLUMNS))
    for frame, px, py, mode in rows:
        lines.append(",".join((
            _fmt(frame.t_s), _fmt(frame.x_mm), _fmt(frame.y_mm),
            _fmt(frame.contact), _fmt(px), _fmt(py), mode.value,
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trial_csv(path):
    """Read a trial log back into (frames, pointer trace, modes, params, meta)."""
    frames: list[ControlFrame] = []
    trace: list[tuple[float, float]] = []
    modes: list[Mode] = []
    params: dict = {}
    meta: dict = {}
    header_seen = False
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("params "):
                params = json.loads(body[len("params "):])
            elif body.startswith("meta "):
                meta = json.loads(body[len("meta "):])
            continue
        if not header_seen:
            if tuple(line.split(",")) != TRIAL_COLUMNS:
                raise ValueError(
                    f"{path}:{lineno}: bad trial header {line!r}; "
                    f"expected {','.join(TRIAL_COLUMNS)}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != len(TRIAL_COLUMNS):
            raise ValueError(f"{path}:{lineno}: expected {len(TRIAL_COLUMNS)} columns")
        t, x_in, y_in, contact, x_ptr, y_ptr, mode = parts
        frames.append(ControlFrame(float(t), float(x_in), float(y_in),
                                   contact not in ("0", "false", "False")))
        trace.append((float(x_ptr), float(y_ptr)))
        modes.append(Mode(mode))
    if not header_seen:
        raise ValueError(f"{path}: not a trial log (no column header)")
    return frames, trace, modes, params, meta


# -- model sweep CSV ----------------------------------------------------------

def write_model_csv(path, rows, params: dict):
    """Write model predictions; rows yield (D, W, technique, Prediction)."""
    lines = [f"# {CSV_FORMAT} model-sweep"]
    lines.append("# params " + json.dumps(params, sort_keys=True))
    lines.append(",".join(MODEL_COLUMNS))
    for d, w, technique, pred in rows:
        lines.append(",".join((
            _fmt(float(d)), _fmt(float(w)), technique,
            _fmt(pred.total), _fmt(pred.first_phase), _fmt(pred.second_phase),
            str(pred.clutches), _fmt(pred.residual_distance),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


# -- aggregate CSV ------------------------------------------------------------

def write_aggregate_csv(path, rows, params: dict):
    """Write per-condition aggregates from summarize()."""
    if rows:
        columns = list(rows[0].keys())
    else:
        columns = []
    lines = [f"# {CSV_FORMAT} aggregate"]
    lines.append("# params " + json.dumps(params, sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n")


def write_metrics_json(path, metrics: dict):
    Path(path).write_text(json.dumps(metrics, sort_keys=True, indent=2) + "\n")
