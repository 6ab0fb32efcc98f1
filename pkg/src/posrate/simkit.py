"""Simulated pointing experiments: task generation, scripted agents,
trial replay and aggregation.

A reciprocal pointing task is a seeded sequence of targets a fixed
distance apart.  A deterministic agent synthesizes 1 kHz device input
scripts for a technique (clutched position control, or hybrid control
with either elastic mapping); the scripts are replayed through a fresh
engine to produce trial logs with timing and continuity metrics, and
logs aggregate into per-condition summary rows.

Scripts are plain frame lists, so anything recorded elsewhere (e.g. an
interactive playground) replays and aggregates the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .engine import ControlFrame, EngineParams, HybridEngine, Mode
from .transfer import ConfigError, GainCurve, gain_for_speed
from . import protocol

TECHNIQUES = ("position", "hybrid", "hybrid-radial")

# u and its derivative for the minimum-jerk position profile
_MJ = lambda t: t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


@dataclass(frozen=True)
class Trial:
    """One pointing movement: start and target in display mm."""

    index: int
    start: tuple[float, float]
    target: tuple[float, float]
    distance: float                   # [mm]
    width: float                      # [mm]

    @property
    def index_of_difficulty(self) -> float:
        return math.log2(self.distance / self.width + 1.0)


@dataclass(frozen=True)
class AgentProfile:
    """Idealized operator driving the device."""

    peak_speed: float = 150.0         # [mm/s] device, ballistic strokes
    fine_speed: float = 40.0          # [mm/s] device, final corrections
    utilization: float = 0.75         # fraction of the operating range used
    clutch_duration: float = 0.2      # [s] one lift-and-reposition
    hold_penetration: float = 1.6     # [mm] steady rate-control depth
    settle: float = 0.25              # [mm] display distance counted as arrived
    approach_time: float = 0.15       # [s] rate-homing speed/distance ratio
    timeout: float = 30.0             # [s] give up a trial after this long


class TrialTimeout(RuntimeError):
    """Script ended before the pointer reached the target."""

    def __init__(self, log: "TrialLog"):
        super().__init__("trial script ended before target acquisition")
        self.log = log


@dataclass
class TrialLog:
    """Replayed trial with derived metrics.

    All metrics are recomputable from the frames, pointer trace and
    modes alone, so logs read back from CSV carry the same numbers.
    """

    condition: dict
    frames: list
    trace: list                       # pointer positions after each frame
    modes: list
    selection_time: float | None
    engagements: int
    elastic_invocations: int
    clutch_time: float                # [s] total contact-off time
    elastic_time: float               # [s] total time in the elastic band
    max_speed_jump: float             # [mm/s] between consecutive contact frames
    max_direction_jump: float         # [deg] between consecutive moving frames
    transitions: list = field(default_factory=list)  # per boundary exit


def technique_params(technique: str, base: EngineParams) -> EngineParams:
    """Engine configuration implementing a named technique."""
    if technique == "position":
        return replace(base, mapping="smooth")
    if technique == "hybrid":
        return replace(base, mapping="smooth")
    if technique == "hybrid-radial":
        return replace(base, mapping="radial")
    raise ConfigError(f"unknown technique {technique!r}; expected one of {TECHNIQUES}")


# -- task generation ----------------------------------------------------------

def generate_reciprocal_task(
    distance: float,
    width: float,
    count: int,
    seed,
    display: tuple[float, float] = (765.0, 306.0),
    margin: float | None = None,
) -> list[Trial]:
    """Seeded reciprocal target sequence, successive targets exactly
    ``distance`` apart and never off the display.

    Each target is placed at a random heading from the previous one,
    rejecting headings that leave the display or that would strand the
    sequence (no onward point at the same distance).
    """
    if distance <= 0.0 or width <= 0.0:
        raise ConfigError("distance and width must be positive")
    if count < 1:
        raise ConfigError("need at least one trial")
    w, h = display
    if margin is None:
        margin = width / 2.0 + 2.0
    lo_x, hi_x = margin, w - margin
    lo_y, hi_y = margin, h - margin
    if lo_x >= hi_x or lo_y >= hi_y:
        raise ConfigError("margin leaves no usable display area")
    max_span = math.hypot(hi_x - lo_x, hi_y - lo_y)
    if distance > max_span:
        raise ConfigError(
            f"distance {distance} mm exceeds the usable display span {max_span:.1f} mm")

    def reach(p):
        # farthest usable-area corner: an onward target always fits if
        # this is at least the trial distance
        return max(math.hypot(cx - p[0], cy - p[1])
                   for cx in (lo_x, hi_x) for cy in (lo_y, hi_y))

    rng = np.random.default_rng(seed)
    prev = (lo_x, lo_y)  # corner anchor reaches the full span
    trials: list[Trial] = []
    for i in range(count):
        placed = False
        for _ in range(10000):
            ang = rng.uniform(0.0, 2.0 * math.pi)
            cand = (prev[0] + distance * math.cos(ang),
                    prev[1] + distance * math.sin(ang))
            if lo_x <= cand[0] <= hi_x and lo_y <= cand[1] <= hi_y and reach(cand) >= distance:
                placed = True
                break
        if not placed:
            raise ConfigError(
                f"could not place target {i} at distance {distance} mm on the display")
        trials.append(Trial(i, prev, cand, distance, width))
        prev = cand
    return trials


# -- scripted agent -----------------------------------------------------------

class _ScriptBuilder:
    """Closed-loop script synthesis: drives a private engine so the
    recorded frames replay bit-identically through a fresh one."""

    def __init__(self, trial: Trial, params: EngineParams, agent: AgentProfile):
        self.trial = trial
        self.params = params
        self.agent = agent
        self.engine = HybridEngine(params)
        self.dt = params.step_dt
        self.frames: list[ControlFrame] = []
        self.pointer = trial.start
        self.device = params.zone_centre
        self.last_result = None

    @property
    def t(self) -> float:
        return len(self.frames) * self.dt

    @property
    def remaining(self) -> tuple[float, tuple[float, float]]:
        dx = self.trial.target[0] - self.pointer[0]
        dy = self.trial.target[1] - self.pointer[1]
        r = math.hypot(dx, dy)
        if r == 0.0:
            return 0.0, (0.0, 0.0)
        return r, (dx / r, dy / r)

    def timed_out(self) -> bool:
        return self.t >= self.agent.timeout

    def arrived(self) -> bool:
        return self.remaining[0] <= self.agent.settle

    def emit(self, x: float, y: float, contact: bool = True):
        frame = ControlFrame(len(self.frames) * self.dt, x, y, contact)
        res = self.engine.feed(frame)
        self.frames.append(frame)
        self.pointer = (self.pointer[0] + res.dx_mm, self.pointer[1] + res.dy_mm)
        self.device = (x, y)
        self.last_result = res
        return res

    def min_jerk(self, p0, p1, speed: float, stop_on_arrival: bool = False):
        """Emit a minimum-jerk stroke; peak speed = 15/8 * length/duration."""
        length = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
        if length == 0.0:
            return
        duration = 1.875 * length / speed
        n = max(1, round(duration / self.dt))
        for i in range(1, n + 1):
            s = _MJ(i / n)
            self.emit(p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]))
            if (stop_on_arrival and self.arrived()) or self.timed_out():
                return

    def lift(self, to):
        """Contact-off reposition lasting the agent's clutch duration."""
        n = max(1, round(self.agent.clutch_duration / self.dt))
        p0 = self.device
        for i in range(1, n + 1):
            f = i / n
            self.emit(p0[0] + f * (to[0] - p0[0]), p0[1] + f * (to[1] - p0[1]),
                      contact=False)

    def settle_frames(self, n: int = 5):
        for _ in range(n):
            self.emit(self.device[0], self.device[1])

    # display length produced by a stroke of given device length; replays the
    # exact per-frame arithmetic the engine applies, so it is gain-curve exact
    def display_length(self, device_len: float, speed: float) -> float:
        if device_len <= 0.0:
            return 0.0
        duration = 1.875 * device_len / speed
        n = max(1, round(duration / self.dt))
        total = 0.0
        prev = 0.0
        for i in range(1, n + 1):
            s = _MJ(i / n) * device_len
            step = s - prev
            prev = s
            g = gain_for_speed(step / self.dt, self.params.curve)
            total += g * step
        return total

    def device_length_for_display(self, display_len: float, speed: float,
                                  cap: float) -> float:
        """Invert display_length by bisection, capped at the stroke limit."""
        if display_len <= 0.0:
            return 0.0
        if self.display_length(cap, speed) <= display_len:
            return cap
        lo, hi = 0.0, cap
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.display_length(mid, speed) < display_len:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def _pen_for_speed(speed_mm_s: float, params: EngineParams) -> float:
    """Penetration depth that yields a steady display speed."""
    el = params.elastic
    if params.mapping == "radial":
        force = (speed_mm_s * 1e-3 / el.cubic_gain) ** (1.0 / 3.0)
        return 1e3 * force / el.spring_k
    return speed_mm_s / el.rate_gain


def synthesize_movement(
    trial: Trial,
    technique: str,
    params: EngineParams,
    agent: AgentProfile | None = None,
) -> list[ControlFrame]:
    """Produce a 1 kHz device input script performing the trial.

    Position control covers the distance in clutched engagements of
    ``utilization * operating range``; the hybrid techniques cross the
    rim once and home in under rate control, easing penetration off as
    the pointer approaches the target.
    """
    if technique not in TECHNIQUES:
        raise ConfigError(f"unknown technique {technique!r}; expected one of {TECHNIQUES}")
    agent = agent or AgentProfile()
    eng_params = technique_params(technique, params)
    b = _ScriptBuilder(trial, eng_params, agent)
    if technique == "position":
        _position_script(b)
    else:
        _hybrid_script(b)
    b.settle_frames()
    return b.frames


def _position_script(b: _ScriptBuilder):
    agent, params = b.agent, b.params
    ox, oy = params.zone_centre
    stroke = agent.utilization * 2.0 * params.zone_radius
    first = True
    while not (b.arrived() or b.timed_out()):
        rem, u = b.remaining
        start = (ox - 0.5 * stroke * u[0], oy - 0.5 * stroke * u[1])
        if first:
            b.emit(start[0], start[1])
            first = False
        else:
            b.lift(start)
        speed = agent.peak_speed if rem > 10.0 else agent.fine_speed
        dev_len = b.device_length_for_display(rem, speed, stroke)
        end = (start[0] + dev_len * u[0], start[1] + dev_len * u[1])
        b.min_jerk(start, end, speed, stop_on_arrival=True)


def _hybrid_script(b: _ScriptBuilder):
    agent, params = b.agent, b.params
    ox, oy = params.zone_centre
    r = params.zone_radius
    rem, u = b.remaining
    start = (ox - r * u[0], oy - r * u[1])
    b.emit(start[0], start[1])

    reach = b.display_length(2.0 * r, agent.peak_speed)
    if rem <= reach:
        # single isotonic stroke, no rate phase
        dev_len = b.device_length_for_display(rem, agent.peak_speed, 2.0 * r)
        end = (start[0] + dev_len * u[0], start[1] + dev_len * u[1])
        b.min_jerk(start, end, agent.peak_speed, stop_on_arrival=True)
        _fine_position(b)
        return

    # cross the rim with a penetration chosen for the expected glide speed
    rate_cap = params.elastic.rate_gain * agent.hold_penetration
    v_first = min(rate_cap, max(0.0, rem - reach) / agent.approach_time)
    pen0 = max(0.2, _pen_for_speed(v_first, params))
    across = (ox + (r + pen0) * u[0], oy + (r + pen0) * u[1])
    b.min_jerk(start, across, agent.peak_speed)

    # rate homing: ease penetration off as the pointer closes in
    while not (b.arrived() or b.timed_out()):
        res = b.last_result
        if res is None or res.mode is not Mode.ELASTIC or res.n_x is None:
            _fine_position(b)
            return
        rem, u = b.remaining
        v_des = min(rate_cap, rem / agent.approach_time)
        pen = max(1e-3, _pen_for_speed(v_des, params))
        if params.mapping == "radial":
            # radial mapping pushes along the centre line, steer with it
            cx, cy = b.engine.zone.centre
            p = (cx + (r + pen) * u[0], cy + (r + pen) * u[1])
        else:
            p = (res.n_x + pen * u[0], res.n_y + pen * u[1])
        b.emit(p[0], p[1])


def _fine_position(b: _ScriptBuilder):
    """Per-frame isotonic creep toward the target (post re-entry cleanup)."""
    agent, params = b.agent, b.params
    g0 = gain_for_speed(agent.fine_speed, params.curve)
    while not (b.arrived() or b.timed_out()):
        rem, u = b.remaining
        step = min(agent.fine_speed * b.dt, rem / g0)
        b.emit(b.device[0] + step * u[0], b.device[1] + step * u[1])


# -- scripted boundary crossings (continuity probes) --------------------------

@dataclass(frozen=True)
class CrossingScript:
    """Straight constant-speed run through the rim at a known angle."""

    frames: tuple
    heading_deg: float                # radial direction at the crossing point
    off_radial_deg: float             # approach angle relative to that radial
    device_speed: float               # [mm/s]
    approach: tuple[float, float]     # unit approach direction


def scripted_crossing(
    params: EngineParams,
    off_radial_deg: float,
    heading_deg: float,
    device_speed: float,
    approach_s: float = 0.15,
    hold_penetration: float = 2.0,
    post_s: float = 0.25,
) -> CrossingScript:
    """Build a 1 kHz script that crosses the rim obliquely and then
    holds a fixed penetration."""
    if not -90.0 < off_radial_deg < 90.0:
        raise ConfigError("approach must point outward (|angle| < 90 degrees)")
    ox, oy = params.zone_centre
    r = params.zone_radius
    beta = math.radians(heading_deg)
    radial = (math.cos(beta), math.sin(beta))
    cross_pt = (ox + r * radial[0], oy + r * radial[1])
    phi = math.radians(off_radial_deg)
    c, s = math.cos(phi), math.sin(phi)
    u = (c * radial[0] - s * radial[1], s * radial[0] + c * radial[1])

    chord = 2.0 * r * math.cos(phi)   # inside travel available along -u
    pre = min(device_speed * approach_s, 0.9 * chord)
    dt = params.step_dt
    frames = []
    start = (cross_pt[0] - pre * u[0], cross_pt[1] - pre * u[1])
    i = 0

    def emit(p):
        nonlocal i
        frames.append(ControlFrame(i * dt, p[0], p[1], True))
        i += 1

    emit(start)
    # approach and push until the requested depth, then hold
    pos = start
    while True:
        pos = (pos[0] + device_speed * dt * u[0], pos[1] + device_speed * dt * u[1])
        emit(pos)
        depth = math.hypot(pos[0] - ox, pos[1] - oy) - r
        if depth >= hold_penetration:
            break
        if i > 100000:  # pragma: no cover - guards a bad parameterization
            raise ConfigError("crossing script failed to reach the hold depth")
    for _ in range(round(post_s / dt)):
        emit(pos)
    return CrossingScript(tuple(frames), heading_deg, off_radial_deg,
                          device_speed, u)


def crossing_suite(params: EngineParams, n: int = 100, seed=0,
                   min_off: float = 15.0, max_off: float = 75.0) -> list[CrossingScript]:
    """Seeded suite of oblique crossings covering angles and speeds."""
    rng = np.random.default_rng(seed)
    suite = []
    for _ in range(n):
        off = rng.uniform(min_off, max_off) * (1.0 if rng.uniform() < 0.5 else -1.0)
        heading = rng.uniform(0.0, 360.0)
        speed = rng.uniform(80.0, 250.0)
        suite.append(scripted_crossing(params, off, heading, speed))
    return suite


# -- trial replay and metrics -------------------------------------------------

def run_trial(
    frames,
    params: EngineParams,
    trial: Trial | None = None,
    condition: dict | None = None,
) -> TrialLog:
    """Replay an input script through a fresh engine and derive metrics.

    With a trial attached, the selection time is the first moment the
    pointer falls within the target; a script that ends without getting
    there raises :class:`TrialTimeout` carrying the partial log.
    """
    engine = HybridEngine(params)
    start = trial.start if trial is not None else (0.0, 0.0)
    px, py = start
    trace = []
    modes = []
    for frame in frames:
        res = engine.feed(frame)
        px += res.dx_mm
        py += res.dy_mm
        trace.append((px, py))
        modes.append(res.mode)
    return _finalize_log(list(frames), trace, modes, trial, condition)


def log_from_csv(path) -> TrialLog:
    """Rebuild a TrialLog (metrics and all) from an exported trial CSV."""
    frames, trace, modes, params, meta = protocol.read_trial_csv(path)
    trial = None
    if all(k in meta for k in ("start", "target", "distance", "width")):
        trial = Trial(int(meta.get("trial_index", 0)),
                      tuple(meta["start"]), tuple(meta["target"]),
                      float(meta["distance"]), float(meta["width"]))
    condition = dict(meta.get("condition", {}))
    return _finalize_log(frames, trace, modes, trial, condition)


def _finalize_log(frames, trace, modes, trial, condition) -> TrialLog:
    selection = None
    if trial is not None:
        half_w = trial.width / 2.0
        for (pxy, frame) in zip(trace, frames):
            d = math.hypot(pxy[0] - trial.target[0], pxy[1] - trial.target[1])
            if d <= half_w:
                selection = frame.t_s - frames[0].t_s
                break

    engagements = 0
    elastic_invocations = 0
    clutch_time = 0.0
    elastic_time = 0.0
    max_speed_jump = 0.0
    max_dir_jump = 0.0
    transitions = []

    prev_contact = False
    prev_mode = Mode.ISOTONIC
    prev_speed = None
    prev_dir = None
    prev_t = None
    prev_xy = None
    for frame, pxy, mode in zip(frames, trace, modes):
        if frame.contact and not prev_contact:
            engagements += 1
        dt = None if prev_t is None else frame.t_s - prev_t
        if dt is not None and dt > 0.0:
            if not frame.contact:
                clutch_time += dt
            if mode is Mode.ELASTIC:
                elastic_time += dt
            ddx = pxy[0] - prev_xy[0]
            ddy = pxy[1] - prev_xy[1]
            speed = math.hypot(ddx, ddy) / dt
            moving = speed * dt > 1e-9
            cur_dir = math.atan2(ddy, ddx) if moving else None
            if frame.contact and prev_contact and prev_speed is not None:
                max_speed_jump = max(max_speed_jump, abs(speed - prev_speed))
            angle = None
            if cur_dir is not None and prev_dir is not None:
                angle = abs(math.degrees(
                    (cur_dir - prev_dir + math.pi) % (2.0 * math.pi) - math.pi))
                if frame.contact and prev_contact:
                    max_dir_jump = max(max_dir_jump, angle)
            if mode is Mode.ELASTIC and prev_mode is Mode.ISOTONIC and frame.contact:
                elastic_invocations += 1
                transitions.append({
                    "t_s": frame.t_s,
                    "speed_before": prev_speed,
                    "speed_after": speed,
                    "direction_jump_deg": angle,
                })
            if frame.contact:
                prev_speed = speed
                if cur_dir is not None:
                    prev_dir = cur_dir
            else:
                prev_speed = None
                prev_dir = None
        prev_contact = frame.contact
        prev_mode = mode
        prev_t = frame.t_s
        prev_xy = pxy

    log = TrialLog(
        condition=dict(condition or {}),
        frames=frames,
        trace=trace,
        modes=modes,
        selection_time=selection,
        engagements=engagements,
        elastic_invocations=elastic_invocations,
        clutch_time=clutch_time,
        elastic_time=elastic_time,
        max_speed_jump=max_speed_jump,
        max_direction_jump=max_dir_jump,
        transitions=transitions,
    )
    if trial is not None and selection is None:
        raise TrialTimeout(log)
    return log


def metrics_dict(log: TrialLog) -> dict:
    return {
        "condition": log.condition,
        "selection_time_s": log.selection_time,
        "engagements": log.engagements,
        "elastic_invocations": log.elastic_invocations,
        "clutch_time_s": log.clutch_time,
        "elastic_time_s": log.elastic_time,
        "max_speed_jump_mm_s": log.max_speed_jump,
        "max_direction_jump_deg": log.max_direction_jump,
        "transitions": log.transitions,
    }


# -- aggregation --------------------------------------------------------------

def summarize(logs) -> list[dict]:
    """Per-condition aggregate rows (mean and 95% CI of selection time,
    plus means of the count/time metrics)."""
    from scipy import stats

    groups: dict[tuple, list[TrialLog]] = {}
    for log in logs:
        cond = log.condition
        key = (str(cond.get("technique", "")), str(cond.get("transfer", "")),
               float(cond.get("distance", 0.0)), float(cond.get("width", 0.0)))
        groups.setdefault(key, []).append(log)

    rows = []
    for key in sorted(groups):
        technique, transfer, distance, width = key
        members = groups[key]
        times = [g.selection_time for g in members if g.selection_time is not None]
        timeouts = sum(1 for g in members if g.selection_time is None)
        if times:
            mean = float(np.mean(times))
            if len(times) > 1:
                sem = float(np.std(times, ddof=1)) / math.sqrt(len(times))
                ci = float(stats.t.ppf(0.975, len(times) - 1)) * sem
            else:
                ci = 0.0
        else:
            mean = float("nan")
            ci = float("nan")
        rows.append({
            "technique": technique,
            "transfer": transfer,
            "distance_mm": distance,
            "width_mm": width,
            "n": len(members),
            "timeouts": timeouts,
            "selection_mean_s": mean,
            "selection_ci95_s": ci,
            "engagements_mean": float(np.mean([g.engagements for g in members])),
            "elastic_invocations_mean": float(np.mean([g.elastic_invocations
                                                       for g in members])),
            "clutch_time_mean_s": float(np.mean([g.clutch_time for g in members])),
            "elastic_time_mean_s": float(np.mean([g.elastic_time for g in members])),
            "max_speed_jump_mean": float(np.mean([g.max_speed_jump for g in members])),
            "max_direction_jump_mean": float(np.mean([g.max_direction_jump
                                                      for g in members])),
        })
    return rows


# -- manifest runner ----------------------------------------------------------

_TRANSFER_SHORTHAND = {
    "constant": lambda: GainCurve.constant(2.0),
    "pointer-accel": GainCurve.pointer_acceleration,
}


def _manifest_transfers(entries):
    out = []
    for e in entries:
        if isinstance(e, str):
            if e not in _TRANSFER_SHORTHAND:
                raise ConfigError(f"unknown transfer shorthand {e!r}")
            out.append((e, _TRANSFER_SHORTHAND[e]()))
        elif isinstance(e, dict) and "curve" in e:
            out.append((str(e.get("name", "custom")), GainCurve.from_dict(e["curve"])))
        else:
            raise ConfigError(f"malformed transfer entry: {e!r}")
    return out


def run_manifest(manifest: dict, out_dir) -> tuple[list[TrialLog], list[dict]]:
    """Run a full simulated experiment and write all logs and aggregates.

    The manifest crosses techniques x transfers x distances x widths
    with a repetition count and a master seed; every output embeds the
    parameters that produced it.  Returns (logs, aggregate rows).
    """
    seed = int(manifest.get("seed", 0))
    techniques = manifest.get("techniques", ["position", "hybrid"])
    transfers = _manifest_transfers(manifest.get("transfers", ["constant"]))
    distances = manifest.get("distances", [172.0, 344.0, 688.0])
    widths = manifest.get("widths", [4.0])
    reps = int(manifest.get("repetitions", 3))
    display = tuple(manifest.get("display", (765.0, 306.0)))
    engine_overrides = dict(manifest.get("engine", {}))
    agent = AgentProfile(**manifest.get("agent", {}))

    out = Path(out_dir)
    trials_dir = out / "trials"
    trials_dir.mkdir(parents=True, exist_ok=True)

    logs: list[TrialLog] = []
    index = 0
    cond_index = 0
    for technique in techniques:
        if technique not in TECHNIQUES:
            raise ConfigError(f"unknown technique {technique!r}")
        for tname, curve in transfers:
            for distance in distances:
                for width in widths:
                    base = EngineParams.from_dict(dict(engine_overrides))
                    base = replace(base, curve=curve)
                    params = technique_params(technique, base)
                    task_seed = np.random.SeedSequence((seed, cond_index))
                    task = generate_reciprocal_task(
                        float(distance), float(width), reps, task_seed,
                        display=display)
                    cond_index += 1
                    for trial in task:
                        condition = {
                            "technique": technique,
                            "transfer": tname,
                            "distance": float(distance),
                            "width": float(width),
                            "seed": seed,
                            "trial_index": index,
                        }
                        frames = synthesize_movement(trial, technique, params, agent)
                        try:
                            log = run_trial(frames, params, trial, condition)
                        except TrialTimeout as e:
                            log = e.log
                            log.condition["timed_out"] = True
                        meta = {
                            "start": list(trial.start),
                            "target": list(trial.target),
                            "distance": trial.distance,
                            "width": trial.width,
                            "trial_index": trial.index,
                            "condition": log.condition,
                        }
                        pdict = params.to_dict()
                        stem = trials_dir / f"trial_{index:04d}"
                        protocol.write_trial_csv(
                            f"{stem}.csv",
                            zip(log.frames, (p[0] for p in log.trace),
                                (p[1] for p in log.trace), log.modes),
                            pdict, meta)
                        protocol.write_metrics_json(f"{stem}.metrics.json",
                                                    metrics_dict(log))
                        logs.append(log)
                        index += 1
    rows = summarize(logs)
    protocol.write_aggregate_csv(out / "aggregate.csv", rows,
                                 {"manifest": manifest})
    return logs, rows
