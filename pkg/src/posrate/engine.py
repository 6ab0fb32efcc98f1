"""Hybrid position/rate pointer engine with an elastic rim.

Inside a circular isotonic zone the device drives the pointer by
relative position control through a speed-to-gain transfer function.
When the device crosses the zone boundary it enters a surrounding
elastic band and the pointer switches to rate control driven by
penetration depth.  Two elastic mappings are provided:

``radial``
    The naive mapping: pointer velocity is a cubic function of the
    simulated spring force, directed radially out of the zone.  It
    jumps to near-zero speed at the transition and snaps direction to
    the radial axis, so it is kept only as an experimental baseline.

``smooth``
    Rate control anchored at the recorded boundary exit point.  The
    zone reacts like a rigid disc dragged by a string tied to that
    point: a torque rotates the exit point until it lines up with the
    pull direction, and the pre-exit pointer velocity is exponentially
    blended into the rate output.  Speed and direction are therefore
    continuous across the transition.

The engine integrates at a fixed internal step (1 kHz by default) and
resamples arbitrary input frames by zero-order hold, so identical
input scripts always produce identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING

from .transfer import ConfigError, GainCurve, SpeedEstimator, apply_transfer

if TYPE_CHECKING:  # pragma: no cover
    from .calibration import ForceProfile


class Mode(str, Enum):
    ISOTONIC = "isotonic"
    ELASTIC = "elastic"


@dataclass
class ZonePose:
    """Pose and rigid-body state of the isotonic zone.

    The zone is treated as a uniform disc of the given mass.  While the
    device pulls on the boundary exit point, the pull torque spins the
    disc against viscous friction; the pose may also translate along
    the pull direction when ``translation_gain`` is non-zero.
    """

    centre: tuple[float, float]           # [mm] device space
    radius: float                         # [mm]
    exit_point: tuple[float, float] | None = None  # [mm] on the circle while elastic
    omega: float = 0.0                    # [rad/s]
    mass: float = 1.0                     # [kg]
    friction: float = 3e-3                # [N*m*s/rad] viscous
    inertia: float | None = None          # [kg*m^2]; None -> disc 0.5*m*r^2
    translation_gain: float = 0.0         # [1/s] pose drift along the pull
    torque_scale: float = 60.0            # [N/m] converts pull geometry to torque

    def moment_of_inertia(self) -> float:
        if self.inertia is not None:
            return self.inertia
        r_m = self.radius * 1e-3
        return 0.5 * self.mass * r_m * r_m


@dataclass(frozen=True)
class ElasticParams:
    """Constants of the elastic band mappings."""

    spring_k: float = 60.0           # [N/m] band stiffness
    cubic_gain: float = 0.03         # [(m/s)/N^3] radial mapping force->speed
    rate_gain: float = 150.0         # [1/s] display mm/s per device mm penetration
    blend_constant: float = 0.3      # [s] or [1/s], see flag below
    blend_constant_is_rate: bool = False  # True: constant is a decay rate, not a time constant
    vector_blend: bool = False       # blend the exit velocity as a vector, not a magnitude
    max_penetration: float = 2.0     # [mm] reference depth of the physical band

    def decay_rate(self) -> float:
        if self.blend_constant <= 0.0:
            raise ConfigError("blend constant must be positive")
        if self.blend_constant_is_rate:
            return self.blend_constant
        return 1.0 / self.blend_constant


@dataclass
class EngineParams:
    """Full engine configuration."""

    zone_centre: tuple[float, float] = (0.0, 0.0)   # [mm]
    zone_radius: float = 20.0                       # [mm] 40 mm circle
    curve: GainCurve = field(default_factory=lambda: GainCurve.constant(2.0))
    mapping: str = "smooth"                         # "smooth" | "radial"
    elastic: ElasticParams = field(default_factory=ElasticParams)
    mass: float = 1.0                               # [kg] zone disc mass
    friction: float = 3e-3                          # [N*m*s/rad]
    inertia: float | None = None                    # [kg*m^2]; None -> disc
    translation_gain: float = 0.0                   # [1/s]
    torque_scale: float | None = None               # [N/m]; None -> elastic.spring_k
    step_dt: float = 1e-3                           # [s] internal integration step
    speed_smoothing_tau: float | None = None        # [s] optional gain-speed filter
    profile: "ForceProfile | None" = None           # calibrated band, replaces raw |NP|

    def __post_init__(self):
        if self.mapping not in ("smooth", "radial"):
            raise ConfigError(f"unknown elastic mapping: {self.mapping!r}")
        if self.zone_radius <= 0.0:
            raise ConfigError("zone radius must be positive")
        if self.step_dt <= 0.0:
            raise ConfigError("step dt must be positive")
        if self.profile is not None:
            # the calibrated circle becomes the zone geometry
            self.zone_centre = tuple(self.profile.centre)
            self.zone_radius = float(self.profile.radius)

    def to_dict(self) -> dict:
        return {
            "zone_centre": list(self.zone_centre),
            "zone_radius": self.zone_radius,
            "curve": self.curve.to_dict(),
            "mapping": self.mapping,
            "elastic": {
                "spring_k": self.elastic.spring_k,
                "cubic_gain": self.elastic.cubic_gain,
                "rate_gain": self.elastic.rate_gain,
                "blend_constant": self.elastic.blend_constant,
                "blend_constant_is_rate": self.elastic.blend_constant_is_rate,
                "vector_blend": self.elastic.vector_blend,
                "max_penetration": self.elastic.max_penetration,
            },
            "mass": self.mass,
            "friction": self.friction,
            "inertia": self.inertia,
            "translation_gain": self.translation_gain,
            "torque_scale": self.torque_scale,
            "step_dt": self.step_dt,
            "speed_smoothing_tau": self.speed_smoothing_tau,
            "profile": self.profile.to_dict() if self.profile is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineParams":
        from .calibration import ForceProfile

        kwargs = dict(d)
        if "curve" in kwargs and isinstance(kwargs["curve"], dict):
            kwargs["curve"] = GainCurve.from_dict(kwargs["curve"])
        if "elastic" in kwargs and isinstance(kwargs["elastic"], dict):
            kwargs["elastic"] = ElasticParams(**kwargs["elastic"])
        if kwargs.get("profile") is not None and isinstance(kwargs["profile"], dict):
            kwargs["profile"] = ForceProfile.from_dict(kwargs["profile"])
        if "zone_centre" in kwargs:
            kwargs["zone_centre"] = tuple(kwargs["zone_centre"])
        unknown = set(kwargs) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown engine parameters: {sorted(unknown)}")
        return cls(**kwargs)


@dataclass(frozen=True)
class ControlFrame:
    """One timestamped device input sample."""

    t_s: float
    x_mm: float
    y_mm: float
    contact: bool = True


@dataclass(frozen=True)
class StepResult:
    """Pointer output for one processed input frame."""

    dx_mm: float
    dy_mm: float
    mode: Mode
    penetration_mm: float
    n_x: float | None
    n_y: float | None


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def classify(
    p_mm: tuple[float, float],
    zone: ZonePose,
    last_p_mm: tuple[float, float] | None = None,
) -> tuple[Mode, tuple[float, float] | None]:
    """Classify a device position against the zone circle.

    A position exactly on the circle counts as inside.  When the last
    position is supplied and the segment from it to ``p_mm`` leaves the
    circle, the first boundary intersection is returned as the exit
    point.
    """
    ox, oy = zone.centre
    dist = math.hypot(p_mm[0] - ox, p_mm[1] - oy)
    if dist <= zone.radius:
        return Mode.ISOTONIC, None
    crossing = None
    if last_p_mm is not None:
        last_dist = math.hypot(last_p_mm[0] - ox, last_p_mm[1] - oy)
        if last_dist <= zone.radius:
            crossing = segment_exit_point(last_p_mm, p_mm, zone.centre, zone.radius)
    return Mode.ELASTIC, crossing


def segment_exit_point(
    a: tuple[float, float],
    b: tuple[float, float],
    centre: tuple[float, float],
    radius: float,
) -> tuple[float, float]:
    """First intersection of segment a->b with the circle, a inside, b outside."""
    fx, fy = a[0] - centre[0], a[1] - centre[1]
    dx, dy = b[0] - a[0], b[1] - a[1]
    aa = dx * dx + dy * dy
    if aa == 0.0:
        raise ValueError("degenerate segment: endpoints coincide")
    bb = 2.0 * (fx * dx + fy * dy)
    cc = fx * fx + fy * fy - radius * radius
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0.0:
        disc = 0.0  # grazing segment; numerical guard
    s = (-bb + math.sqrt(disc)) / (2.0 * aa)
    s = min(max(s, 0.0), 1.0)
    return (a[0] + s * dx, a[1] + s * dy)


def integrate_boundary(zone: ZonePose, p_mm: tuple[float, float], dt: float) -> ZonePose:
    """Advance the zone pose one step while the device pulls at ``p_mm``.

    The pull from the exit point N to the device P applies a torque
    about the zone centre (the elastic spring supplies the force
    scale), spinning the disc against viscous friction:

        J * domega/dt = torque_scale * (ON x NP) - friction * omega

    omega is advanced with the exact exponential solution of that
    linear ODE (torque held constant over the step), which keeps the
    friction decay accurate at any step size.  The exit point is then
    rotated about the centre and the whole pose may drift along the
    pull direction.  |N - O| is renormalised to the radius each step.
    """
    if zone.exit_point is None:
        raise ValueError("zone has no exit point; not in an elastic excursion")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    ox, oy = zone.centre
    nx, ny = zone.exit_point
    on_x, on_y = nx - ox, ny - oy
    np_x, np_y = p_mm[0] - nx, p_mm[1] - ny

    # torque from pull geometry; lengths mm -> m gives N*m with a N/m scale
    tau = zone.torque_scale * _cross(on_x, on_y, np_x, np_y) * 1e-6
    j = zone.moment_of_inertia()
    if j <= 0.0:
        raise ValueError("moment of inertia must be positive")
    mu = zone.friction
    if mu > 0.0:
        decay = math.exp(-mu * dt / j)
        omega = zone.omega * decay + (tau / mu) * (1.0 - decay)
    else:
        omega = zone.omega + tau * dt / j

    # rotate N about O by the step's angular travel, renormalised onto the circle
    theta = omega * dt
    c, s = math.cos(theta), math.sin(theta)
    rx = c * on_x - s * on_y
    ry = s * on_x + c * on_y
    norm = math.hypot(rx, ry)
    scale = zone.radius / norm
    rx *= scale
    ry *= scale

    # rigid drift of the whole pose along the pull
    lam = zone.translation_gain
    ox += lam * np_x * dt
    oy += lam * np_y * dt

    return replace(zone, centre=(ox, oy), exit_point=(ox + rx, oy + ry), omega=omega)


class HybridEngine:
    """Stateful isotonic/elastic pointer engine.

    Drive it either with :meth:`step` (one fixed internal step per
    call, positions only) or :meth:`feed` (timestamped frames, which
    are resampled onto the internal clock by zero-order hold).  Outputs
    are pointer displacement deltas in display mm.
    """

    def __init__(self, params: EngineParams | None = None):
        self.params = params if params is not None else EngineParams()
        tscale = self.params.torque_scale
        self._torque_scale = self.params.elastic.spring_k if tscale is None else tscale
        self.reset()

    def reset(self):
        p = self.params
        self.zone = ZonePose(
            centre=tuple(p.zone_centre),
            radius=p.zone_radius,
            mass=p.mass,
            friction=p.friction,
            inertia=p.inertia,
            translation_gain=p.translation_gain,
            torque_scale=self._torque_scale,
        )
        self.mode = Mode.ISOTONIC
        self._device: tuple[float, float] | None = None
        self._contact = False
        self._display_velocity = (0.0, 0.0)   # [mm/s] display space, last step
        self._exit_velocity = (0.0, 0.0)      # [mm/s] captured at boundary exit
        self._time_since_exit = 0.0
        self._pointer = (0.0, 0.0)
        self._speed = SpeedEstimator(p.speed_smoothing_tau)
        self._t0: float | None = None
        self._step_index = 0
        self._prev_sample: tuple[float, float, bool] | None = None

    @property
    def pointer(self) -> tuple[float, float]:
        """Accumulated pointer position (display mm, starts at origin)."""
        return self._pointer

    @property
    def penetration(self) -> float:
        """Current geometric penetration depth into the band (mm, >= 0)."""
        if self._device is None:
            return 0.0
        ox, oy = self.zone.centre
        return max(0.0, math.hypot(self._device[0] - ox, self._device[1] - oy) - self.zone.radius)

    # -- fixed-step interface -------------------------------------------------

    def step(self, x_mm: float, y_mm: float, contact: bool = True) -> StepResult:
        """Advance exactly one internal step with the given device sample."""
        dt = self.params.step_dt
        self._step_index += 1
        if not contact:
            if self._contact:
                self._release()
            return self._result(0.0, 0.0)
        if self._device is None:
            self._make_contact((x_mm, y_mm))
            old = self._device
        else:
            old = self._device
        new = (x_mm, y_mm)
        self._device = new
        if self.mode is Mode.ISOTONIC:
            return self._step_from_isotonic(old, new, dt)
        return self._step_elastic(new, dt, old)

    # -- frame interface ------------------------------------------------------

    def feed(self, frame: ControlFrame) -> StepResult:
        """Process one timestamped frame, catching the internal clock up to it.

        The previous sample is held (zero-order) for any internal steps
        between the two frame times; the new sample applies on the step
        ending at the frame's own time.  Deltas from all covered steps
        are summed into the returned result.
        """
        sample = (frame.x_mm, frame.y_mm, frame.contact)
        if self._t0 is None:
            self._t0 = frame.t_s
            self._prev_sample = sample
            if frame.contact:
                self._make_contact((frame.x_mm, frame.y_mm))
                self._contact = True
            return self._result(0.0, 0.0)
        target = round((frame.t_s - self._t0) / self.params.step_dt)
        if target < self._step_index:
            raise ValueError("frame timestamps must not go backwards")
        n = target - self._step_index
        if n == 0:
            # same internal step: the sample is held for the next step
            self._prev_sample = sample
            return self._result(0.0, 0.0)
        dx = dy = 0.0
        held = self._prev_sample
        last = None
        for i in range(n):
            use = held if i < n - 1 else sample
            last = self.step(use[0], use[1], use[2])
            dx += last.dx_mm
            dy += last.dy_mm
        self._prev_sample = sample
        return StepResult(dx, dy, last.mode, last.penetration_mm, last.n_x, last.n_y)

    # -- internals ------------------------------------------------------------

    def _release(self):
        """Contact lift: relative mapping rebases on the next touch."""
        self._device = None
        self._contact = False
        self._display_velocity = (0.0, 0.0)
        self._speed.reset()
        if self.mode is Mode.ELASTIC:
            self._end_excursion()

    def _end_excursion(self):
        self.mode = Mode.ISOTONIC
        self.zone.exit_point = None
        self.zone.omega = 0.0
        self._exit_velocity = (0.0, 0.0)
        self._time_since_exit = 0.0

    def _make_contact(self, p: tuple[float, float]):
        self._device = p
        self._contact = True
        region, _ = classify(p, self.zone)
        if region is Mode.ELASTIC:
            # touched down already past the rim: anchor at the nearest
            # boundary point with no carried velocity
            ox, oy = self.zone.centre
            d = math.hypot(p[0] - ox, p[1] - oy)
            ux, uy = (p[0] - ox) / d, (p[1] - oy) / d
            self._begin_excursion((ox + self.zone.radius * ux, oy + self.zone.radius * uy),
                                  (0.0, 0.0))

    def _begin_excursion(self, exit_point: tuple[float, float], v0: tuple[float, float]):
        self.mode = Mode.ELASTIC
        self.zone.exit_point = exit_point
        self.zone.omega = 0.0
        self._exit_velocity = v0
        self._time_since_exit = 0.0

    def _step_from_isotonic(self, old, new, dt) -> StepResult:
        region, _ = classify(new, self.zone)
        if region is Mode.ISOTONIC:
            delta = (new[0] - old[0], new[1] - old[1])
            speed = self._speed.update(delta, dt)
            ddx, ddy = apply_transfer(delta, dt, self.params.curve, speed)
            self._display_velocity = (ddx / dt, ddy / dt)
            self._move_pointer(ddx, ddy)
            return self._result(ddx, ddy)
        # crossing out: anchor the excursion at the boundary intersection and
        # carry the pre-exit display velocity into the blend
        exit_point = segment_exit_point(old, new, self.zone.centre, self.zone.radius)
        self._begin_excursion(exit_point, self._display_velocity)
        return self._step_elastic(new, dt)

    def _step_elastic(self, new, dt, old=None) -> StepResult:
        ox, oy = self.zone.centre
        dist = math.hypot(new[0] - ox, new[1] - oy)
        if dist <= self.zone.radius:
            # back inside: resume position control over the full step delta
            # from the last (outside) device sample
            anchor = old if old is not None else new
            self._end_excursion()
            return self._step_from_isotonic(anchor, new, dt)
        if self.params.mapping == "radial":
            return self._step_elastic_radial(new, dist, dt)
        return self._step_elastic_smooth(new, dt)

    def _step_elastic_radial(self, new, dist, dt) -> StepResult:
        """Naive elastic law: cubic spring-force rate, radially directed."""
        el = self.params.elastic
        ox, oy = self.zone.centre
        ux, uy = (new[0] - ox) / dist, (new[1] - oy) / dist
        pen_mm = dist - self.zone.radius
        drive_mm = self._drive_depth(new, pen_mm)
        force_n = el.spring_k * drive_mm * 1e-3
        speed = 1e3 * el.cubic_gain * force_n ** 3   # display mm/s
        ddx, ddy = speed * ux * dt, speed * uy * dt
        # the radial anchor doubles as the reported boundary point
        self.zone.exit_point = (ox + self.zone.radius * ux, oy + self.zone.radius * uy)
        self._time_since_exit += dt
        self._display_velocity = (ddx / dt, ddy / dt)
        self._move_pointer(ddx, ddy)
        return self._result(ddx, ddy)

    def _step_elastic_smooth(self, new, dt) -> StepResult:
        """Momentum-anchored elastic law with exit-velocity blending."""
        el = self.params.elastic
        self.zone = integrate_boundary(self.zone, new, dt)
        nx, ny = self.zone.exit_point
        np_x, np_y = new[0] - nx, new[1] - ny
        pull = math.hypot(np_x, np_y)
        t = self._time_since_exit
        self._time_since_exit += dt
        if pull < 1e-12:
            # zero-length pull has no drive direction; the carried
            # pre-exit velocity still decays through the blend
            decay = math.exp(-el.decay_rate() * t)
            vx, vy = self._exit_velocity[0] * decay, self._exit_velocity[1] * decay
            self._display_velocity = (vx, vy)
            self._move_pointer(vx * dt, vy * dt)
            return self._result(vx * dt, vy * dt)
        ux, uy = np_x / pull, np_y / pull
        drive_mm = self._drive_depth(new, pull)
        target = el.rate_gain * drive_mm                 # display mm/s
        decay = math.exp(-el.decay_rate() * t)           # 1 at the transition instant
        v0x, v0y = self._exit_velocity
        if el.vector_blend:
            vx = v0x * decay + target * ux * (1.0 - decay)
            vy = v0y * decay + target * uy * (1.0 - decay)
        else:
            speed = math.hypot(v0x, v0y) * decay + target * (1.0 - decay)
            vx, vy = speed * ux, speed * uy
        ddx, ddy = vx * dt, vy * dt
        self._display_velocity = (vx, vy)
        self._move_pointer(ddx, ddy)
        return self._result(ddx, ddy)

    def _drive_depth(self, p, raw_mm: float) -> float:
        """Penetration depth feeding the rate laws, possibly calibrated.

        With a calibrated force profile attached, the raw geometric
        depth is replaced by the normalised depth times the reference
        penetration, so an uneven physical band drives rates evenly.
        """
        prof = self.params.profile
        if prof is None:
            return raw_mm
        return prof.normalized(p) * self.params.elastic.max_penetration

    def _move_pointer(self, ddx, ddy):
        self._pointer = (self._pointer[0] + ddx, self._pointer[1] + ddy)

    def _result(self, ddx, ddy) -> StepResult:
        if self.mode is Mode.ELASTIC and self.zone.exit_point is not None:
            n_x, n_y = self.zone.exit_point
            pen = self.penetration
        else:
            n_x = n_y = None
            pen = 0.0
        return StepResult(ddx, ddy, self.mode, pen, n_x, n_y)
