"""Speed-to-gain transfer functions for relative pointer control.

A transfer function maps device speed to a control-display (CD) gain
that scales device displacement into display displacement.  Constant
gain and piecewise-linear speed tables (pointer acceleration) are
supported.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Invalid gain curve, profile or manifest configuration."""


# Pointer-acceleration style table: (device speed mm/s, CD gain).
# Gains sweep 1.6 at rest up to 7.3 at 400 mm/s, clamped beyond.
DEFAULT_POINTER_ACCEL = (
    (0.0, 1.6),
    (60.0, 2.2),
    (150.0, 3.6),
    (280.0, 5.8),
    (400.0, 7.3),
)


@dataclass(frozen=True)
class GainCurve:
    """CD gain as a function of device speed.

    ``knots`` is a tuple of (speed_mm_s, gain) pairs with strictly
    increasing speeds.  A single knot means constant gain.  Between
    knots the gain is linearly interpolated; outside the covered speed
    range it clamps to the end gains.
    """

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.knots) == 0:
            raise ConfigError("gain curve needs at least one knot")
        speeds = [s for s, _ in self.knots]
        if any(s < 0.0 for s in speeds):
            raise ConfigError("knot speeds must be non-negative")
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise ConfigError("knot speeds must be strictly increasing")
        if any(g <= 0.0 for _, g in self.knots):
            raise ConfigError("gains must be positive")

    @classmethod
    def constant(cls, gain: float) -> "GainCurve":
        return cls(((0.0, float(gain)),))

    @classmethod
    def pointer_acceleration(cls) -> "GainCurve":
        return cls(DEFAULT_POINTER_ACCEL)

    @property
    def is_constant(self) -> bool:
        return len(self.knots) == 1

    def to_dict(self) -> dict:
        if self.is_constant:
            return {"kind": "constant", "gain": self.knots[0][1]}
        return {"kind": "table", "knots": [list(k) for k in self.knots]}

    @classmethod
    def from_dict(cls, d: dict) -> "GainCurve":
        kind = d.get("kind")
        if kind == "constant":
            if "gain" not in d:
                raise ConfigError("constant curve needs a 'gain' entry")
            return cls.constant(float(d["gain"]))
        if kind == "table":
            knots = d.get("knots")
            if not knots:
                raise ConfigError("table curve needs non-empty 'knots'")
            return cls(tuple((float(s), float(g)) for s, g in knots))
        raise ConfigError(f"unknown gain curve kind: {kind!r}")


def gain_for_speed(speed_mm_s: float, curve: GainCurve) -> float:
    """Interpolated CD gain at the given device speed (mm/s, >= 0)."""
    if speed_mm_s < 0.0:
        raise ValueError("speed must be non-negative")
    knots = curve.knots
    if speed_mm_s <= knots[0][0]:
        return knots[0][1]
    if speed_mm_s >= knots[-1][0]:
        return knots[-1][1]
    for (s0, g0), (s1, g1) in zip(knots, knots[1:]):
        if speed_mm_s <= s1:
            f = (speed_mm_s - s0) / (s1 - s0)
            return g0 + f * (g1 - g0)
    return knots[-1][1]  # unreachable, interval search covers the range


def apply_transfer(
    delta_mm: tuple[float, float],
    dt_s: float,
    curve: GainCurve,
    speed_mm_s: float | None = None,
) -> tuple[float, float]:
    """Scale a device displacement into a display displacement.

    The gain is looked up at the instantaneous speed |delta|/dt unless
    a smoothed speed estimate is supplied.  Direction is preserved
    exactly; only the magnitude is scaled.
    """
    if dt_s <= 0.0:
        raise ValueError("dt must be positive")
    dx, dy = delta_mm
    if speed_mm_s is None:
        speed_mm_s = math.hypot(dx, dy) / dt_s
    g = gain_for_speed(speed_mm_s, curve)
    return (g * dx, g * dy)


class SpeedEstimator:
    """Device speed estimate, optionally smoothed.

    With ``tau=None`` the estimate is the raw per-frame speed.  With a
    time constant, a first-order exponential filter is applied, which
    keeps pointer-acceleration gains from chattering on noisy input.
    """

    def __init__(self, tau_s: float | None = None):
        if tau_s is not None and tau_s <= 0.0:
            raise ConfigError("smoothing time constant must be positive")
        self.tau_s = tau_s
        self._value = 0.0

    def reset(self):
        self._value = 0.0

    def update(self, delta_mm: tuple[float, float], dt_s: float) -> float:
        if dt_s <= 0.0:
            raise ValueError("dt must be positive")
        raw = math.hypot(delta_mm[0], delta_mm[1]) / dt_s
        if self.tau_s is None:
            self._value = raw
        else:
            alpha = 1.0 - math.exp(-dt_s / self.tau_s)
            self._value += alpha * (raw - self._value)
        return self._value


def load_gain_curve(source) -> GainCurve:
    """Load a gain curve from a dict, JSON string or JSON file path."""
    if isinstance(source, GainCurve):
        return source
    if isinstance(source, dict):
        return GainCurve.from_dict(source)
    if isinstance(source, (str, Path)):
        p = Path(source)
        if p.exists():
            return GainCurve.from_dict(json.loads(p.read_text()))
        if isinstance(source, str):
            try:
                return GainCurve.from_dict(json.loads(source))
            except json.JSONDecodeError as e:
                raise ConfigError(f"gain curve file not found and not JSON: {source}") from e
    raise ConfigError(f"cannot load gain curve from {type(source).__name__}")
