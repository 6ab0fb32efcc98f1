"""Calibration of a physical elastic rim: boundary circle fit and a
per-direction force profile.

A traced boundary (device samples collected while riding the rim) is
fitted with an algebraic circle fit refined by one Gauss-Newton pass
on the geometric residuals.  Eight radial pushes, one per 45 degree
sector, measure how deep the band yields in each direction; penetration
is then normalised against that direction-dependent maximum so an
uneven band drives rate control evenly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class CalibrationError(ValueError):
    """Bad or insufficient calibration input."""


SECTOR_ANGLES = tuple(45.0 * i for i in range(8))


@dataclass(frozen=True)
class CircleFit:
    centre: tuple[float, float]       # [mm]
    radius: float                     # [mm]
    rms_residual: float               # [mm]


@dataclass(frozen=True)
class ForceProfile:
    """Fitted boundary plus directional maximum penetration."""

    centre: tuple[float, float]       # [mm]
    radius: float                     # [mm]
    angles_deg: tuple[float, ...]     # sector angles, ascending
    max_penetration: tuple[float, ...]  # [mm] per sector

    def max_penetration_at(self, angle_deg: float) -> float:
        """Directional band depth, periodic piecewise-linear in angle."""
        a = angle_deg % 360.0
        angles = self.angles_deg
        pens = self.max_penetration
        n = len(angles)
        for i in range(n):
            a0 = angles[i]
            a1 = angles[(i + 1) % n]
            span = (a1 - a0) % 360.0
            if span == 0.0:
                span = 360.0
            off = (a - a0) % 360.0
            if off <= span:
                f = off / span
                return pens[i] + f * (pens[(i + 1) % n] - pens[i])
        return pens[0]  # unreachable, sectors tile the circle

    def normalized(self, p_mm) -> float:
        """Penetration at a device point, normalised to [0, 1].

        Raises if the point is inside the fitted boundary; depths past
        the calibrated maximum clamp to 1.
        """
        dx = p_mm[0] - self.centre[0]
        dy = p_mm[1] - self.centre[1]
        dist = math.hypot(dx, dy)
        depth = dist - self.radius
        if depth <= 0.0:
            raise CalibrationError("position is inside the calibrated boundary")
        angle = math.degrees(math.atan2(dy, dx))
        limit = self.max_penetration_at(angle)
        return min(1.0, depth / limit)

    def to_dict(self) -> dict:
        return {
            "centre": [self.centre[0], self.centre[1]],
            "radius": self.radius,
            "samples": [
                {"angle_deg": a, "max_penetration_mm": m}
                for a, m in zip(self.angles_deg, self.max_penetration)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForceProfile":
        try:
            centre = (float(d["centre"][0]), float(d["centre"][1]))
            radius = float(d["radius"])
            samples = d["samples"]
            angles = tuple(float(s["angle_deg"]) for s in samples)
            pens = tuple(float(s["max_penetration_mm"]) for s in samples)
        except (KeyError, IndexError, TypeError) as e:
            raise CalibrationError(f"malformed calibration record: {e}") from e
        if len(angles) == 0:
            raise CalibrationError("calibration record has no samples")
        return cls(centre, radius, angles, pens)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "ForceProfile":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit_boundary(points) -> CircleFit:
    """Fit a circle to traced boundary samples.

    Algebraic (Kasa) least squares solved directly, then one
    Gauss-Newton step on the geometric residuals |p - c| - r.  Requires
    at least 8 points spanning at least 270 degrees around the fitted
    centre; collinear or otherwise degenerate traces are rejected.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise CalibrationError("trace must be an array of (x, y) points")
    if pts.shape[0] < 8:
        raise CalibrationError("need at least 8 boundary samples")
    x, y = pts[:, 0], pts[:, 1]

    a = np.column_stack([x, y, np.ones_like(x)])
    b = -(x * x + y * y)
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < 3:
        raise CalibrationError("degenerate trace: samples do not define a circle")
    cx, cy = -sol[0] / 2.0, -sol[1] / 2.0
    r2 = cx * cx + cy * cy - sol[2]
    if r2 <= 0.0:
        raise CalibrationError("degenerate trace: samples do not define a circle")
    r = math.sqrt(r2)

    # one Gauss-Newton pass on the geometric distance residuals
    dx, dy = x - cx, y - cy
    dist = np.hypot(dx, dy)
    if np.any(dist == 0.0):
        raise CalibrationError("trace sample coincides with the fitted centre")
    jac = np.column_stack([-dx / dist, -dy / dist, -np.ones_like(dist)])
    res = dist - r
    try:
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
    except np.linalg.LinAlgError as e:  # pragma: no cover
        raise CalibrationError("circle refinement failed") from e
    cx += step[0]
    cy += step[1]
    r += step[2]
    if r <= 0.0:
        raise CalibrationError("degenerate trace: non-positive fitted radius")

    dist = np.hypot(x - cx, y - cy)
    rms = float(np.sqrt(np.mean((dist - r) ** 2)))

    angles = np.sort(np.degrees(np.arctan2(y - cy, x - cx)) % 360.0)
    gaps = np.diff(angles, append=angles[0] + 360.0)
    coverage = 360.0 - float(gaps.max())
    if coverage < 270.0:
        raise CalibrationError(
            f"trace covers only {coverage:.0f} degrees of the boundary; need 270")

    return CircleFit((float(cx), float(cy)), float(r), rms)


def build_force_profile(boundary: CircleFit, pushes) -> ForceProfile:
    """Build a direction-dependent depth profile from radial pushes.

    ``pushes`` holds the deepest device point reached in each of the
    eight 45 degree sectors.  Every sector must be covered exactly once
    and every push must lie outside the fitted boundary.
    """
    pts = np.asarray(pushes, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] != 8:
        raise CalibrationError("need exactly 8 push samples")
    cx, cy = boundary.centre
    slots: dict[int, float] = {}
    for px, py in pts:
        dx, dy = px - cx, py - cy
        depth = math.hypot(dx, dy) - boundary.radius
        if depth <= 0.0:
            raise CalibrationError("push sample is inside the fitted boundary")
        angle = math.degrees(math.atan2(dy, dx)) % 360.0
        slot = int(round(angle / 45.0)) % 8
        if slot in slots:
            raise CalibrationError(
                f"two push samples fall in the {SECTOR_ANGLES[slot]:.0f} degree sector")
        slots[slot] = depth
    if len(slots) != 8:
        missing = [SECTOR_ANGLES[i] for i in range(8) if i not in slots]
        raise CalibrationError(f"sectors without a push sample: {missing}")
    pens = tuple(slots[i] for i in range(8))
    return ForceProfile(boundary.centre, boundary.radius, SECTOR_ANGLES, pens)


def normalized_penetration(p_mm, profile: ForceProfile) -> float:
    """Module-level convenience for :meth:`ForceProfile.normalized`."""
    return profile.normalized(p_mm)
