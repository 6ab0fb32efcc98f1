"""Calibrating the working zone from raw touch samples.

A simulated user traces the rim of their comfortable reach (with a bit
of jitter) and then pushes outward once in each of the eight compass
sectors. The trace is fit to a circle and the push depths become a
per-direction force profile that normalizes penetration during rate
control.
"""

import math

import numpy as np

from posrate import build_force_profile, fit_boundary

rng = np.random.default_rng(5)

# noisy rim trace: ~80% of the circle, 0.05 mm jitter
centre, radius = (14.0, -6.0), 19.0
theta = rng.uniform(0.0, 1.6 * math.pi, size=120)
trace = np.stack([
    centre[0] + radius * np.cos(theta) + rng.normal(0.0, 0.05, 120),
    centre[1] + radius * np.sin(theta) + rng.normal(0.0, 0.05, 120),
], axis=1)

fit = fit_boundary(trace)
print(f"fitted centre ({fit.centre[0]:.2f}, {fit.centre[1]:.2f}) mm, "
      f"radius {fit.radius:.2f} mm, rms residual {fit.rms_residual:.3f} mm")

# eight directional pushes; reach is shallower toward the top-left
pushes = []
for k in range(8):
    ang = math.radians(45.0 * k)
    depth = 2.0 - 0.6 * math.cos(ang - math.radians(135.0))
    pushes.append((fit.centre[0] + (fit.radius + depth) * math.cos(ang),
                   fit.centre[1] + (fit.radius + depth) * math.sin(ang)))

profile = build_force_profile(fit, pushes)
print("\nper-sector reach beyond the rim:")
for ang, depth in zip(profile.angles_deg, profile.max_penetration):
    print(f"  {ang:5.0f} deg: {depth:.2f} mm")

# the profile interpolates between sectors and normalizes penetration
for ang in (0.0, 22.5, 135.0):
    cap = profile.max_penetration_at(ang)
    x = profile.centre[0] + (profile.radius + cap / 2.0) * math.cos(math.radians(ang))
    y = profile.centre[1] + (profile.radius + cap / 2.0) * math.sin(math.radians(ang))
    print(f"\nat {ang:.1f} deg the cap is {cap:.2f} mm; a push to half of it "
          f"normalizes to {profile.normalized((x, y)):.2f}")
