"""Crossing the rim: smooth blending versus the naive radial law.

A scripted finger approaches the working-zone boundary at an oblique
angle, crosses it, and holds a steady push. The same input frames are
replayed under both elastic mappings and the pointer speed and heading
around the crossing are printed side by side.

The naive mapping drops the pointer speed to (almost) zero at the rim
and snaps the heading to the local radial; the blended mapping carries
the pre-exit velocity through and turns gradually.
"""

import math
from dataclasses import replace

from posrate import EngineParams, Mode, run_trial, scripted_crossing

params = EngineParams()
script = scripted_crossing(params, heading_deg=10.0, off_radial_deg=40.0,
                           device_speed=180.0)

smooth = run_trial(script.frames, params)
radial = run_trial(script.frames, replace(params, mapping="radial"))


def states(log):
    # per-frame pointer speed (mm/s) and heading (deg) from the trace
    out = []
    for i in range(1, len(log.trace)):
        dx = log.trace[i][0] - log.trace[i - 1][0]
        dy = log.trace[i][1] - log.trace[i - 1][1]
        speed = math.hypot(dx, dy) / params.step_dt
        heading = math.degrees(math.atan2(dy, dx)) if speed > 1e-6 else float("nan")
        out.append((speed, heading))
    return out


cross = smooth.modes.index(Mode.ELASTIC)
print(f"rim crossed at frame {cross} "
      f"(approach {script.off_radial_deg:.0f} deg off the radial)\n")

print(f"{'frame':>6} {'blended mm/s':>13} {'deg':>8} {'naive mm/s':>12} {'deg':>8}")
for i in range(cross - 3, cross + 5):
    s_sp, s_hd = states(smooth)[i - 1]
    r_sp, r_hd = states(radial)[i - 1]
    mark = " <- first elastic frame" if i == cross else ""
    print(f"{i:6d} {s_sp:13.2f} {s_hd:8.2f} {r_sp:12.2f} {r_hd:8.2f}{mark}")

print()
st = smooth.transitions[0]
rt = radial.transitions[0]
print(f"blended: speed {st['speed_before']:.2f} -> {st['speed_after']:.2f} mm/s, "
      f"heading change {st['direction_jump_deg']:.2f} deg")
print(f"naive:   speed {rt['speed_before']:.2f} -> {rt['speed_after']:.2f} mm/s, "
      f"heading change {rt['direction_jump_deg'] or float('nan'):.2f} deg")
print(f"\nlargest per-frame heading change, blended mapping: "
      f"{smooth.max_direction_jump:.3f} deg")
