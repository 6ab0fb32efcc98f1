"""Transfer functions: how device motion becomes pointer motion.

Shows the two stock gain curves (constant CD gain and a pointer
acceleration profile), how gain is interpolated from device speed,
and how the smoothed speed estimate settles on a steady input.
"""

import numpy as np

from posrate import GainCurve, SpeedEstimator, apply_transfer, gain_for_speed

flat = GainCurve.constant(2.0)
accel = GainCurve.pointer_acceleration()

print("gain versus device speed")
print(f"{'speed mm/s':>12} {'constant':>10} {'accel':>10}")
for speed in (0.0, 30.0, 60.0, 150.0, 280.0, 400.0, 600.0):
    print(f"{speed:12.0f} {gain_for_speed(speed, flat):10.2f}"
          f" {gain_for_speed(speed, accel):10.2f}")

# a 1 mm device step at 1 kHz is a 1000 mm/s flick; the same step over
# 20 ms is a gentle 50 mm/s drag and lands in the low-gain region
print()
for dt in (1e-3, 20e-3):
    dx, dy = apply_transfer((1.0, 0.0), dt, accel)
    print(f"1 mm step over {dt * 1e3:4.0f} ms -> pointer moves {dx:.3f} mm")

# the speed estimator is a first-order low-pass; it reaches ~63% of a
# step input after one time constant
est = SpeedEstimator(tau_s=0.02)
speed = 0.0
for i in range(20):
    speed = est.update((0.1, 0.0), 1e-3)   # 100 mm/s sustained
print(f"\nsmoothed speed after one time constant: {speed:.1f} mm/s"
      " (63% of 100 expected)")
