"""The working-zone rim as a rigid body: spin-up, alignment, free decay.

A steady off-axis pull torques the rim about the zone centre, so the
exit anchor swings around until it lines up with the pull; with the
pull removed the rotation decays under friction with time constant
J / mu. Both behaviours are shown step by step.
"""

import math

from posrate import ZonePose, integrate_boundary

DT = 1e-3

zone = ZonePose(centre=(0.0, 0.0), radius=20.0, exit_point=(20.0, 0.0), omega=0.0)
pull = (0.0, 40.0)   # held 90 deg away from the anchor

print(f"inertia J = {zone.moment_of_inertia():.2e} kg m^2, "
      f"friction mu = {zone.friction:.0e} N m s/rad, "
      f"time constant J/mu = {zone.moment_of_inertia() / zone.friction * 1e3:.1f} ms\n")

print("held off-axis pull: anchor angle chases the pull direction")
print(f"{'t ms':>6} {'anchor deg':>11} {'omega rad/s':>12}")
for step in range(1, 2001):
    zone = integrate_boundary(zone, pull, DT)
    if step in (1, 10, 50, 100, 200, 400, 800, 2000):
        ang = math.degrees(math.atan2(zone.exit_point[1], zone.exit_point[0]))
        print(f"{step:6d} {ang:11.2f} {zone.omega:12.3f}")

# now cut the pull: keep the device on the anchor's ray so the torque is
# zero and watch the spin die away exponentially
zone = ZonePose(centre=(0.0, 0.0), radius=20.0, exit_point=(20.0, 0.0), omega=5.0)
t_c = zone.moment_of_inertia() / zone.friction

print("\nfree decay from 5 rad/s (device riding the anchor, zero torque)")
print(f"{'t ms':>6} {'omega':>8} {'5 e^(-t/tc)':>12}")
t = 0.0
for k in range(1, 4):
    while t < k * t_c - 1e-9:
        nx, ny = zone.exit_point
        r = math.hypot(nx, ny)
        zone = integrate_boundary(zone, (nx * (r + 2.0) / r, ny * (r + 2.0) / r), DT)
        t += DT
    print(f"{t * 1e3:6.0f} {zone.omega:8.4f} {5.0 * math.exp(-t / t_c):12.4f}")
