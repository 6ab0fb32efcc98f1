"""Predicted selection times: clutched position control versus hybrid.

For short reaches position control wins (no rate phase to invoke); past
the crossover distance the hybrid's single elastic glide beats repeated
clutching. Prints the prediction table for both device presets and the
crossover distance for each target width.
"""

from posrate import (PRESETS, ModelParams, clutching_time, crossover_distance,
                     hybrid_time, invocations)

for name in ("laptop", "pda"):
    profile = PRESETS[name]
    params = ModelParams.for_profile(profile)
    print(f"{name}: operating range {params.operating_range:.0f} mm, "
          f"CD {params.cd_gain:.0f}, one engagement covers "
          f"{params.effective_engagement_distance:.0f} mm of display")

    print(f"{'D mm':>8} {'clutches':>9} {'position s':>11} {'hybrid s':>9}")
    for d in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        dist = d * profile.display_diagonal
        pos = clutching_time(dist, 4.0, params)
        hyb = hybrid_time(dist, 4.0, params)
        print(f"{dist:8.0f} {pos.clutches:9d} {pos.total:11.3f} {hyb.total:9.3f}")

    for w in (2.0, 4.0, 8.0):
        cross = crossover_distance(w, params, 2.0 * profile.display_diagonal)
        if cross is None:
            print(f"  W={w:.0f} mm: no crossover inside twice the diagonal")
        else:
            print(f"  W={w:.0f} mm: hybrid overtakes at D = {cross:.0f} mm")
    print()

# engagement counts at full utilization grow linearly with distance
params = ModelParams(operating_range=40.0, cd_gain=2.0, utilization=1.0)
counts = {d: invocations(d, params) for d in (172.0, 344.0, 688.0)}
print(f"ideal engagement counts (no wasted range): {counts}")
