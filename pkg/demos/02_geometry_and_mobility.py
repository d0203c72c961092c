"""Tour of the tracking-area geometry and the mobility model.

Shows the 16-site grid, the equal-area ring/sector beam tiling, and how the
beam-switch rate of a walking user grows with the beam count.

Run: python3 demos/02_geometry_and_mobility.py
"""

import numpy as np

from beampage.geometry import (
    MobilityClass,
    advance_positions,
    beams_of,
    build_tracking_area,
    make_beam_tiling,
    serving_cells,
    split_population,
)

area = build_tracking_area()
print("== Tracking area ==")
print(f"sites: {area.n_cells}, pitch: {area.inter_site_distance:.0f} m, bounds: {area.bounds}")
print("site positions (m):")
for i in range(0, 16, 4):
    row = "  ".join(f"{i+j:2d}:({area.gnb_positions[i+j,0]:+.0f},{area.gnb_positions[i+j,1]:+.0f})" for j in range(4))
    print("  " + row)

print()
print("== Beam tiling (equal-area rings x azimuth sectors) ==")
for beams in (16, 64, 256):
    tiling = make_beam_tiling(beams)
    radii = ", ".join(f"{r:.1f}" for r in tiling.ring_radii)
    print(f"  B={beams:<4d} rings={tiling.rings} sectors={tiling.sectors_per_ring} outer radii: {radii} m")

print()
print("== Mobility mix ==")
counts = split_population(200)
for cls, n in counts.items():
    step = cls.speed_mps * 0.32
    print(f"  {cls.value:>10s}: {n:4d} users, {cls.speed_kmh:4.0f} km/h -> {step:.3f} m per 320 ms cycle")

print()
print("== Beam-switch rate vs beam count (high-mobility walkers, 2000 cycles) ==")
rng = np.random.default_rng(42)
n = 200
for beams in (16, 32, 64, 128, 256):
    tiling = make_beam_tiling(beams)
    pos = np.column_stack([rng.uniform(-400, 400, n), rng.uniform(-400, 400, n)])
    steps = np.full(n, MobilityClass.HIGH.speed_mps * 0.32)
    serving = serving_cells(area, pos)
    prev = beams_of(area, tiling, pos, serving)
    switches = 0
    for _ in range(2000):
        pos = advance_positions(pos, steps, rng, area)
        serving = serving_cells(area, pos)
        cur = beams_of(area, tiling, pos, serving)
        switches += int((cur != prev).sum())
        prev = cur
    print(f"  B={beams:<4d} switch rate = {switches / (2000 * n):.4f} per user per cycle")
