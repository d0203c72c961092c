"""Walk through the closed-form activation model.

Computes the expected number of uniquely activated beams over a window of
paging cycles three ways: the exact recursion, the independent-drops closed
form, and a seeded Monte Carlo, then prints the downlink saving factor and
the per-user presence-request mean.

Run: python3 demos/01_activation_model.py
"""

import math

from beampage.activation_model import (
    ActivationModelParams,
    GainParams,
    activation_profile,
    expected_par_count,
    gain_factor,
    monte_carlo_unique_beams,
)

BEAMS = 64
WINDOW = 3  # paging cycles

print(f"== Expected uniquely activated beams, B={BEAMS}, window={WINDOW} cycles ==")
print(f"{'users/cell':>10s} {'recursion':>10s} {'closed form':>11s} {'monte carlo':>16s}")
for lam in (1, 4, 16, 32, 64, 128):
    params = ActivationModelParams(
        ue_density_lambda=lam, total_beams=BEAMS, activation_cycles=WINDOW
    )
    prof = activation_profile(params)
    closed = BEAMS * (1 - math.exp(-WINDOW * lam / BEAMS))
    mc = monte_carlo_unique_beams(params, trials=10_000, seed=7)
    print(
        f"{lam:>10d} {prof.n_bar:>10.4f} {closed:>11.4f} "
        f"{mc.mean:>10.4f} +- {mc.stderr:.4f}"
    )

print()
print("Per-cycle share of the window (users/cell = 32):")
prof = activation_profile(ActivationModelParams(32, BEAMS, WINDOW))
for i, e in enumerate(prof.per_cycle, start=1):
    print(f"  cycle {i}: {e:8.4f} beams activated here and in no later cycle")
print(f"  total:   {prof.n_bar:8.4f}")

print()
print("Downlink saving vs sweeping all beams (48 RBs per beam per cycle,")
print("2 resource elements reserved per beam for presence requests):")
gp = GainParams(
    dl_resources_per_beam=48.0 * WINDOW,
    ul_resources_per_par=2.0 / 12.0,
    total_beams=BEAMS,
    activation_cycles=WINDOW,
)
for lam in (4, 16, 64):
    prof = activation_profile(ActivationModelParams(lam, BEAMS, WINDOW))
    print(f"  users/cell={lam:<4d} gain factor = {gain_factor(gp, prof.n_bar):.4f}")

print()
print("Mean presence requests per user over the window (single-beam tracking,")
print("beam redrawn uniformly each cycle):")
for beams in (16, 64, 256):
    print(f"  B={beams:<4d} k = {expected_par_count(beams, WINDOW):.5f}")
