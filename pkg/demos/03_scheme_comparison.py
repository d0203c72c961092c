"""Head-to-head simulation of the five paging schemes.

Runs each scheme at the same seed on a short desk-scale configuration and
tabulates downlink/uplink resource use, active beams, presence requests, and
paging latency.  With a shared seed the mobility and traffic realizations are
identical across schemes, so differences are purely protocol behavior.

Run: python3 demos/03_scheme_comparison.py
"""

from beampage.engine import SimConfig, run_simulation
from beampage.protocols import SchemeKind

SCHEMES = [
    SchemeKind.legacy(),
    SchemeKind.madp(),
    SchemeKind.mfep_ad(),
    SchemeKind.mfep_dli(),
    SchemeKind.mfep_md(4, 2, 0),
    SchemeKind.mfep_md(6, 3, 0),
]

print("64 beams, paging group of 200 over 16 cells, 3,000 cycles (short demo)")
print(f"{'scheme':>14s} {'dl dci':>9s} {'dl msg':>7s} {'dl ind':>7s} {'ul req#':>8s} "
      f"{'total':>9s} {'beams':>6s} {'lat(ms)':>8s}")

baseline = None
for scheme in SCHEMES:
    cfg = SimConfig(
        scheme=scheme,
        total_beams=64,
        ue_density=200,
        total_cycles=3_000,
        warmup_cycles=500,
        seed=1,
    )
    s = run_simulation(cfg).summary
    if baseline is None:
        baseline = s.total_units
    print(
        f"{scheme.label:>14s} {s.dl_dci_units:>9.1f} {s.dl_pdsch_units:>7.2f} "
        f"{s.dl_dli_units:>7.2f} {s.ul_par_count:>8.3f} {s.total_units:>9.1f} "
        f"{s.active_beams:>6.2f} {s.latency_mean_ms:>8.2f}"
    )

print()
print("Resource reduction vs legacy (per cycle per cell, DL + UL):")
for scheme in SCHEMES[1:]:
    cfg = SimConfig(scheme=scheme, total_beams=64, ue_density=200,
                    total_cycles=3_000, warmup_cycles=500, seed=1)
    s = run_simulation(cfg).summary
    print(f"  {scheme.label:>14s}: {(1 - s.total_units / baseline) * 100:6.2f}%")
