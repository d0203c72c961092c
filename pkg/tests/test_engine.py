import numpy as np
import pytest

from beampage.accounting import ConfigurationError
from beampage.engine import SimConfig, draw_paging_arrivals, populate_ues, run_simulation
from beampage.geometry import build_tracking_area
from beampage.protocols import SchemeKind

LEGACY = SchemeKind.legacy()
MADP = SchemeKind.madp()
AD = SchemeKind.mfep_ad()
DLI = SchemeKind.mfep_dli()


def small_config(scheme, **kw):
    defaults = dict(
        scheme=scheme,
        total_beams=16,
        ue_density=20,
        total_cycles=400,
        warmup_cycles=50,
        grid_shape=(1, 1),
        seed=7,
    )
    defaults.update(kw)
    return SimConfig(**defaults)


class TestPopulateUes:
    def test_counts_and_split(self):
        cfg = SimConfig(scheme=LEGACY, ue_density=200)
        area = build_tracking_area()
        pos, classes = populate_ues(cfg, area, np.random.default_rng(0))
        assert len(pos) == 200
        assert (classes == 0).sum() == 80  # stationary
        assert (classes == 1).sum() == 80  # low
        assert (classes == 2).sum() == 40  # high

    def test_zero_density(self):
        cfg = SimConfig(scheme=LEGACY, ue_density=0)
        pos, classes = populate_ues(cfg, build_tracking_area(), np.random.default_rng(0))
        assert len(pos) == 0 and len(classes) == 0

    def test_same_seed_same_placement(self):
        cfg = SimConfig(scheme=LEGACY, ue_density=50)
        area = build_tracking_area()
        a, _ = populate_ues(cfg, area, np.random.default_rng(9))
        b, _ = populate_ues(cfg, area, np.random.default_rng(9))
        assert (a == b).all()

    def test_positions_inside_bounds(self):
        cfg = SimConfig(scheme=LEGACY, ue_density=500)
        area = build_tracking_area()
        pos, _ = populate_ues(cfg, area, np.random.default_rng(1))
        xmin, ymin, xmax, ymax = area.bounds
        assert (pos[:, 0] >= xmin).all() and (pos[:, 0] <= xmax).all()
        assert (pos[:, 1] >= ymin).all() and (pos[:, 1] <= ymax).all()


class TestDrawPagingArrivals:
    def test_zero_rate_never_arrives(self):
        rng = np.random.default_rng(0)
        counts = draw_paging_arrivals(50, 0.0, 0.32, rng)
        assert counts.sum() == 0 and len(counts) == 50

    def test_standard_rate_empirical_mean(self):
        # 1 packet per 60 s over a 320 ms cycle: mean 0.0053333 per user.
        rng = np.random.default_rng(1)
        n, cycles = 500, 2000
        total = sum(int(draw_paging_arrivals(n, 1 / 60, 0.32, rng).sum()) for _ in range(cycles))
        mean = 1 / 60 * 0.32
        sigma = np.sqrt(mean * n * cycles)  # Poisson total
        assert abs(total - mean * n * cycles) <= 3 * sigma

    def test_high_rate_empirical_mean(self):
        rng = np.random.default_rng(2)
        n, cycles = 500, 2000
        total = sum(int(draw_paging_arrivals(n, 1 / 3, 0.32, rng).sum()) for _ in range(cycles))
        mean = 1 / 3 * 0.32  # 0.10667 per user per cycle
        sigma = np.sqrt(mean * n * cycles)
        assert abs(total - mean * n * cycles) <= 3 * sigma

    def test_rejects_negative_rate(self):
        with pytest.raises(ValueError):
            draw_paging_arrivals(10, -1.0, 0.32, np.random.default_rng(0))


class TestConfigValidation:
    def test_unsupported_beam_count(self):
        with pytest.raises(ConfigurationError):
            SimConfig(scheme=LEGACY, total_beams=48)

    def test_fractional_density_rounding_to_zero(self):
        with pytest.raises(ConfigurationError):
            SimConfig(scheme=LEGACY, ue_density=0.2)

    def test_warmup_must_precede_end(self):
        with pytest.raises(ConfigurationError):
            SimConfig(scheme=LEGACY, total_cycles=100, warmup_cycles=100)

    def test_bad_ul_accounting(self):
        with pytest.raises(ConfigurationError):
            SimConfig(scheme=LEGACY, ul_accounting="both")


class TestLegacyBehavior:
    def test_dci_is_full_sweep_every_cycle(self):
        res = run_simulation(small_config(LEGACY))
        assert (res.dl_dci == 48.0 * 16).all()
        assert res.summary.dl_dci_units == 48.0 * 16
        assert (res.active_beams == 16).all()

    def test_no_pars_and_zero_latency(self):
        res = run_simulation(small_config(LEGACY))
        assert res.summary.ul_par_count == 0.0
        assert res.summary.latency_mean_cycles == 0.0
        assert res.summary.latency_zero_fraction == 1.0

    def test_full_sweep_independent_of_density(self):
        res = run_simulation(small_config(LEGACY, ue_density=0, total_cycles=60, warmup_cycles=0))
        assert (res.dl_dci == 768.0).all()


class TestMadpBehavior:
    def test_par_count_equals_awake_ues(self):
        res = run_simulation(small_config(MADP))
        assert (res.ul_par_count.sum(axis=1) == 20).all()
        assert res.summary.ul_par_count == 20.0  # single cell

    def test_zero_latency(self):
        res = run_simulation(small_config(MADP))
        assert res.summary.latency_mean_cycles == 0.0
        assert res.summary.pages_delivered == res.summary.pages_arrived

    def test_empty_cell_has_no_active_beams(self):
        res = run_simulation(small_config(MADP, ue_density=0, total_cycles=60, warmup_cycles=0))
        assert (res.active_beams == 0).all()
        assert (res.dl_dci == 0.0).all()


class TestMfepAdBehavior:
    def test_single_stationary_ue_par_every_activation_period(self):
        # One user, no traffic: a request every N_a cycles, beam always active.
        cfg = SimConfig(
            scheme=AD,
            total_beams=16,
            ue_density=1,
            paging_arrival_rate=0.0,
            total_cycles=40,
            warmup_cycles=0,
            activation_cycles=5,
            grid_shape=(1, 1),
            seed=3,
        )
        res = run_simulation(cfg)
        pars = res.ul_par_count[:, 0]
        # The single user is stationary (class split of 1 -> stationary).
        assert pars.sum() == 8  # 40 cycles / 5
        assert (np.nonzero(pars)[0] == np.arange(0, 40, 5)).all()
        assert (res.active_beams == 1).all()

    def test_fewer_pars_than_madp(self):
        madp = run_simulation(small_config(MADP))
        ad = run_simulation(small_config(AD))
        assert ad.summary.ul_par_count < madp.summary.ul_par_count

    def test_activity_at_least_madp(self):
        madp = run_simulation(small_config(MADP))
        ad = run_simulation(small_config(AD))
        assert ad.summary.active_beams >= madp.summary.active_beams


class TestDliBehavior:
    def test_dli_units_zero_without_activations(self):
        res = run_simulation(small_config(DLI, ue_density=0, total_cycles=60, warmup_cycles=0))
        assert (res.dl_dli == 0.0).all()

    def test_dli_adds_dl_overhead_over_ad(self):
        ad = run_simulation(small_config(AD))
        dli = run_simulation(small_config(DLI))
        assert dli.summary.dl_dli_units > 0
        assert dli.summary.dl_total_units >= ad.summary.dl_total_units - 1e-9

    def test_dli_reduces_pars(self):
        ad = run_simulation(small_config(AD))
        dli = run_simulation(small_config(DLI))
        assert dli.summary.ul_par_count <= ad.summary.ul_par_count


class TestMdBehavior:
    def test_md_zero_monitoring_equals_dli_trace(self):
        md000 = SchemeKind.mfep_md(0, 0, 0)
        a = run_simulation(small_config(DLI))
        b = run_simulation(small_config(md000))
        assert (a.dl_dci == b.dl_dci).all()
        assert (a.dl_pdsch == b.dl_pdsch).all()
        assert (a.dl_dli == b.dl_dli).all()
        assert (a.ul_par_count == b.ul_par_count).all()
        assert a.deliveries == b.deliveries

    def test_md_reduces_pars_vs_dli(self):
        md = SchemeKind.mfep_md(4, 2, 0)
        dli = run_simulation(small_config(DLI))
        res = run_simulation(small_config(md))
        assert res.summary.ul_par_count <= dli.summary.ul_par_count

    def test_longer_monitoring_fewer_pars(self):
        a = run_simulation(small_config(SchemeKind.mfep_md(4, 2, 0)))
        b = run_simulation(small_config(SchemeKind.mfep_md(6, 3, 0)))
        assert b.summary.ul_par_count <= a.summary.ul_par_count

    def test_md_can_incur_latency(self):
        md = SchemeKind.mfep_md(6, 3, 0)
        res = run_simulation(small_config(md, total_cycles=2000, warmup_cycles=100))
        assert res.summary.latency_mean_cycles >= 0.0


class TestConservation:
    @pytest.mark.parametrize("scheme", [LEGACY, MADP, AD, DLI, SchemeKind.mfep_md(4, 2, 0)])
    def test_delivered_never_exceeds_arrived(self, scheme):
        res = run_simulation(small_config(scheme))
        assert res.summary.pages_delivered <= res.summary.pages_arrived
        assert res.summary.pages_pending_end >= 0

    def test_latency_nonnegative_and_recorded_on_delivery(self):
        res = run_simulation(small_config(SchemeKind.mfep_md(6, 3, 0), total_cycles=1500))
        for cycle, cell, ue, arrival, lat in res.deliveries:
            assert lat == cycle - arrival >= 0


class TestDeterminism:
    @pytest.mark.parametrize("scheme", [MADP, DLI, SchemeKind.mfep_md(4, 2, 0)])
    def test_same_seed_identical_results(self, scheme):
        a = run_simulation(small_config(scheme))
        b = run_simulation(small_config(scheme))
        assert a.summary == b.summary
        assert (a.dl_dci == b.dl_dci).all()
        assert a.deliveries == b.deliveries

    def test_different_seed_differs(self):
        a = run_simulation(small_config(MADP, seed=1))
        b = run_simulation(small_config(MADP, seed=2))
        assert (a.ul_par_count != b.ul_par_count).any() or a.deliveries != b.deliveries


class TestBackendEquivalence:
    @pytest.mark.parametrize(
        "scheme",
        [LEGACY, MADP, AD, DLI, SchemeKind.mfep_md(4, 2, 0), SchemeKind.mfep_md(6, 3, 0)],
    )
    def test_reference_matches_vectorized(self, scheme):
        cfg = small_config(scheme, ue_density=15, total_cycles=250, warmup_cycles=20, seed=11)
        vec = run_simulation(cfg, backend="vectorized")
        ref = run_simulation(cfg, backend="reference")
        assert (vec.dl_dci == ref.dl_dci).all()
        assert (vec.dl_pdsch == ref.dl_pdsch).all()
        assert (vec.dl_dli == ref.dl_dli).all()
        assert (vec.ul_par_count == ref.ul_par_count).all()
        assert (vec.active_beams == ref.active_beams).all()
        assert (vec.pages_delivered == ref.pages_delivered).all()
        assert vec.deliveries == ref.deliveries
        assert vec.summary == ref.summary

    def test_multicell_equivalence(self):
        cfg = SimConfig(
            scheme=SchemeKind.mfep_md(4, 2, 0),
            total_beams=16,
            ue_density=40,
            total_cycles=150,
            warmup_cycles=10,
            grid_shape=(2, 2),
            seed=13,
        )
        vec = run_simulation(cfg, backend="vectorized")
        ref = run_simulation(cfg, backend="reference")
        assert (vec.ul_par_count == ref.ul_par_count).all()
        assert (vec.dl_dci == ref.dl_dci).all()
        assert vec.deliveries == ref.deliveries
        assert vec.summary == ref.summary


class TestCycleMetricsAccessor:
    def test_counters_match_arrays(self):
        res = run_simulation(small_config(MADP))
        cm = res.cycle_metrics(100, 0)
        i = 100 - res.config.warmup_cycles
        assert cm.dl_dci_units == res.dl_dci[i, 0]
        assert cm.ul_par_count == res.ul_par_count[i, 0]
        assert cm.pages_delivered == res.pages_delivered[i, 0]

    def test_outside_window_rejected(self):
        res = run_simulation(small_config(MADP))
        with pytest.raises(IndexError):
            res.cycle_metrics(10, 0)
