import numpy as np
import pytest

from beampage.geometry import MobilityClass
from beampage.protocols import (
    GnbBeamState,
    PageQueueEntry,
    SchemeKind,
    UePagingKnowledge,
    apply_dli_refresh,
    end_of_cycle,
    gnb_collect_pars,
    gnb_emit_dli,
    gnb_page,
    ue_cycle_decision,
)

AD = SchemeKind.mfep_ad()
DLI = SchemeKind.mfep_dli()
MD420 = SchemeKind.mfep_md(4, 2, 0)
LEGACY = SchemeKind.legacy()
MADP = SchemeKind.madp()


class TestSchemeKind:
    def test_parse_roundtrip(self):
        assert SchemeKind.parse("legacy") == LEGACY
        assert SchemeKind.parse("MADP") == MADP
        assert SchemeKind.parse("mfep-ad") == AD
        assert SchemeKind.parse("mfep-md:4/2/0") == MD420
        assert SchemeKind.parse("mfep-md:6/3/0").monitoring_cycles == (6, 3, 0)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            SchemeKind.parse("mfep")
        with pytest.raises(ValueError):
            SchemeKind.parse("mfep-md")  # missing durations
        with pytest.raises(ValueError):
            SchemeKind.parse("legacy:1/2/3")

    def test_monitoring_must_shrink_with_mobility(self):
        with pytest.raises(ValueError):
            SchemeKind.mfep_md(2, 4, 0)
        with pytest.raises(ValueError):
            SchemeKind.mfep_md(4, 2, 3)
        with pytest.raises(ValueError):
            SchemeKind.mfep_md(4, 2, -1)

    def test_nm_lookup(self):
        assert MD420.nm_for(MobilityClass.STATIONARY) == 4
        assert MD420.nm_for(MobilityClass.LOW) == 2
        assert MD420.nm_for(MobilityClass.HIGH) == 0


class TestUeCycleDecision:
    def test_legacy_never_requests(self):
        k = UePagingKnowledge()
        assert not ue_cycle_decision(LEGACY, k, 3, False, cycle=5, activation_cycles=5).send_par

    def test_madp_requests_every_cycle(self):
        k = UePagingKnowledge()
        for cycle in range(4):
            assert ue_cycle_decision(MADP, k, 3, False, cycle=cycle, activation_cycles=5).send_par

    def test_ad_requests_then_stays_quiet_for_activation(self):
        k = UePagingKnowledge()
        sent = [
            ue_cycle_decision(AD, k, 7, False, cycle=c, activation_cycles=5).send_par
            for c in range(12)
        ]
        # Request at 0 covers cycles 0..4, refresh at 5 covers 5..9, then 10.
        assert sent == [True, False, False, False, False] * 2 + [True, False]

    def test_ad_fresh_knowledge_blocks_request(self):
        k = UePagingKnowledge(believed_active_until={7: 9})
        assert not ue_cycle_decision(AD, k, 7, False, cycle=9, activation_cycles=5).send_par
        assert ue_cycle_decision(AD, k, 7, False, cycle=10, activation_cycles=5).send_par

    def test_dli_refresh_blocks_request(self):
        k = UePagingKnowledge()
        # Announcement received at cycle 4 covers 4..8 for activation 5.
        d = ue_cycle_decision(
            DLI, k, 2, True, received_dli=[2, 9], cycle=5, activation_cycles=5, dli_received_cycle=4
        )
        assert not d.send_par
        assert k.believed_active_until[2] == 8
        assert k.believed_active_until[9] == 8
        assert ue_cycle_decision(DLI, k, 2, False, cycle=9, activation_cycles=5).send_par

    def test_md_zero_monitoring_requests_immediately(self):
        k = UePagingKnowledge()
        d = ue_cycle_decision(
            MD420, k, 4, True, mobility=MobilityClass.HIGH, cycle=3, activation_cycles=5
        )
        assert d.send_par

    def test_md_monitoring_then_request_on_expiry(self):
        k = UePagingKnowledge()
        # Low mobility: two paging occasions monitored, request on the third.
        assert not ue_cycle_decision(
            MD420, k, 4, True, mobility=MobilityClass.LOW, cycle=3, activation_cycles=5
        ).send_par
        assert k.monitoring_remaining == 2
        assert not ue_cycle_decision(
            MD420, k, 4, False, mobility=MobilityClass.LOW, cycle=4, activation_cycles=5
        ).send_par
        assert ue_cycle_decision(
            MD420, k, 4, False, mobility=MobilityClass.LOW, cycle=5, activation_cycles=5
        ).send_par
        assert k.believed_active_until[4] == 9

    def test_md_observation_marks_active_and_stops(self):
        k = UePagingKnowledge()
        ue_cycle_decision(MD420, k, 4, True, mobility=MobilityClass.LOW, cycle=3, activation_cycles=5)
        d = ue_cycle_decision(
            MD420,
            k,
            4,
            False,
            observed_paging_dci_on_beam=True,
            mobility=MobilityClass.LOW,
            cycle=4,
            activation_cycles=5,
        )
        assert not d.send_par
        assert k.monitoring_remaining == 0
        assert k.believed_active_until[4] == 3 + 5 - 1  # trusted from the observed occasion

    def test_md_entering_known_beam_skips_monitoring(self):
        k = UePagingKnowledge(believed_active_until={4: 10})
        d = ue_cycle_decision(MD420, k, 4, True, mobility=MobilityClass.LOW, cycle=6, activation_cycles=5)
        assert not d.send_par
        assert k.monitoring_remaining == 0

    def test_md_in_place_expiry_requests_without_monitoring(self):
        # Monitoring is an entry behavior; a user whose own activation lapses
        # while camped on the beam refreshes it immediately.
        k = UePagingKnowledge()
        ue_cycle_decision(MD420, k, 4, True, mobility=MobilityClass.HIGH, cycle=0, activation_cycles=5)
        assert k.believed_active_until[4] == 4
        d = ue_cycle_decision(MD420, k, 4, False, mobility=MobilityClass.HIGH, cycle=5, activation_cycles=5)
        assert d.send_par


class TestGnbCollectPars:
    def test_ad_activation_set_and_countdown(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {7}, AD)
        assert st.activation_remaining[7] == 5
        assert st.activated_this_cycle[7]
        assert st.active_beams(AD).sum() == 1

    def test_ad_empty_pars_then_decay(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {3}, AD)
        for expect in (4, 3, 2, 1, 0):
            end_of_cycle(st, AD)
            assert st.activation_remaining[3] == expect
        assert not st.active_beams(AD).any()

    def test_reactivation_resets_countdown(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {7}, DLI)
        for _ in range(3):
            end_of_cycle(st, DLI)
        assert st.activation_remaining[7] == 2
        gnb_collect_pars(st, {7}, DLI)
        assert st.activation_remaining[7] == 5
        assert st.activated_this_cycle[7]

    def test_madp_active_only_current_cycle(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {1, 2}, MADP)
        assert set(np.nonzero(st.active_beams(MADP))[0]) == {1, 2}
        end_of_cycle(st, MADP)
        gnb_collect_pars(st, {5}, MADP)
        assert set(np.nonzero(st.active_beams(MADP))[0]) == {5}

    def test_legacy_ignores_pars(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {1}, LEGACY)
        assert st.active_beams(LEGACY).all()
        assert st.activation_remaining.sum() == 0

    def test_rejects_foreign_beam(self):
        st = GnbBeamState.create(16, 5)
        with pytest.raises(ValueError):
            gnb_collect_pars(st, {16}, AD)

    def test_madp_subset_of_ad_on_identical_traces(self):
        # Activation duration only extends activity, so the per-cycle set is
        # always contained in the duration-based set.
        rng = np.random.default_rng(17)
        st_madp = GnbBeamState.create(16, 5)
        st_ad = GnbBeamState.create(16, 5)
        for _ in range(200):
            pars = set(rng.integers(0, 16, size=rng.integers(0, 4)).tolist())
            gnb_collect_pars(st_madp, pars, MADP)
            gnb_collect_pars(st_ad, pars, AD)
            madp_set = st_madp.active_beams(MADP)
            ad_set = st_ad.active_beams(AD)
            assert not (madp_set & ~ad_set).any()
            end_of_cycle(st_madp, MADP)
            end_of_cycle(st_ad, AD)

    def test_activation_soundness(self):
        # Active at cycle t iff some request arrived in the last N_a cycles.
        rng = np.random.default_rng(23)
        st = GnbBeamState.create(8, 3)
        history: list[set[int]] = []
        for t in range(100):
            pars = set(rng.integers(0, 8, size=rng.integers(0, 3)).tolist())
            history.append(pars)
            gnb_collect_pars(st, pars, AD)
            active = st.active_beams(AD)
            recent = set().union(*history[max(0, t - 2) : t + 1])
            assert set(np.nonzero(active)[0]) == recent
            end_of_cycle(st, AD)


class TestGnbEmitDli:
    def test_no_activation_no_broadcast(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {4}, DLI)
        end_of_cycle(st, DLI)
        assert gnb_emit_dli(st, DLI) is None

    def test_payload_and_recipients(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {1}, DLI)
        end_of_cycle(st, DLI)
        gnb_collect_pars(st, {3, 9}, DLI)
        dli = gnb_emit_dli(st, DLI)
        assert dli is not None
        assert set(dli.payload_beams()) == {3, 9}
        assert set(np.nonzero(dli.recipient_beams)[0]) == {1, 3, 9}
        assert dli.recipient_count == 3

    def test_ad_scheme_not_invoked(self):
        st = GnbBeamState.create(16, 5)
        with pytest.raises(ValueError):
            gnb_emit_dli(st, AD)


class TestGnbPage:
    def test_legacy_delivers_same_cycle(self):
        st = GnbBeamState.create(16, 5)
        entry = PageQueueEntry(ue_id=1, arrival_cycle=10, target_beam=3)
        out = gnb_page(st, [entry], LEGACY, cycle=10)
        assert out.delivered == (entry,)
        assert entry.delivered_cycle == 10
        assert out.active_beam_count == 16
        assert out.carrying_beam_count == 1

    def test_inactive_beam_stays_queued(self):
        st = GnbBeamState.create(16, 5)
        entry = PageQueueEntry(ue_id=1, arrival_cycle=10, target_beam=3)
        out = gnb_page(st, [entry], MD420, cycle=10)
        assert out.delivered == ()
        assert out.remaining == (entry,)
        assert entry.delivered_cycle is None

    def test_cap_thirty_two(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, set(range(16)), AD)
        queue = [PageQueueEntry(ue_id=i, arrival_cycle=5, target_beam=i % 16) for i in range(40)]
        out = gnb_page(st, queue, AD, cycle=5)
        assert len(out.delivered) == 32
        assert len(out.remaining) == 8
        # FIFO with ties by user id: the lowest 32 ids went out.
        assert {e.ue_id for e in out.delivered} == set(range(32))

    def test_fifo_by_arrival_then_id(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {0}, AD)
        queue = [
            PageQueueEntry(ue_id=9, arrival_cycle=1, target_beam=0),
            PageQueueEntry(ue_id=1, arrival_cycle=2, target_beam=0),
        ]
        out = gnb_page(st, queue, AD, cycle=2, max_simultaneous=1)
        assert [e.ue_id for e in out.delivered] == [9]

    def test_delivery_never_precedes_arrival(self):
        st = GnbBeamState.create(16, 5)
        gnb_collect_pars(st, {2}, AD)
        entry = PageQueueEntry(ue_id=1, arrival_cycle=4, target_beam=2)
        out = gnb_page(st, [entry], AD, cycle=4)
        assert out.delivered[0].delivered_cycle >= out.delivered[0].arrival_cycle


class TestKnowledgeHelpers:
    def test_apply_dli_never_downgrades(self):
        k = UePagingKnowledge(believed_active_until={3: 20})
        apply_dli_refresh(k, [3], received_cycle=10, activation_cycles=5)
        assert k.believed_active_until[3] == 20

    def test_expiry_semantics(self):
        k = UePagingKnowledge(believed_active_until={3: 9})
        assert k.knows_active(3, 9)
        assert not k.knows_active(3, 10)
        assert not k.knows_active(5, 0)
