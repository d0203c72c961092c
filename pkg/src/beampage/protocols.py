"""Per-cycle state machines of the five paging schemes.

Scheme roster:
  legacy    - paging swept over every beam, no uplink feedback.
  madp      - every awake user signals presence on its best beam each cycle;
              only beams with at least one request are swept, for that cycle.
  mfep-ad   - a presence request (PAR) activates the beam for a configured
              number of cycles; the user tracks its own request and stays
              quiet until the activation lapses.
  mfep-dli  - mfep-ad plus a broadcast on all active beams announcing which
              beams were (re-)activated, letting users piggyback on requests
              made by others.
  mfep-md   - mfep-dli plus a per-mobility monitoring period: on entering an
              unknown beam the user first listens for paging activity before
              spending a request of its own.

Timing within a paging cycle: requests precede the paging sweep, so a request
in cycle t makes the beam active for the sweep of cycle t through t+N_a-1.
Knowledge a user derives from its own request or from the broadcast is exact
with respect to the base-station countdown; knowledge derived from merely
observing a sweep assumes a fresh activation, which may be optimistic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import MobilityClass

__all__ = [
    "DliBroadcast",
    "GnbBeamState",
    "PageQueueEntry",
    "PagingOutcome",
    "SchemeKind",
    "SchemeName",
    "UePagingKnowledge",
    "apply_dli_refresh",
    "end_of_cycle",
    "gnb_collect_pars",
    "gnb_emit_dli",
    "gnb_page",
    "observe_paging_dci",
    "ue_cycle_decision",
]


class SchemeName(str, Enum):
    LEGACY = "legacy"
    MADP = "madp"
    MFEP_AD = "mfep-ad"
    MFEP_DLI = "mfep-dli"
    MFEP_MD = "mfep-md"


@dataclass(frozen=True)
class SchemeKind:
    """A scheme plus, for mfep-md, its monitoring durations.

    ``monitoring_cycles`` is ordered (stationary, low, high); faster users get
    shorter (or zero) monitoring so they are not left unreachable mid-move.
    """

    name: SchemeName
    monitoring_cycles: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        stat, low, high = self.monitoring_cycles
        if min(self.monitoring_cycles) < 0:
            raise ValueError("monitoring durations must be non-negative")
        if any(int(v) != v for v in self.monitoring_cycles):
            raise ValueError("monitoring durations must be integers")
        if not high <= low <= stat:
            raise ValueError(
                f"monitoring durations must not increase with mobility, got {self.monitoring_cycles}"
            )
        if self.name is not SchemeName.MFEP_MD and self.monitoring_cycles != (0, 0, 0):
            raise ValueError(f"{self.name.value} does not take monitoring durations")

    # -- constructors -------------------------------------------------------
    @classmethod
    def legacy(cls) -> "SchemeKind":
        return cls(SchemeName.LEGACY)

    @classmethod
    def madp(cls) -> "SchemeKind":
        return cls(SchemeName.MADP)

    @classmethod
    def mfep_ad(cls) -> "SchemeKind":
        return cls(SchemeName.MFEP_AD)

    @classmethod
    def mfep_dli(cls) -> "SchemeKind":
        return cls(SchemeName.MFEP_DLI)

    @classmethod
    def mfep_md(cls, stationary: int, low: int, high: int) -> "SchemeKind":
        return cls(SchemeName.MFEP_MD, (stationary, low, high))

    @classmethod
    def parse(cls, text: str) -> "SchemeKind":
        """Parse names like 'legacy', 'mfep-ad', or 'mfep-md:4/2/0'."""
        head, _, tail = text.strip().lower().partition(":")
        try:
            name = SchemeName(head)
        except ValueError:
            valid = ", ".join(s.value for s in SchemeName)
            raise ValueError(f"unknown scheme {text!r}; expected one of: {valid}") from None
        if name is SchemeName.MFEP_MD:
            if not tail:
                raise ValueError("mfep-md needs monitoring durations, e.g. 'mfep-md:4/2/0'")
            parts = tail.split("/")
            if len(parts) != 3:
                raise ValueError(f"expected three monitoring durations in {text!r}")
            return cls(name, tuple(int(p) for p in parts))
        if tail:
            raise ValueError(f"{head} does not take monitoring durations")
        return cls(name)

    # -- behavior flags ------------------------------------------------------
    @property
    def uses_activation_timers(self) -> bool:
        return self.name in (SchemeName.MFEP_AD, SchemeName.MFEP_DLI, SchemeName.MFEP_MD)

    @property
    def emits_dli(self) -> bool:
        return self.name in (SchemeName.MFEP_DLI, SchemeName.MFEP_MD)

    @property
    def uses_monitoring(self) -> bool:
        return self.name is SchemeName.MFEP_MD

    def nm_for(self, mobility: MobilityClass) -> int:
        idx = {MobilityClass.STATIONARY: 0, MobilityClass.LOW: 1, MobilityClass.HIGH: 2}[mobility]
        return self.monitoring_cycles[idx]

    @property
    def label(self) -> str:
        if self.name is SchemeName.MFEP_MD:
            return "mfep-md:%d/%d/%d" % self.monitoring_cycles
        return self.name.value


# ---------------------------------------------------------------------------
# gNB side
# ---------------------------------------------------------------------------


@dataclass
class GnbBeamState:
    """Per-beam activation countdowns of one cell.

    ``activation_remaining[b]`` counts the paging cycles (including the
    current one) the beam stays active; it is refreshed to the full duration
    by every incoming request.  ``activated_this_cycle`` marks beams whose
    countdown was (re-)started in the current cycle, which is exactly the
    broadcast payload.  ``madp_active`` is the one-cycle active set of the
    per-cycle-feedback scheme.
    """

    total_beams: int
    activation_cycles: int
    activation_remaining: np.ndarray
    activated_this_cycle: np.ndarray
    madp_active: np.ndarray

    @classmethod
    def create(cls, total_beams: int, activation_cycles: int) -> "GnbBeamState":
        if total_beams < 1 or activation_cycles < 1:
            raise ValueError("total_beams and activation_cycles must be >= 1")
        return cls(
            total_beams=total_beams,
            activation_cycles=activation_cycles,
            activation_remaining=np.zeros(total_beams, dtype=np.int32),
            activated_this_cycle=np.zeros(total_beams, dtype=bool),
            madp_active=np.zeros(total_beams, dtype=bool),
        )

    def active_beams(self, scheme: SchemeKind) -> np.ndarray:
        """Boolean mask of beams swept at this cycle's paging occasion."""
        if scheme.name is SchemeName.LEGACY:
            return np.ones(self.total_beams, dtype=bool)
        if scheme.name is SchemeName.MADP:
            return self.madp_active.copy()
        return self.activation_remaining > 0


def gnb_collect_pars(state: GnbBeamState, pars: Iterable[int], scheme: SchemeKind) -> GnbBeamState:
    """Fold this cycle's presence requests into the beam state.

    Activation-duration schemes restart the countdown of every requested beam
    (a re-request of an already active beam counts as a re-activation and is
    listed in the broadcast payload); the per-cycle scheme keeps only the
    requested set, and the full-sweep scheme ignores requests entirely.
    """
    beams = np.fromiter((int(b) for b in pars), dtype=np.int64)
    if len(beams) and (beams.min() < 0 or beams.max() >= state.total_beams):
        raise ValueError("request for a beam index outside this cell")
    if scheme.name is SchemeName.LEGACY:
        return state
    if scheme.name is SchemeName.MADP:
        state.madp_active[:] = False
        state.madp_active[beams] = True
        return state
    if len(beams):
        state.activation_remaining[beams] = state.activation_cycles
        state.activated_this_cycle[beams] = True
    return state


@dataclass(frozen=True)
class DliBroadcast:
    """One cycle's active-beam announcement.

    Sent over every currently active beam; the payload is a bitmap over all
    beams with the (re-)activated ones set.
    """

    recipient_beams: np.ndarray  # bool mask: beams the broadcast is sent on
    payload: np.ndarray  # bool mask: beams announced as (re-)activated

    @property
    def recipient_count(self) -> int:
        return int(self.recipient_beams.sum())

    def payload_beams(self) -> np.ndarray:
        return np.nonzero(self.payload)[0]


def gnb_emit_dli(state: GnbBeamState, scheme: SchemeKind) -> Optional[DliBroadcast]:
    """Emit the active-beam announcement, or nothing if no beam was
    (re-)activated this cycle."""
    if not scheme.emits_dli:
        raise ValueError(f"{scheme.label} does not broadcast active-beam indications")
    if not state.activated_this_cycle.any():
        return None
    return DliBroadcast(
        recipient_beams=state.activation_remaining > 0,
        payload=state.activated_this_cycle.copy(),
    )


@dataclass
class PageQueueEntry:
    """One pending page: who, when it arrived, and where the user currently is."""

    ue_id: int
    arrival_cycle: int
    target_beam: int
    delivered_cycle: Optional[int] = None


@dataclass(frozen=True)
class PagingOutcome:
    """Result of one cell's paging occasion."""

    delivered: tuple[PageQueueEntry, ...]
    remaining: tuple[PageQueueEntry, ...]
    selected_count: int
    active_beam_count: int
    carrying_beam_count: int  # active beams holding at least one selected user


def gnb_page(
    state: GnbBeamState,
    queue: Sequence[PageQueueEntry],
    scheme: SchemeKind,
    cycle: int,
    max_simultaneous: int = 32,
) -> PagingOutcome:
    """Serve the page queue at this cycle's paging occasion.

    Up to ``max_simultaneous`` entries are selected oldest-first (ties by user
    id) and their identifiers put in the paging message; an entry is delivered
    only if its user's current beam is being swept.  Undelivered entries stay
    queued.  The control sweep itself covers every active beam regardless of
    queue occupancy.
    """
    active = state.active_beams(scheme)
    ordered = sorted(queue, key=lambda e: (e.arrival_cycle, e.ue_id))
    selected = ordered[:max_simultaneous]
    rest = ordered[max_simultaneous:]
    delivered: list[PageQueueEntry] = []
    remaining: list[PageQueueEntry] = list(rest)
    carrying: set[int] = set()
    for entry in selected:
        if active[entry.target_beam]:
            entry.delivered_cycle = cycle
            delivered.append(entry)
            carrying.add(entry.target_beam)
        else:
            remaining.append(entry)
    return PagingOutcome(
        delivered=tuple(delivered),
        remaining=tuple(remaining),
        selected_count=len(selected),
        active_beam_count=int(active.sum()),
        carrying_beam_count=len(carrying),
    )


def end_of_cycle(state: GnbBeamState, scheme: SchemeKind) -> GnbBeamState:
    """Close the cycle: countdowns tick down, one-cycle sets clear."""
    if scheme.uses_activation_timers:
        np.maximum(state.activation_remaining - 1, 0, out=state.activation_remaining)
    state.madp_active[:] = False
    state.activated_this_cycle[:] = False
    return state


# ---------------------------------------------------------------------------
# UE side
# ---------------------------------------------------------------------------


@dataclass
class UePagingKnowledge:
    """What one idle user believes about beam activations in its cell.

    ``believed_active_until[b]`` is the last cycle through which beam b is
    believed active; stale entries simply compare as expired.  Several beams
    may be tracked at once.  ``monitoring_remaining`` counts the paging
    occasions left to listen on the current beam before spending a request.
    """

    believed_active_until: dict[int, int] = field(default_factory=dict)
    monitoring_remaining: int = 0

    def knows_active(self, beam: int, cycle: int) -> bool:
        return self.believed_active_until.get(beam, -1) >= cycle

    def clear(self) -> None:
        self.believed_active_until.clear()
        self.monitoring_remaining = 0


def apply_dli_refresh(
    knowledge: UePagingKnowledge,
    announced_beams: Iterable[int],
    received_cycle: int,
    activation_cycles: int,
) -> None:
    """Fold a received active-beam announcement into the user's knowledge.

    Every announced beam was (re-)activated in ``received_cycle``, so it stays
    active through ``received_cycle + activation_cycles - 1`` exactly.
    """
    until = received_cycle + activation_cycles - 1
    for b in announced_beams:
        if knowledge.believed_active_until.get(b, -1) < until:
            knowledge.believed_active_until[int(b)] = until

def observe_paging_dci(
    knowledge: UePagingKnowledge, beam: int, observed_cycle: int, activation_cycles: int
) -> None:
    """A monitored beam carried paging control traffic: treat it as active.

    The observer cannot know when the activation started, so it trusts the
    beam for a full activation duration from the observation; this is the one
    knowledge path that may overshoot the real countdown.
    """
    if knowledge.monitoring_remaining <= 0:
        return
    until = observed_cycle + activation_cycles - 1
    if knowledge.believed_active_until.get(beam, -1) < until:
        knowledge.believed_active_until[beam] = until
    knowledge.monitoring_remaining = 0


@dataclass(frozen=True)
class UeDecision:
    send_par: bool
    knowledge: UePagingKnowledge


def ue_cycle_decision(
    scheme: SchemeKind,
    knowledge: UePagingKnowledge,
    current_beam: int,
    beam_changed: bool,
    observed_paging_dci_on_beam: bool = False,
    received_dli: Optional[Iterable[int]] = None,
    mobility: MobilityClass = MobilityClass.STATIONARY,
    cycle: int = 0,
    activation_cycles: int = 1,
    dli_received_cycle: Optional[int] = None,
) -> UeDecision:
    """One user's per-cycle choice: request activation of its beam, or not.

    ``received_dli`` and ``observed_paging_dci_on_beam`` describe what the
    user heard at the previous paging occasion; a simulator applying those
    effects eagerly (apply_dli_refresh / observe_paging_dci) passes neither.
    ``knowledge`` is updated in place and also returned.
    """
    if scheme.name is SchemeName.LEGACY:
        return UeDecision(False, knowledge)
    if scheme.name is SchemeName.MADP:
        return UeDecision(True, knowledge)

    if scheme.emits_dli and received_dli is not None:
        ref = dli_received_cycle if dli_received_cycle is not None else cycle
        apply_dli_refresh(knowledge, received_dli, ref, activation_cycles)
    if scheme.uses_monitoring and observed_paging_dci_on_beam and knowledge.monitoring_remaining > 0:
        observe_paging_dci(knowledge, current_beam, cycle - 1, activation_cycles)

    if knowledge.knows_active(current_beam, cycle):
        knowledge.monitoring_remaining = 0
        return UeDecision(False, knowledge)

    if scheme.uses_monitoring:
        if beam_changed:
            knowledge.monitoring_remaining = scheme.nm_for(mobility)
            send = knowledge.monitoring_remaining == 0
        elif knowledge.monitoring_remaining > 0:
            knowledge.monitoring_remaining -= 1
            send = knowledge.monitoring_remaining == 0
        else:
            send = True
    else:
        send = True

    if send:
        knowledge.monitoring_remaining = 0
        knowledge.believed_active_until[current_beam] = cycle + activation_cycles - 1
    return UeDecision(send, knowledge)
