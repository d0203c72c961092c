"""Cycle-driven simulation of paging over a multi-cell tracking area.

Each paging cycle runs a fixed event order:

  1. mobility step and cell/beam re-selection
  2. paging arrivals drawn per user and queued at the serving cell
  3. user decisions, producing this cycle's presence requests (PARs)
  4. request collection at each cell, (re-)starting beam activations
  5. active-beam broadcast, where the scheme uses one
  6. paging sweep over the active beams, message delivery, latency capture
  7. activation countdown tick
  8. metrics capture (after warmup)

A request in cycle t therefore activates its beam before the same cycle's
paging occasion.  Users keep their pending pages with them: a page is retried
at the user's current serving cell every cycle until delivered.

Two backends produce bit-identical results: a vectorized one (default) and a
reference one that loops over the per-entity protocol operations.  Both share
the same mobility, traffic, and placement draws from named substreams of the
master seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .accounting import DEFAULT_COST_MODEL, ConfigurationError, CostModel
from .geometry import (
    MobilityClass,
    TrackingArea,
    advance_positions,
    beams_of,
    build_grid,
    make_beam_tiling,
    serving_cells,
    split_population,
)
from .protocols import (
    GnbBeamState,
    PageQueueEntry,
    SchemeKind,
    SchemeName,
    UePagingKnowledge,
    apply_dli_refresh,
    end_of_cycle,
    gnb_collect_pars,
    gnb_emit_dli,
    gnb_page,
    observe_paging_dci,
    ue_cycle_decision,
)

__all__ = [
    "CycleMetrics",
    "MetricsSummary",
    "SimConfig",
    "SimulationResult",
    "SUPPORTED_BEAM_COUNTS",
    "draw_paging_arrivals",
    "populate_ues",
    "run_simulation",
]

SUPPORTED_BEAM_COUNTS = (16, 32, 64, 128, 256)

_CLASS_ORDER = (MobilityClass.STATIONARY, MobilityClass.LOW, MobilityClass.HIGH)


@dataclass(frozen=True)
class SimConfig:
    """One simulation run.

    ``ue_density`` is the paging-group size: the total number of users sharing
    the simulated paging occasion, dropped uniformly over the whole tracking
    area.  ``paging_arrival_rate`` is per user per second.
    """

    scheme: SchemeKind
    total_beams: int = 64
    ue_density: float = 200.0
    paging_cycle_seconds: float = 0.32
    total_cycles: int = 10_000
    warmup_cycles: int = 1_000
    activation_cycles: int = 5
    paging_arrival_rate: float = 1.0 / 60.0
    max_paged_per_cycle: int = 32
    seed: int = 0
    grid_shape: tuple[int, int] = (4, 4)
    inter_site_distance: float = 200.0
    cell_radius: float = 100.0
    rings: Optional[int] = None
    cost_model: CostModel = field(default_factory=lambda: DEFAULT_COST_MODEL)
    pdsch_on_all_active_beams: bool = False
    ul_accounting: str = "used"  # which uplink figure enters total_units

    def __post_init__(self):
        if self.total_beams not in SUPPORTED_BEAM_COUNTS:
            raise ConfigurationError(
                f"total_beams must be one of {SUPPORTED_BEAM_COUNTS}, got {self.total_beams}"
            )
        if self.ue_density < 0:
            raise ConfigurationError(f"ue_density must be >= 0, got {self.ue_density}")
        if self.ue_density > 0 and round(self.ue_density) == 0:
            raise ConfigurationError(
                f"ue_density {self.ue_density} rounds to zero users; use 0 or at least 0.5"
            )
        if self.paging_cycle_seconds <= 0:
            raise ConfigurationError("paging_cycle_seconds must be > 0")
        if not 0 <= self.warmup_cycles < self.total_cycles:
            raise ConfigurationError(
                f"need total_cycles > warmup_cycles >= 0, got {self.total_cycles}, {self.warmup_cycles}"
            )
        if self.activation_cycles < 1:
            raise ConfigurationError("activation_cycles must be >= 1")
        if self.paging_arrival_rate < 0:
            raise ConfigurationError("paging_arrival_rate must be >= 0")
        if self.max_paged_per_cycle < 1:
            raise ConfigurationError("max_paged_per_cycle must be >= 1")
        if self.ul_accounting not in ("used", "reserved"):
            raise ConfigurationError("ul_accounting must be 'used' or 'reserved'")
        if min(self.grid_shape) < 1:
            raise ConfigurationError("grid_shape must be at least 1x1")

    @property
    def n_ues(self) -> int:
        return int(round(self.ue_density))

    @property
    def arrivals_per_cycle_per_ue(self) -> float:
        return self.paging_arrival_rate * self.paging_cycle_seconds


def populate_ues(
    config: SimConfig, area: TrackingArea, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Initial user drop: uniform positions over the tracking area and the
    40/40/20 stationary/low/high mobility split (largest remainder)."""
    n = config.n_ues
    xmin, ymin, xmax, ymax = area.bounds
    positions = np.column_stack(
        [rng.uniform(xmin, xmax, size=n), rng.uniform(ymin, ymax, size=n)]
    )
    counts = split_population(n)
    classes = np.concatenate(
        [np.full(counts[c], i, dtype=np.int8) for i, c in enumerate(_CLASS_ORDER)]
    ) if n else np.zeros(0, dtype=np.int8)
    return positions, classes


def draw_paging_arrivals(
    ue_count: int, arrival_rate: float, cycle_seconds: float, rng: np.random.Generator
) -> np.ndarray:
    """Per-user page arrivals for one cycle: Poisson with mean
    ``arrival_rate * cycle_seconds`` each."""
    if arrival_rate < 0:
        raise ValueError(f"arrival_rate must be >= 0, got {arrival_rate}")
    if ue_count == 0 or arrival_rate == 0.0:
        return np.zeros(ue_count, dtype=np.int64)
    return rng.poisson(arrival_rate * cycle_seconds, size=ue_count)


@dataclass(frozen=True)
class CycleMetrics:
    """Counters of one cell over one paging cycle."""

    cycle: int
    cell: int
    dl_dci_units: float
    dl_pdsch_units: float
    dl_dli_units: float
    ul_par_count: int
    ul_par_units: float
    active_beam_count: int
    pages_delivered: int
    latency_samples: tuple[int, ...]


@dataclass(frozen=True)
class MetricsSummary:
    """Per-cycle per-cell means over the measured window, plus page accounting."""

    scheme: str
    measured_cycles: int
    n_cells: int
    n_ues: int
    dl_dci_units: float
    dl_pdsch_units: float
    dl_dli_units: float
    dl_total_units: float
    ul_par_count: float
    ul_par_units: float
    ul_par_reserved_units: float
    total_units: float
    active_beams: float
    pages_arrived: int
    pages_delivered: int
    pages_pending_end: int
    latency_mean_cycles: float
    latency_mean_ms: float
    latency_max_cycles: int
    latency_zero_fraction: float

    def metric_values(self) -> dict[str, float]:
        return {
            "dl_dci_units": self.dl_dci_units,
            "dl_pdsch_units": self.dl_pdsch_units,
            "dl_dli_units": self.dl_dli_units,
            "dl_total_units": self.dl_total_units,
            "ul_par_count": self.ul_par_count,
            "ul_par_units": self.ul_par_units,
            "ul_par_reserved_units": self.ul_par_reserved_units,
            "total_units": self.total_units,
            "active_beams": self.active_beams,
            "pages_arrived": float(self.pages_arrived),
            "pages_delivered": float(self.pages_delivered),
            "pages_pending_end": float(self.pages_pending_end),
            "latency_mean_cycles": self.latency_mean_cycles,
            "latency_mean_ms": self.latency_mean_ms,
            "latency_max_cycles": float(self.latency_max_cycles),
            "latency_zero_fraction": self.latency_zero_fraction,
        }


@dataclass
class ProtocolTrace:
    """Full-run protocol visibility for invariant checking (small scales).

    Boolean arrays are indexed [cycle, cell, beam] over every cycle including
    warmup; arrivals and deliveries carry per-event tuples.
    """

    pars: np.ndarray  # requests collected
    active: np.ndarray  # beams swept at the paging occasion
    dli_payload: np.ndarray  # beams announced as (re-)activated
    dli_emitted: np.ndarray  # [cycle, cell] broadcast happened
    arrivals: list[tuple[int, int, int]]  # (cycle, ue, count)
    delivered: list[tuple[int, int, int, int, int]]  # (cycle, cell, ue, arrival, beam)


@dataclass(frozen=True)
class SimulationResult:
    config: SimConfig
    summary: MetricsSummary
    # Per measured cycle x cell arrays, indexed [cycle - warmup, cell].
    dl_dci: np.ndarray
    dl_pdsch: np.ndarray
    dl_dli: np.ndarray
    ul_par_count: np.ndarray
    active_beams: np.ndarray
    pages_delivered: np.ndarray
    pages_arrived: np.ndarray
    # (cycle, cell, ue, arrival_cycle, latency) per delivery in the window.
    deliveries: tuple[tuple[int, int, int, int, int], ...]
    protocol: Optional[ProtocolTrace] = None

    def cycle_metrics(self, cycle: int, cell: int) -> CycleMetrics:
        i = cycle - self.config.warmup_cycles
        if not 0 <= i < len(self.dl_dci):
            raise IndexError(f"cycle {cycle} outside the measured window")
        cm = self.config.cost_model
        count = int(self.ul_par_count[i, cell])
        return CycleMetrics(
            cycle=cycle,
            cell=cell,
            dl_dci_units=float(self.dl_dci[i, cell]),
            dl_pdsch_units=float(self.dl_pdsch[i, cell]),
            dl_dli_units=float(self.dl_dli[i, cell]),
            ul_par_count=count,
            ul_par_units=cm.par_cost(count),
            active_beam_count=int(self.active_beams[i, cell]),
            pages_delivered=int(self.pages_delivered[i, cell]),
            latency_samples=tuple(
                lat for (c, cl, _, _, lat) in self.deliveries if c == cycle and cl == cell
            ),
        )


class _Runtime:
    """Shared mutable state of one run, common to both backends."""

    def __init__(self, config: SimConfig, protocol_trace: bool = False):
        self.config = config
        rows, cols = config.grid_shape
        self.area = build_grid(rows, cols, config.inter_site_distance)
        self.tiling = make_beam_tiling(config.total_beams, config.cell_radius, config.rings)
        seq = np.random.SeedSequence(config.seed)
        placement_seq, mobility_seq, traffic_seq = seq.spawn(3)
        self.rng_mobility = np.random.default_rng(mobility_seq)
        self.rng_traffic = np.random.default_rng(traffic_seq)
        self.positions, self.classes = populate_ues(
            config, self.area, np.random.default_rng(placement_seq)
        )
        speed_by_class = np.array([c.speed_mps for c in _CLASS_ORDER])
        self.step_lengths = speed_by_class[self.classes] * config.paging_cycle_seconds
        self.serving = serving_cells(self.area, self.positions) if len(self.positions) else np.zeros(0, dtype=np.int64)
        self.beams = beams_of(self.area, self.tiling, self.positions, self.serving) if len(self.positions) else np.zeros(0, dtype=np.int64)
        n_measured = config.total_cycles - config.warmup_cycles
        c = self.area.n_cells
        self.dl_dci = np.zeros((n_measured, c), dtype=np.float64)
        self.dl_pdsch = np.zeros((n_measured, c), dtype=np.float64)
        self.dl_dli = np.zeros((n_measured, c), dtype=np.float64)
        self.ul_par = np.zeros((n_measured, c), dtype=np.int32)
        self.active = np.zeros((n_measured, c), dtype=np.int32)
        self.delivered = np.zeros((n_measured, c), dtype=np.int32)
        self.arrived = np.zeros((n_measured, c), dtype=np.int32)
        self.deliveries: list[tuple[int, int, int, int, int]] = []
        self.pending: dict[int, list[int]] = {}
        self.arrived_total = 0
        self.delivered_total = 0
        self.protocol: Optional[ProtocolTrace] = None
        if protocol_trace:
            shape = (config.total_cycles, c, config.total_beams)
            self.protocol = ProtocolTrace(
                pars=np.zeros(shape, dtype=bool),
                active=np.zeros(shape, dtype=bool),
                dli_payload=np.zeros(shape, dtype=bool),
                dli_emitted=np.zeros(shape[:2], dtype=bool),
                arrivals=[],
                delivered=[],
            )

    def step_mobility(self) -> tuple[np.ndarray, np.ndarray]:
        """Advance positions; return (old_serving, old_beams) for change flags."""
        old_serving, old_beams = self.serving, self.beams
        if len(self.positions):
            self.positions = advance_positions(
                self.positions, self.step_lengths, self.rng_mobility, self.area
            )
            self.serving = serving_cells(self.area, self.positions)
            self.beams = beams_of(self.area, self.tiling, self.positions, self.serving)
        return old_serving, old_beams

    def draw_arrivals(self, t: int) -> np.ndarray:
        """Step 2: Poisson arrivals per user, queued at the serving cell."""
        counts = draw_paging_arrivals(
            len(self.positions),
            self.config.paging_arrival_rate,
            self.config.paging_cycle_seconds,
            self.rng_traffic,
        )
        for ue in np.nonzero(counts)[0]:
            self.pending.setdefault(int(ue), []).extend([t] * int(counts[ue]))
            if self.protocol is not None:
                self.protocol.arrivals.append((t, int(ue), int(counts[ue])))
        self.arrived_total += int(counts.sum())
        if t >= self.config.warmup_cycles:
            cells = np.bincount(self.serving, weights=counts, minlength=self.area.n_cells)
            self.arrived[t - self.config.warmup_cycles] = cells.astype(np.int32)
        return counts

    def queue_by_cell(self) -> dict[int, list[tuple[int, int]]]:
        """Pending (arrival_cycle, ue) entries grouped by current serving cell."""
        out: dict[int, list[tuple[int, int]]] = {}
        for ue, arrivals in self.pending.items():
            cell = int(self.serving[ue])
            bucket = out.setdefault(cell, [])
            for a in arrivals:
                bucket.append((a, ue))
        return out

    def serve_queue_cell(self, t: int, cell: int, entries: list[tuple[int, int]],
                         beam_active: np.ndarray) -> tuple[int, int, int]:
        """Deliver up to the cap, FIFO by (arrival, ue).  Returns
        (delivered_count, selected_count, carrying_beams)."""
        entries.sort()
        selected = entries[: self.config.max_paged_per_cycle]
        carrying: set[int] = set()
        n_delivered = 0
        for arrival, ue in selected:
            b = int(self.beams[ue])
            if beam_active[b]:
                self.pending[ue].remove(arrival)
                if not self.pending[ue]:
                    del self.pending[ue]
                n_delivered += 1
                carrying.add(b)
                self.delivered_total += 1
                if self.protocol is not None:
                    self.protocol.delivered.append((t, cell, int(ue), arrival, b))
                if t >= self.config.warmup_cycles:
                    self.deliveries.append((t, cell, int(ue), arrival, t - arrival))
        return n_delivered, len(selected), len(carrying)

    def record(self, t: int, cell: int, dci: float, pdsch: float, dli: float,
               pars: int, active_count: int, delivered: int) -> None:
        if t < self.config.warmup_cycles:
            return
        i = t - self.config.warmup_cycles
        self.dl_dci[i, cell] = dci
        self.dl_pdsch[i, cell] = pdsch
        self.dl_dli[i, cell] = dli
        self.ul_par[i, cell] = pars
        self.active[i, cell] = active_count
        self.delivered[i, cell] = delivered

    def summarize(self) -> MetricsSummary:
        cfg = self.config
        cm = cfg.cost_model
        latencies = np.array([lat for *_, lat in self.deliveries], dtype=np.int64)
        n_lat = len(latencies)
        lat_mean = float(latencies.mean()) if n_lat else 0.0
        lat_max = int(latencies.max()) if n_lat else 0
        lat_zero = float((latencies == 0).mean()) if n_lat else 1.0
        ul_used = cm.par_cost(float(self.ul_par.mean())) if self.ul_par.size else 0.0
        ul_reserved = cm.par_reserved_cost(cfg.total_beams)
        dl_total = float(self.dl_dci.mean() + self.dl_pdsch.mean() + self.dl_dli.mean())
        ul_for_total = ul_used if cfg.ul_accounting == "used" else ul_reserved
        return MetricsSummary(
            scheme=cfg.scheme.label,
            measured_cycles=cfg.total_cycles - cfg.warmup_cycles,
            n_cells=self.area.n_cells,
            n_ues=len(self.positions),
            dl_dci_units=float(self.dl_dci.mean()),
            dl_pdsch_units=float(self.dl_pdsch.mean()),
            dl_dli_units=float(self.dl_dli.mean()),
            dl_total_units=dl_total,
            ul_par_count=float(self.ul_par.mean()),
            ul_par_units=ul_used,
            ul_par_reserved_units=ul_reserved,
            total_units=dl_total + ul_for_total,
            active_beams=float(self.active.mean()),
            pages_arrived=int(self.arrived.sum()),
            pages_delivered=int(self.delivered.sum()),
            pages_pending_end=self.arrived_total - self.delivered_total,
            latency_mean_cycles=lat_mean,
            latency_mean_ms=lat_mean * cfg.paging_cycle_seconds * 1000.0,
            latency_max_cycles=lat_max,
            latency_zero_fraction=lat_zero,
        )

    def result(self) -> SimulationResult:
        return SimulationResult(
            config=self.config,
            summary=self.summarize(),
            dl_dci=self.dl_dci,
            dl_pdsch=self.dl_pdsch,
            dl_dli=self.dl_dli,
            ul_par_count=self.ul_par,
            active_beams=self.active,
            pages_delivered=self.delivered,
            pages_arrived=self.arrived,
            deliveries=tuple(self.deliveries),
            protocol=self.protocol,
        )


def _run_vectorized(rt: _Runtime) -> SimulationResult:
    cfg = rt.config
    scheme = cfg.scheme
    name = scheme.name
    cm = cfg.cost_model
    n = len(rt.positions)
    n_cells = rt.area.n_cells
    b = cfg.total_beams
    n_a = cfg.activation_cycles
    rows = np.arange(n)

    believed = np.full((n, b), -1, dtype=np.int64)
    mon_remaining = np.zeros(n, dtype=np.int64)
    nm_by_ue = np.array(
        [scheme.nm_for(_CLASS_ORDER[c]) for c in rt.classes], dtype=np.int64
    ) if n else np.zeros(0, dtype=np.int64)

    remaining = np.zeros((n_cells, b), dtype=np.int64)
    activated = np.zeros((n_cells, b), dtype=bool)
    madp_active = np.zeros((n_cells, b), dtype=bool)
    all_active = np.ones(b, dtype=bool)

    for t in range(cfg.total_cycles):
        # (1) mobility + re-selection; a cell change wipes beam knowledge
        old_serving, old_beams = rt.step_mobility()
        if n:
            cell_changed = rt.serving != old_serving
            beam_changed = cell_changed | (rt.beams != old_beams)
            if cell_changed.any():
                believed[cell_changed] = -1
                mon_remaining[cell_changed] = 0
        else:
            beam_changed = np.zeros(0, dtype=bool)

        # (2) paging arrivals
        rt.draw_arrivals(t)

        # (3) user decisions
        if name is SchemeName.LEGACY or n == 0:
            par_mask = np.zeros(n, dtype=bool)
        elif name is SchemeName.MADP:
            par_mask = np.ones(n, dtype=bool)
        else:
            known = believed[rows, rt.beams] >= t
            if scheme.uses_monitoring:
                mon_remaining[known] = 0
                unknown = ~known
                entering = unknown & beam_changed
                staying = unknown & ~beam_changed
                was_monitoring = staying & (mon_remaining > 0)
                plain = staying & (mon_remaining == 0)
                mon_remaining[entering] = nm_by_ue[entering]
                par_mask = entering & (nm_by_ue == 0)
                mon_remaining[was_monitoring] -= 1
                par_mask |= was_monitoring & (mon_remaining == 0)
                par_mask |= plain
            else:
                par_mask = ~known
            if par_mask.any():
                par_idx = np.nonzero(par_mask)[0]
                believed[par_idx, rt.beams[par_idx]] = t + n_a - 1
                mon_remaining[par_idx] = 0

        par_idx = np.nonzero(par_mask)[0]
        par_per_cell = (
            np.bincount(rt.serving[par_idx], minlength=n_cells).astype(np.int64)
            if len(par_idx)
            else np.zeros(n_cells, dtype=np.int64)
        )
        if rt.protocol is not None and len(par_idx):
            rt.protocol.pars[t, rt.serving[par_idx], rt.beams[par_idx]] = True

        # (4) request collection
        if name is SchemeName.MADP:
            madp_active[:] = False
            if len(par_idx):
                madp_active[rt.serving[par_idx], rt.beams[par_idx]] = True
        elif scheme.uses_activation_timers and len(par_idx):
            keys = np.unique(rt.serving[par_idx] * b + rt.beams[par_idx])
            cells_hit, beams_hit = keys // b, keys % b
            remaining[cells_hit, beams_hit] = n_a
            activated[cells_hit, beams_hit] = True

        # (5) active-beam broadcast
        dli_units = np.zeros(n_cells)
        if scheme.emits_dli:
            emitting = activated.any(axis=1)
            if emitting.any():
                active_now = remaining > 0
                if n:
                    on_active_beam = active_now[rt.serving, rt.beams]
                    hears = on_active_beam & emitting[rt.serving]
                else:
                    hears = np.zeros(0, dtype=bool)
                for cell in np.nonzero(emitting)[0]:
                    recipients = int(active_now[cell].sum())
                    dli_units[cell] = cm.dli_cost(b, recipients)
                    listeners = np.nonzero(hears & (rt.serving == cell))[0]
                    payload = np.nonzero(activated[cell])[0]
                    if len(listeners):
                        believed[np.ix_(listeners, payload)] = t + n_a - 1
                    if rt.protocol is not None:
                        rt.protocol.dli_emitted[t, cell] = True
                        rt.protocol.dli_payload[t, cell, payload] = True

        # (6) paging sweep + delivery
        if name is SchemeName.LEGACY:
            active_cells = np.broadcast_to(all_active, (n_cells, b))
        elif name is SchemeName.MADP:
            active_cells = madp_active
        else:
            active_cells = remaining > 0
        active_counts = active_cells.sum(axis=1)
        if rt.protocol is not None:
            rt.protocol.active[t] = active_cells
        if scheme.uses_monitoring and n:
            observing = (mon_remaining > 0) & active_cells[rt.serving, rt.beams]
            if observing.any():
                obs_idx = np.nonzero(observing)[0]
                until = t + n_a - 1
                cur = believed[obs_idx, rt.beams[obs_idx]]
                believed[obs_idx, rt.beams[obs_idx]] = np.maximum(cur, until)
                mon_remaining[obs_idx] = 0

        pdsch_units = np.zeros(n_cells)
        delivered_counts = np.zeros(n_cells, dtype=np.int64)
        if rt.pending:
            queues = rt.queue_by_cell()
            for cell in sorted(queues):
                entries = queues[cell]
                n_del, n_sel, carrying = rt.serve_queue_cell(t, cell, entries, active_cells[cell])
                beams_for_cost = int(active_counts[cell]) if cfg.pdsch_on_all_active_beams else carrying
                pdsch_units[cell] = cm.pdsch_paging_cost(n_sel, beams_for_cost)
                delivered_counts[cell] = n_del

        # (7) countdown tick
        if scheme.uses_activation_timers:
            np.maximum(remaining - 1, 0, out=remaining)
            activated[:] = False
        elif name is SchemeName.MADP:
            madp_active[:] = False

        # (8) metrics
        if t >= cfg.warmup_cycles:
            for cell in range(n_cells):
                rt.record(
                    t, cell,
                    cm.paging_dci_cost(int(active_counts[cell])),
                    float(pdsch_units[cell]),
                    float(dli_units[cell]),
                    int(par_per_cell[cell]),
                    int(active_counts[cell]),
                    int(delivered_counts[cell]),
                )
    return rt.result()


def _run_reference(rt: _Runtime) -> SimulationResult:
    """Scalar backend: per-entity protocol operations, shared draws."""
    cfg = rt.config
    scheme = cfg.scheme
    cm = cfg.cost_model
    n = len(rt.positions)
    n_cells = rt.area.n_cells
    b = cfg.total_beams
    n_a = cfg.activation_cycles

    knowledge = [UePagingKnowledge() for _ in range(n)]
    mobility = [_CLASS_ORDER[c] for c in rt.classes]
    cells = [GnbBeamState.create(b, n_a) for _ in range(n_cells)]

    for t in range(cfg.total_cycles):
        old_serving, old_beams = rt.step_mobility()
        for ue in range(n):
            if rt.serving[ue] != old_serving[ue]:
                knowledge[ue].clear()

        rt.draw_arrivals(t)

        pars_by_cell: dict[int, set[int]] = {}
        par_per_cell = np.zeros(n_cells, dtype=np.int64)
        for ue in range(n):
            changed = bool(rt.serving[ue] != old_serving[ue] or rt.beams[ue] != old_beams[ue])
            decision = ue_cycle_decision(
                scheme,
                knowledge[ue],
                int(rt.beams[ue]),
                changed,
                mobility=mobility[ue],
                cycle=t,
                activation_cycles=n_a,
            )
            if decision.send_par:
                pars_by_cell.setdefault(int(rt.serving[ue]), set()).add(int(rt.beams[ue]))
                par_per_cell[rt.serving[ue]] += 1

        for cell in range(n_cells):
            gnb_collect_pars(cells[cell], pars_by_cell.get(cell, set()), scheme)

        dli_units = np.zeros(n_cells)
        if scheme.emits_dli:
            for cell in range(n_cells):
                dli = gnb_emit_dli(cells[cell], scheme)
                if dli is None:
                    continue
                dli_units[cell] = cm.dli_cost(b, dli.recipient_count)
                payload = dli.payload_beams()
                for ue in range(n):
                    if rt.serving[ue] == cell and dli.recipient_beams[rt.beams[ue]]:
                        apply_dli_refresh(knowledge[ue], payload, t, n_a)

        pdsch_units = np.zeros(n_cells)
        delivered_counts = np.zeros(n_cells, dtype=np.int64)
        active_counts = np.zeros(n_cells, dtype=np.int64)
        queues = rt.queue_by_cell()
        for cell in range(n_cells):
            active = cells[cell].active_beams(scheme)
            active_counts[cell] = int(active.sum())
            if scheme.uses_monitoring:
                for ue in range(n):
                    if (
                        rt.serving[ue] == cell
                        and knowledge[ue].monitoring_remaining > 0
                        and active[rt.beams[ue]]
                    ):
                        observe_paging_dci(knowledge[ue], int(rt.beams[ue]), t, n_a)
            entries = queues.get(cell)
            if entries:
                queue = [
                    PageQueueEntry(ue_id=ue, arrival_cycle=a, target_beam=int(rt.beams[ue]))
                    for a, ue in entries
                ]
                outcome = gnb_page(cells[cell], queue, scheme, t, cfg.max_paged_per_cycle)
                for e in outcome.delivered:
                    rt.pending[e.ue_id].remove(e.arrival_cycle)
                    if not rt.pending[e.ue_id]:
                        del rt.pending[e.ue_id]
                    rt.delivered_total += 1
                    if t >= cfg.warmup_cycles:
                        rt.deliveries.append((t, cell, e.ue_id, e.arrival_cycle, t - e.arrival_cycle))
                beams_for_cost = (
                    int(active_counts[cell]) if cfg.pdsch_on_all_active_beams
                    else outcome.carrying_beam_count
                )
                pdsch_units[cell] = cm.pdsch_paging_cost(outcome.selected_count, beams_for_cost)
                delivered_counts[cell] = len(outcome.delivered)

        for cell in range(n_cells):
            end_of_cycle(cells[cell], scheme)

        if t >= cfg.warmup_cycles:
            for cell in range(n_cells):
                rt.record(
                    t, cell,
                    cm.paging_dci_cost(int(active_counts[cell])),
                    float(pdsch_units[cell]),
                    float(dli_units[cell]),
                    int(par_per_cell[cell]),
                    int(active_counts[cell]),
                    int(delivered_counts[cell]),
                )
    return rt.result()


def run_simulation(
    config: SimConfig, backend: str = "vectorized", protocol_trace: bool = False
) -> SimulationResult:
    """Run one seeded simulation; identical config and seed give identical
    results, whichever backend executes them.

    ``protocol_trace`` additionally records per-cycle request/activity/
    broadcast sets over the whole run (vectorized backend only); meant for
    invariant checking at small scales.
    """
    if protocol_trace and backend != "vectorized":
        raise ValueError("protocol tracing is only supported on the vectorized backend")
    rt = _Runtime(config, protocol_trace=protocol_trace)
    if backend == "vectorized":
        return _run_vectorized(rt)
    if backend == "reference":
        return _run_reference(rt)
    raise ValueError(f"unknown backend {backend!r}")
