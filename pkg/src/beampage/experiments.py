"""Reproducible experiment runner: parameter grids, CSV emission, comparisons.

Result files share one flat schema, one row per (configuration, metric):

    experiment_id, mode, scheme, total_beams, ue_density, lambda_p,
    activation_cycles, nm_stationary, nm_low, nm_high, seed, metric, value,
    stderr

Simulation experiments emit one row block per seed plus an aggregate block
(``seed = mean``) carrying the across-seed standard error.  Analytic rows are
deterministic and carry no seed.  The first line of every file is a timestamped
comment; everything after it is byte-reproducible for a fixed config and seed.
"""

from __future__ import annotations

import csv
import datetime
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .accounting import ConfigurationError
from .activation_model import (
    ActivationModelParams,
    GainParams,
    activation_profile,
    expected_par_count,
    gain_factor,
    monte_carlo_unique_beams,
)
from .engine import SimConfig, SimulationResult, run_simulation
from .protocols import SchemeKind

__all__ = [
    "AnalyticGrid",
    "CSV_COLUMNS",
    "ExperimentSpec",
    "ResultRow",
    "SIM_METRICS",
    "compare_to_baseline",
    "default_schemes",
    "read_results_csv",
    "run_experiment",
    "write_results_csv",
]

CSV_COLUMNS = (
    "experiment_id",
    "mode",
    "scheme",
    "total_beams",
    "ue_density",
    "lambda_p",
    "activation_cycles",
    "nm_stationary",
    "nm_low",
    "nm_high",
    "seed",
    "metric",
    "value",
    "stderr",
)

# Fixed metric registry; CSV rows never carry names outside these sets.
SIM_METRICS = (
    "dl_dci_units",
    "dl_pdsch_units",
    "dl_dli_units",
    "dl_total_units",
    "ul_par_count",
    "ul_par_units",
    "ul_par_reserved_units",
    "total_units",
    "active_beams",
    "pages_arrived",
    "pages_delivered",
    "pages_pending_end",
    "latency_mean_cycles",
    "latency_mean_ms",
    "latency_max_cycles",
    "latency_zero_fraction",
)
ANALYTIC_METRICS = ("n_bar", "gain_factor", "par_per_ue", "par_total")
VERIFY_METRICS = ("n_bar_analytic", "n_bar_mc", "z_score")
REDUCTION_METRICS = ("resource_reduction_pct", "par_reduction_pct")

SWEEPABLE = ("ue_density", "total_beams")


def default_schemes() -> tuple[SchemeKind, ...]:
    return (
        SchemeKind.legacy(),
        SchemeKind.madp(),
        SchemeKind.mfep_ad(),
        SchemeKind.mfep_dli(),
        SchemeKind.mfep_md(4, 2, 0),
        SchemeKind.mfep_md(6, 3, 0),
    )


@dataclass(frozen=True)
class AnalyticGrid:
    """Evaluation grid of the closed-form model."""

    lambdas: tuple[float, ...] = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0)
    total_beams: tuple[int, ...] = (16, 32, 64)
    activation_cycles: tuple[int, ...] = (3,)
    epsilon: float = 1e-9
    trials: int = 10_000  # Monte Carlo trials in verify mode

    def __post_init__(self):
        if not self.lambdas or not self.total_beams or not self.activation_cycles:
            raise ConfigurationError("analytic grid axes must be non-empty")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")


VERIFY_GRID = AnalyticGrid(
    lambdas=(1.0, 8.0, 32.0, 128.0),
    total_beams=(4, 16, 64),
    activation_cycles=(1, 2, 3),
)


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment invocation.

    ``mode`` selects analytic evaluation, model verification, a single
    simulation, or a parameter sweep; the sweep axis must name a simulation
    parameter from SWEEPABLE.
    """

    mode: str
    out_dir: Path
    sim: Optional[SimConfig] = None
    analytic: AnalyticGrid = field(default_factory=AnalyticGrid)
    schemes: tuple[SchemeKind, ...] = field(default_factory=default_schemes)
    sweep_axis: str = "ue_density"
    sweep_values: tuple[float, ...] = (100.0, 200.0, 300.0, 400.0, 500.0)
    replications: int = 3
    seed: int = 0
    trace: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("analytic", "verify", "simulate", "sweep"):
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.mode in ("simulate", "sweep") and self.sim is None:
            raise ConfigurationError(f"mode {self.mode!r} needs a simulation config")
        if self.mode == "sweep":
            if self.sweep_axis not in SWEEPABLE:
                raise ConfigurationError(
                    f"sweep axis must be one of {SWEEPABLE}, got {self.sweep_axis!r}"
                )
            if not self.sweep_values:
                raise ConfigurationError("sweep values must be non-empty")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    experiment_id: str
    mode: str
    scheme: str
    total_beams: int
    ue_density: float
    lambda_p: float
    activation_cycles: int
    nm_stationary: int
    nm_low: int
    nm_high: int
    seed: str  # per-run seed, "mean" for aggregates, "" for deterministic rows
    metric: str
    value: float
    stderr: Optional[float] = None

    def to_csv(self) -> list[str]:
        return [
            self.experiment_id,
            self.mode,
            self.scheme,
            str(self.total_beams),
            _fmt(self.ue_density),
            _fmt(self.lambda_p),
            str(self.activation_cycles),
            str(self.nm_stationary),
            str(self.nm_low),
            str(self.nm_high),
            self.seed,
            self.metric,
            _fmt(self.value),
            "" if self.stderr is None else _fmt(self.stderr),
        ]

    def config_key(self) -> tuple:
        """Everything identifying the configuration except scheme and seed."""
        return (self.total_beams, self.ue_density, self.lambda_p, self.activation_cycles)


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def write_results_csv(path: Path, rows: Iterable[ResultRow]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# beampage results, generated {datetime.datetime.now().isoformat()}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.to_csv())
            fh.flush()
    return path


def read_results_csv(path: Path) -> list[ResultRow]:
    rows: list[ResultRow] = []
    with open(path, newline="") as fh:
        lines = (ln for ln in fh if not ln.startswith("#"))
        reader = csv.DictReader(lines)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ConfigurationError(f"results file {path} lacks columns: {', '.join(missing)}")
        for rec in reader:
            rows.append(
                ResultRow(
                    experiment_id=rec["experiment_id"],
                    mode=rec["mode"],
                    scheme=rec["scheme"],
                    total_beams=int(rec["total_beams"]),
                    ue_density=float(rec["ue_density"]),
                    lambda_p=float(rec["lambda_p"]),
                    activation_cycles=int(rec["activation_cycles"]),
                    nm_stationary=int(rec["nm_stationary"]),
                    nm_low=int(rec["nm_low"]),
                    nm_high=int(rec["nm_high"]),
                    seed=rec["seed"],
                    metric=rec["metric"],
                    value=float(rec["value"]),
                    stderr=float(rec["stderr"]) if rec["stderr"] else None,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Row builders
# ---------------------------------------------------------------------------


def _sim_rows(spec_mode: str, cfg: SimConfig, result: SimulationResult) -> list[ResultRow]:
    exp_id = _sim_id(spec_mode, cfg)
    nm = cfg.scheme.monitoring_cycles
    return [
        ResultRow(
            experiment_id=exp_id,
            mode=spec_mode,
            scheme=cfg.scheme.label,
            total_beams=cfg.total_beams,
            ue_density=cfg.ue_density,
            lambda_p=cfg.paging_arrival_rate,
            activation_cycles=cfg.activation_cycles,
            nm_stationary=nm[0],
            nm_low=nm[1],
            nm_high=nm[2],
            seed=str(cfg.seed),
            metric=name,
            value=value,
        )
        for name, value in result.summary.metric_values().items()
    ]


def _sim_id(mode: str, cfg: SimConfig, seed: object | None = None) -> str:
    seed_part = cfg.seed if seed is None else seed
    return (
        f"{mode}-{cfg.scheme.label}-B{cfg.total_beams}-d{_fmt(cfg.ue_density)}"
        f"-lp{_fmt(cfg.paging_arrival_rate)}-Na{cfg.activation_cycles}-s{seed_part}"
    )


def _aggregate_rows(per_seed: list[list[ResultRow]]) -> list[ResultRow]:
    """Across-seed mean and standard error, one row per metric."""
    if not per_seed:
        return []
    byname: dict[str, list[ResultRow]] = {}
    for block in per_seed:
        for row in block:
            byname.setdefault(row.metric, []).append(row)
    out = []
    for metric, rows in byname.items():
        vals = np.array([r.value for r in rows], dtype=float)
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        proto = rows[0]
        out.append(
            replace(
                proto,
                experiment_id=proto.experiment_id.rsplit("-s", 1)[0] + "-smean",
                seed="mean",
                value=mean,
                stderr=se,
            )
        )
    return out


def _run_one(args: tuple[str, SimConfig]) -> tuple[SimConfig, SimulationResult]:
    mode, cfg = args
    return cfg, run_simulation(cfg)


def _trace_path(out_dir: Path, exp_id: str) -> Path:
    return Path(out_dir) / f"trace_{exp_id}.csv"


def _write_trace(path: Path, result: SimulationResult) -> None:
    cfg = result.config
    with open(path, "w", newline="") as fh:
        fh.write(f"# beampage trace, generated {datetime.datetime.now().isoformat()}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["cycle", "cell", "dl_dci_units", "dl_pdsch_units", "dl_dli_units",
             "ul_par_count", "active_beams", "pages_arrived", "pages_delivered"]
        )
        for i in range(result.dl_dci.shape[0]):
            cycle = cfg.warmup_cycles + i
            for cell in range(result.dl_dci.shape[1]):
                writer.writerow(
                    [
                        cycle,
                        cell,
                        _fmt(float(result.dl_dci[i, cell])),
                        _fmt(float(result.dl_pdsch[i, cell])),
                        _fmt(float(result.dl_dli[i, cell])),
                        int(result.ul_par_count[i, cell]),
                        int(result.active_beams[i, cell]),
                        int(result.pages_arrived[i, cell]),
                        int(result.pages_delivered[i, cell]),
                    ]
                )


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------


def _analytic_rows(spec: ExperimentSpec, verify: bool) -> tuple[list[ResultRow], list[str]]:
    grid = spec.analytic
    rows: list[ResultRow] = []
    table: list[str] = []
    idx = 0
    for n_a in grid.activation_cycles:
        for beams in grid.total_beams:
            k_bar = expected_par_count(beams, n_a)
            for lam in grid.lambdas:
                params = ActivationModelParams(
                    ue_density_lambda=lam,
                    total_beams=beams,
                    activation_cycles=n_a,
                    epsilon=grid.epsilon,
                )
                prof = activation_profile(params)
                exp_id = f"{'verify' if verify else 'analytic'}-B{beams}-lam{_fmt(lam)}-Na{n_a}"
                base = dict(
                    experiment_id=exp_id,
                    mode="verify" if verify else "analytic",
                    scheme="analytic",
                    total_beams=beams,
                    ue_density=lam,
                    lambda_p=0.0,
                    activation_cycles=n_a,
                    nm_stationary=0,
                    nm_low=0,
                    nm_high=0,
                    seed="",
                )
                if verify:
                    mc_seed = (spec.seed * 1_000_003 + idx) % (2**63)
                    est = monte_carlo_unique_beams(params, trials=grid.trials, seed=mc_seed)
                    z = (est.mean - prof.n_bar) / est.stderr if est.stderr > 0 else 0.0
                    rows.append(ResultRow(**base, metric="n_bar_analytic", value=prof.n_bar))
                    rows.append(
                        ResultRow(**base, metric="n_bar_mc", value=est.mean, stderr=est.stderr)
                    )
                    rows.append(ResultRow(**base, metric="z_score", value=z))
                    table.append(
                        f"lam={lam:<6g} B={beams:<4d} Na={n_a}  analytic={prof.n_bar:10.4f}  "
                        f"mc={est.mean:10.4f} +-{est.stderr:8.4f}  z={z:+6.2f}"
                    )
                else:
                    gp = GainParams(
                        dl_resources_per_beam=48.0 * n_a,
                        ul_resources_per_par=2.0 / 12.0,
                        total_beams=beams,
                        activation_cycles=n_a,
                    )
                    rows.append(ResultRow(**base, metric="n_bar", value=prof.n_bar))
                    rows.append(
                        ResultRow(**base, metric="gain_factor", value=gain_factor(gp, prof.n_bar))
                    )
                    rows.append(ResultRow(**base, metric="par_per_ue", value=k_bar))
                    rows.append(ResultRow(**base, metric="par_total", value=lam * k_bar))
                    table.append(
                        f"lam={lam:<6g} B={beams:<4d} Na={n_a}  n_bar={prof.n_bar:10.4f}  "
                        f"gain={gain_factor(gp, prof.n_bar):8.4f}  par_total={lam * k_bar:10.4f}"
                    )
                idx += 1
    return rows, table


def _sim_run_configs(spec: ExperimentSpec) -> list[SimConfig]:
    base = spec.sim
    assert base is not None
    configs: list[SimConfig] = []
    if spec.mode == "simulate":
        values: Sequence[tuple[str, float]] = [("", 0.0)]
    else:
        values = [(spec.sweep_axis, v) for v in spec.sweep_values]
    for scheme in spec.schemes:
        for axis, value in values:
            cfg = replace(base, scheme=scheme)
            if axis == "ue_density":
                cfg = replace(cfg, ue_density=float(value))
            elif axis == "total_beams":
                cfg = replace(cfg, total_beams=int(value))
            for rep in range(spec.replications):
                configs.append(replace(cfg, seed=spec.seed + rep))
    return configs


def run_experiment(spec: ExperimentSpec) -> tuple[Path, list[str]]:
    """Execute the experiment; returns (results csv path, human summary lines).

    Rows are flushed as each run completes, so partial output survives an
    interrupted grid.
    """
    out_dir = Path(spec.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as err:
        raise ConfigurationError(f"output path {out_dir} is not writable: {err}") from err

    if spec.mode in ("analytic", "verify"):
        rows, table = _analytic_rows(spec, verify=spec.mode == "verify")
        path = write_results_csv(out_dir / f"{spec.mode}.csv", rows)
        return path, table

    configs = _sim_run_configs(spec)
    path = out_dir / f"{spec.mode}.csv"
    table: list[str] = []
    blocks: dict[tuple, list[list[ResultRow]]] = {}
    order: list[tuple] = []
    with open(path, "w", newline="") as fh:
        fh.write(f"# beampage results, generated {datetime.datetime.now().isoformat()}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)

        def consume(cfg: SimConfig, result: SimulationResult) -> None:
            rows = _sim_rows(spec.mode, cfg, result)
            for row in rows:
                writer.writerow(row.to_csv())
            fh.flush()
            key = (cfg.scheme.label, cfg.total_beams, cfg.ue_density,
                   cfg.paging_arrival_rate, cfg.activation_cycles)
            if key not in blocks:
                blocks[key] = []
                order.append(key)
            blocks[key].append(rows)
            s = result.summary
            table.append(
                f"{cfg.scheme.label:>14s} B={cfg.total_beams:<4d} density={_fmt(cfg.ue_density):>5s} "
                f"seed={cfg.seed:<3d} total={s.total_units:10.2f} pars={s.ul_par_count:8.3f} "
                f"latency={s.latency_mean_cycles:7.4f}cy"
            )
            if spec.trace:
                _write_trace(_trace_path(out_dir, _sim_id(spec.mode, cfg)), result)

        if spec.jobs > 1:
            with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
                for cfg, result in pool.map(_run_one, [(spec.mode, c) for c in configs]):
                    consume(cfg, result)
        else:
            for cfg in configs:
                consume(cfg, run_simulation(cfg))

        for key in order:
            for row in _aggregate_rows(blocks[key]):
                writer.writerow(row.to_csv())
        fh.flush()
    return path, table


# ---------------------------------------------------------------------------
# Baseline comparison
# ---------------------------------------------------------------------------

_DEFAULT_COMPARE_METRIC = {"legacy": "total_units", "madp": "ul_par_count"}


def compare_to_baseline(
    rows: Sequence[ResultRow],
    baseline_scheme: str,
    metric: Optional[str] = None,
    out_path: Optional[Path] = None,
) -> list[ResultRow]:
    """Percentage reduction of ``metric`` versus a baseline scheme.

    Reductions are computed on aggregate rows (per-seed means) at matching
    configurations; a configuration without baseline coverage is an error
    naming it.  Output keeps the schema, with metric
    ``{resource,par}_reduction_pct_vs_<baseline>``.
    """
    baseline_scheme = baseline_scheme.lower()
    if metric is None:
        metric = _DEFAULT_COMPARE_METRIC.get(baseline_scheme, "total_units")
    pool = [r for r in rows if r.metric == metric and r.seed == "mean"]
    if not pool:  # single-seed files carry no aggregates; fall back to per-seed rows
        pool = [r for r in rows if r.metric == metric]
    base_by_key = {r.config_key(): r for r in pool if r.scheme == baseline_scheme}
    reduction_name = (
        f"par_reduction_pct_vs_{baseline_scheme}"
        if metric == "ul_par_count"
        else f"resource_reduction_pct_vs_{baseline_scheme}"
    )
    out: list[ResultRow] = []
    for r in pool:
        base = base_by_key.get(r.config_key())
        if base is None:
            raise ConfigurationError(
                f"no {baseline_scheme} baseline at config "
                f"B={r.total_beams} density={_fmt(r.ue_density)} lambda_p={_fmt(r.lambda_p)} "
                f"Na={r.activation_cycles}"
            )
        pct = 0.0 if base.value == 0 else (1.0 - r.value / base.value) * 100.0
        out.append(
            replace(
                r,
                experiment_id=f"compare-{r.scheme}-vs-{baseline_scheme}-"
                + r.experiment_id.split("-", 1)[-1],
                mode="compare",
                metric=reduction_name,
                value=pct,
                stderr=None,
            )
        )
    if out_path is not None:
        write_results_csv(Path(out_path), out)
    return out
