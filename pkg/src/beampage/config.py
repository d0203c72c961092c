"""Config-file handling for the experiment runner.

Configs are YAML with four optional sections (sim, costs, analytic, verify,
sweep) plus top-level seed/profile/out keys.  Every simulation constant is a
named key with the standard value as default; an unknown key or a value of the
wrong shape is a configuration error naming the field.
"""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path
from typing import Any, Optional

import yaml

from .accounting import ConfigurationError, CostModel
from .engine import SimConfig
from .experiments import AnalyticGrid, ExperimentSpec, VERIFY_GRID, default_schemes
from .protocols import SchemeKind

__all__ = ["PROFILES", "build_spec", "load_config"]

# total cycles / warmup / replications per profile
PROFILES = {
    "desk": (10_000, 1_000, 3),
    "paper": (100_000, 1_000, 1),
}

_SIM_KEYS = {
    "scheme",
    "total_beams",
    "ue_density",
    "paging_cycle_seconds",
    "total_cycles",
    "warmup_cycles",
    "activation_cycles",
    "paging_arrival_rate",
    "max_paged_per_cycle",
    "grid_rows",
    "grid_cols",
    "inter_site_distance",
    "cell_radius",
    "rings",
    "pdsch_on_all_active_beams",
    "ul_accounting",
}
_COST_KEYS = {f.name for f in fields(CostModel)}
_GRID_KEYS = {"lambdas", "total_beams", "activation_cycles", "epsilon", "trials"}
_SWEEP_KEYS = {"axis", "values", "schemes", "replications"}
_TOP_KEYS = {"seed", "profile", "out", "sim", "costs", "analytic", "verify", "sweep"}


def load_config(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"config root must be a mapping, got {type(data).__name__}")
    _check_keys(data, _TOP_KEYS, "top level")
    for section, allowed in (
        ("sim", _SIM_KEYS),
        ("costs", _COST_KEYS),
        ("analytic", _GRID_KEYS),
        ("verify", _GRID_KEYS),
        ("sweep", _SWEEP_KEYS),
    ):
        sub = data.get(section)
        if sub is None:
            continue
        if not isinstance(sub, dict):
            raise ConfigurationError(f"config section {section!r} must be a mapping")
        _check_keys(sub, allowed, section)
    return data


def _check_keys(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _parse_schemes(values) -> tuple[SchemeKind, ...]:
    if isinstance(values, str):
        values = [values]
    try:
        return tuple(SchemeKind.parse(str(v)) for v in values)
    except ValueError as err:
        raise ConfigurationError(f"schemes: {err}") from err


def _build_sim(data: dict[str, Any], seed: int, profile: str,
               scheme_override: Optional[str]) -> SimConfig:
    sim = dict(data.get("sim") or {})
    costs = data.get("costs")
    total_cycles, warmup, _ = PROFILES[profile]
    scheme_text = scheme_override or sim.pop("scheme", "legacy")
    try:
        scheme = SchemeKind.parse(str(scheme_text))
    except ValueError as err:
        raise ConfigurationError(f"sim.scheme: {err}") from err
    grid_shape = (int(sim.pop("grid_rows", 4)), int(sim.pop("grid_cols", 4)))
    kwargs: dict[str, Any] = {
        "scheme": scheme,
        "seed": seed,
        "grid_shape": grid_shape,
        "total_cycles": int(sim.pop("total_cycles", total_cycles)),
        "warmup_cycles": int(sim.pop("warmup_cycles", warmup)),
    }
    if costs:
        try:
            kwargs["cost_model"] = CostModel(**costs)
        except TypeError as err:
            raise ConfigurationError(f"costs: {err}") from err
    kwargs.update(sim)
    try:
        return SimConfig(**kwargs)
    except (TypeError, ValueError) as err:
        raise ConfigurationError(f"sim: {err}") from err


def _build_grid(section: Optional[dict[str, Any]], base: AnalyticGrid) -> AnalyticGrid:
    if not section:
        return base
    kwargs: dict[str, Any] = {}
    for key in ("lambdas", "total_beams", "activation_cycles"):
        if key in section:
            values = section[key]
            if not isinstance(values, (list, tuple)):
                values = [values]
            kwargs[key] = tuple(
                float(v) if key == "lambdas" else int(v) for v in values
            )
    if "epsilon" in section:
        kwargs["epsilon"] = float(section["epsilon"])
    if "trials" in section:
        kwargs["trials"] = int(section["trials"])
    try:
        return AnalyticGrid(**{**_grid_dict(base), **kwargs})
    except (TypeError, ValueError) as err:
        raise ConfigurationError(f"analytic grid: {err}") from err


def _grid_dict(grid: AnalyticGrid) -> dict[str, Any]:
    return {f.name: getattr(grid, f.name) for f in fields(AnalyticGrid)}


def build_spec(
    mode: str,
    config_data: Optional[dict[str, Any]] = None,
    out_dir: Optional[str | Path] = None,
    seed: Optional[int] = None,
    profile: Optional[str] = None,
    scheme: Optional[str] = None,
    jobs: int = 1,
    trace: bool = False,
    sweep_axis: Optional[str] = None,
    sweep_values: Optional[list[float]] = None,
    replications: Optional[int] = None,
) -> ExperimentSpec:
    """Merge a loaded config with CLI overrides into an experiment spec.

    Explicit arguments win over config-file values, which win over defaults.
    """
    data = config_data or {}
    profile = str(profile if profile is not None else data.get("profile", "desk"))
    if profile not in PROFILES:
        raise ConfigurationError(f"profile must be one of {sorted(PROFILES)}, got {profile!r}")
    seed = int(data.get("seed", 0)) if seed is None else int(seed)
    out_dir = Path(out_dir if out_dir is not None else data.get("out", "results"))

    sweep_cfg = dict(data.get("sweep") or {})
    reps = replications if replications is not None else int(
        sweep_cfg.get("replications", PROFILES[profile][2])
    )
    schemes = default_schemes()
    if scheme is not None:
        schemes = _parse_schemes([scheme])
    elif "schemes" in sweep_cfg:
        schemes = _parse_schemes(sweep_cfg["schemes"])

    axis = sweep_axis or str(sweep_cfg.get("axis", "ue_density"))
    if sweep_values is not None:
        values = tuple(float(v) for v in sweep_values)
    elif "values" in sweep_cfg:
        values = tuple(float(v) for v in sweep_cfg["values"])
    else:
        values = (100.0, 200.0, 300.0, 400.0, 500.0) if axis == "ue_density" else (
            16.0, 32.0, 64.0, 128.0, 256.0)

    sim = None
    if mode in ("simulate", "sweep"):
        sim = _build_sim(data, seed, profile, scheme)
        if mode == "sweep" and axis == "total_beams" and "ue_density" not in (data.get("sim") or {}):
            # Beam sweeps default to the fixed-density operating point.
            sim = _replace_density(sim, 500.0)

    grid_base = VERIFY_GRID if mode == "verify" else AnalyticGrid()
    grid = _build_grid(data.get("verify" if mode == "verify" else "analytic"), grid_base)

    return ExperimentSpec(
        mode=mode,
        out_dir=out_dir,
        sim=sim,
        analytic=grid,
        schemes=schemes,
        sweep_axis=axis,
        sweep_values=values,
        replications=reps if mode in ("simulate", "sweep") else 1,
        seed=seed,
        trace=trace,
        jobs=jobs,
    )


def _replace_density(sim: SimConfig, density: float) -> SimConfig:
    from dataclasses import replace

    return replace(sim, ue_density=density)
