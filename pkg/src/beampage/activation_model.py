"""Closed-form activation statistics for feedback-driven beam paging.

The central quantity is the expected number of beams that end up activated at
least once over a window of paging cycles, when each cycle drops a Poisson
number of users uniformly over the beams and every occupied beam gets
activated.  It is evaluated exactly by a backward dynamic program over the
count of beams already activated in later cycles, mixing the classical
occupancy distribution with Poisson-thinned user counts.

Because the per-cycle user drops are independent, the window expectation has
the independent closed form ``B * (1 - exp(-N_a * lam / B))``; the dynamic
program must reproduce it and the test suite holds it to that oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .combinatorics import surjection_count_exact, truncated_poisson

__all__ = [
    "ActivationModelParams",
    "ActivationProfile",
    "GainParams",
    "MonteCarloEstimate",
    "Pmf",
    "activation_profile",
    "conditional_active_pmf",
    "expected_par_count",
    "expected_unique_active_beams",
    "gain_factor",
    "monte_carlo_unique_beams",
]

# Joint-state masses below this are pruned (and the remainder renormalized)
# between cycles of the dynamic program.
_STATE_PRUNE = 1e-12
# Accumulated truncation loss above this triggers a precision warning.
_LOSS_WARN = 1e-6


@dataclass(frozen=True)
class Pmf:
    """Finite distribution over {0, 1, ..., support_max}; masses[k] = P{K = k}."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "masses", m)
        if m.ndim != 1 or len(m) == 0:
            raise ValueError("masses must be a non-empty 1-d array")
        if (m < 0).any():
            raise ValueError("masses must be non-negative")
        total = float(m.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"masses must sum to 1 within 1e-9, got {total}")

    @property
    def support_max(self) -> int:
        return len(self.masses) - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.masses)), self.masses))


@dataclass(frozen=True)
class ActivationModelParams:
    """Inputs of the activation model.

    ue_density_lambda: mean users per cell per paging cycle.
    total_beams: downlink transmit beams at the base station.
    activation_cycles: window length, in paging cycles.
    epsilon: Poisson truncation tail bound.
    cell_radius_m: geometric cell radius; carried for the Monte Carlo
        verifier's documentation only, the statistics do not depend on it
        because per-cycle drops assign beams uniformly.
    """

    ue_density_lambda: float
    total_beams: int
    activation_cycles: int
    epsilon: float = 1e-9
    cell_radius_m: float = 100.0

    def __post_init__(self):
        if self.total_beams < 1:
            raise ValueError(f"total_beams must be >= 1, got {self.total_beams}")
        if self.activation_cycles < 1:
            raise ValueError(f"activation_cycles must be >= 1, got {self.activation_cycles}")
        if not math.isfinite(self.ue_density_lambda) or self.ue_density_lambda < 0:
            raise ValueError(f"ue_density_lambda must be finite and >= 0, got {self.ue_density_lambda}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def conditional_active_pmf(unactivated_beams: int, ue_count: int) -> Pmf:
    """Distribution of newly occupied beams given ``ue_count`` users dropped
    uniformly over ``unactivated_beams`` beams.

    P{n} = C(n_u, n) * surjections(n, u) / n_u**u on 1 <= n <= min(u, n_u),
    degenerate at 0 when no user is present.
    """
    n_u, u = unactivated_beams, ue_count
    if u < 0:
        raise ValueError(f"ue_count must be >= 0, got {u}")
    if n_u < 0:
        raise ValueError(f"unactivated_beams must be >= 0, got {n_u}")
    if n_u == 0:
        if u > 0:
            raise ValueError("users present but no beam available to receive them")
        return Pmf(np.array([1.0]))
    if u == 0:
        return Pmf(np.array([1.0]))
    n_hi = min(u, n_u)
    log_den = u * math.log(n_u)
    masses = np.zeros(n_hi + 1)
    for n in range(1, n_hi + 1):
        log_num = math.log(math.comb(n_u, n)) + math.log(surjection_count_exact(n, u))
        masses[n] = math.exp(log_num - log_den)
    return Pmf(masses)


# Conditional rows are shared across every lambda and window length, so cache
# them module-wide keyed by (unactivated beams, user count).
_cond_cache: dict[tuple[int, int], np.ndarray] = {}


def _conditional_row(n_u: int, u: int) -> np.ndarray:
    row = _cond_cache.get((n_u, u))
    if row is None:
        row = conditional_active_pmf(n_u, u).masses
        _cond_cache[(n_u, u)] = row
    return row


def _newly_active_marginal(lam_i: float, n_u: int, epsilon: float) -> np.ndarray:
    """Distribution of newly activated beams for one cycle, user count mixed
    over Poisson(lam_i), renormalized over the kept Poisson support."""
    if n_u == 0 or lam_i == 0.0:
        out = np.zeros(n_u + 1)
        out[0] = 1.0
        return out
    pois = truncated_poisson(lam_i, epsilon)
    out = np.zeros(n_u + 1)
    for u, pu in enumerate(pois.masses):
        row = _conditional_row(n_u, u)
        out[: len(row)] += pu * row
    out /= out.sum()
    return out


@dataclass(frozen=True)
class ActivationProfile:
    """Per-cycle expectations of uniquely activated beams and their total.

    ``per_cycle[i]`` is the expected number of beams activated in cycle i+1
    (1-based) and in none of the later cycles of the window; the entries sum
    to ``n_bar``, the expected size of the union of occupied beams.
    ``lost_mass`` accumulates probability dropped by truncation and pruning.
    """

    per_cycle: tuple[float, ...]
    n_bar: float
    lost_mass: float


def activation_profile(params: ActivationModelParams) -> ActivationProfile:
    """Backward dynamic program over cycles.

    Cycles are processed from the last one toward the first; the state is the
    number of beams already activated in the cycles processed so far.  A beam
    counts for cycle i only if no later cycle touched it, so each step draws
    the newly occupied beams among the remaining ones, with the user count
    thinned to Poisson(lam * remaining / total).
    """
    b = params.total_beams
    lam = params.ue_density_lambda
    dist = np.zeros(b + 1)
    dist[0] = 1.0
    lost = 0.0
    per_cycle_rev: list[float] = []
    marginals: dict[int, np.ndarray] = {}
    for _ in range(params.activation_cycles):
        new = np.zeros(b + 1)
        e_new = 0.0
        for a in np.nonzero(dist)[0]:
            w = dist[a]
            n_u = b - int(a)
            marg = marginals.get(n_u)
            if marg is None:
                marg = _newly_active_marginal(lam * n_u / b, n_u, params.epsilon)
                marginals[n_u] = marg
            e_new += w * float(np.dot(np.arange(len(marg)), marg))
            new[a : a + len(marg)] += w * marg
        tiny = new < _STATE_PRUNE
        lost += float(new[tiny].sum())
        new[tiny] = 0.0
        new /= new.sum()
        per_cycle_rev.append(e_new)
        dist = new
    lost += params.epsilon * params.activation_cycles  # Poisson tails, renormalized away
    if lost > _LOSS_WARN:
        warnings.warn(
            f"truncation removed {lost:.3e} probability mass; tighten epsilon for more precision",
            stacklevel=2,
        )
    per_cycle = tuple(reversed(per_cycle_rev))
    return ActivationProfile(per_cycle=per_cycle, n_bar=float(sum(per_cycle_rev)), lost_mass=lost)


def expected_unique_active_beams(params: ActivationModelParams) -> float:
    """Expected number of distinct beams activated over the window."""
    return activation_profile(params).n_bar


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    trials: int


def monte_carlo_unique_beams(
    params: ActivationModelParams, trials: int, seed: int
) -> MonteCarloEstimate:
    """Empirical mean of the union of occupied beams over the window.

    Each trial draws ``activation_cycles`` independent user drops: a Poisson
    user count, each user assigned a uniform beam.  Deterministic given seed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    b = params.total_beams
    draws = rng.poisson(params.ue_density_lambda, size=(trials, params.activation_cycles))
    per_trial = draws.sum(axis=1)
    beams = rng.integers(0, b, size=int(per_trial.sum()))
    trial_idx = np.repeat(np.arange(trials), per_trial)
    occupied = np.zeros((trials, b), dtype=bool)
    occupied[trial_idx, beams] = True
    counts = occupied.sum(axis=1).astype(float)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MonteCarloEstimate(mean=mean, stderr=stderr, trials=trials)


@dataclass(frozen=True)
class GainParams:
    """Resource prices entering the downlink saving factor.

    dl_resources_per_beam: resource units spent per beam over the window.
    ul_resources_per_par: resource units reserved per presence request.
    """

    dl_resources_per_beam: float
    ul_resources_per_par: float
    total_beams: int
    activation_cycles: int

    def __post_init__(self):
        if self.dl_resources_per_beam <= 0:
            raise ValueError("dl_resources_per_beam must be > 0")
        if self.ul_resources_per_par < 0:
            raise ValueError("ul_resources_per_par must be >= 0")
        if self.total_beams < 1 or self.activation_cycles < 1:
            raise ValueError("total_beams and activation_cycles must be >= 1")


def gain_factor(gp: GainParams, n_bar: float) -> float:
    """Fractional resource saving versus sweeping every beam.

    1 - (R_D * n_bar + R_U * B * N_a) / (R_D * B); at most 1, and exactly 0
    when every beam is active and uplink requests are free.
    """
    if not 0 <= n_bar <= gp.total_beams:
        raise ValueError(f"n_bar must lie in [0, {gp.total_beams}], got {n_bar}")
    num = gp.dl_resources_per_beam * n_bar + gp.ul_resources_per_par * gp.total_beams * gp.activation_cycles
    return 1.0 - num / (gp.dl_resources_per_beam * gp.total_beams)


def expected_par_count(total_beams: int, activation_cycles: int) -> float:
    """Expected presence requests per user over the window, when the user can
    track at most one beam's activation and redraws its beam uniformly each
    cycle.

    1 + sum_j j * C(N_a-1, j) * (1 - 1/B)^j * (1/B)^(N_a-1-j); equals
    1 + (N_a - 1) * (1 - 1/B) by the binomial mean.
    """
    if total_beams < 1:
        raise ValueError(f"total_beams must be >= 1, got {total_beams}")
    if activation_cycles < 1:
        raise ValueError(f"activation_cycles must be >= 1, got {activation_cycles}")
    b, n_a = total_beams, activation_cycles
    p_switch = 1.0 - 1.0 / b
    total = 1.0
    for j in range(1, n_a):
        total += j * math.comb(n_a - 1, j) * p_switch**j * (1.0 / b) ** (n_a - 1 - j)
    return total
