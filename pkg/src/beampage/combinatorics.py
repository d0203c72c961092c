"""Counting primitives behind the beam-occupancy statistics.

Everything is exact at heart: surjection counts and binomial coefficients are
evaluated with Python big integers and only then moved to log domain, so the
probability formulas built on top never see 64-bit overflow (``n**u`` already
overflows a machine word at n=64, u=11) or cancellation artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "LogCount",
    "TruncatedPoisson",
    "log_binomial",
    "surjection_count",
    "surjection_count_exact",
    "truncated_poisson",
]


@dataclass(frozen=True)
class LogCount:
    """A non-negative integer count stored as its natural logarithm.

    ``zero_flag`` marks an exact zero, which has no logarithm; ``value`` is
    pinned to ``-inf`` in that case.
    """

    value: float
    zero_flag: bool = False

    @classmethod
    def from_int(cls, count: int) -> "LogCount":
        if count < 0:
            raise ValueError(f"count must be non-negative, got {count}")
        if count == 0:
            return cls(value=float("-inf"), zero_flag=True)
        return cls(value=math.log(count), zero_flag=False)

    def __float__(self) -> float:
        if self.zero_flag:
            return 0.0
        try:
            return math.exp(self.value)
        except OverflowError:
            return float("inf")


@lru_cache(maxsize=None)
def surjection_count_exact(n: int, u: int) -> int:
    """Ways to place ``u`` labelled items into ``n`` labelled bins, no bin empty.

    Peels off placements that only hit a strict subset of the bins:
    ``S(n, u) = n**u - sum_{k<n} C(n, k) * S(k, u)``.  The subtraction is done
    on big integers, so the result is exact for any argument size.
    """
    if n < 1:
        raise ValueError(f"bin count must be >= 1, got {n}")
    if u < 0:
        raise ValueError(f"item count must be >= 0, got {u}")
    if u < n:
        return 0
    if n == 1:
        return 1
    total = n**u
    for k in range(1, n):
        total -= math.comb(n, k) * surjection_count_exact(k, u)
    return total


def surjection_count(n: int, u: int) -> LogCount:
    """Log-domain surjection count; zero exactly when ``u < n``."""
    return LogCount.from_int(surjection_count_exact(n, u))


def log_binomial(n: int, k: int) -> LogCount:
    """Log of C(n, k).  Rejects k > n rather than returning zero."""
    if n < 0 or k < 0:
        raise ValueError(f"arguments must be non-negative, got n={n}, k={k}")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    return LogCount.from_int(math.comb(n, k))


@dataclass(frozen=True)
class TruncatedPoisson:
    """Poisson law truncated to the smallest prefix holding mass >= 1 - epsilon.

    ``masses[k]`` is P{K = k} for k starting at 0; ``tail_mass`` is whatever
    probability lies beyond the kept support.
    """

    mean: float
    masses: np.ndarray
    tail_mass: float

    @property
    def support_max(self) -> int:
        return len(self.masses) - 1


def truncated_poisson(mean: float, epsilon: float = 1e-9) -> TruncatedPoisson:
    """Truncate Poisson(mean) keeping the shortest prefix with mass >= 1 - epsilon."""
    if not math.isfinite(mean):
        raise ValueError(f"mean must be finite, got {mean}")
    if mean < 0:
        raise ValueError(f"mean must be >= 0, got {mean}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if mean == 0:
        return TruncatedPoisson(mean=0.0, masses=np.array([1.0]), tail_mass=0.0)

    target = 1.0 - epsilon
    # Hard stop far beyond where the mass target can possibly bind; protects
    # against epsilon below float resolution of the cumulative sum.
    k_cap = int(mean + 40.0 * math.sqrt(mean) + 200.0)
    masses: list[float] = []
    total = 0.0
    if mean < 700.0:  # exp(-mean) representable: cheap ratio recurrence
        p = math.exp(-mean)
        k = 0
        while total < target and k <= k_cap:
            masses.append(p)
            total += p
            k += 1
            p *= mean / k
    else:  # term-by-term in log domain
        log_mean = math.log(mean)
        k = 0
        while total < target and k <= k_cap:
            p = math.exp(k * log_mean - mean - math.lgamma(k + 1))
            masses.append(p)
            total += p
            k += 1
    return TruncatedPoisson(mean=mean, masses=np.asarray(masses), tail_mass=max(0.0, 1.0 - total))
