import math

import numpy as np
import pytest

from beampage.combinatorics import (
    LogCount,
    log_binomial,
    surjection_count,
    surjection_count_exact,
    truncated_poisson,
)


def surjections_inclusion_exclusion(n: int, u: int) -> int:
    """Independent oracle: sum_k (-1)^k C(n,k) (n-k)^u on big integers."""
    return sum((-1) ** k * math.comb(n, k) * (n - k) ** u for k in range(n + 1))


def binomial_pascal(n: int, k: int) -> int:
    """Independent oracle: Pascal-triangle build, no factorials."""
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


class TestSurjectionCount:
    def test_single_bin_always_surjective(self):
        assert surjection_count_exact(1, 5) == 1
        assert float(surjection_count(1, 5)) == 1.0

    def test_fewer_items_than_bins_is_zero(self):
        lc = surjection_count(2, 1)
        assert lc.zero_flag
        assert float(lc) == 0.0

    def test_three_onto_three(self):
        # Oracle: 3! distinct bijections.
        assert surjections_inclusion_exclusion(3, 3) == 6
        assert surjection_count_exact(3, 3) == 6

    def test_three_onto_two(self):
        # Oracle: 2^3 - 2 = 6.
        assert surjections_inclusion_exclusion(2, 3) == 6
        assert surjection_count_exact(2, 3) == 6

    def test_matches_inclusion_exclusion_exactly(self):
        for n in range(1, 9):
            for u in range(0, 13):
                assert surjection_count_exact(n, u) == surjections_inclusion_exclusion(n, u), (n, u)

    def test_zero_exactly_when_u_below_n(self):
        for n in range(1, 9):
            for u in range(0, 13):
                assert (surjection_count_exact(n, u) == 0) == (u < n)

    def test_total_placement_identity(self):
        # Partitioning n^u placements by the set of occupied bins.
        for n in range(1, 9):
            for u in range(1, 13):
                total = sum(
                    math.comb(n, m) * surjection_count_exact(m, u) for m in range(1, min(u, n) + 1)
                )
                assert total == n**u, (n, u)

    def test_log_value_reproduces_exact_count(self):
        # Counts below 2^53 must round-trip through the log representation.
        for n in range(1, 9):
            for u in range(n, 13):
                exact = surjection_count_exact(n, u)
                if exact >= 2**53:
                    continue
                approx = float(surjection_count(n, u))
                assert abs(approx - exact) <= 1e-12 * exact

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            surjection_count_exact(0, 3)
        with pytest.raises(ValueError):
            surjection_count_exact(2, -1)


class TestLogBinomial:
    def test_choose_zero(self):
        assert float(log_binomial(5, 0)) == 1.0
        assert log_binomial(5, 0).value == 0.0

    def test_six_choose_three(self):
        assert binomial_pascal(6, 3) == 20
        assert abs(float(log_binomial(6, 3)) - 20.0) < 20.0 * 1e-12

    def test_sixty_four_choose_one(self):
        assert abs(log_binomial(64, 1).value - math.log(64)) < 1e-15

    def test_exact_against_pascal_up_to_60(self):
        for n in range(0, 61, 5):
            for k in range(0, n + 1):
                exact = binomial_pascal(n, k)
                approx = float(log_binomial(n, k))
                assert abs(approx - exact) <= 1e-12 * exact

    def test_rejects_k_above_n(self):
        with pytest.raises(ValueError):
            log_binomial(3, 4)


class TestTruncatedPoisson:
    def test_zero_mean_degenerate(self):
        tp = truncated_poisson(0.0, 1e-9)
        assert tp.masses.tolist() == [1.0]
        assert tp.tail_mass == 0.0

    def test_unit_mean_mass_at_zero(self):
        tp = truncated_poisson(1.0, 1e-9)
        assert abs(tp.masses[0] - math.exp(-1.0)) < 1e-15

    def test_large_mean_mass_coverage(self):
        tp = truncated_poisson(200.0, 1e-9)
        assert tp.masses.sum() >= 1.0 - 1e-9

    def test_mass_plus_tail_is_one(self):
        for mean in (0.0, 0.3, 1.0, 7.5, 64.0, 200.0, 900.0):
            tp = truncated_poisson(mean, 1e-9)
            assert abs(tp.masses.sum() + tp.tail_mass - 1.0) <= 1e-12

    def test_tail_bounded_by_epsilon(self):
        for eps in (1e-6, 1e-9, 1e-12):
            tp = truncated_poisson(32.0, eps)
            assert tp.tail_mass <= eps

    def test_support_is_smallest_prefix(self):
        tp = truncated_poisson(5.0, 1e-6)
        # Dropping the last kept term must fall below the coverage target.
        assert tp.masses[:-1].sum() < 1.0 - 1e-6 <= tp.masses.sum()

    def test_masses_nonnegative_and_unimodal(self):
        for mean in (0.5, 1.0, 3.7, 12.0, 150.0):
            tp = truncated_poisson(mean, 1e-9)
            assert (tp.masses >= 0).all()
            diffs = np.sign(np.diff(tp.masses))
            # Once the sequence starts decreasing it never increases again.
            falling = False
            for d in diffs:
                if d < 0:
                    falling = True
                elif d > 0:
                    assert not falling, f"mode not unique for mean={mean}"
            mode = int(np.argmax(tp.masses))
            assert abs(mode - math.floor(mean)) <= 1

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            truncated_poisson(float("nan"), 1e-9)
        with pytest.raises(ValueError):
            truncated_poisson(float("inf"), 1e-9)
        with pytest.raises(ValueError):
            truncated_poisson(-1.0, 1e-9)
        with pytest.raises(ValueError):
            truncated_poisson(1.0, 0.0)
        with pytest.raises(ValueError):
            truncated_poisson(1.0, 1.0)


class TestLogCount:
    def test_zero_flag_iff_zero(self):
        assert LogCount.from_int(0).zero_flag
        assert not LogCount.from_int(1).zero_flag
        assert float(LogCount.from_int(0)) == 0.0

    def test_huge_count_does_not_overflow_log(self):
        lc = LogCount.from_int(64**200)
        assert abs(lc.value - 200 * math.log(64)) < 1e-9
        assert float(lc) == float("inf")

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            LogCount.from_int(-1)
