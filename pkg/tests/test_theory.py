"""Tests for the Lindley queue, token generators, bound formulas and the Monte-Carlo checks."""

import math
from fractions import Fraction

import numpy as np
import pytest

from binbench.distributions import get_distribution, ground_set_family, make_rng
from binbench.theory import (
    CeEstimate,
    CheckReport,
    TokenKind,
    ceil_log2,
    draw,
    estimate_ce,
    exact_prop2_mean,
    hypergeometric_increments,
    lindley_final,
    lindley_queue,
    mean_and_stderr,
    multinomial_increments,
    phase_total_bound,
    queue_bound,
    queue_finals,
    sign_permutation_bound,
    sign_permutations,
    subsample_ground_set,
    subsample_rhs,
    verify_lemma1,
    verify_prop1,
    verify_prop2,
    verify_prop3,
    verify_prop4,
    verify_prop6,
    verify_queue_bound,
)

from oracles import lindley


# ── Queue ───────────────────────────────────────────────────────────────────


class TestLindley:
    def test_trajectory(self):
        q = lindley_queue([1, -1, -1, 1])
        assert q.trajectory == (0, 1, 0, 0, 1)
        assert q.final == 1
        assert q.max_negative_partial_sum == 1

    def test_closed_form_matches_the_recursion(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            tokens = [int(v) for v in rng.integers(-2, 3, size=int(rng.integers(0, 30)))]
            assert lindley_final(tokens) == lindley(tokens)

    def test_empty(self):
        assert lindley_final([]) == 0
        assert lindley_queue([]).final == 0

    def test_row_finals(self):
        tokens = np.array([[1, -1, -1, 1], [-1, -1, 1, 1], [1, 1, -1, -1]])
        assert queue_finals(tokens).tolist() == [1, 2, 0]

    def test_zero_length_rows(self):
        assert queue_finals(np.zeros((3, 0), dtype=np.int64)).tolist() == [0, 0, 0]


# ── Tokens ──────────────────────────────────────────────────────────────────


class TestTokens:
    def test_sign_permutations_balance(self):
        tokens = sign_permutations(6, 40, make_rng(1))
        assert tokens.shape == (40, 12)
        assert (tokens.sum(axis=1) == 0).all()
        assert set(np.unique(tokens)) == {-1, 1}

    def test_multinomial_rows_sum_to_zero(self):
        tokens = multinomial_increments(10, 25, make_rng(2))
        assert tokens.shape == (25, 10)
        assert (tokens.sum(axis=1) == 0).all()
        assert tokens.min() >= -1

    def test_hypergeometric_rows_sum_to_zero(self):
        tokens = hypergeometric_increments(8, 3, 25, make_rng(3))
        assert (tokens.sum(axis=1) == 0).all()
        assert tokens.max() <= 2

    def test_draw(self):
        seq = draw("hypergeometric", 5, make_rng(4), block=2)
        assert seq.kind is TokenKind.HYPERGEOMETRIC
        assert len(seq) == 5
        assert seq.block == 2
        assert len(draw(TokenKind.SIGN_PERMUTATION, 3, make_rng(4))) == 6

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            sign_permutations(0, 1, make_rng(0))
        with pytest.raises(ValueError):
            hypergeometric_increments(4, 0, 1, make_rng(0))


# ── Bounds ──────────────────────────────────────────────────────────────────


class TestBounds:
    def test_ceil_log2(self):
        assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 1024)] == [0, 1, 2, 2, 3, 10]
        with pytest.raises(ValueError):
            ceil_log2(0)

    def test_simple_forms(self):
        assert queue_bound(16) == pytest.approx(8.0)
        assert sign_permutation_bound(8) == pytest.approx(8.0)

    def test_phase_total(self):
        total = phase_total_bound((1, 2, 4), [1, 2])
        assert total == pytest.approx(1 + 1 + 2 * math.sqrt(2) + 2 + 4)

    def test_phase_total_needs_one_value_per_phase(self):
        with pytest.raises(ValueError):
            phase_total_bound((1, 2, 4), [1])

    def test_subsample_rhs(self):
        # tau = 4: 4/2 + 2*2 + (4*4 + 17*2 + 13)
        assert subsample_rhs(4, 8, 1) == pytest.approx(69.0)


# ── Checks ──────────────────────────────────────────────────────────────────


class TestReports:
    def test_mean_and_stderr(self):
        assert mean_and_stderr([3.0]) == (3.0, 0.0)
        mean, se = mean_and_stderr([1.0, 3.0])
        assert mean == 2.0
        assert se == pytest.approx(1.0)
        with pytest.raises(ValueError):
            mean_and_stderr([])

    def test_to_dict_carries_the_verdict(self):
        data = CheckReport("x", 1.0, 2.0, violation=True).to_dict()
        assert data["verdict"] == "violation"
        assert data["check"] == "x"
        assert CheckReport("x", 1.0, 2.0).verdict == "ok"


class TestQueueChecks:
    def test_exact_mean_small(self):
        assert exact_prop2_mean(1) == Fraction(1, 2)
        # orders of ++-- : finals 0 0 1 1 1 2
        assert exact_prop2_mean(2) == Fraction(5, 6)

    def test_exact_mean_range(self):
        with pytest.raises(ValueError):
            exact_prop2_mean(0)
        with pytest.raises(ValueError):
            exact_prop2_mean(50)

    def test_sign_permutation_check(self):
        report = verify_prop2(4, 2000, seed=7, rademacher=True)
        assert not report.violation
        assert report.trials == 2000
        assert report.statistic == pytest.approx(report.details["exact_mean"], abs=6 * report.stderr + 0.05)
        assert report.details["rademacher_estimate"] > 0

    def test_same_seed_same_report(self):
        assert verify_prop2(10, 300, seed=1) == verify_prop2(10, 300, seed=1)

    def test_trials_must_be_positive(self):
        with pytest.raises(ValueError):
            verify_prop2(3, 0, seed=0)

    @pytest.mark.parametrize("kind", ["multinomial", "hypergeometric"])
    def test_exchangeable_increments(self, kind):
        report = verify_queue_bound(kind, 32, 1000, seed=3)
        assert report.check == f"queue-{kind}"
        assert not report.violation
        assert report.bound == pytest.approx(2 * math.sqrt(32))

    def test_sign_kind_delegates(self):
        assert verify_queue_bound("sign-permutation", 3, 50, seed=0).check == "prop2"


class TestBenchmarkChecks:
    def test_subsample_size(self):
        ground = ground_set_family("two-atom", 10)
        sample = subsample_ground_set(ground, 2, seed=5)
        assert len(sample) == 3
        assert set(sample.sizes) <= set(ground.instance.sizes)

    def test_prop3(self):
        report = verify_prop3(get_distribution("bounded-waste"), 12, 10, seed=1)
        assert not report.violation
        assert report.details["T"] == 12

    def test_prop6(self):
        report = verify_prop6(ground_set_family("two-atom", 16), 1, 6, seed=2)
        assert not report.violation
        assert report.details["tau"] == 8
        assert report.details["padded_size"] == 16

    def test_lemma1(self):
        report = verify_lemma1(get_distribution("two-point"), range(1, 11))
        assert not report.violation
        assert report.trials == 10
        assert report.details["shifted_below_unshifted"] == []
        assert all(0 <= g <= 1 for g in report.details["gaps"].values())

    def test_prop1(self):
        report = verify_prop1(count=20, seed=3)
        assert not report.violation
        assert report.statistic <= 0.0
        assert report.details["left_violations"] == 0

    def test_prop4(self):
        report = verify_prop4(get_distribution("bounded-waste"), 12, 5, seed=4, ce_T=48)
        assert not report.violation
        assert report.details["ce_T"] == 48


class TestCeEstimate:
    def test_two_point_approaches_one_half(self):
        est = estimate_ce(get_distribution("two-point"), [16, 64, 256])
        assert est.limit == 0.5
        assert all(d <= 2 / math.sqrt(T) for d, T in zip(est.deviations(), est.T_values))

    def test_grid_must_ascend(self):
        with pytest.raises(ValueError):
            estimate_ce(get_distribution("two-point"), [64, 16])

    def test_no_limit(self):
        with pytest.raises(ValueError):
            CeEstimate((4,), (0.5,)).deviations()
