"""Tests for configurations, OPT_f, rounding, FFD, L2 and the exact solver."""

import numpy as np
import pytest

from binbench.lp import dump_lp
from binbench.model import Instance
from binbench.oracle import (
    BudgetExceeded,
    Configuration,
    ExactBudget,
    TooManyConfigurations,
    configuration_lp,
    enumerate_configurations,
    knapsack_bnb,
    knapsack_dp,
    lower_bound_l2,
    plan_for,
    round_plan,
    solve_exact,
    solve_ffd,
    solve_fractional,
    validate_plan,
)
from binbench.oracle.plan import IntegralPlan

from oracles import brute_force_opt

# FFD opens a fourth bin; {5,5} {4,3,3} {4,3,3} needs three
FFD_TRAP = (5, 5, 4, 4, 3, 3, 3, 3)


def _random_instances(count, capacity, low, high, max_items, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_items + 1))
        yield Instance(capacity, tuple(int(s) for s in rng.integers(low, high + 1, size=n)))


# ── Configurations ──────────────────────────────────────────────────────────


class TestConfigurations:
    def test_maximal_only(self):
        configs = enumerate_configurations((4, 6), 10)
        assert set(c.counts for c in configs) == {(1, 1), (2, 0)}
        assert all(c.is_maximal((4, 6), 10) for c in configs)

    def test_oversized_sizes_get_zero(self):
        configs = enumerate_configurations((4, 12), 10)
        assert [c.counts for c in configs] == [(2, 0)]

    def test_limit(self):
        with pytest.raises(TooManyConfigurations):
            enumerate_configurations((2, 3, 5, 7), 40, limit=3)

    def test_fits(self):
        assert Configuration((1, 1)).fits((4, 6), 10)
        assert not Configuration((0, 2)).fits((4, 6), 10)
        assert not Configuration((0, 0)).fits((4, 6), 10)

    def test_label(self):
        assert Configuration((1, 1)).label((4, 6)) == "1x6+1x4"
        assert Configuration((2, 0)).label((4, 6)) == "2x4"
        assert Configuration((0, 0)).label((4, 6)) == "empty"


# ── Knapsack pricing ────────────────────────────────────────────────────────


class TestKnapsack:
    def test_dp_small(self):
        result = knapsack_dp([1.0, 0.7], [6, 4], 10)
        assert result.value == pytest.approx(1.7)
        assert result.counts == (1, 1)

    def test_dp_and_bnb_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            sizes = [int(s) for s in rng.integers(1, 30, size=4)]
            values = [float(v) for v in rng.random(4)]
            dp = knapsack_dp(values, sizes, 50)
            bnb = knapsack_bnb(values, sizes, 50)
            assert bnb.certified
            assert bnb.value == pytest.approx(dp.value)

    def test_bnb_node_limit_is_not_certified(self):
        result = knapsack_bnb([1.0, 1.01, 0.99], [7, 8, 6], 1000, node_limit=5)
        assert not result.certified
        assert result.bound >= result.value

    def test_nothing_useful(self):
        assert knapsack_dp([0.0, -1.0], [3, 4], 10).value == 0.0


# ── OPT_f ───────────────────────────────────────────────────────────────────


class TestFractional:
    def test_two_atom(self):
        plan = solve_fractional(Instance(10, (4, 4, 6, 6, 6)))
        assert plan.value == pytest.approx(3.0)
        assert plan.covers()
        assert plan.rounded_bound() == 3

    def test_half_bins_count(self):
        plan = solve_fractional(Instance(10, (4, 4, 4)))
        assert plan.value == pytest.approx(1.5)
        assert plan.rounded_bound() == 2

    def test_columns_match_enumeration(self):
        for inst in _random_instances(15, 20, 2, 15, 25, seed=3):
            enum = solve_fractional(inst, method="enumerate")
            cols = solve_fractional(inst, method="columns")
            assert cols.value == pytest.approx(enum.value, abs=1e-6)
            assert cols.certified

    def test_empty(self):
        plan = solve_fractional(Instance(10, ()))
        assert plan.value == 0.0
        assert plan.method == "empty"

    def test_configuration_lp_matches_plan(self):
        plan = solve_fractional(Instance(10, (4, 4, 6, 6, 6)))
        lp = configuration_lp(plan)
        assert lp.n_rows == 2
        assert lp.n_vars == len(plan.configurations)

    def test_configuration_lp_dump_names_the_columns(self):
        plan = solve_fractional(Instance(10, (4, 4, 6, 6, 6)), method="enumerate")
        lp = configuration_lp(plan)
        assert sorted(lp.names) == ["1x6+1x4", "2x4"]
        assert dump_lp(lp).startswith("# vars: ")

    def test_priced_columns_are_named(self):
        plan = solve_fractional(Instance(20, (3, 5, 7, 7, 9, 11, 13)), method="columns")
        lp = configuration_lp(plan)
        assert len(lp.names) == lp.n_vars == len(plan.configurations)
        assert all(" " not in name for name in lp.names)
        assert "4x5" in lp.names


# ── Heuristics and bounds ───────────────────────────────────────────────────


class TestHeuristics:
    def test_ffd_trap(self):
        inst = Instance(10, FFD_TRAP)
        assert solve_ffd(inst).n_bins == 4
        assert lower_bound_l2(inst) == 3

    def test_l2_counts_big_items(self):
        assert lower_bound_l2(Instance(10, (6, 6, 6))) == 3

    def test_round_plan_is_valid(self):
        for inst in _random_instances(20, 12, 1, 11, 20, seed=9):
            plan = round_plan(solve_fractional(inst), inst)
            assert validate_plan(plan, inst) is None
            assert plan.n_bins >= lower_bound_l2(inst)

    def test_validate_plan(self):
        inst = Instance(10, (6, 6))
        assert validate_plan(IntegralPlan(10, inst.sizes, [[0, 1]]), inst) is not None
        assert validate_plan(IntegralPlan(10, inst.sizes, [[0]]), inst) is not None
        assert validate_plan(IntegralPlan(10, inst.sizes, [[0], [1]]), inst) is None


# ── Exact OPT ───────────────────────────────────────────────────────────────


class TestExact:
    def test_ffd_trap_small_grid(self):
        plan = solve_exact(Instance(10, FFD_TRAP))
        assert plan.n_bins == 3
        assert plan.optimal
        assert validate_plan(plan, Instance(10, FFD_TRAP)) is None

    def test_ffd_trap_assignment_search(self):
        inst = Instance(100, tuple(10 * s for s in FFD_TRAP))
        assert solve_exact(inst).n_bins == 3

    def test_matches_brute_force_small_grid(self):
        for inst in _random_instances(40, 10, 1, 9, 8, seed=1):
            assert solve_exact(inst).n_bins == brute_force_opt(inst.sizes, 10)

    def test_matches_brute_force_fine_grid(self):
        for inst in _random_instances(40, 97, 10, 90, 8, seed=2):
            assert solve_exact(inst).n_bins == brute_force_opt(inst.sizes, 97)

    def test_budget_keeps_incumbent(self):
        with pytest.raises(BudgetExceeded) as exc:
            solve_exact(Instance(10, FFD_TRAP), ExactBudget(node_limit=0))
        assert exc.value.incumbent.n_bins == 4
        assert not exc.value.optimal

    def test_large_instances_need_opt_in(self):
        inst = Instance(100, tuple(10 * s for s in FFD_TRAP) * 4)
        with pytest.raises(BudgetExceeded, match="exceed"):
            solve_exact(inst)

    def test_empty(self):
        assert solve_exact(Instance(10, ())).n_bins == 0

    def test_assignment_lines(self):
        plan = solve_exact(Instance(10, (6, 4, 6)))
        lines = plan.assignment_lines()
        assert len(lines) == 3
        assert lines[0].startswith("0 -> ")


class TestPlanFor:
    def test_exact(self):
        plan, fallback = plan_for(Instance(10, FFD_TRAP), "exact")
        assert plan.n_bins == 3
        assert not fallback

    def test_exact_falls_back_on_budget(self):
        plan, fallback = plan_for(Instance(10, FFD_TRAP), "exact", ExactBudget(node_limit=0))
        assert fallback
        assert validate_plan(plan, Instance(10, FFD_TRAP)) is None

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            plan_for(Instance(10, (3,)), "magic")
