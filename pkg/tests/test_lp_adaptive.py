"""Tests for the level LP, the static waste-rate LP and the LP-adaptive policy."""

import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from binbench.distributions import UnknownSize, get_distribution, make_rng, sample_iid
from binbench.lp import LpSolution, LpStatus, solve_lp
from binbench.model import NEW_BIN, Instance, PackingState, Placement, place_item, validate_state, volume_bound
from binbench.policies import (
    arrival_levels,
    build_level_lp,
    build_static_level_lp,
    get_policy,
    lp_adaptive,
    run_lp_adaptive_policy,
    select_level,
    solve_static_level_lp,
)


# ── Level LP construction ───────────────────────────────────────────────────


class TestLevelLp:
    def test_variables_only_where_the_type_fits(self):
        model = build_static_level_lp((1, 2, 3), [Fraction(1, 3)] * 3, 4)
        assert model.lp.n_vars == 4 + 3 + 2
        assert model.var(2, 1) is not None
        assert model.var(2, 2) is None
        assert model.lp.names[0] == "v(1,0)"

    def test_row_count(self):
        state = PackingState(4)
        model = build_level_lp(state, 2, [Fraction(0), Fraction(1), Fraction(0)], T=5, t=1)
        # B-1 level rows, one arrival row, one balance row per type
        assert model.lp.n_rows == 3 + 1 + 3
        assert model.levels == (0,)
        assert model.x_type == 1

    def test_arrival_levels(self):
        state = PackingState(10)
        place_item(state, 3, NEW_BIN)
        place_item(state, 6, NEW_BIN)
        place_item(state, 4, Placement.existing(1))
        assert arrival_levels(state) == (0, 3)

    def test_item_outside_support(self):
        with pytest.raises(ValueError, match="support"):
            build_level_lp(PackingState(10), 7, [Fraction(1)], T=3, t=1, support=(5,))

    def test_step_outside_horizon(self):
        with pytest.raises(ValueError):
            build_level_lp(PackingState(10), 5, [Fraction(1)], T=3, t=4, support=(5,))

    def test_balance_rows_scale_with_remaining_items(self):
        state = PackingState(10)
        model = build_level_lp(state, 5, [Fraction(1)], T=4, t=1, support=(5,))
        sol = solve_lp(model.lp)
        assert sol.optimal
        # four items of size 5 remain: two new bins
        assert sol.objective == pytest.approx(2.0)

    def test_existing_bins_are_used(self):
        state = PackingState(10)
        place_item(state, 5, NEW_BIN)
        model = build_level_lp(state, 5, [Fraction(1)], T=2, t=2, support=(5,))
        sol = solve_lp(model.lp)
        assert sol.objective == pytest.approx(0.0)
        assert dict(model.arrival_weights(sol.primal))[5] == pytest.approx(1.0)


class TestStaticLevelLp:
    def test_halves(self):
        result = solve_static_level_lp((5,), [Fraction(1)], 10)
        assert result.value == pytest.approx(0.5)
        assert result.waste_rate == pytest.approx(0.0, abs=1e-9)

    def test_big_items_waste(self):
        result = solve_static_level_lp((6,), [Fraction(1)], 10)
        assert result.value == pytest.approx(1.0)
        assert result.waste_rate == pytest.approx(4.0)

    @pytest.mark.parametrize("name", ["perfectly-packable", "bounded-waste"])
    def test_sublinear_waste_distributions_have_zero_rate(self, name):
        dist = get_distribution(name)
        result = solve_static_level_lp(dist.support(), dist.probabilities(), dist.den)
        assert result.waste_rate == pytest.approx(0.0, abs=1e-7)

    def test_linear_waste_distribution(self):
        dist = get_distribution("linear-waste")
        result = solve_static_level_lp(dist.support(), dist.probabilities(), dist.den)
        # every 8 leaves at least 2 units empty
        assert result.waste_rate >= 0.5 - 1e-9


# ── Level sampling ──────────────────────────────────────────────────────────


class TestSelectLevel:
    def test_degenerate_mass_opens_a_new_bin(self):
        model = build_level_lp(PackingState(10), 5, [Fraction(1)], T=2, t=1, support=(5,))
        empty = LpSolution(LpStatus.OPTIMAL, objective=0.0, primal=np.zeros(model.lp.n_vars))
        choice = select_level(model, empty, make_rng(0))
        assert choice.level == 0
        assert choice.degenerate

    def test_single_level_is_certain(self):
        state = PackingState(10)
        place_item(state, 5, NEW_BIN)
        model = build_level_lp(state, 5, [Fraction(1)], T=2, t=2, support=(5,))
        choice = select_level(model, solve_lp(model.lp), make_rng(0))
        assert choice.level == 5
        assert choice.probability == pytest.approx(1.0)

    def test_static_model_has_no_arrival(self):
        model = build_static_level_lp((5,), [Fraction(1)], 10)
        with pytest.raises(ValueError):
            model.arrival_weights(np.zeros(model.lp.n_vars))


# ── Policy runs ─────────────────────────────────────────────────────────────


class TestLpAdaptivePolicy:
    def test_pairs_halves(self):
        result = run_lp_adaptive_policy(Instance(10, (5, 5, 5, 5)), support=(5,))
        assert result.bins_used == 2
        assert validate_state(result.state) is None

    @pytest.mark.parametrize("name", ["bounded-waste", "perfectly-packable", "linear-waste"])
    def test_runs_are_consistent(self, name):
        dist = get_distribution(name)
        arrivals = sample_iid(dist, 120, seed=21)
        result = run_lp_adaptive_policy(arrivals, seed=3, support=dist.support())
        assert validate_state(result.state) is None
        assert result.placed == 120
        assert len(result.trace) == 120
        assert sum(result.state.loads()) == arrivals.total
        assert volume_bound(arrivals) <= result.bins_used <= 120
        assert result.extra["degenerate_fallbacks"] == 0

    def test_same_seed_same_packing(self):
        dist = get_distribution("bounded-waste")
        arrivals = sample_iid(dist, 60, seed=2)
        a = run_lp_adaptive_policy(arrivals, seed=9, support=dist.support())
        b = run_lp_adaptive_policy(arrivals, seed=9, support=dist.support())
        assert a.state.loads() == b.state.loads()

    def test_warm_starts_reproduce_cold_solves(self):
        dist = get_distribution("linear-waste")
        arrivals = sample_iid(dist, 50, seed=6)
        warm = run_lp_adaptive_policy(arrivals, seed=4, support=dist.support())
        cold = run_lp_adaptive_policy(arrivals, seed=4, support=dist.support(), warm_start=False)
        assert [s.level for s in warm.trace] == [s.level for s in cold.trace]
        assert warm.state.loads() == cold.state.loads()
        assert warm.extra["lp_iterations"] > 0

    def test_disagreeing_warm_start_keeps_the_cold_answer(self, monkeypatch):
        dist = get_distribution("bounded-waste")
        arrivals = sample_iid(dist, 40, seed=8)

        def shifted_weights(lp, warm_basis=None, **kwargs):
            sol = solve_lp(lp, warm_basis=warm_basis, **kwargs)
            if sol.warm_started:
                sol = dataclasses.replace(sol, primal=sol.primal + 0.5)
            return sol

        monkeypatch.setattr(lp_adaptive, "solve_lp", shifted_weights)
        checked = run_lp_adaptive_policy(arrivals, seed=5, support=dist.support())
        monkeypatch.undo()
        cold = run_lp_adaptive_policy(arrivals, seed=5, support=dist.support(), warm_start=False)
        assert checked.extra["warm_start_disagreements"] > 0
        assert [s.level for s in checked.trace] == [s.level for s in cold.trace]

    def test_default_support_is_the_whole_grid(self):
        result = run_lp_adaptive_policy(Instance(6, (1, 2, 3, 4, 5)))
        assert validate_state(result.state) is None

    def test_unknown_size(self):
        with pytest.raises(UnknownSize):
            run_lp_adaptive_policy(Instance(10, (5, 6)), support=(5,))

    def test_registry_passes_support(self):
        result = get_policy("lp-adaptive").run(Instance(10, (5, 5)), 2, seed=1, support=(5,))
        assert result.bins_used == 1

    def test_stop_at(self):
        result = run_lp_adaptive_policy(Instance(10, (5, 5, 5, 5)), support=(5,), stop_at=3)
        assert result.placed == 3
        assert len(result.trace) == 3
