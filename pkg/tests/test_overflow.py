"""Tests for the phase schedule, the slot book and the adaptive overflow policy."""

import pytest

from binbench.distributions import get_distribution, ground_set_family, sample_iid, sample_permutation
from binbench.model import Instance, validate_state
from binbench.oracle import ExactBudget, solve_exact
from binbench.oracle.plan import IntegralPlan
from binbench.policies import (
    IdentityViolation,
    PlanMismatch,
    build_slot_book,
    get_policy,
    overflow,
    phase_boundaries,
    phase_tokens,
    run_overflow_policy,
    vacancy_search,
)

from oracles import lindley


# ── Phase schedule ──────────────────────────────────────────────────────────


class TestPhaseBoundaries:
    def test_power_of_two(self):
        schedule = phase_boundaries(8)
        assert schedule.K == 3
        assert schedule.boundaries == (1, 2, 4, 8)

    def test_odd_horizon(self):
        assert phase_boundaries(5).boundaries == (1, 2, 3, 5)

    def test_single_item(self):
        schedule = phase_boundaries(1)
        assert schedule.K == 0
        assert schedule.boundaries == (1,)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            phase_boundaries(0)

    @pytest.mark.parametrize("T", [2, 3, 7, 100, 1025])
    def test_doubling(self, T):
        b = phase_boundaries(T).boundaries
        assert b[0] == 1
        assert b[-1] == T
        assert all(b[k] <= 2 * b[k - 1] for k in range(1, len(b)))


# ── Slot book ───────────────────────────────────────────────────────────────


class TestSlotBook:
    def _book(self):
        history = Instance(10, (3, 2, 3))
        return build_slot_book(history, solve_exact(history))

    def test_slots_sorted_by_size_then_arrival(self):
        book = self._book()
        assert book.sorted_sizes == [2, 3, 3]
        assert book.slot_item == [1, 0, 2]

    def test_least_vacant_slot_at_least_x(self):
        book = self._book()
        assert vacancy_search(book, 3) == 1
        book.occupy(1)
        assert vacancy_search(book, 3) == 2
        book.occupy(2)
        assert vacancy_search(book, 3) is None
        assert vacancy_search(book, 1) == 0
        assert book.vacant_count() == 1

    def test_double_occupy(self):
        book = self._book()
        book.occupy(0)
        with pytest.raises(ValueError):
            book.occupy(0)

    def test_plan_must_match_history(self):
        history = Instance(10, (3, 2))
        with pytest.raises(PlanMismatch):
            build_slot_book(history, IntegralPlan(10, history.sizes, [[0]]))


def test_phase_tokens_put_items_first_on_ties():
    assert phase_tokens([2, 3], [3]) == [-1, 1, -1]
    assert phase_tokens([5], [6]) == [-1, 1]


# ── Policy runs ─────────────────────────────────────────────────────────────


class TestOverflowPolicy:
    def test_single_item(self):
        result = run_overflow_policy(Instance(10, (4,)))
        assert result.bins_used == 1
        assert result.trace == []
        assert result.extra["plan_accounting_bins"] == 1

    def test_empty_run(self):
        result = run_overflow_policy(Instance(10, (4, 4)), stop_at=0)
        assert result.bins_used == 0

    def test_known_sequence(self):
        """The history slot of size 6 takes the 4 and opens its plan bin."""
        result = run_overflow_policy(Instance(10, (6, 4)))
        assert len(result.trace) == 1
        phase = result.trace[0]
        assert phase.overflow == 0
        assert phase.opened_plan_bins == 1
        assert result.bins_used == 2

    def test_overflow_when_items_outgrow_the_history(self):
        result = run_overflow_policy(Instance(10, (2, 7)))
        phase = result.trace[0]
        assert phase.overflow == 1
        assert phase.queue_final == 1

    @pytest.mark.parametrize("dist", ["bounded-waste", "linear-waste", "perfectly-packable"])
    def test_identity_and_accounting_iid(self, dist):
        arrivals = sample_iid(get_distribution(dist), 64, seed=12)
        result = run_overflow_policy(arrivals)
        assert validate_state(result.state) is None
        assert sum(result.state.loads()) == arrivals.total
        assert all(p.identity_holds for p in result.trace)
        assert result.bins_used == 1 + sum(p.bins_opened for p in result.trace)
        assert result.extra["plan_accounting_bins"] >= result.bins_used
        assert result.extra["fallbacks"] == 0

    def test_identity_matches_an_independent_replay(self):
        arrivals = sample_permutation(ground_set_family("three-atom", 48), seed=5)
        result = run_overflow_policy(arrivals)
        for p in result.trace:
            tokens = phase_tokens(arrivals.sizes[: p.start], arrivals.sizes[p.start: p.end])
            assert p.overflow == lindley(tokens)

    def test_broken_identity_stops_the_run(self, monkeypatch):
        monkeypatch.setattr(overflow, "lindley_final", lambda tokens: -1)
        with pytest.raises(IdentityViolation, match="queue replay gives -1"):
            run_overflow_policy(sample_iid(get_distribution("bounded-waste"), 16, seed=1))

    def test_approx_oracle(self):
        arrivals = sample_iid(get_distribution("uniform"), 16, seed=2)
        result = run_overflow_policy(arrivals, oracle="approx")
        assert validate_state(result.state) is None
        assert all(p.identity_holds for p in result.trace)
        assert all(p.plan_method == "round" for p in result.trace)

    def test_budget_fallback_is_reported(self):
        arrivals = sample_iid(get_distribution("linear-waste"), 32, seed=3)
        result = run_overflow_policy(arrivals, budget=ExactBudget(node_limit=0))
        assert result.extra["fallbacks"] == sum(1 for p in result.trace if p.fallback)
        assert validate_state(result.state) is None

    def test_stop_at_truncates_the_last_phase(self):
        arrivals = sample_iid(get_distribution("bounded-waste"), 32, seed=8)
        result = run_overflow_policy(arrivals, stop_at=20)
        assert result.placed == 20
        assert result.trace[-1].end == 20
        assert sum(result.state.loads()) == arrivals.prefix(20).total

    def test_never_beats_opt(self):
        arrivals = sample_permutation(ground_set_family("two-atom", 64), seed=1)
        result = get_policy("overflow").run(arrivals, oracle="exact")
        assert result.bins_used >= solve_exact(arrivals).n_bins
        assert result.bins_used <= len(arrivals)
