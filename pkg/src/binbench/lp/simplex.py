"""Dense two-phase primal simplex.

Problems are ``min c·x`` subject to rows ``a·x (<=|>=|=) b`` and ``x >= 0``.
The tableau lives in a numpy array; the LPs built by the oracle and the
level-LP policy stay at desk scale (a few hundred rows, a few thousand
columns), which a dense tableau handles fine.

Entering columns follow Dantzig's rule (most negative reduced cost, lowest
index on ties) until too many degenerate pivots pile up, then Bland's rule.
Leaving rows use the minimum ratio, ties broken by the smallest basic index.
Both rules are deterministic, so equal inputs give equal pivot sequences.

Once a basis is optimal the primal and dual values are recomputed from a
fresh factorization of the basis matrix and checked against the original
rows; tableau drift never reaches the caller.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from binbench.config import (
    LP_BLAND_FACTOR,
    LP_COST_TOL,
    LP_MAX_ITERATIONS,
    LP_PHASE1_TOL,
    LP_PIVOT_TOL,
    LP_PRIMAL_TOL,
    LP_REFACTOR_PIVOTS,
    LP_SLACKNESS_TOL,
)

log = logging.getLogger(__name__)


class LpError(Exception):
    """Base class for solver failures."""


class NumericalFailure(LpError):
    def __init__(self, message: str, residual: float) -> None:
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class IterationLimit(LpError):
    def __init__(self, limit: int, what: str = "simplex pivots") -> None:
        self.limit = limit
        super().__init__(f"{what} did not converge within {limit} iterations")


class Relation(str, enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: np.ndarray
    relation: Relation
    rhs: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", float(self.rhs))


@dataclass
class LinearProgram:
    """``min objective·x`` over the listed constraints with ``x >= 0``."""

    objective: np.ndarray
    constraints: list[Constraint] = field(default_factory=list)
    names: Optional[list[str]] = None

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.shape[0]
        for i, row in enumerate(self.constraints):
            if row.coeffs.shape != (n,):
                raise ValueError(f"row {i} has {row.coeffs.shape[0]} coefficients, expected {n}")
            if not math.isfinite(row.rhs):
                raise ValueError(f"row {i} has a non-finite right-hand side")
        if self.names is not None and len(self.names) != n:
            raise ValueError("names must match the number of variables")

    @property
    def n_vars(self) -> int:
        return int(self.objective.shape[0])

    @property
    def n_rows(self) -> int:
        return len(self.constraints)

    def matrix(self) -> tuple[np.ndarray, list[Relation], np.ndarray]:
        if not self.constraints:
            return np.zeros((0, self.n_vars)), [], np.zeros(0)
        A = np.vstack([c.coeffs for c in self.constraints])
        return A, [c.relation for c in self.constraints], np.array([c.rhs for c in self.constraints])

    def add_constraint(self, coeffs: Sequence[float], relation: Relation | str, rhs: float) -> None:
        row = Constraint(np.asarray(coeffs, dtype=float), Relation(relation), rhs)
        if row.coeffs.shape != (self.n_vars,):
            raise ValueError(f"expected {self.n_vars} coefficients, got {row.coeffs.shape[0]}")
        self.constraints.append(row)


@dataclass
class LpSolution:
    status: LpStatus
    objective: Optional[float] = None
    primal: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    #: Basic columns as stable ids: ``j < n`` is variable ``j``, ``n + i`` the slack of row ``i``.
    basis: tuple[int, ...] = ()
    iterations: int = 0
    warm_started: bool = False
    primal_residual: float = 0.0
    slackness_residual: float = 0.0
    dual_objective: Optional[float] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


# ── Standard form ───────────────────────────────────────────────────────────


@dataclass
class _StandardForm:
    """``A x = b, x >= 0, b >= 0`` with slack columns appended after the variables."""

    A: np.ndarray            # m x (n + n_slack)
    b: np.ndarray
    cost: np.ndarray
    sign: np.ndarray         # +1 or -1 per row, the factor applied to make b >= 0
    relations: list[Relation]
    n: int
    slack_col: dict[int, int]  # row -> internal column of its slack
    slack_row: dict[int, int]  # internal column -> row


def _standard_form(lp: LinearProgram) -> _StandardForm:
    A0, relations, b0 = lp.matrix()
    m, n = A0.shape
    sign = np.where(b0 < 0, -1.0, 1.0)
    A = A0 * sign[:, None]
    b = b0 * sign
    rels = []
    for i, rel in enumerate(relations):
        if sign[i] < 0 and rel is not Relation.EQ:
            rel = Relation.GE if rel is Relation.LE else Relation.LE
        rels.append(rel)
    slack_rows = [i for i, rel in enumerate(rels) if rel is not Relation.EQ]
    S = np.zeros((m, len(slack_rows)))
    slack_col: dict[int, int] = {}
    for k, i in enumerate(slack_rows):
        S[i, k] = 1.0 if rels[i] is Relation.LE else -1.0
        slack_col[i] = n + k
    cost = np.concatenate([lp.objective, np.zeros(len(slack_rows))])
    return _StandardForm(
        A=np.hstack([A, S]), b=b, cost=cost, sign=sign, relations=rels, n=n,
        slack_col=slack_col, slack_row={c: r for r, c in slack_col.items()},
    )


def _to_stable(sf: _StandardForm, col: int) -> int:
    if col < sf.n:
        return col
    return sf.n + sf.slack_row[col]


def _from_stable(sf: _StandardForm, sid: int) -> Optional[int]:
    if sid < sf.n:
        return sid
    return sf.slack_col.get(sid - sf.n)


# ── Pivoting ────────────────────────────────────────────────────────────────


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    rows = np.flatnonzero(factors)
    if rows.size:
        T[rows] -= np.outer(factors[rows], T[row])
    basis[row] = col


def _iterate(
    T: np.ndarray, basis: list[int], eligible: np.ndarray, limit: int, bland: bool
) -> tuple[LpStatus, int]:
    """Pivot until optimal or unbounded. ``T``'s last row holds the reduced costs."""
    m = T.shape[0] - 1
    bland_after = LP_BLAND_FACTOR * (T.shape[0] + T.shape[1])
    degenerate = 0
    for it in range(limit):
        d = T[-1, :-1]
        candidates = np.flatnonzero((d < -LP_COST_TOL) & eligible)
        if candidates.size == 0:
            return LpStatus.OPTIMAL, it
        if bland:
            col = int(candidates[0])
        else:
            col = int(candidates[np.argmin(d[candidates])])
        column = T[:m, col]
        rows = np.flatnonzero(column > LP_PIVOT_TOL)
        if rows.size == 0:
            return LpStatus.UNBOUNDED, it
        ratios = np.maximum(T[rows, -1], 0.0) / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + LP_PIVOT_TOL]
        row = int(min(ties, key=lambda r: basis[r]))
        if best <= LP_PIVOT_TOL:
            degenerate += 1
            if not bland and degenerate >= bland_after:
                log.debug("switching to Bland's rule after %d degenerate pivots", degenerate)
                bland = True
        _pivot(T, basis, row, col)
    raise IterationLimit(limit)


def _phase_two_tableau(body: np.ndarray, basis: list[int], cost: np.ndarray) -> np.ndarray:
    """Append the reduced-cost row for ``cost`` to a canonical ``[B^-1 A | B^-1 b]``."""
    cb = cost[basis]
    z = np.concatenate([cost, [0.0]]) - cb @ body
    return np.vstack([body, z])


# ── Solving ─────────────────────────────────────────────────────────────────


def _phase_one(
    sf: _StandardForm, limit: int, bland: bool
) -> tuple[Optional[np.ndarray], list[int], int, list[int]]:
    """Find a feasible basis. Returns ``(body, basis, iterations, kept_rows)``.

    ``body`` is None if the problem is infeasible.

    Redundant rows discovered while driving artificials out are dropped from the body.
    """
    m, width = sf.A.shape
    art_rows = [i for i in range(m) if sf.relations[i] is not Relation.LE]
    art = np.zeros((m, len(art_rows)))
    basis: list[int] = []
    art_of_row = {}
    for k, i in enumerate(art_rows):
        art[i, k] = 1.0
        art_of_row[i] = width + k
    for i in range(m):
        basis.append(art_of_row[i] if i in art_of_row else sf.slack_col[i])

    body = np.hstack([sf.A, art, sf.b[:, None]])
    cost = np.concatenate([np.zeros(width), np.ones(len(art_rows))])
    T = _phase_two_tableau(body, basis, cost)
    eligible = np.ones(width + len(art_rows), dtype=bool)
    status, iterations = _iterate(T, basis, eligible, limit, bland)
    if status is not LpStatus.OPTIMAL:
        raise NumericalFailure("phase one reported an unbounded auxiliary problem", float("inf"))

    infeasibility = -T[-1, -1]
    if infeasibility > LP_PHASE1_TOL * (1.0 + float(np.abs(sf.b).max(initial=0.0))):
        return None, basis, iterations, []

    keep = []
    for r in range(m):
        if basis[r] < width:
            keep.append(r)
            continue
        row = T[r, :width]
        j = int(np.argmax(np.abs(row))) if width else 0
        if width and abs(row[j]) > LP_PIVOT_TOL:
            _pivot(T, basis, r, j)
            keep.append(r)
        else:
            log.debug("dropping redundant row %d", r)
    body = np.hstack([T[keep, :width], T[keep, -1:]])
    return body, [basis[r] for r in keep], iterations, keep


def _warm_body(sf: _StandardForm, warm_basis: Sequence[int]) -> Optional[tuple[np.ndarray, list[int]]]:
    m = sf.A.shape[0]
    if len(warm_basis) != m:
        return None
    cols = [_from_stable(sf, sid) for sid in warm_basis]
    if any(c is None for c in cols) or len(set(cols)) != m:
        return None
    B = sf.A[:, cols]
    try:
        body = np.linalg.solve(B, np.hstack([sf.A, sf.b[:, None]]))
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(body)):
        return None
    if body[:, -1].min(initial=0.0) < -LP_PRIMAL_TOL * (1.0 + float(np.abs(sf.b).max(initial=0.0))):
        return None
    return body, list(cols)


def _independent_rows(M: np.ndarray) -> list[int]:
    """Greedy row subset of ``M`` with full column rank, in row order."""
    k = M.shape[1]
    kept: list[int] = []
    for i in range(M.shape[0]):
        if len(kept) == k:
            break
        if np.linalg.matrix_rank(M[kept + [i]]) > len(kept):
            kept.append(i)
    return kept


def _finish(lp: LinearProgram, sf: _StandardForm, basis: list[int]) -> LpSolution:
    """Recompute primal and dual values from the basis and measure the residuals."""
    m, width = sf.A.shape
    x = np.zeros(width)
    y = np.zeros(m)
    if basis:
        rows = list(range(m)) if len(basis) == m else _independent_rows(sf.A[:, basis])
        B = sf.A[np.ix_(rows, basis)]
        x[basis] = np.linalg.solve(B, sf.b[rows])
        y[rows] = np.linalg.solve(B.T, sf.cost[basis])

    A0, relations, b0 = lp.matrix()
    lhs = A0 @ x[: sf.n]
    primal_res = float(-x.min(initial=0.0))
    for i, rel in enumerate(relations):
        if rel is Relation.LE:
            gap = max(0.0, lhs[i] - b0[i])
        elif rel is Relation.GE:
            gap = max(0.0, b0[i] - lhs[i])
        else:
            gap = abs(lhs[i] - b0[i])
        primal_res = max(primal_res, gap / (1.0 + abs(b0[i])))

    reduced = sf.cost - y @ sf.A
    slackness = max(
        float(np.abs(x * reduced).max(initial=0.0)),
        float(-reduced.min(initial=0.0)),
    )
    primal = np.maximum(x[: sf.n], 0.0)
    duals = y * sf.sign
    return LpSolution(
        status=LpStatus.OPTIMAL,
        objective=float(lp.objective @ primal),
        primal=primal,
        duals=duals,
        basis=tuple(_to_stable(sf, c) for c in basis),
        primal_residual=primal_res,
        slackness_residual=slackness,
        dual_objective=float(duals @ b0),
    )


def _solve_once(
    lp: LinearProgram, warm_basis: Optional[Sequence[int]], limit: int, bland: bool
) -> LpSolution:
    sf = _standard_form(lp)
    width = sf.A.shape[1]
    warm = _warm_body(sf, warm_basis) if warm_basis is not None else None
    iterations = 0
    if warm is not None:
        body, basis = warm
    else:
        body, basis, iterations, _ = _phase_one(sf, limit, bland)
        if body is None:
            return LpSolution(LpStatus.INFEASIBLE, iterations=iterations)

    T = _phase_two_tableau(body, basis, sf.cost)
    status, more = _iterate(T, basis, np.ones(width, dtype=bool), limit, bland)
    iterations += more
    if status is LpStatus.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED, iterations=iterations, warm_started=warm is not None)
    sol = _finish(lp, sf, basis)
    sol.iterations = iterations
    sol.warm_started = warm is not None
    return sol


def within_tolerance(sol: LpSolution) -> bool:
    """True when the recomputed residuals are inside ``LP_PRIMAL_TOL`` and ``LP_SLACKNESS_TOL``."""
    return sol.primal_residual <= LP_PRIMAL_TOL and sol.slackness_residual <= LP_SLACKNESS_TOL


def solve_lp(
    lp: LinearProgram,
    warm_basis: Optional[Sequence[int]] = None,
    max_iterations: int = LP_MAX_ITERATIONS,
) -> LpSolution:
    """Solve ``lp``; ``warm_basis`` (stable ids from a previous solution) skips phase one when valid.

    Raises :class:`NumericalFailure` when the residuals stay out of tolerance
    after a cold retry with Bland's rule throughout.
    """
    sol = _solve_once(lp, warm_basis, max_iterations, bland=False)
    if not sol.optimal or within_tolerance(sol):
        return sol
    log.warning(
        "LP residuals out of tolerance (primal %.2e, slackness %.2e); retrying with Bland's rule",
        sol.primal_residual, sol.slackness_residual,
    )
    sol = _solve_once(lp, None, max_iterations, bland=True)
    if sol.optimal and not within_tolerance(sol):
        raise NumericalFailure(
            "LP solution violates the residual tolerances",
            max(sol.primal_residual, sol.slackness_residual),
        )
    return sol


# ── Kept tableaus ───────────────────────────────────────────────────────────


class SimplexTableau:
    """An optimal tableau kept between solves so that columns can be appended.

    The body carries ``B^-1`` beside ``B^-1 A``. Pivots are row operations, so
    the block stays current and a new column enters as ``B^-1 a`` with reduced
    cost ``c - y·a``. Internal columns are the original variables, then the
    slacks, then appended variables in order. The tableau is rebuilt from a
    fresh factorization every ``refactor_pivots`` pivots.
    """

    def __init__(
        self,
        lp: LinearProgram,
        max_iterations: int = LP_MAX_ITERATIONS,
        refactor_pivots: int = LP_REFACTOR_PIVOTS,
    ) -> None:
        self.base = lp
        self.max_iterations = max_iterations
        self.refactor_pivots = refactor_pivots
        self.iterations = 0
        self._sf = _standard_form(lp)
        self._extra_cost: list[float] = []
        self._extra_cols: list[np.ndarray] = []
        self._extra_names: list[str] = []
        self._since_refactor = 0

        body, basis, iterations, keep = _phase_one(self._sf, max_iterations, bland=False)
        self.iterations = iterations
        self._keep = keep
        self._basis = basis
        if body is None:
            self.status = LpStatus.INFEASIBLE
            return
        self.status = LpStatus.OPTIMAL
        self._A = self._sf.A[keep]
        self._b = self._sf.b[keep]
        self._cost = self._sf.cost.copy()
        self._refactor()
        self._optimize()

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    @property
    def n_vars(self) -> int:
        return self.base.n_vars + len(self._extra_cols)

    def _refactor(self) -> None:
        r = self._A.shape[0]
        try:
            B_inv = np.linalg.inv(self._A[:, self._basis]) if r else np.zeros((0, 0))
        except np.linalg.LinAlgError:
            raise NumericalFailure("kept basis became singular", float("inf")) from None
        body = B_inv @ np.hstack([self._A, np.eye(r), self._b[:, None]])
        cb = self._cost[self._basis]
        z = np.concatenate([self._cost, np.zeros(r), [0.0]]) - cb @ body
        self._T = np.vstack([body, z])
        self._since_refactor = 0

    def _optimize(self) -> None:
        width = self._A.shape[1]
        eligible = np.zeros(self._T.shape[1] - 1, dtype=bool)
        eligible[:width] = True
        self.status, pivots = _iterate(self._T, self._basis, eligible, self.max_iterations, bland=False)
        self.iterations += pivots
        self._since_refactor += pivots

    def add_column(self, cost: float, column: Sequence[float], name: Optional[str] = None) -> None:
        """Append a variable with row coefficients ``column`` and re-optimize from the current basis."""
        if not self.optimal:
            raise LpError(f"cannot extend a tableau whose last solve was {self.status.value}")
        column = np.asarray(column, dtype=float)
        if column.shape != (self.base.n_rows,):
            raise ValueError(f"column has {column.shape[0]} entries, expected {self.base.n_rows}")
        name = name or f"x{self.n_vars}"
        self._extra_cost.append(float(cost))
        self._extra_cols.append(column)
        self._extra_names.append(name)

        a = (column * self._sf.sign)[self._keep]
        r, width = self._A.shape
        B_inv = self._T[:r, width:width + r]
        reduced = float(cost) + self._T[-1, width:width + r] @ a
        self._T = np.insert(self._T, width, np.append(B_inv @ a, reduced), axis=1)
        self._A = np.hstack([self._A, a[:, None]])
        self._cost = np.append(self._cost, float(cost))
        if self._since_refactor >= self.refactor_pivots:
            self._refactor()
        self._optimize()

    def duals(self) -> np.ndarray:
        """Row duals of the current basis, read off the ``B^-1`` block."""
        y = np.zeros(self.base.n_rows)
        if self.optimal:
            r, width = self._A.shape
            y[self._keep] = -self._T[-1, width:width + r]
        return y * self._sf.sign

    def linear_program(self) -> LinearProgram:
        """The base LP with every appended column."""
        if not self._extra_cols:
            return self.base
        extra = np.column_stack(self._extra_cols)
        rows = [
            Constraint(np.concatenate([c.coeffs, extra[i]]), c.relation, c.rhs)
            for i, c in enumerate(self.base.constraints)
        ]
        names = None if self.base.names is None else self.base.names + self._extra_names
        return LinearProgram(np.concatenate([self.base.objective, self._extra_cost]), rows, names)

    def _full_column(self, sf: _StandardForm, col: int) -> int:
        n0 = self._sf.n
        n_slack = len(self._sf.slack_col)
        if col < n0:
            return col
        if col < n0 + n_slack:
            return sf.slack_col[self._sf.slack_row[col]]
        return n0 + (col - n0 - n_slack)

    def solution(self) -> LpSolution:
        """Primal and dual values recomputed from the basis, with residuals, as :func:`solve_lp` returns them."""
        if not self.optimal:
            return LpSolution(self.status, iterations=self.iterations, warm_started=bool(self._extra_cols))
        lp = self.linear_program()
        sf = _standard_form(lp)
        sol = _finish(lp, sf, [self._full_column(sf, c) for c in self._basis])
        sol.iterations = self.iterations
        sol.warm_started = bool(self._extra_cols)
        return sol
