"""Exact rational revised simplex over the canonical form ``min cx, Ax = b, x >= 0``.

The basis matrix is held as a sparse LU factorization with row pivoting
plus a short file of eta updates; it is rebuilt from scratch after
``REFACTOR_EVERY`` pivots, or earlier once the updates hold more non-zeros
than the factors.  Both the primal and the dual method use Bland's
least-index rule for the entering and the leaving choice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import SingularBasisError
from .lp import Basis, LpProblem

__all__ = [
    "Status",
    "PivotRecord",
    "SimplexOutcome",
    "BasisFactorization",
    "factorize_basis",
    "basic_solution",
    "reduced_costs",
    "primal_simplex",
    "dual_simplex",
    "format_pivot_log",
    "REFACTOR_EVERY",
]

REFACTOR_EVERY = 64
ZERO = Fraction(0)
ONE = Fraction(1)


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    SINGULAR_BASIS = "singular_basis"
    ITERATION_LIMIT = "iteration_limit"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class PivotRecord:
    iteration: int
    phase: str
    entering: int
    leaving: int


@dataclass(frozen=True)
class SimplexOutcome:
    status: Status
    solution: tuple[Fraction, ...] | None
    objective: Fraction | None
    basis: Basis | None
    pivots: int
    phase_log: tuple[PivotRecord, ...]


class BasisFactorization:
    """Exact factorization of the basis matrix whose ``k``-th column is ``heading[k]``.

    Positions index the columns of ``B``; row indices are the LP rows.
    ``solve`` returns ``B^-1 r`` by position, ``solve_transposed`` returns
    ``y`` with ``y^T B = d^T`` by row.
    """

    def __init__(self, problem: LpProblem, heading: Sequence[int]):
        if len(heading) != problem.m:
            raise ValueError(f"a basis needs {problem.m} columns, got {len(heading)}")
        self.problem = problem
        self.heading = list(heading)
        self._factor()

    def _factor(self):
        m = self.problem.m
        rows: list[dict[int, Fraction]] = [{} for _ in range(m)]
        colrows: list[set[int]] = [set() for _ in range(m)]
        for k, col in enumerate(self.heading):
            for i, v in self.problem.columns[col]:
                rows[i][k] = v
                colrows[k].add(i)
        # sparse columns (the slacks) first keeps fill-in low
        order = sorted(range(m), key=lambda k: (len(colrows[k]), k))
        ops: list[tuple[int, int, Fraction]] = []
        pivrows: list[int] = []
        upper: list[dict[int, Fraction]] = []
        for k in order:
            cands = colrows[k]
            if not cands:
                raise SingularBasisError(
                    f"basis is singular: column {self.problem.column_id(self.heading[k])} has no pivot"
                )
            p = min(cands, key=lambda i: (len(rows[i]), i))
            prow = rows[p]
            piv = prow[k]
            for kk in prow:
                colrows[kk].discard(p)
            for i in sorted(cands):
                row = rows[i]
                f = row[k] / piv
                for kk, v in prow.items():
                    nv = row.get(kk, ZERO) - f * v
                    if nv:
                        if kk not in row:
                            colrows[kk].add(i)
                        row[kk] = nv
                    elif kk in row:
                        del row[kk]
                        colrows[kk].discard(i)
                ops.append((p, i, f))
            pivrows.append(p)
            upper.append(prow)
        self._order = order
        self._pivrows = pivrows
        self._upper = upper
        self._ops = ops
        self._etas: list[tuple[int, list[tuple[int, Fraction]]]] = []
        self._lu_size = len(ops) + sum(len(u) for u in upper)
        self._eta_size = 0

    # -- base solves ------------------------------------------------------
    def _base_solve(self, r: list[Fraction]) -> list[Fraction]:
        r = list(r)
        for p, i, f in self._ops:
            if r[p]:
                r[i] -= f * r[p]
        x = [ZERO] * len(r)
        for t in range(len(self._order) - 1, -1, -1):
            k = self._order[t]
            urow = self._upper[t]
            acc = r[self._pivrows[t]]
            for kk, v in urow.items():
                if kk != k and x[kk]:
                    acc -= v * x[kk]
            x[k] = acc / urow[k]
        return x

    def _base_solve_transposed(self, d: list[Fraction]) -> list[Fraction]:
        m = len(d)
        acc = list(d)
        z = [ZERO] * m
        for t, k in enumerate(self._order):
            urow = self._upper[t]
            zp = acc[k] / urow[k]
            z[self._pivrows[t]] = zp
            if zp:
                for kk, v in urow.items():
                    if kk != k:
                        acc[kk] -= zp * v
        for p, i, f in reversed(self._ops):
            if z[i]:
                z[p] -= f * z[i]
        return z

    # -- public solves ----------------------------------------------------
    def solve(self, r: Sequence[Fraction]) -> list[Fraction]:
        x = self._base_solve(list(r))
        for pos, alpha in self._etas:
            ar = next(v for i, v in alpha if i == pos)
            xr = x[pos] / ar
            if xr:
                for i, v in alpha:
                    if i != pos:
                        x[i] -= v * xr
            x[pos] = xr
        return x

    def solve_transposed(self, d: Sequence[Fraction]) -> list[Fraction]:
        w = list(d)
        for pos, alpha in reversed(self._etas):
            acc = w[pos]
            ar = None
            for i, v in alpha:
                if i == pos:
                    ar = v
                elif w[i]:
                    acc -= w[i] * v
            w[pos] = acc / ar
        return self._base_solve_transposed(w)

    def column(self, col: int) -> list[Fraction]:
        """``B^-1 A_col``."""
        r = [ZERO] * self.problem.m
        for i, v in self.problem.columns[col]:
            r[i] = v
        return self.solve(r)

    @property
    def num_updates(self) -> int:
        return len(self._etas)

    def replace(self, pos: int, col: int, alpha: Sequence[Fraction]) -> None:
        """Swap ``col`` into position ``pos`` given ``alpha = B^-1 A_col``."""
        if not alpha[pos]:
            raise SingularBasisError("pivot element is zero")
        self.heading[pos] = col
        eta = [(i, v) for i, v in enumerate(alpha) if v]
        self._etas.append((pos, eta))
        self._eta_size += len(eta)
        # refresh once the update file costs more to apply than the factors
        if len(self._etas) >= REFACTOR_EVERY or self._eta_size > self._lu_size:
            self._factor()

    def reconstruct(self) -> list[list[Fraction]]:
        """Rebuild ``B`` (rows by LP row, columns by position) from the factors."""
        m = self.problem.m
        mat = [[ZERO] * m for _ in range(m)]
        for t, p in enumerate(self._pivrows):
            for k, v in self._upper[t].items():
                mat[p][k] = v
        for p, i, f in reversed(self._ops):
            if f:
                for k in range(m):
                    if mat[p][k]:
                        mat[i][k] += f * mat[p][k]
        # apply eta updates: column pos becomes B_old * alpha
        for pos, alpha in self._etas:
            newcol = [sum((mat[i][k] * v for k, v in alpha), ZERO) for i in range(m)]
            for i in range(m):
                mat[i][pos] = newcol[i]
        return mat


def factorize_basis(problem: LpProblem, basis: Basis) -> BasisFactorization:
    if len(basis) != problem.m:
        raise ValueError(f"a basis needs {problem.m} columns, got {len(basis)}")
    return BasisFactorization(problem, list(basis.columns))


def basic_solution(problem: LpProblem, fact: BasisFactorization) -> tuple[Fraction, ...]:
    xb = fact.solve(problem.b)
    x = [ZERO] * problem.num_columns
    for k, col in enumerate(fact.heading):
        x[col] = xb[k]
    return tuple(x)


def _duals(problem, fact, c):
    return fact.solve_transposed([c[col] for col in fact.heading])


def _reduced(problem, fact, c, y, cols):
    out = {}
    for k in cols:
        d = c[k]
        for i, v in problem.columns[k]:
            if y[i]:
                d -= y[i] * v
        out[k] = d
    return out


def reduced_costs(problem: LpProblem, fact: BasisFactorization, c=None) -> dict[int, Fraction]:
    """Reduced cost ``c_k - c_B B^-1 A_k`` of every non-basic column ``k``."""
    c = problem.c if c is None else c
    basic = set(fact.heading)
    y = _duals(problem, fact, c)
    return _reduced(problem, fact, c, y, [k for k in range(problem.num_columns) if k not in basic])


class _IterationLimit(Exception):
    pass


class _Infeasible(Exception):
    pass


class _Unbounded(Exception):
    pass


class _Engine:
    def __init__(self, problem: LpProblem, start: Basis, limit: int):
        self.problem = problem
        self.fact = factorize_basis(problem, start)
        self.limit = limit
        self.xb = self.fact.solve(problem.b)
        self.log: list[PivotRecord] = []

    @property
    def heading(self):
        return self.fact.heading

    def nonbasic(self):
        basic = set(self.heading)
        return [k for k in range(self.problem.num_columns) if k not in basic]

    def reduced(self, c):
        y = _duals(self.problem, self.fact, c)
        return _reduced(self.problem, self.fact, c, y, self.nonbasic())

    def pivot(self, q, r, alpha, phase):
        if len(self.log) >= self.limit:
            raise _IterationLimit
        theta = self.xb[r] / alpha[r]
        if theta:
            for i, a in enumerate(alpha):
                if a:
                    self.xb[i] -= theta * a
        self.xb[r] = theta
        leaving = self.heading[r]
        self.fact.replace(r, q, alpha)
        if self.fact.num_updates == 0:
            # refactorized: recompute from scratch to keep the iterate exact and small
            self.xb = self.fact.solve(self.problem.b)
        self.log.append(PivotRecord(len(self.log) + 1, phase, q, leaving))

    # -- primal -----------------------------------------------------------
    def primal_phase1(self):
        while True:
            infeasible = {self.heading[k] for k, v in enumerate(self.xb) if v < 0}
            if not infeasible:
                return
            c1 = [ZERO] * self.problem.num_columns
            for col in infeasible:
                c1[col] = -ONE
            d = self.reduced(c1)
            q = next((j for j in sorted(d) if d[j] < 0), None)
            if q is None:
                raise _Infeasible
            alpha = self.fact.column(q)
            best = None
            for k, a in enumerate(alpha):
                v = self.xb[k]
                if (v >= 0 and a > 0) or (v < 0 and a < 0):
                    key = (v / a, self.heading[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            self.pivot(q, best[1], alpha, "primal1")

    def primal_phase2(self, c, phase="primal2"):
        while True:
            d = self.reduced(c)
            q = next((j for j in sorted(d) if d[j] < 0), None)
            if q is None:
                return
            alpha = self.fact.column(q)
            best = None
            for k, a in enumerate(alpha):
                if a > 0:
                    key = (self.xb[k] / a, self.heading[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                raise _Unbounded
            self.pivot(q, best[1], alpha, phase)

    # -- dual -------------------------------------------------------------
    def dual_phase2(self, c, phase="dual2"):
        m = self.problem.m
        while True:
            infeasible = [k for k, v in enumerate(self.xb) if v < 0]
            if not infeasible:
                return
            r = min(infeasible, key=lambda k: self.heading[k])
            e = [ZERO] * m
            e[r] = ONE
            rho = self.fact.solve_transposed(e)
            d = self.reduced(c)
            best = None
            for j in sorted(d):
                arj = ZERO
                for i, v in self.problem.columns[j]:
                    if rho[i]:
                        arj += rho[i] * v
                if arj < 0:
                    key = (d[j] / -arj, j)
                    if best is None or key < best:
                        best = key
            if best is None:
                raise _Infeasible
            q = best[1]
            alpha = self.fact.column(q)
            self.pivot(q, r, alpha, phase)

    def solution(self):
        x = [ZERO] * self.problem.num_columns
        for k, col in enumerate(self.heading):
            x[col] = self.xb[k]
        return tuple(x)


def _check_exact(problem: LpProblem, x) -> None:
    lhs = [ZERO] * problem.m
    for k, xk in enumerate(x):
        if xk:
            for i, v in problem.columns[k]:
                lhs[i] += v * xk
    if lhs != list(problem.b):
        raise RuntimeError("internal error: basic solution leaves a non-zero residual")
    if any(v < 0 for v in x):
        raise RuntimeError("internal error: optimal solution has a negative component")


def _outcome(engine, status):
    log = tuple(engine.log)
    if status is not Status.OPTIMAL:
        return SimplexOutcome(status, None, None, Basis(tuple(engine.heading)), len(log), log)
    x = engine.solution()
    _check_exact(engine.problem, x)
    obj = sum((ck * xk for ck, xk in zip(engine.problem.c, x) if ck and xk), ZERO)
    return SimplexOutcome(status, x, obj, Basis(tuple(engine.heading)), len(log), log)


def _default_limit(problem):
    return 10 * (problem.n + problem.m)


def _run(problem, start, limit, body):
    limit = _default_limit(problem) if limit is None else limit
    try:
        engine = _Engine(problem, start, limit)
    except SingularBasisError:
        return SimplexOutcome(Status.SINGULAR_BASIS, None, None, start, 0, ())
    try:
        body(engine)
    except _IterationLimit:
        return _outcome(engine, Status.ITERATION_LIMIT)
    except _Infeasible:
        return _outcome(engine, Status.INFEASIBLE)
    except _Unbounded:
        return _outcome(engine, Status.UNBOUNDED)
    return _outcome(engine, Status.OPTIMAL)


def primal_simplex(problem: LpProblem, start: Basis, limit: int | None = None) -> SimplexOutcome:
    """Two-phase primal simplex warm-started from ``start``.

    Phase one minimizes the sum of infeasibilities of the basic variables
    without artificial columns; phase two optimizes the true costs.
    """

    def body(engine):
        engine.primal_phase1()
        engine.primal_phase2(problem.c)

    return _run(problem, start, limit, body)


def dual_simplex(problem: LpProblem, start: Basis, limit: int | None = None) -> SimplexOutcome:
    """Dual simplex warm-started from ``start``.

    A dual-feasible start goes straight to the dual iterations.  Otherwise
    the costs of the dual-infeasible non-basic columns are shifted up until
    their reduced costs vanish, the dual method runs on the shifted costs,
    and once the basis is primal feasible the true costs are restored and
    any remaining dual infeasibility is removed by primal iterations.
    """

    def body(engine):
        d = engine.reduced(problem.c)
        shift = {j: -v for j, v in d.items() if v < 0}
        if not shift:
            engine.dual_phase2(problem.c)
            return
        shifted = list(problem.c)
        for j, v in shift.items():
            shifted[j] += v
        engine.dual_phase2(shifted, phase="dual1")
        engine.primal_phase2(problem.c, phase="cleanup")

    return _run(problem, start, limit, body)


def format_pivot_log(problem: LpProblem, log: Sequence[PivotRecord]) -> str:
    """One line per pivot: iteration, phase, entering and leaving column."""
    return "".join(
        f"{rec.iteration} {rec.phase} enter={problem.column_id(rec.entering)} "
        f"leave={problem.column_id(rec.leaving)}\n"
        for rec in log
    )
