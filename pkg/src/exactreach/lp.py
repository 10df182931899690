"""Canonical-form linear programs for reachability, and bases from schedulers.

For the maximum the program is ``min 1.x_S  s.t. (A | I) x = b, x >= 0``;
for the minimum it is ``min -1.x_S  s.t. (-A | I) x = -b, x >= 0``.  Row
``i`` belongs to the ``i``-th transition of a maybe state, column ``j < n``
to maybe state ``s_j`` and column ``n + i`` to the slack of row ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import EmptyMaybeSetError, SchedulerDomainMismatchError
from .mdp import Mdp, check_scheduler
from .qualitative import MaybeAnalysis, Objective

__all__ = [
    "ColumnId",
    "LpProblem",
    "Basis",
    "build_lp",
    "basis_from_scheduler",
    "default_basis",
    "to_lp_text",
]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ColumnId:
    """``kind`` is ``"state"`` (``ref`` a state id) or ``"slack"`` (``ref`` a transition index)."""

    kind: str
    ref: int

    def __str__(self):
        return f"x_s{self.ref}" if self.kind == "state" else f"slack_t{self.ref}"


@dataclass(frozen=True)
class LpProblem:
    objective: Objective
    maybe_states: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    row_transitions: tuple[int, ...]
    row_sources: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def n(self) -> int:
        return len(self.maybe_states)

    @property
    def num_columns(self) -> int:
        return self.n + self.m

    def column_id(self, k: int) -> ColumnId:
        if k < self.n:
            return ColumnId("state", self.maybe_states[k])
        return ColumnId("slack", self.row_transitions[k - self.n])

    @cached_property
    def columns(self) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
        """Sparse columns: ``columns[k]`` lists the non-zero ``(row, value)`` pairs."""
        cols = [[] for _ in range(self.num_columns)]
        for i, row in enumerate(self.matrix):
            for k, v in enumerate(row):
                if v:
                    cols[k].append((i, v))
        return tuple(tuple(c) for c in cols)

    @cached_property
    def state_column(self) -> dict[int, int]:
        return {s: k for k, s in enumerate(self.maybe_states)}

    @cached_property
    def row_of_transition(self) -> dict[int, int]:
        return {j: i for i, j in enumerate(self.row_transitions)}

    def slack_column(self, transition: int) -> int:
        return self.n + self.row_of_transition[transition]


@dataclass(frozen=True)
class Basis:
    columns: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(sorted(set(self.columns))))

    def __len__(self):
        return len(self.columns)

    def __contains__(self, k):
        return k in self.columns

    def __iter__(self):
        return iter(self.columns)


def build_lp(mdp: Mdp, analysis: MaybeAnalysis) -> LpProblem:
    """The reachability LP over the maybe states of ``analysis``.

    Mass moving into zero states contributes to neither the matrix nor the
    right-hand side.
    """
    n = analysis.n
    if n == 0:
        raise EmptyMaybeSetError("no maybe states; all values are 0 or 1")
    pos = {s: k for k, s in enumerate(analysis.maybe_states)}
    targets = analysis.target_states
    row_transitions = [j for s in analysis.maybe_states for j in mdp.enabled(s)]
    m = len(row_transitions)
    sign = ONE if analysis.objective is Objective.MAX else -ONE

    matrix, b, sources = [], [], []
    for i, j in enumerate(row_transitions):
        mu = mdp.transitions[j]
        row = [ZERO] * (n + m)
        mass = ZERO
        for t, p in mu.distribution:
            if t in pos:
                row[pos[t]] = p
            elif t in targets:
                mass += p
        row[pos[mu.source]] -= 1
        for k in range(n):
            if row[k]:
                row[k] = sign * row[k]
        row[n + i] = ONE
        matrix.append(tuple(row))
        b.append(-sign * mass)
        sources.append(mu.source)
    c = tuple([sign] * n + [ZERO] * m)
    return LpProblem(
        analysis.objective,
        analysis.maybe_states,
        tuple(matrix),
        tuple(b),
        c,
        tuple(row_transitions),
        tuple(sources),
    )


def basis_from_scheduler(problem: LpProblem, scheduler: Mapping[int, int]) -> Basis:
    """All state columns plus the slacks of the transitions not chosen."""
    if set(scheduler) != set(problem.maybe_states):
        raise SchedulerDomainMismatchError("scheduler must be defined exactly on the maybe states")
    cols = list(range(problem.n))
    for i, j in enumerate(problem.row_transitions):
        s = problem.row_sources[i]
        if scheduler[s] != j:
            cols.append(problem.n + i)
    if len(cols) != problem.m:
        # a choice that is not a row of its state leaves the count wrong
        raise SchedulerDomainMismatchError("scheduler picks transitions that are not enabled")
    return Basis(tuple(cols))


def default_basis(problem: LpProblem) -> Basis:
    return Basis(tuple(range(problem.n, problem.n + problem.m)))


def _term(coef: Fraction, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    text = name if mag == 1 else f"{mag} {name}"
    return f"{sign} {text}".strip() if first else f" {sign} {text}"


def to_lp_text(problem: LpProblem) -> str:
    """Render the program in CPLEX-LP style with ``p/q`` coefficients (debugging aid)."""
    names = [str(problem.column_id(k)) for k in range(problem.num_columns)]
    out = ["\\ reachability LP, objective " + problem.objective.value, "Minimize"]
    obj = "".join(_term(v, names[k], k == 0) for k, v in enumerate(problem.c) if v)
    out.append(" obj: " + (obj or "0"))
    out.append("Subject To")
    for i, row in enumerate(problem.matrix):
        nz = [(k, v) for k, v in enumerate(row) if v]
        lhs = "".join(_term(v, names[k], idx == 0) for idx, (k, v) in enumerate(nz))
        out.append(f" r{problem.row_transitions[i]}: {lhs} = {problem.b[i]}")
    out.append("End")
    return "\n".join(out) + "\n"
