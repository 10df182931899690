"""Independent exact ground truth: chain solving, scheduler enumeration and
policy iteration in rational arithmetic.

The chain solver deliberately shares no code with the simplex module: it
has its own graph search and its own Gaussian elimination.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NonAptStartError, TooManySchedulersError
from .mdp import MarkovChain, Mdp, restrict
from .qualitative import MaybeAnalysis, Objective, is_apt, zero_completion

__all__ = [
    "OracleResult",
    "chain_reach_exact",
    "solve_exact",
    "brute_force_optimal",
    "exact_policy_iteration",
    "MAX_SCHEDULERS",
]

MAX_SCHEDULERS = 10**6
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class OracleResult:
    values: tuple[Fraction, ...]
    argopt: dict[int, int]
    schedulers_examined: int
    # value vector of each evaluated scheduler, in order (policy iteration only)
    history: tuple[tuple[Fraction, ...], ...] = field(default=(), repr=False)


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square non-singular system by Gaussian elimination.

    Partial pivoting takes the entry of largest absolute value in the column.
    """
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: (abs(a[r][col]), -r))
        if a[piv][col] == 0:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        prow = a[col]
        nz = [k for k in range(col + 1, n + 1) if prow[k]]
        p = prow[col]
        for r in range(col + 1, n):
            row = a[r]
            if row[col]:
                f = row[col] / p
                row[col] = ZERO
                for k in nz:
                    row[k] -= f * prow[k]
    x = [ZERO] * n
    for r in range(n - 1, -1, -1):
        row = a[r]
        acc = row[n]
        for k in range(r + 1, n):
            if row[k] and x[k]:
                acc -= row[k] * x[k]
        x[r] = acc / row[r]
    return x


def chain_reach_exact(chain: MarkovChain, targets: Iterable[int]) -> tuple[Fraction, ...]:
    """Exact probability of eventually reaching ``targets`` from each state."""
    targets = set(targets)
    preds = [[] for _ in chain.states]
    for s in chain.states:
        for t in chain.successor(s).support:
            preds[t].append(s)
    reach = set(targets)
    queue = deque(targets)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in reach:
                reach.add(s)
                queue.append(s)
    unknown = [s for s in chain.states if s in reach and s not in targets]
    pos = {s: i for i, s in enumerate(unknown)}
    k = len(unknown)
    matrix = [[ZERO] * k for _ in range(k)]
    rhs = [ZERO] * k
    for s in unknown:
        i = pos[s]
        matrix[i][i] = ONE
        for t, p in chain.successor(s).distribution:
            if t in targets:
                rhs[i] += p
            elif t in pos:
                matrix[i][pos[t]] -= p
    sol = solve_exact(matrix, rhs) if k else []
    values = [ZERO] * chain.num_states
    for s in targets:
        values[s] = ONE
    for s, i in pos.items():
        values[s] = sol[i]
    return tuple(values)


def brute_force_optimal(mdp: Mdp, targets: Iterable[int], objective) -> OracleResult:
    """Optimum over all memoryless deterministic schedulers by enumeration.

    Schedulers are enumerated in lexicographic order of their choices; the
    first one attaining the pointwise optimum in every state is returned.
    """
    objective = Objective(objective)
    targets = frozenset(targets)
    total = 1
    for s in mdp.states:
        total *= len(mdp.enabled(s))
        if total > MAX_SCHEDULERS:
            raise TooManySchedulersError(f"more than {MAX_SCHEDULERS} schedulers")
    pick = max if objective is Objective.MAX else min
    seen = []
    best = None
    for choice in itertools.product(*(mdp.enabled(s) for s in mdp.states)):
        sched = dict(enumerate(choice))
        v = chain_reach_exact(restrict(mdp, sched), targets)
        seen.append((sched, v))
        best = v if best is None else tuple(pick(a, b) for a, b in zip(best, v))
    argopt = next(sched for sched, v in seen if v == best)
    return OracleResult(best, argopt, len(seen))


def _backup(mdp: Mdp, j: int, values) -> Fraction:
    return sum((p * values[t] for t, p in mdp.transitions[j].distribution), ZERO)


def exact_policy_iteration(mdp: Mdp, analysis: MaybeAnalysis, start: Mapping[int, int]) -> OracleResult:
    """Howard-style policy iteration with exact evaluation.

    Every round switches all states that have a strictly better transition.
    For the maximum a switch is only kept if the scheduler stays apt.
    """
    maximize = analysis.objective is Objective.MAX
    eta = {s: start[s] for s in analysis.maybe_states}
    if maximize and not is_apt(mdp, analysis, eta):
        raise NonAptStartError("policy iteration for the maximum needs an apt start")
    completion = zero_completion(mdp, analysis)
    better = (lambda a, b: a > b) if maximize else (lambda a, b: a < b)
    history = []
    while True:
        values = chain_reach_exact(restrict(mdp, eta, completion), analysis.target_states)
        history.append(values)
        improved = {}
        for s in analysis.maybe_states:
            current = _backup(mdp, eta[s], values)
            best_j, best_v = None, current
            for j in mdp.enabled(s):
                v = _backup(mdp, j, values)
                if better(v, best_v):
                    best_j, best_v = j, v
            if best_j is not None:
                improved[s] = best_j
        if not improved:
            break
        tentative = {**eta, **improved}
        if maximize and not is_apt(mdp, analysis, tentative):
            tentative = dict(eta)
            for s in sorted(improved):
                trial = {**tentative, s: improved[s]}
                if is_apt(mdp, analysis, trial):
                    tentative = trial
            if tentative == eta:
                raise RuntimeError("no apt-preserving improvement although one exists")
        eta = tentative
    return OracleResult(values, eta, len(history), tuple(history))
