"""Graph-based precomputation of zero-probability states and maybe states.

Nothing here does arithmetic on probabilities; only positivity of the
stored support matters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .mdp import Mdp

__all__ = [
    "Objective",
    "MaybeAnalysis",
    "prob0_max",
    "prob0_min",
    "maybe_states",
    "is_apt",
    "zero_completion",
    "reachable_backwards",
]


class Objective(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class MaybeAnalysis:
    objective: Objective
    zero_states: frozenset[int]
    target_states: frozenset[int]
    maybe_states: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.maybe_states)


def reachable_backwards(mdp: Mdp, targets: Iterable[int], allowed=None) -> set[int]:
    """States that reach ``targets`` with positive probability under some choice.

    ``allowed`` (a set of transition indices) restricts which transitions may
    be used; by default all are.
    """
    reached = set(targets)
    queue = deque(sorted(reached))
    while queue:
        t = queue.popleft()
        for j in mdp.predecessors[t]:
            if allowed is not None and j not in allowed:
                continue
            s = mdp.state_of(j)
            if s not in reached:
                reached.add(s)
                queue.append(s)
    return reached


def prob0_max(mdp: Mdp, targets: Iterable[int]) -> frozenset[int]:
    """States from which no scheduler reaches ``targets``."""
    return frozenset(mdp.states) - reachable_backwards(mdp, targets)


def prob0_min(mdp: Mdp, targets: Iterable[int]) -> frozenset[int]:
    """States from which some scheduler avoids ``targets`` forever.

    Greatest fixpoint: start from the non-target states and drop every state
    all of whose transitions leave the current set with positive probability.
    A transition "leaves" once any state of its support is dropped, so each
    transition is examined a bounded number of times via a counter.
    """
    targets = set(targets)
    inside = set(mdp.states) - targets
    # transitions of each state still contained in `inside`
    alive = {s: len(mdp.enabled(s)) for s in inside}
    dead = [False] * mdp.num_transitions
    queue = deque()
    for j, mu in enumerate(mdp.transitions):
        if mu.source in inside and any(t not in inside for t in mu.support):
            dead[j] = True
            alive[mu.source] -= 1
    for s in sorted(inside):
        if alive[s] == 0:
            queue.append(s)
    removed = set()
    while queue:
        s = queue.popleft()
        if s in removed:
            continue
        removed.add(s)
        for j in mdp.predecessors[s]:
            src = mdp.state_of(j)
            if dead[j] or src not in inside or src in removed:
                continue
            dead[j] = True
            alive[src] -= 1
            if alive[src] == 0:
                queue.append(src)
    return frozenset(inside - removed)


def maybe_states(mdp: Mdp, targets: Iterable[int], objective) -> MaybeAnalysis:
    objective = Objective(objective)
    targets = frozenset(targets)
    if objective is Objective.MAX:
        zero = prob0_max(mdp, targets)
    else:
        zero = prob0_min(mdp, targets)
    zero = zero - targets
    maybe = tuple(s for s in mdp.states if s not in zero and s not in targets)
    return MaybeAnalysis(objective, frozenset(zero), targets, maybe)


def is_apt(mdp: Mdp, analysis: MaybeAnalysis, scheduler: Mapping[int, int]) -> bool:
    """Whether every maybe state reaches the targets along chosen transitions."""
    if analysis.objective is Objective.MIN:
        return True
    chosen = {scheduler[s] for s in analysis.maybe_states}
    reached = reachable_backwards(mdp, analysis.target_states, allowed=chosen)
    return all(s in reached for s in analysis.maybe_states)


def zero_completion(mdp: Mdp, analysis: MaybeAnalysis) -> dict[int, int]:
    """Choices for the non-maybe states that keep the zero states at value 0.

    For the minimum, a zero state picks a transition whose support stays in
    the zero set (one exists by the fixpoint).  Everything else takes its
    first enabled transition.
    """
    choice = {}
    zero = analysis.zero_states
    for s in mdp.states:
        if s in analysis.target_states or s in zero:
            choice[s] = mdp.offsets[s]
    if analysis.objective is Objective.MIN:
        for s in zero:
            for j in mdp.enabled(s):
                if all(t in zero for t in mdp.transitions[j].support):
                    choice[s] = j
                    break
    return choice
