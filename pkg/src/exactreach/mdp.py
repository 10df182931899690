"""Markov decision processes with exact rational probabilities.

States are the integers ``0..num_states-1``.  Transitions are stored in
canonical order: grouped by source state, with the input order preserved
inside each group.  A scheduler is a plain ``dict`` mapping a state to the
canonical index of one of its enabled transitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Mapping

from .errors import (
    DanglingTargetError,
    DistributionNotStochasticError,
    EmptyEnabledSetError,
    IncompleteSchedulerError,
    ModelError,
    SchedulerDomainMismatchError,
)

__all__ = [
    "Transition",
    "Mdp",
    "MarkovChain",
    "FinitePath",
    "to_fraction",
    "validate_mdp",
    "restrict",
    "check_scheduler",
    "path_probability",
]

_PROB_RE = re.compile(r"^(?:\d+/\d+|\d+(?:\.\d*)?|\.\d+)$")


def to_fraction(value) -> Fraction:
    """Convert a probability literal to an exact Fraction.

    Accepts Fractions, ints, ``"p/q"`` strings and decimal strings.  A
    decimal with ``d`` digits after the point becomes ``num / 10**d``.
    Binary floats are refused.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _PROB_RE.match(text):
            raise ValueError(f"malformed probability literal {value!r}")
        if "/" in text and int(text.split("/")[1]) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(text)
    raise TypeError(
        f"probability {value!r} of type {type(value).__name__} cannot be converted exactly"
    )


@dataclass(frozen=True)
class Transition:
    source: int
    distribution: tuple[tuple[int, Fraction], ...]
    action: str = "-"

    @cached_property
    def _map(self) -> dict[int, Fraction]:
        return dict(self.distribution)

    def __call__(self, target: int) -> Fraction:
        return self._map.get(target, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.distribution)


@dataclass(frozen=True)
class Mdp:
    """A validated MDP.  Build instances with :func:`validate_mdp`."""

    num_states: int
    transitions: tuple[Transition, ...]
    offsets: tuple[int, ...]
    # origin[j]: index of canonical transition j in the list it was built from
    origin: tuple[int, ...] = field(default=(), compare=False)

    @property
    def states(self) -> range:
        return range(self.num_states)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    def enabled(self, state: int) -> range:
        return range(self.offsets[state], self.offsets[state + 1])

    def state_of(self, index: int) -> int:
        return self.transitions[index].source

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        """For each state, the transition indices with that state in their support."""
        pre: list[list[int]] = [[] for _ in range(self.num_states)]
        for j, mu in enumerate(self.transitions):
            for t, _ in mu.distribution:
                pre[t].append(j)
        return tuple(tuple(p) for p in pre)

    @property
    def is_markov_chain(self) -> bool:
        return all(len(self.enabled(s)) == 1 for s in self.states)


@dataclass(frozen=True)
class MarkovChain(Mdp):
    """An MDP in which every state has exactly one enabled transition."""

    def __post_init__(self):
        for s in self.states:
            if len(self.enabled(s)) != 1:
                raise ModelError(f"state {s} has {len(self.enabled(s))} transitions in a Markov chain")

    def successor(self, state: int) -> Transition:
        return self.transitions[self.offsets[state]]


def validate_mdp(num_states: int, transitions: Iterable, lines=None, cls=Mdp) -> Mdp:
    """Check a raw model and return it in canonical form.

    ``transitions`` holds ``(source, distribution)`` or
    ``(source, action, distribution)`` items, where ``distribution`` maps
    target states to probabilities (see :func:`to_fraction`).  ``lines``
    optionally gives a source line per transition for error messages.
    """
    if num_states < 1:
        raise ModelError("a model needs at least one state")
    raw = list(transitions)
    built = []
    for k, item in enumerate(raw):
        line = lines[k] if lines is not None else None
        if len(item) == 2:
            source, dist = item
            action = "-"
        else:
            source, action, dist = item
        if not 0 <= source < num_states:
            raise DanglingTargetError(f"transition source {source} is not a state", line)
        items = dist.items() if isinstance(dist, Mapping) else dist
        merged: dict[int, Fraction] = {}
        for target, p in items:
            if not 0 <= target < num_states:
                raise DanglingTargetError(
                    f"transition from state {source} puts mass on unknown state {target}", line
                )
            try:
                q = to_fraction(p)
            except (TypeError, ValueError) as exc:
                raise ModelError(str(exc), line) from None
            if q < 0:
                raise DistributionNotStochasticError(
                    f"negative probability {q} from state {source}", line
                )
            merged[target] = merged.get(target, Fraction(0)) + q
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise DistributionNotStochasticError(
                f"distribution of state {source} sums to {total}, not 1", line
            )
        pairs = tuple(sorted((t, q) for t, q in merged.items() if q != 0))
        built.append((source, k, Transition(source, pairs, str(action))))

    built.sort(key=lambda item: (item[0], item[1]))
    counts = [0] * num_states
    for source, _, _ in built:
        counts[source] += 1
    for s, c in enumerate(counts):
        if c == 0:
            raise EmptyEnabledSetError(f"state {s} has no enabled transition")
    offsets = [0]
    for c in counts:
        offsets.append(offsets[-1] + c)
    return cls(
        num_states,
        tuple(t for _, _, t in built),
        tuple(offsets),
        tuple(k for _, k, _ in built),
    )


def check_scheduler(mdp: Mdp, scheduler: Mapping[int, int], domain: Iterable[int]) -> None:
    """Raise unless ``scheduler`` picks an enabled transition exactly on ``domain``."""
    domain = set(domain)
    if set(scheduler) != domain:
        missing = sorted(domain - set(scheduler))
        extra = sorted(set(scheduler) - domain)
        raise SchedulerDomainMismatchError(
            f"scheduler domain differs: missing {missing}, unexpected {extra}"
        )
    for s, j in scheduler.items():
        if j not in mdp.enabled(s):
            raise SchedulerDomainMismatchError(f"transition {j} is not enabled in state {s}")


def restrict(mdp: Mdp, scheduler: Mapping[int, int], completion: Mapping[int, int] | None = None) -> MarkovChain:
    """The Markov chain keeping only the transition chosen in each state."""
    choice = dict(completion or {})
    choice.update(scheduler)
    missing = [s for s in mdp.states if s not in choice]
    if missing:
        raise IncompleteSchedulerError(f"no choice for states {missing}")
    for s in mdp.states:
        if choice[s] not in mdp.enabled(s):
            raise SchedulerDomainMismatchError(f"transition {choice[s]} is not enabled in state {s}")
    kept = tuple(choice[s] for s in mdp.states)
    return MarkovChain(
        mdp.num_states,
        tuple(mdp.transitions[j] for j in kept),
        tuple(range(mdp.num_states + 1)),
        kept,
    )


@dataclass(frozen=True)
class FinitePath:
    """``states[0] . transitions[0] . states[1] ... states[-1]``."""

    states: tuple[int, ...]
    transitions: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.states) != len(self.transitions) + 1:
            raise ValueError("a path has one more state than transitions")

    def __len__(self):
        return len(self.transitions)

    @property
    def last(self) -> int:
        return self.states[-1]

    def is_path_of(self, mdp: Mdp) -> bool:
        for i, j in enumerate(self.transitions):
            if j not in mdp.enabled(self.states[i]) or mdp.transitions[j](self.states[i + 1]) <= 0:
                return False
        return True


def path_probability(mdp: Mdp, scheduler: Mapping[int, int], start: int, path: FinitePath) -> Fraction:
    if path.states[0] != start:
        return Fraction(0)
    prob = Fraction(1)
    for i, j in enumerate(path.transitions):
        s = path.states[i]
        if s not in scheduler:
            raise IncompleteSchedulerError(f"no choice for state {s}")
        if scheduler[s] != j:
            return Fraction(0)
        p = mdp.transitions[j](path.states[i + 1])
        if p == 0:
            return Fraction(0)
        prob *= p
    return prob
