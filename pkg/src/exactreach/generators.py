"""Model families used by the tests, the acceptance suite and the benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction

from .mdp import validate_mdp
from .modelfile import Model

__all__ = ["random_mdp", "biased_walk", "slow_lure"]


def _split(rng: random.Random, k: int, max_den: int) -> list[Fraction]:
    """``k`` positive fractions summing to 1, common denominator at most ``max_den``."""
    den = rng.randint(k, max(k, max_den))
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return [Fraction(p, den) for p in parts]


def random_mdp(rng: random.Random, max_states=8, max_choices=3, max_support=3, max_den=10,
               target_prob=0.25) -> Model:
    """A random MDP with label ``goal``; probabilities have denominators <= ``max_den``."""
    n = rng.randint(1, max_states)
    raw = []
    for s in range(n):
        for a in range(rng.randint(1, max_choices)):
            k = rng.randint(1, min(max_support, n, max_den))
            support = rng.sample(range(n), k)
            raw.append((s, f"a{a}", dict(zip(support, _split(rng, k, max_den)))))
    goal = frozenset(s for s in range(n) if rng.random() < target_prob)
    return Model(validate_mdp(n, raw), {"goal": goal})


def biased_walk(n: int, den: int) -> Model:
    """A walk on ``0..n`` with ``n`` the goal and ``0`` a sink.

    Each interior state may step up with probability ``(den+1)/(2 den)`` or
    take a lazier move that steps up with probability ``1/den``.  Exact
    answers have denominators growing like ``(den+1)**n``.
    """
    up = Fraction(den + 1, 2 * den)
    lazy = Fraction(1, den)
    raw = [(0, "-", {0: 1}), (n, "-", {n: 1})]
    for i in range(1, n):
        raw.append((i, "walk", {i + 1: up, i - 1: 1 - up}))
        raw.append((i, "lazy", {i + 1: lazy, i - 1: 1 - lazy}))
    return Model(validate_mdp(n + 1, raw), {"goal": frozenset({n})})


def slow_lure(rng: random.Random, gadgets=None) -> Model:
    """Decision states torn between a quick exit and a slowly paying loop.

    State 0 is the goal and state 1 a sink.  Each gadget has a decision
    state choosing between an immediate lottery worth ``a`` and moving to a
    looping state worth ``g / (1 - r) > a`` that value iteration only
    discovers slowly, so a coarse threshold keeps the quick exit.  Decision
    states can also hand over to the next gadget.
    """
    k = gadgets if gadgets is not None else rng.randint(1, 6)
    raw = [(0, "-", {0: 1}), (1, "-", {1: 1})]
    for i in range(k):
        d, w = 2 + 2 * i, 3 + 2 * i
        r = rng.choice([Fraction(4, 5), Fraction(9, 10), Fraction(19, 20)])
        a = Fraction(rng.randint(20, 45), 100)
        slow_value = a + Fraction(rng.randint(5, 30), 100)
        g = slow_value * (1 - r)
        raw.append((d, "quick", {0: a, 1: 1 - a}))
        raw.append((d, "slow", {w: 1}))
        if i + 1 < k:
            h = Fraction(rng.randint(1, 4), 10)
            raw.append((d, "next", {2 + 2 * (i + 1): 1 - h, 1: h}))
        raw.append((w, "loop", {w: r, 0: g, 1: 1 - r - g}))
    return Model(validate_mdp(2 + 2 * k, raw), {"goal": frozenset({0})})
