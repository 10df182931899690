"""Floating-point value iteration producing a candidate scheduler."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import NonConvergenceError, NonFiniteValueError
from .mdp import Mdp
from .qualitative import MaybeAnalysis, Objective

__all__ = ["BellmanSystem", "ApproxResult", "value_iterate", "DEFAULT_EPSILON"]

DEFAULT_EPSILON = 1e-6
MAX_SWEEPS = 10**7
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BellmanSystem:
    """CSR view of the maybe-state part of an MDP in float64.

    Rows are the transitions of maybe states in canonical order (the same
    rows the LP uses).  ``cols`` index positions in ``analysis.maybe_states``
    and ``consts`` holds the probability mass going straight into the
    targets.
    """

    analysis: MaybeAnalysis
    state_ptr: np.ndarray
    trans_ptr: np.ndarray
    cols: np.ndarray
    probs: np.ndarray
    consts: np.ndarray
    rows: tuple[int, ...]

    @classmethod
    def build(cls, mdp: Mdp, analysis: MaybeAnalysis) -> "BellmanSystem":
        pos = {s: i for i, s in enumerate(analysis.maybe_states)}
        targets = analysis.target_states
        state_ptr, trans_ptr, cols, probs, consts, rows = [0], [0], [], [], [], []
        for s in analysis.maybe_states:
            for j in mdp.enabled(s):
                mass = 0
                for t, p in mdp.transitions[j].distribution:
                    if t in pos:
                        cols.append(pos[t])
                        probs.append(float(p))
                    elif t in targets:
                        mass += p
                consts.append(float(mass))
                rows.append(j)
                trans_ptr.append(len(cols))
            state_ptr.append(len(rows))
        as_idx = lambda v: np.asarray(v, dtype=np.int64)
        return cls(
            analysis,
            as_idx(state_ptr),
            as_idx(trans_ptr),
            as_idx(cols),
            np.asarray(probs, dtype=np.float64),
            np.asarray(consts, dtype=np.float64),
            tuple(rows),
        )

    @property
    def maximize(self) -> bool:
        return self.analysis.objective is Objective.MAX

    def sweep(self, x: np.ndarray, out: np.ndarray) -> float:
        return _core.sweep(self.state_ptr, self.trans_ptr, self.cols, self.probs,
                           self.consts, x, out, self.maximize)

    def backups(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(len(self.rows))
        _core.backups(self.trans_ptr, self.cols, self.probs, self.consts, x, out)
        return out


@dataclass(frozen=True)
class ApproxResult:
    values: dict[int, float]
    scheduler: dict[int, int]
    iterations: int
    epsilon: float


def value_iterate(
    mdp: Mdp,
    analysis: MaybeAnalysis,
    epsilon: float = DEFAULT_EPSILON,
    *,
    tie_break: str = "distance",
    tie_tolerance: float = TIE_TOLERANCE,
    max_sweeps: int = MAX_SWEEPS,
) -> ApproxResult:
    """Synchronous value iteration from the zero vector.

    Stops once two consecutive iterates differ by at most ``epsilon`` in
    every maybe state.  Backups within ``tie_tolerance`` of the optimum count
    as tied.  For the maximum with ``tie_break="distance"`` ties go to the
    transition closest to the targets among tied transitions, which keeps
    the scheduler apt; remaining ties, and every tie with
    ``tie_break="index"``, go to the lowest canonical index.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if tie_break not in ("distance", "index"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    system = BellmanSystem.build(mdp, analysis)
    n = analysis.n
    if n == 0:
        return ApproxResult({}, {}, 0, epsilon)

    x = np.zeros(n)
    y = np.empty(n)
    sweeps = 0
    while True:
        diff = system.sweep(x, y)
        sweeps += 1
        x, y = y, x
        if not math.isfinite(diff) or not np.all(np.isfinite(x)):
            raise NonFiniteValueError(f"non-finite value after sweep {sweeps}")
        if diff <= epsilon:
            break
        if sweeps >= max_sweeps:
            raise NonConvergenceError(f"no convergence within {max_sweeps} sweeps")

    scheduler = _extract_scheduler(mdp, system, x, tie_break, tie_tolerance)
    values = {s: float(x[i]) for i, s in enumerate(analysis.maybe_states)}
    return ApproxResult(values, scheduler, sweeps, epsilon)


def _extract_scheduler(mdp, system, x, tie_break, tol):
    analysis = system.analysis
    b = system.backups(x)
    ptr = system.state_ptr
    near: dict[int, list[int]] = {}
    for i, s in enumerate(analysis.maybe_states):
        seg = b[ptr[i]:ptr[i + 1]]
        best = seg.max() if system.maximize else seg.min()
        near[s] = [system.rows[ptr[i] + k] for k in range(len(seg)) if abs(seg[k] - best) <= tol]

    scheduler = {}
    if system.maximize and tie_break == "distance":
        allowed = {j: s for s, js in near.items() for j in js}
        layer = sorted(analysis.target_states)
        while layer:
            candidates: dict[int, int] = {}
            for t in layer:
                for j in mdp.predecessors[t]:
                    s = allowed.get(j)
                    if s is None or s in scheduler:
                        continue
                    if j < candidates.get(s, math.inf):
                        candidates[s] = j
            scheduler.update(candidates)
            layer = sorted(candidates)
    for s, js in near.items():
        scheduler.setdefault(s, js[0])
    return {s: scheduler[s] for s in analysis.maybe_states}
