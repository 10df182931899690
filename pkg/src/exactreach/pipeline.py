"""The exact model-checking pipeline and the benchmark driver.

``run`` chains qualitative precomputation, value iteration, LP
construction, the scheduler basis and an exact simplex warm start.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import time
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ExactReachError, SingularBasisError
from .lp import LpProblem, basis_from_scheduler, build_lp, default_basis
from .mdp import Mdp
from .modelfile import Model
from .qualitative import Objective, maybe_states
from .simplex import (
    PivotRecord,
    Status,
    basic_solution,
    dual_simplex,
    factorize_basis,
    format_pivot_log,
    primal_simplex,
    reduced_costs,
)
from .value_iteration import DEFAULT_EPSILON, value_iterate

__all__ = [
    "ResultStatus",
    "RunOptions",
    "ExactResult",
    "run",
    "render_decimal",
    "result_to_json",
    "result_to_text",
    "benchmark",
    "BENCH_COLUMNS",
    "write_csv",
]


class ResultStatus(str, enum.Enum):
    EXACT = "exact"
    SCHEDULER_NOT_APT = "scheduler_not_apt"
    ERROR = "error"


@dataclass(frozen=True)
class RunOptions:
    epsilon: float = DEFAULT_EPSILON
    simplex: str = "dual"
    start_basis: str = "scheduler"
    repair_apt: bool = False
    iteration_limit: int | None = None
    # test hook: replaces the value-iteration scheduler on the maybe states
    scheduler_override: Mapping[int, int] | None = None


@dataclass(frozen=True)
class ExactResult:
    status: ResultStatus
    objective: Objective
    values: tuple[Fraction, ...]
    approx: tuple[float, ...]
    pivots: int
    scheduler_optimal: bool
    timings: dict[str, float]
    scheduler: dict[int, int] = field(default_factory=dict)
    phase_log: tuple[PivotRecord, ...] = ()
    problem: LpProblem | None = field(default=None, repr=False)
    message: str = ""

    @property
    def pivot_log(self) -> str:
        if self.problem is None:
            return ""
        return format_pivot_log(self.problem, self.phase_log)


def render_decimal(q: Fraction, digits: int = 17) -> str:
    """Round-to-nearest decimal with ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return str(d)


def _resolve_targets(model, target) -> tuple[Mdp, frozenset[int]]:
    if isinstance(model, Model):
        mdp, labels = model
    else:
        mdp, labels = model, {}
    if isinstance(target, str):
        if target not in labels:
            raise KeyError(f"unknown label {target!r}")
        return mdp, labels[target]
    return mdp, frozenset(target)


def _scheduler_is_optimal(problem, scheduler) -> bool:
    try:
        fact = factorize_basis(problem, basis_from_scheduler(problem, scheduler))
    except SingularBasisError:
        return False
    x = basic_solution(problem, fact)
    return all(v >= 0 for v in x) and all(d >= 0 for d in reduced_costs(problem, fact).values())


def run(model, objective, target, options: RunOptions | None = None) -> ExactResult:
    """Exact optimal reachability probabilities for every state.

    ``model`` is a :class:`Model` (then ``target`` names a label) or a bare
    :class:`Mdp` (then ``target`` is an iterable of state ids).
    """
    options = options or RunOptions()
    if options.simplex not in ("dual", "primal"):
        raise ValueError(f"unknown simplex variant {options.simplex!r}")
    if options.start_basis not in ("scheduler", "default"):
        raise ValueError(f"unknown start basis {options.start_basis!r}")
    objective = Objective(objective)
    mdp, targets = _resolve_targets(model, target)
    clock = time.perf_counter
    t0 = clock()

    analysis = maybe_states(mdp, targets, objective)
    approx = value_iterate(mdp, analysis, options.epsilon)
    scheduler = dict(options.scheduler_override) if options.scheduler_override else approx.scheduler
    t1 = clock()

    approx_all = tuple(
        approx.values.get(s, 1.0 if s in analysis.target_states else 0.0) for s in mdp.states
    )
    base_values = tuple(Fraction(1) if s in analysis.target_states else Fraction(0) for s in mdp.states)

    def timings(t_lp, t_sx):
        return {
            "value_iteration_s": t1 - t0,
            "lp_construction_s": t_lp - t1,
            "simplex_s": t_sx - t_lp,
            "total_s": t_sx - t0,
        }

    if analysis.n == 0:
        return ExactResult(ResultStatus.EXACT, objective, base_values, approx_all, 0, True,
                           timings(t1, t1), {})

    problem = build_lp(mdp, analysis)
    if options.start_basis == "scheduler":
        start = basis_from_scheduler(problem, scheduler)
    else:
        start = default_basis(problem)
    t2 = clock()
    solver = dual_simplex if options.simplex == "dual" else primal_simplex
    outcome = solver(problem, start, options.iteration_limit)

    if outcome.status is Status.SINGULAR_BASIS and options.repair_apt and objective is Objective.MAX:
        # retry with every epsilon-near tie resolved towards the targets
        approx = value_iterate(mdp, analysis, options.epsilon, tie_tolerance=options.epsilon)
        scheduler = approx.scheduler
        approx_all = tuple(
            approx.values.get(s, 1.0 if s in analysis.target_states else 0.0) for s in mdp.states
        )
        outcome = solver(problem, basis_from_scheduler(problem, scheduler), options.iteration_limit)
    t3 = clock()

    if outcome.status is Status.SINGULAR_BASIS:
        if objective is Objective.MAX:
            return ExactResult(ResultStatus.SCHEDULER_NOT_APT, objective, (), approx_all, 0, False,
                               timings(t2, t3), scheduler, (), problem,
                               "the scheduler basis is singular: the scheduler is not apt")
        return ExactResult(ResultStatus.ERROR, objective, (), approx_all, 0, False,
                           timings(t2, t3), scheduler, (), problem,
                           "internal error: singular scheduler basis for the minimum")
    if outcome.status is not Status.OPTIMAL:
        return ExactResult(ResultStatus.ERROR, objective, (), approx_all, outcome.pivots, False,
                           timings(t2, t3), scheduler, outcome.phase_log, problem,
                           f"simplex stopped with status {outcome.status.value}")

    values = list(base_values)
    for k, s in enumerate(problem.maybe_states):
        values[s] = outcome.solution[k]
    if options.start_basis == "scheduler":
        optimal = outcome.pivots == 0
    else:
        optimal = _scheduler_is_optimal(problem, scheduler)
    return ExactResult(ResultStatus.EXACT, objective, tuple(values), approx_all, outcome.pivots,
                       optimal, timings(t2, t3), scheduler, outcome.phase_log, problem)


def result_to_json(result: ExactResult, include_timings: bool = True) -> str:
    """JSON rendering; big integers become decimal strings."""
    doc = {
        "status": result.status.value,
        "objective": result.objective.value,
        "values": [
            {"state": s, "num": str(v.numerator), "den": str(v.denominator), "approx": result.approx[s]}
            for s, v in enumerate(result.values)
        ],
        "pivots": result.pivots,
        "scheduler_optimal": result.scheduler_optimal,
        "timings": {k: (v if include_timings else 0.0) for k, v in result.timings.items()},
    }
    if result.message:
        doc["message"] = result.message
    return json.dumps(doc, indent=2)


def result_to_text(result: ExactResult, include_timings: bool = True) -> str:
    out = [f"status: {result.status.value}", f"objective: {result.objective.value}"]
    if result.message:
        out.append(f"message: {result.message}")
    out.append(f"pivots: {result.pivots}")
    out.append(f"scheduler optimal: {'yes' if result.scheduler_optimal else 'no'}")
    for s, v in enumerate(result.values):
        out.append(f"s{s}: {v} ({render_decimal(v)})")
    if include_timings:
        t = result.timings
        out.append(
            "timings (s): value iteration {value_iteration_s:.6f}, LP construction "
            "{lp_construction_s:.6f}, simplex {simplex_s:.6f}, total {total_s:.6f}".format(**t)
        )
    return "\n".join(out) + "\n"


BENCH_COLUMNS = [
    "model", "n", "m", "variant", "start_basis", "epsilon", "status", "pivots",
    "value_iteration_s", "lp_construction_s", "simplex_s", "total_s",
]


def benchmark(
    models: Iterable[tuple[str, Model]],
    objective,
    target,
    epsilons=(DEFAULT_EPSILON,),
    variants=("dual", "primal"),
    start_bases=("scheduler", "default"),
    options: RunOptions | None = None,
) -> list[dict]:
    """Run every (model, epsilon, variant, start basis) combination; one row each.

    Failures are recorded in the ``status`` column and the sweep continues.
    """
    base = options or RunOptions()
    rows = []
    for name, model in models:
        for eps in epsilons:
            for variant in variants:
                for start in start_bases:
                    row = dict.fromkeys(BENCH_COLUMNS, "")
                    row.update(model=name, variant=variant, start_basis=start, epsilon=eps)
                    opts = replace(base, epsilon=eps, simplex=variant, start_basis=start)
                    try:
                        res = run(model, objective, target, opts)
                    except (ExactReachError, KeyError, ValueError) as exc:
                        row["status"] = f"error: {exc}"
                        rows.append(row)
                        continue
                    if res.problem is not None:
                        row.update(n=res.problem.n, m=res.problem.m)
                    else:
                        row.update(n=0, m=0)
                    row.update(status=res.status.value, pivots=res.pivots, **res.timings)
                    rows.append(row)
    return rows


def write_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue() if fh is None else ""
