"""Compare the value-iteration kernels (Cython extension vs numpy fallback).

    python benchmarks/bench_kernels.py --states 2000 20000 --sweeps 200
"""

import argparse
import random
import time
from fractions import Fraction

import numpy as np

from exactreach import _core
from exactreach.mdp import validate_mdp
from exactreach.qualitative import maybe_states
from exactreach.value_iteration import BellmanSystem


def sized_mdp(rng, n, choices=3, support=4, den=20):
    raw = []
    for s in range(n):
        for a in range(rng.randint(1, choices)):
            succ = rng.sample(range(n), support)
            cuts = sorted(rng.sample(range(1, den), support - 1))
            parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
            raw.append((s, f"a{a}", {t: Fraction(p, den) for t, p in zip(succ, parts)}))
    return validate_mdp(n, raw), set(rng.sample(range(n), max(1, n // 100)))


def timed_sweeps(kernel, system, sweeps, maximize):
    n = len(system.state_ptr) - 1
    x, y = np.zeros(n), np.empty(n)
    t0 = time.perf_counter()
    for _ in range(sweeps):
        kernel.sweep(system.state_ptr, system.trans_ptr, system.cols, system.probs,
                     system.consts, x, y, maximize)
        x, y = y, x
    return time.perf_counter() - t0, x


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--states", type=int, nargs="+", default=[1000, 10000, 50000])
    ap.add_argument("--sweeps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    backends = _core.available_backends()
    print(f"backends: {', '.join(backends)} (default {_core.BACKEND})")
    print(f"{'states':>8} {'rows':>8} " + " ".join(f"{b + ' s':>12}" for b in backends) + "   speedup  identical")
    for size in args.states:
        mdp, goal = sized_mdp(random.Random(args.seed), size)
        analysis = maybe_states(mdp, goal, "max")
        system = BellmanSystem.build(mdp, analysis)
        times, results = [], []
        for name in backends:
            t, x = timed_sweeps(_core.load_backend(name), system, args.sweeps, True)
            times.append(t)
            results.append(x)
        same = all(np.array_equal(results[0], r) for r in results[1:])
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{analysis.n:>8} {len(system.rows):>8} " + " ".join(f"{t:12.4f}" for t in times)
              + f"  {speed}  {same}")


if __name__ == "__main__":
    main()
