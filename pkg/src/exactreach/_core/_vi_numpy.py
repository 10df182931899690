"""Numpy fallback for the compiled Bellman kernels (same signatures)."""

import numpy as np


def backups(trans_ptr, cols, probs, consts, x, out):
    m = consts.shape[0]
    rows = np.repeat(np.arange(m, dtype=np.int64), np.diff(trans_ptr))
    acc = np.bincount(rows, weights=probs * x[cols], minlength=m)
    np.add(consts, acc, out=out)


def sweep(state_ptr, trans_ptr, cols, probs, consts, x, out, maximize):
    n = state_ptr.shape[0] - 1
    if n == 0:
        return 0.0
    b = np.empty(consts.shape[0])
    backups(trans_ptr, cols, probs, consts, x, b)
    reduce = np.maximum if maximize else np.minimum
    out[:] = reduce.reduceat(b, state_ptr[:-1])
    d = np.abs(out - x)
    if not np.all(np.isfinite(d)):
        return float("nan")
    return float(d.max())
