# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Bellman kernels over the CSR layout built by ``BellmanSystem``.

Summation order matches the numpy fallback entry for entry, so both
backends produce bit-identical iterates.
"""

from libc.math cimport fabs
from libc.stdint cimport int64_t


def backups(const int64_t[::1] trans_ptr, const int64_t[::1] cols,
            const double[::1] probs, const double[::1] consts,
            const double[::1] x, double[::1] out):
    cdef Py_ssize_t r, e
    cdef double acc
    for r in range(consts.shape[0]):
        acc = 0.0
        for e in range(trans_ptr[r], trans_ptr[r + 1]):
            acc += probs[e] * x[cols[e]]
        out[r] = consts[r] + acc


def sweep(const int64_t[::1] state_ptr, const int64_t[::1] trans_ptr,
          const int64_t[::1] cols, const double[::1] probs,
          const double[::1] consts, const double[::1] x, double[::1] out,
          bint maximize):
    """One synchronous Bellman update ``x -> out``; returns the sup-norm change."""
    cdef Py_ssize_t s, r, e
    cdef double acc, val, best, diff = 0.0, d
    for s in range(state_ptr.shape[0] - 1):
        for r in range(state_ptr[s], state_ptr[s + 1]):
            acc = 0.0
            for e in range(trans_ptr[r], trans_ptr[r + 1]):
                acc += probs[e] * x[cols[e]]
            val = consts[r] + acc
            if r == state_ptr[s]:
                best = val
            elif maximize:
                if val > best:
                    best = val
            elif val < best:
                best = val
        out[s] = best
        d = fabs(best - x[s])
        # NaN must win so the caller sees a non-finite change
        if d > diff or d != d:
            diff = d
    return diff
