"""Numpy implementations of the compiled kernels, same signatures and results.

Used when the extension is not built, or when BURGESS_PURE_PYTHON=1.
"""

import numpy as np

from .characters import unit_roots


def window_maxima(values, nmax):
    values = np.asarray(values, dtype=np.complex128)
    q = values.shape[0]
    ext = values[np.arange(1, q + nmax + 1) % q]
    pre = np.concatenate(([0j], np.cumsum(ext)))
    out = np.empty(nmax)
    for n in range(1, nmax + 1):
        out[n - 1] = np.abs(pre[n : n + q] - pre[:q]).max()
    return out


def fourth_moment(table, m, B):
    table = np.asarray(table)
    q = table.shape[0]
    vals = unit_roots(m)[table] * (table >= 0)
    idx = (np.arange(1, q + 1)[:, None] + np.arange(1, B + 1)[None, :]) % q
    s2 = np.abs(vals[idx].sum(axis=1)) ** 2
    return float((s2 * s2).sum())


def polynomial_sums(table, m, shifts):
    table = np.asarray(table)
    shifts = np.asarray(shifts, dtype=np.int64).reshape(-1, 4)
    q = table.shape[0]
    roots = unit_roots(m)
    x = np.arange(1, q + 1)
    t = table[(x[None, None, :] - shifts[:, :, None]) % q]
    unit = (t >= 0).all(axis=1)
    expo = (t[:, 0] + t[:, 1] - t[:, 2] - t[:, 3]) % m
    return np.abs((roots[expo] * unit).sum(axis=1))


def v_counts(q, M, N, units):
    units = np.asarray(units, dtype=np.int64)
    out = np.zeros(q + 1, dtype=np.int64)
    if units.size == 0:
        return out
    lvals = np.arange(1, q + 1)
    r = (units[None, :] * lvals[:, None]) % q
    first = (M + 1) + (r - (M + 1)) % q
    cnt = np.where(first <= M + N, (M + N - first) // q + 1, 0)
    out[1:] = cnt.sum(axis=1)
    return out
