# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the character-sum sweeps.

A character is passed as an integer log table ``t`` of length q together
with its order m: chi(n) = exp(2*pi*i*t[n]/m), and t[n] < 0 marks chi(n) = 0.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, M_PI

cnp.import_array()


cdef inline Py_ssize_t _mod(Py_ssize_t a, Py_ssize_t m) nogil:
    cdef Py_ssize_t r = a % m
    return r + m if r < 0 else r


cdef void _roots(Py_ssize_t m, double[:] re, double[:] im):
    cdef Py_ssize_t k
    for k in range(m):
        re[k] = cos(2.0 * M_PI * k / m)
        im[k] = sin(2.0 * M_PI * k / m)
    # Quarter turns exact.
    if m % 4 == 0:
        re[m // 4] = 0.0
        im[m // 4] = 1.0
        re[3 * m // 4] = 0.0
        im[3 * m // 4] = -1.0
    if m % 2 == 0:
        re[m // 2] = -1.0
        im[m // 2] = 0.0
    re[0] = 1.0
    im[0] = 0.0


def window_maxima(const double complex[:] values, Py_ssize_t nmax):
    """out[n-1] = max over 0 <= M < q of |sum_{j=M+1}^{M+n} values[j mod q]|."""
    cdef Py_ssize_t q = values.shape[0]
    cdef Py_ssize_t total = q + nmax + 1
    cdef double[:] pre_re = np.zeros(total)
    cdef double[:] pre_im = np.zeros(total)
    cdef double[:] best = np.zeros(nmax)
    cdef Py_ssize_t k, M, n
    cdef double ar, ai, dr, di, s
    ar = 0.0
    ai = 0.0
    for k in range(1, total):
        ar += values[k % q].real
        ai += values[k % q].imag
        pre_re[k] = ar
        pre_im[k] = ai
    with nogil:
        for M in range(q):
            for n in range(1, nmax + 1):
                dr = pre_re[M + n] - pre_re[M]
                di = pre_im[M + n] - pre_im[M]
                s = dr * dr + di * di
                if s > best[n - 1]:
                    best[n - 1] = s
        for n in range(nmax):
            best[n] = sqrt(best[n])
    return np.asarray(best)


def fourth_moment(const cnp.int64_t[:] table, Py_ssize_t m, Py_ssize_t B):
    """sum_{l=1}^{q} |sum_{b=1}^{B} chi(l+b)|^4."""
    cdef Py_ssize_t q = table.shape[0]
    cdef double[:] re = np.empty(m)
    cdef double[:] im = np.empty(m)
    _roots(m, re, im)
    cdef Py_ssize_t l, b, t
    cdef double sr, si, s2, total = 0.0
    with nogil:
        for l in range(1, q + 1):
            sr = 0.0
            si = 0.0
            for b in range(1, B + 1):
                t = table[(l + b) % q]
                if t >= 0:
                    sr += re[t]
                    si += im[t]
            s2 = sr * sr + si * si
            total += s2 * s2
    return total


def polynomial_sums(const cnp.int64_t[:] table, Py_ssize_t m, const cnp.int64_t[:, :] shifts):
    """|sum_x chi(x-m1) chi(x-m2) conj(chi(x-m3) chi(x-m4))| for each row of shifts."""
    cdef Py_ssize_t q = table.shape[0]
    cdef Py_ssize_t k = shifts.shape[0]
    cdef double[:] re1 = np.empty(m)
    cdef double[:] im1 = np.empty(m)
    _roots(m, re1, im1)
    # Exponent sums lie in (-2m, 2m); a table over 4m slots avoids the reduction.
    cdef double[:] re = np.empty(4 * m)
    cdef double[:] im = np.empty(4 * m)
    # Periodic copy over 2q+1 slots: x - shift + q always lands in [1, 2q].
    cdef cnp.int64_t[:] t2 = np.empty(2 * q + 1, dtype=np.int64)
    cdef double[:] out = np.empty(k)
    cdef Py_ssize_t i, x, j, t1, t2v, t3, t4, o1, o2, o3, o4
    cdef double sr, si
    for j in range(4 * m):
        re[j] = re1[j % m]
        im[j] = im1[j % m]
    for j in range(2 * q + 1):
        t2[j] = table[j % q]
    with nogil:
        for i in range(k):
            o1 = q - _mod(shifts[i, 0], q)
            o2 = q - _mod(shifts[i, 1], q)
            o3 = q - _mod(shifts[i, 2], q)
            o4 = q - _mod(shifts[i, 3], q)
            sr = 0.0
            si = 0.0
            for x in range(1, q + 1):
                t1 = t2[x + o1]
                t2v = t2[x + o2]
                t3 = t2[x + o3]
                t4 = t2[x + o4]
                if t1 < 0 or t2v < 0 or t3 < 0 or t4 < 0:
                    continue
                j = t1 + t2v - t3 - t4 + 2 * m
                sr += re[j]
                si += im[j]
            out[i] = sqrt(sr * sr + si * si)
    return np.asarray(out)


def v_counts(Py_ssize_t q, Py_ssize_t M, Py_ssize_t N, const cnp.int64_t[:] units):
    """out[l] = #{(a, n): a in units, M < n <= M+N, n = a*l (mod q)} for l = 1..q.

    out[0] is unused.
    """
    cdef cnp.int64_t[:] out = np.zeros(q + 1, dtype=np.int64)
    cdef Py_ssize_t l, j, r, lo, first, cnt
    cdef Py_ssize_t na = units.shape[0]
    with nogil:
        for l in range(1, q + 1):
            cnt = 0
            for j in range(na):
                r = (units[j] * l) % q
                # smallest n >= M+1 with n = r (mod q)
                lo = M + 1
                first = lo + _mod(r - lo, q)
                if first <= M + N:
                    cnt += (M + N - first) // q + 1
            out[l] = cnt
    return np.asarray(out)
