# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops; ``_fallback.py`` mirrors every function here."""
import numpy as np

from libc.math cimport log2
from libc.stdlib cimport malloc, free

cdef double TIE_EPS = 1e-12


cdef inline double _h2(double a, double b) noexcept nogil:
    cdef double n = a + b
    cdef double h = 0.0
    cdef double p
    if a > 0:
        p = a / n
        h -= p * log2(p)
    if b > 0:
        p = b / n
        h -= p * log2(p)
    return h


def contingency(const int[::1] codes, const signed char[::1] labels, Py_ssize_t n_codes):
    out = np.zeros((n_codes, 2), dtype=np.int64)
    cdef long long[:, ::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(codes.shape[0]):
            o[codes[i], labels[i]] += 1
    return out


def best_numeric_split(const double[::1] xs, const signed char[::1] ys):
    """Best information-gain cut of an ascending ``xs``.

    Returns ``(gain, pos)``: the cut sits between ``xs[pos-1]`` and ``xs[pos]``.
    ``pos == -1`` when all values are equal. Gains within TIE_EPS of the best
    resolve to the lowest position.
    """
    cdef Py_ssize_t n = xs.shape[0]
    if n < 2:
        return 0.0, -1
    cdef Py_ssize_t i
    cdef double total_pos = 0
    for i in range(n):
        total_pos += ys[i]
    cdef double parent = _h2(n - total_pos, total_pos)
    cdef double *gains = <double *> malloc(n * sizeof(double))
    if gains == NULL:
        raise MemoryError()
    cdef double left_pos = 0, nl, nr, rp, best = -1.0
    cdef Py_ssize_t best_pos = -1
    try:
        with nogil:
            for i in range(1, n):
                left_pos += ys[i - 1]
                if xs[i] == xs[i - 1]:
                    gains[i] = -1.0
                    continue
                nl = i
                nr = n - i
                rp = total_pos - left_pos
                gains[i] = parent - (nl / n * _h2(nl - left_pos, left_pos)
                                     + nr / n * _h2(nr - rp, rp))
                if gains[i] > best:
                    best = gains[i]
            if best >= 0:
                for i in range(1, n):
                    if gains[i] >= 0 and gains[i] >= best - TIE_EPS:
                        best_pos = i
                        break
    finally:
        free(gains)
    if best_pos < 0:
        return 0.0, -1
    return best, best_pos


def knn_predict(const double[:, ::1] train, const signed char[::1] labels,
                const double[:, ::1] test, Py_ssize_t k):
    """Majority vote of the k nearest (squared Euclidean) training rows.

    Distance ties go to the lower training index; vote ties go to label 0.
    """
    cdef Py_ssize_t n = train.shape[0], m = test.shape[0], dim = train.shape[1]
    out = np.zeros(m, dtype=np.int8)
    if n == 0 or m == 0:
        return out
    cdef signed char[::1] o = out
    cdef Py_ssize_t kk = k if k < n else n
    cdef double *topd = <double *> malloc(kk * sizeof(double))
    cdef Py_ssize_t *topi = <Py_ssize_t *> malloc(kk * sizeof(Py_ssize_t))
    if topd == NULL or topi == NULL:
        free(topd)
        free(topi)
        raise MemoryError()
    cdef Py_ssize_t t, r, j, filled, pos, votes
    cdef double d, diff
    try:
        with nogil:
            for t in range(m):
                filled = 0
                for r in range(n):
                    d = 0.0
                    for j in range(dim):
                        diff = test[t, j] - train[r, j]
                        d += diff * diff
                    if filled == kk and d >= topd[kk - 1]:
                        continue
                    pos = filled if filled < kk else kk - 1
                    while pos > 0 and topd[pos - 1] > d:
                        if pos < kk:
                            topd[pos] = topd[pos - 1]
                            topi[pos] = topi[pos - 1]
                        pos -= 1
                    topd[pos] = d
                    topi[pos] = r
                    if filled < kk:
                        filled += 1
                votes = 0
                for j in range(kk):
                    votes += labels[topi[j]]
                o[t] = 1 if 2 * votes > kk else 0
    finally:
        free(topd)
        free(topi)
    return out
