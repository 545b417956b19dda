# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels; see _pykernels.py for the reference versions."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

MAX_TABLE_LEVEL = 13
MAX_SUM_LEVEL = 14
MAX_XOR_LEVEL = 15


cdef void _refine(const long long[:, ::1] g, long long[:, ::1] t, Py_ssize_t size) noexcept nogil:
    # t has side size + 1 = 2 * (side(g) - 1) + 1
    cdef Py_ssize_t a, b, ha, hb
    for a in range(size + 1):
        ha = a >> 1
        for b in range(size + 1):
            hb = b >> 1
            if a & 1 == 0:
                if b & 1 == 0:
                    t[a, b] = 8 * g[ha, hb]
                else:
                    t[a, b] = 4 * (g[ha, hb] + g[ha, hb + 1]) + 3
            else:
                if b & 1 == 0:
                    t[a, b] = 4 * (g[ha, hb] + g[ha + 1, hb]) + 3
                else:
                    t[a, b] = 2 * (g[ha, hb] + g[ha, hb + 1]
                                   + g[ha + 1, hb] + g[ha + 1, hb + 1]) + 2


def potential_table(int n):
    """f(a, b) for 0 <= a, b <= 2**n as an int64 array."""
    if n < 0 or n > MAX_TABLE_LEVEL:
        raise ValueError(f"table level must lie in [0, {MAX_TABLE_LEVEL}]")
    cdef cnp.ndarray[cnp.int64_t, ndim=2] g = np.array([[0, -1], [-1, 2]], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] t
    cdef Py_ssize_t size
    cdef int level
    for level in range(1, n + 1):
        size = 1 << level
        t = np.empty((size + 1, size + 1), dtype=np.int64)
        _refine(g, t, size)
        g = t
    return g


def potential_grid_sum(int n):
    """Sum of f(a, b) over 0 <= a, b < 2**n, as a Python int."""
    if n < 0 or n > MAX_SUM_LEVEL:
        raise ValueError(f"sum level must lie in [0, {MAX_SUM_LEVEL}]")
    if n == 0:
        return 0
    cdef const long long[:, ::1] g = potential_table(n - 1)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t a, b, ha, hb
    cdef long long row, v
    total = 0
    for a in range(size):
        ha = a >> 1
        row = 0
        for b in range(size):
            hb = b >> 1
            if a & 1 == 0:
                if b & 1 == 0:
                    v = 8 * g[ha, hb]
                else:
                    v = 4 * (g[ha, hb] + g[ha, hb + 1]) + 3
            else:
                if b & 1 == 0:
                    v = 4 * (g[ha, hb] + g[ha + 1, hb]) + 3
                else:
                    v = 2 * (g[ha, hb] + g[ha, hb + 1]
                             + g[ha + 1, hb] + g[ha + 1, hb + 1]) + 2
            row += v
        total += row
    return total


def xor_moment_sum(int n):
    """Sum of i * j * (i ^ j) over 0 <= i, j < 2**n."""
    if n < 0 or n > MAX_XOR_LEVEL:
        raise ValueError(f"xor level must lie in [0, {MAX_XOR_LEVEL}]")
    cdef long long size = 1LL << n
    cdef long long i, j, row
    total = 0
    for i in range(size):
        row = 0
        for j in range(size):
            row += j * (i ^ j)
        total += i * row
    return total


def carry_free_count(int n):
    """Number of pairs 0 <= i, j < 2**n whose binary supports are disjoint."""
    if n < 0 or n > MAX_XOR_LEVEL:
        raise ValueError(f"xor level must lie in [0, {MAX_XOR_LEVEL}]")
    cdef long long size = 1LL << n
    cdef long long i, j, count = 0
    for i in range(size):
        for j in range(size):
            if i & j == 0:
                count += 1
    return count
