"""Pure-Python grid kernels.

Same contracts as the compiled ``_kernels`` module.  Tables are lists of
``array('q')`` rows, so values overflow loudly instead of wrapping.
"""

from __future__ import annotations

from array import array

MAX_TABLE_LEVEL = 13
MAX_SUM_LEVEL = 14
MAX_XOR_LEVEL = 15


def _refined_row(g: list, a: int, size: int) -> array:
    ha = a >> 1
    row = array("q", bytes(8 * (size + 1)))
    if a & 1 == 0:
        g0 = g[ha]
        for b in range(size + 1):
            hb = b >> 1
            if b & 1 == 0:
                row[b] = 8 * g0[hb]
            else:
                row[b] = 4 * (g0[hb] + g0[hb + 1]) + 3
    else:
        g0, g1 = g[ha], g[ha + 1]
        for b in range(size + 1):
            hb = b >> 1
            if b & 1 == 0:
                row[b] = 4 * (g0[hb] + g1[hb]) + 3
            else:
                row[b] = 2 * (g0[hb] + g0[hb + 1] + g1[hb] + g1[hb + 1]) + 2
    return row


def potential_table(n: int) -> list:
    """f(a, b) for 0 <= a, b <= 2**n, as a list of int64 rows."""
    if n < 0 or n > MAX_TABLE_LEVEL:
        raise ValueError(f"table level must lie in [0, {MAX_TABLE_LEVEL}]")
    g = [array("q", [0, -1]), array("q", [-1, 2])]
    for level in range(1, n + 1):
        size = 1 << level
        g = [_refined_row(g, a, size) for a in range(size + 1)]
    return g


def potential_grid_sum(n: int) -> int:
    """Sum of f(a, b) over 0 <= a, b < 2**n."""
    if n < 0 or n > MAX_SUM_LEVEL:
        raise ValueError(f"sum level must lie in [0, {MAX_SUM_LEVEL}]")
    if n == 0:
        return 0
    g = potential_table(n - 1)
    size = 1 << n
    total = 0
    for a in range(size):
        row = _refined_row(g, a, size)
        total += sum(row) - row[size]
    return total


def xor_moment_sum(n: int) -> int:
    """Sum of i * j * (i ^ j) over 0 <= i, j < 2**n."""
    if n < 0 or n > MAX_XOR_LEVEL:
        raise ValueError(f"xor level must lie in [0, {MAX_XOR_LEVEL}]")
    size = 1 << n
    total = 0
    for i in range(size):
        total += i * sum(j * (i ^ j) for j in range(size))
    return total


def carry_free_count(n: int) -> int:
    """Number of pairs 0 <= i, j < 2**n whose binary supports are disjoint."""
    if n < 0 or n > MAX_XOR_LEVEL:
        raise ValueError(f"xor level must lie in [0, {MAX_XOR_LEVEL}]")
    size = 1 << n
    return sum(1 for i in range(size) for j in range(size) if i & j == 0)
