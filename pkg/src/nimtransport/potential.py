"""The integer dual potential f(a, b) and its verified properties.

f is fixed by four base values and a halving recurrence with one branch per
parity class of (a, b).  Its scaled version ``f_C(a/2^n, b/2^n) = f(a, b) / 8^n``
is well defined because ``f(2a, 2b) = 8 f(a, b)``, and the triple sum
``F(a, b, c) = f(a, b) + f(b, c) + f(c, a)`` never exceeds ``8abc``.
"""

from __future__ import annotations

import os
import threading
from fractions import Fraction
from itertools import permutations

from . import kernels
from .dyadic import RationalLike, as_dyadic
from .report import Report

MEMO_BUDGET_ENV = "NIMTRANSPORT_MEMO_BUDGET"

BASE_VALUES = {(0, 0): 0, (0, 1): -1, (1, 1): 2}

# Lipschitz lemma constants: N_{n,m} <= 17 (4^n + 4^m) - 19
LIPSCHITZ_C1 = 17
LIPSCHITZ_C2 = -19


def _children(a: int, b: int) -> list[tuple[int, int]]:
    ha, hb = a >> 1, b >> 1
    if a & 1 == 0 and b & 1 == 0:
        return [(ha, hb)]
    if a & 1 and b & 1 == 0:
        return [(ha, hb), (ha + 1, hb)]
    if a & 1 == 0:
        return [(ha, hb), (ha, hb + 1)]
    return [(ha, hb), (ha, hb + 1), (ha + 1, hb), (ha + 1, hb + 1)]


def _combine(a: int, b: int, vals: list[int]) -> int:
    if len(vals) == 1:
        return 8 * vals[0]
    if len(vals) == 2:
        return 4 * (vals[0] + vals[1]) + 3
    return 2 * sum(vals) + 2


class PotentialTable:
    """Memoized values of f with symmetric keys (a <= b).

    Evaluation uses an explicit stack, so arbitrarily large arguments are
    fine.  ``base`` replaces the base values; it exists so the verification
    harness can be fed a deliberately broken potential.  ``max_entries``
    caps the memo size (default from the NIMTRANSPORT_MEMO_BUDGET
    environment variable, unlimited if unset); exceeding it raises
    MemoryError.
    """

    def __init__(self, base: dict[tuple[int, int], int] | None = None,
                 max_entries: int | None = None) -> None:
        if max_entries is None:
            env = os.environ.get(MEMO_BUDGET_ENV)
            max_entries = int(env) if env else None
        self.max_entries = max_entries
        values = dict(BASE_VALUES)
        if base:
            for (a, b), v in base.items():
                values[(min(a, b), max(a, b))] = v
        self._memo: dict[tuple[int, int], int] = values
        self._base = frozenset(values)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._memo)

    def __call__(self, a: int, b: int) -> int:
        if a < 0 or b < 0:
            raise ValueError("f is defined on nonnegative integers")
        key = (a, b) if a <= b else (b, a)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        with self._lock:
            return self._fill(key)

    def _fill(self, key: tuple[int, int]) -> int:
        memo = self._memo
        stack = [key]
        while stack:
            a, b = stack[-1]
            if (a, b) in memo:
                stack.pop()
                continue
            kids = [(p, q) if p <= q else (q, p) for p, q in _children(a, b)]
            missing = [k for k in kids if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            if self.max_entries is not None and len(memo) >= self.max_entries:
                raise MemoryError(f"memo budget of {self.max_entries} entries exhausted")
            memo[(a, b)] = _combine(a, b, [memo[k] for k in kids])
            stack.pop()
        return memo[key]

    def F(self, a: int, b: int, c: int) -> int:
        return self(a, b) + self(b, c) + self(c, a)


DEFAULT_TABLE = PotentialTable()


def f_int(a: int, b: int) -> int:
    return DEFAULT_TABLE(a, b)


def F_triple(a: int, b: int, c: int) -> int:
    """f(a, b) + f(b, c) + f(c, a)."""
    return DEFAULT_TABLE.F(a, b, c)


def f_dyadic(x: RationalLike, y: RationalLike, table: PotentialTable | None = None) -> Fraction:
    """f_C at a pair of nonnegative dyadic rationals."""
    table = table or DEFAULT_TABLE
    x, y = as_dyadic(x), as_dyadic(y)
    n = max(x.canonical().level, y.canonical().level)
    return Fraction(table(x.at_level(n), y.at_level(n)), 8**n)


def F_dyadic(x: RationalLike, y: RationalLike, z: RationalLike) -> Fraction:
    return f_dyadic(x, y) + f_dyadic(y, z) + f_dyadic(z, x)


def equality_closure_witness(a: int, b: int, c: int, n: int | None = None) -> bool:
    """Whether (a, b, c)/2^n is recognised as a limit point of x (+) y (+) z = 0.

    Accepts direct xor-zero triples, and triples where lowering two
    coordinates by one (the trailing ...0111 expansion of a dyadic point)
    gives a xor-zero triple.  This is a tested conjecture, not a theorem.
    """
    if n is not None and not all(0 <= v <= 1 << n for v in (a, b, c)):
        raise ValueError("coordinates must lie in [0, 2^n]")
    if a ^ b ^ c == 0:
        return True
    t = (a, b, c)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if t[i] >= 1 and t[j] >= 1:
            lowered = list(t)
            lowered[i] -= 1
            lowered[j] -= 1
            if lowered[0] ^ lowered[1] ^ lowered[2] == 0:
                return True
    return False


def verify_bound(n: int, table: PotentialTable | None = None) -> Report:
    """Exhaustive check of F(a, b, c) <= 8abc on [0, 2^n]^3.

    Also asserts that xor-zero triples attain equality, that equality forces
    an even coordinate sum, and records whether the equality set matches
    :func:`equality_closure_witness`.
    """
    table = table or DEFAULT_TABLE
    side = 1 << n
    rep = Report(f"potential.bound[n={n}]")
    equality: set[tuple[int, int, int]] = set()
    witness_mismatch: list[tuple[int, int, int]] = []
    for a in range(side + 1):
        for b in range(a, side + 1):
            for c in range(b, side + 1):
                rep.checked += 1
                F = table.F(a, b, c)
                rhs = 8 * a * b * c
                if F > rhs:
                    rep.fail(identity="F<=8abc", triple=[a, b, c], F=F, bound=rhs)
                eq = F == rhs
                if a ^ b ^ c == 0 and not eq:
                    rep.fail(identity="xor=0 => equality", triple=[a, b, c], F=F, bound=rhs)
                if eq and (a + b + c) % 2:
                    rep.fail(identity="equality => even sum", triple=[a, b, c], F=F)
                if eq != equality_closure_witness(a, b, c):
                    witness_mismatch.append((a, b, c))
                if eq:
                    equality.update(permutations((a, b, c)))
    for t in witness_mismatch:
        rep.fail(identity="equality set == closure witness set", triple=list(t))
    rep.values["equality_triples"] = sorted(list(t) for t in equality)
    rep.values["equality_count"] = len(equality)
    return rep


def check_identities(n: int, table: PotentialTable | None = None) -> Report:
    """Symmetry, parity, midpoint relations and the two block identities."""
    table = table or DEFAULT_TABLE
    f = table
    side = 1 << n
    p8, p4, p2 = 8**n, 4**n, 2**n
    rep = Report(f"potential.identities[n={n}]")
    for a in range(side + 1):
        for b in range(side + 1):
            rep.checked += 1
            v = f(a, b)
            if v != f(b, a):
                rep.fail(identity="symmetry", a=a, b=b)
            if (v - a - b) % 2:
                rep.fail(identity="parity", a=a, b=b, f=v)
            if a & 1 and b & 1 == 0 and 2 * v != f(a + 1, b) + f(a - 1, b) + 6:
                rep.fail(identity="midpoint (odd, even)", a=a, b=b)
            # odd/odd constant is -1: unfolding the recurrence gives 2f = f(a+1,b) + f(a-1,b) - 2
            if a & 1 and b & 1 and 2 * v != f(a + 1, b) + f(a - 1, b) - 2:
                rep.fail(identity="midpoint (odd, odd)", a=a, b=b)
            diag = 2 * p8 + 6 * p4 * (a + b) + v
            if f(p2 + a, p2 + b) != diag:
                rep.fail(identity="diagonal block", n=n, a=a, b=b,
                         lhs=f(p2 + a, p2 + b), rhs=diag)
            side_block = -p8 - 6 * p4 * a + 4 * p4 * b + 8 * p2 * a * b + v
            if f(p2 + a, b) != side_block:
                rep.fail(identity="off-diagonal block", n=n, a=a, b=b,
                         lhs=f(p2 + a, b), rhs=side_block)
    return rep


def homogeneity_check(n: int, table: PotentialTable | None = None) -> Report:
    """f(2a, 2b) = 8 f(a, b) for 0 <= a, b <= 2^n."""
    f = table or DEFAULT_TABLE
    rep = Report(f"potential.homogeneity[n={n}]")
    for a in range((1 << n) + 1):
        for b in range(a, (1 << n) + 1):
            rep.checked += 1
            if f(2 * a, 2 * b) != 8 * f(a, b):
                rep.fail(identity="homogeneity", a=a, b=b)
    return rep


def lipschitz_increment(n: int, m: int, table: PotentialTable | None = None) -> tuple[int, tuple[int, int]]:
    """N_{n,m} = max |f(a+1, b) - f(a, b)| over a, a+1 in [0, 2^{n+1}], b in [0, 2^{m+1}]."""
    f = table or DEFAULT_TABLE
    best, arg = -1, (0, 0)
    for a in range(1 << (n + 1)):
        for b in range((1 << (m + 1)) + 1):
            d = abs(f(a + 1, b) - f(a, b))
            if d > best:
                best, arg = d, (a, b)
    return best, arg


def lipschitz_check(n: int, m: int, table: PotentialTable | None = None) -> Report:
    N, arg = lipschitz_increment(n, m, table)
    bound = LIPSCHITZ_C1 * (4**n + 4**m) + LIPSCHITZ_C2
    rep = Report(f"potential.lipschitz[n={n},m={m}]", checked=1)
    rep.values.update(N=N, bound=bound, argmax=list(arg))
    if N > bound:
        rep.fail(identity="N_{n,m} <= 17(4^n+4^m)-19", N=N, bound=bound, argmax=list(arg))
    return rep


def table_agreement(n: int, table: PotentialTable | None = None) -> Report:
    """The compiled or fallback grid table agrees with the memoized recurrence."""
    f = table or DEFAULT_TABLE
    grid = kernels.potential_table(n)
    rep = Report(f"potential.kernel_table[n={n}]")
    for a in range((1 << n) + 1):
        row = grid[a]
        for b in range((1 << n) + 1):
            rep.checked += 1
            if int(row[b]) != f(a, b):
                rep.fail(identity="kernel table", a=a, b=b)
                return rep
    rep.values["backend"] = kernels.BACKEND
    return rep


def grid_integral(n: int) -> Fraction:
    """Left Riemann sum of f_C over [0, 1]^2 at level n."""
    return Fraction(kernels.potential_grid_sum(n), 8**n * 4**n)
