"""Exact two-phase primal simplex for equality-form LPs.

Solves ``min c.x  s.t.  A x = b, x >= 0`` over the rationals with Bland's
rule, so it always terminates and every number it returns is exact.  The
tableau is kept as one sparse dict per row; transport-type constraint
matrices stay sparse through most pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

Row = dict[int, Fraction]

# Dantzig pricing until this many consecutive pivots leave the objective
# unchanged, then Bland's rule for the rest of the phase.
STALL_LIMIT = 50


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


@dataclass
class SimplexResult:
    status: str  # optimal | infeasible | unbounded
    x: dict[int, Fraction] = field(default_factory=dict)
    objective: Fraction | None = None
    duals: list[Fraction] | None = None
    farkas: list[Fraction] | None = None
    basis: list[int] | None = None
    pivots: int = 0
    redundant_rows: list[int] = field(default_factory=list)


class _Tableau:
    def __init__(self, A: Sequence[Row], b: Sequence[Fraction], n: int) -> None:
        self.n = n
        self.m = len(A)
        self.sign = [1 if bi >= 0 else -1 for bi in b]
        self.rows: list[Row] = []
        self.rhs: list[Fraction] = []
        for i, (row, bi) in enumerate(zip(A, b)):
            s = self.sign[i]
            r = {j: _Q(v) * s for j, v in row.items() if v}
            r[n + i] = _Q(1)
            self.rows.append(r)
            self.rhs.append(_Q(bi) * s)
        self.basis = [n + i for i in range(self.m)]
        self.active = list(range(self.m))
        self.d: Row = {}
        self.z = _Q(0)
        self.pivots = 0

    def price(self, cost: dict[int, Fraction]) -> None:
        """Reduced costs d_j = c_j - c_B B^-1 A_j and objective z = c_B B^-1 b."""
        d: Row = {j: _Q(v) for j, v in cost.items() if v}
        z = _Q(0)
        for i in self.active:
            cb = cost.get(self.basis[i], 0)
            if not cb:
                continue
            z += cb * self.rhs[i]
            for j, v in self.rows[i].items():
                nv = d.get(j, 0) - cb * v
                if nv:
                    d[j] = nv
                else:
                    d.pop(j, None)
        self.d, self.z = d, z

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            for col in prow:
                prow[col] *= inv
            self.rhs[r] *= inv
        br = self.rhs[r]
        for i in self.active:
            if i == r:
                continue
            row = self.rows[i]
            a = row.get(j)
            if not a:
                continue
            for col, v in prow.items():
                nv = row.get(col, 0) - a * v
                if nv:
                    row[col] = nv
                else:
                    del row[col]
            self.rhs[i] -= a * br
        a = self.d.get(j)
        if a:
            for col, v in prow.items():
                nv = self.d.get(col, 0) - a * v
                if nv:
                    self.d[col] = nv
                else:
                    del self.d[col]
            self.z += a * br
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed_below: int, max_pivots: int, rule: str = "auto") -> str:
        """Pivot until optimal or unbounded; columns >= allowed_below never enter.

        ``rule="bland"`` uses Bland's rule throughout.  ``"auto"`` starts with
        Dantzig pricing and switches to Bland for good after STALL_LIMIT
        consecutive degenerate pivots, which keeps termination guaranteed.
        """
        bland = rule == "bland"
        stall, last_z = 0, self.z
        while True:
            candidates = [(v, j) for j, v in self.d.items() if v < 0 and j < allowed_below]
            if not candidates:
                return "optimal"
            entering = min(j for _, j in candidates) if bland else min(candidates)[1]
            best = None
            for i in self.active:
                a = self.rows[i].get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)
            if self.pivots > max_pivots:
                raise RuntimeError("pivot limit exceeded")
            if not bland:
                stall = stall + 1 if self.z == last_z else 0
                last_z = self.z
                if stall >= STALL_LIMIT:
                    bland = True


def simplex(A: Sequence[Row], b: Sequence[Fraction], c: Sequence[Fraction],
            max_pivots: int = 1_000_000, rule: str = "auto") -> SimplexResult:
    """Minimize ``c.x`` subject to ``A x = b, x >= 0``.

    ``A`` is a list of sparse rows ``{column: coefficient}``.  On optimality
    ``duals`` satisfy ``y.A <= c`` with equality on the support of ``x``; on
    infeasibility ``farkas`` satisfies ``y.A <= 0`` and ``y.b > 0``.
    """
    n = len(c)
    T = _Tableau(A, b, n)
    m = T.m
    # phase 1: minimize the sum of artificials
    if rule not in ("auto", "bland"):
        raise ValueError("rule must be 'auto' or 'bland'")
    T.price({n + i: 1 for i in range(m)})
    T.run(allowed_below=n, max_pivots=max_pivots, rule=rule)
    if T.z > 0:
        # artificial reduced cost is 1 - y_i
        y = [_frac((1 - T.d.get(n + i, 0)) * T.sign[i]) for i in range(m)]
        return SimplexResult("infeasible", farkas=y, pivots=T.pivots)
    redundant = []
    for i in list(T.active):
        if T.basis[i] >= n:
            j = min((col for col, v in T.rows[i].items() if col < n and v), default=None)
            if j is None:
                redundant.append(i)
                T.active.remove(i)
            else:
                T.pivot(i, j)
    cost = {j: v for j, v in enumerate(c) if v}
    T.price(cost)
    status = T.run(allowed_below=n, max_pivots=max_pivots, rule=rule)
    if status == "unbounded":
        return SimplexResult("unbounded", pivots=T.pivots, redundant_rows=redundant)
    x = {T.basis[i]: _frac(T.rhs[i]) for i in T.active if T.rhs[i]}
    # artificial column i has cost 0, so its reduced cost is -y_i
    duals = [Fraction(0)] * m
    for i in range(m):
        if i not in redundant:
            duals[i] = _frac(-T.d.get(n + i, _Q(0)) * T.sign[i])
    return SimplexResult("optimal", x=x, objective=_frac(T.z), duals=duals,
                         basis=[T.basis[i] for i in T.active], pivots=T.pivots,
                         redundant_rows=redundant)


def column_products(A: Sequence[Row], y: Sequence[Fraction], n: int) -> list[Fraction]:
    """y.A as a dense vector of length n."""
    out = [Fraction(0)] * n
    for yi, row in zip(y, A):
        if yi:
            for j, v in row.items():
                out[j] += yi * v
    return out


def check_optimal(A: Sequence[Row], b: Sequence[Fraction], c: Sequence[Fraction],
                  x: dict[int, Fraction], y: Sequence[Fraction]) -> list[str]:
    """Exact optimality certificate checks for the min problem; returns failures."""
    n = len(c)
    problems = []
    if any(v < 0 for v in x.values()):
        problems.append("negative primal weight")
    for i, (row, bi) in enumerate(zip(A, b)):
        if sum((v * x.get(j, 0) for j, v in row.items()), Fraction(0)) != bi:
            problems.append(f"row {i} not satisfied")
    yA = column_products(A, y, n)
    if any(yA[j] > c[j] for j in range(n)):
        problems.append("dual infeasible")
    if any(yA[j] != c[j] for j, v in x.items() if v):
        problems.append("complementary slackness violated")
    primal = sum((c[j] * v for j, v in x.items()), Fraction(0))
    dual = sum((yi * bi for yi, bi in zip(y, b)), Fraction(0))
    if primal != dual:
        problems.append(f"duality gap {primal - dual}")
    return problems


def check_farkas(A: Sequence[Row], b: Sequence[Fraction], y: Sequence[Fraction], n: int) -> list[str]:
    problems = []
    yA = column_products(A, y, n)
    if any(v > 0 for v in yA):
        problems.append("y.A has a positive entry")
    if sum((yi * bi for yi, bi in zip(y, b)), Fraction(0)) <= 0:
        problems.append("y.b is not positive")
    return problems


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    k = len(M)
    aug = [row[:] + [v] for row, v in zip(M, rhs)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def enumerate_basic_solutions(A: Sequence[Row], b: Sequence[Fraction], c: Sequence[Fraction],
                              max_vars: int = 10) -> tuple[Fraction | None, list[dict[int, Fraction]]]:
    """Brute-force optimum over all basic feasible solutions (full row rank A).

    Returns the best objective (None if no BFS exists) and the list of BFSs.
    """
    n = len(c)
    if n > max_vars:
        raise ValueError(f"basis enumeration is limited to {max_vars} variables")
    m = len(A)
    best, found = None, []
    for cols in combinations(range(n), m):
        M = [[Fraction(row.get(j, 0)) for j in cols] for row in A]
        sol = _solve_square(M, [Fraction(v) for v in b])
        if sol is None or any(v < 0 for v in sol):
            continue
        x = {j: v for j, v in zip(cols, sol) if v}
        found.append(x)
        val = sum((c[j] * v for j, v in x.items()), Fraction(0))
        if best is None or val < best:
            best = val
    return best, found
