"""Cumulative Nim-sum integral I(a, b) = int_0^a int_0^b x (+) y dy dx.

Values at dyadic points are exact rationals, obtained from the self-similar
relations of I under halving and half-shifts.  ``closed_sum_oracle`` is an
independent cell-by-cell evaluation used only for cross-checking.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import Dyadic, RationalLike, as_dyadic
from .potential import f_dyadic
from .report import Report

HALF = Fraction(1, 2)


def _unit_dyadic(v: RationalLike) -> Fraction:
    d = as_dyadic(v)
    q = d.to_fraction()
    if not 0 <= q <= 1:
        raise ValueError(f"{q} lies outside [0, 1]")
    return q


def I_eval(a: RationalLike, b: RationalLike) -> Fraction:
    """Exact I(a, b) for dyadic a, b in [0, 1]."""
    a, b = _unit_dyadic(a), _unit_dyadic(b)
    total = Fraction(0)
    scale = Fraction(1)
    # each step either doubles a level-reduced pair or strips a leading bit
    fuel = 4 * (a.denominator.bit_length() + b.denominator.bit_length()) + 8
    while a and b:
        fuel -= 1
        if fuel < 0:
            raise RuntimeError("I_eval did not terminate")
        if a == 1 or b == 1:
            # I(a, 1) = a/2 closes the (1, 1) -> (1/2, 1/2) -> (1, 1) loop
            return total + scale * a * b / 2
        if a <= HALF and b <= HALF:
            scale /= 8
            a, b = 2 * a, 2 * b
        elif a > HALF and b > HALF:
            a, b = a - HALF, b - HALF
            total += scale * (Fraction(1, 16) + Fraction(3, 8) * (a + b))
        elif a > HALF:
            a -= HALF
            total += scale * (a * b / 2 + b / 8)
        else:
            b -= HALF
            total += scale * (a * b / 2 + a / 8)
    return total


def closed_sum_oracle(p: int, q: int, n: int) -> Fraction:
    """I(p/2^n, q/2^n) from the definition, one level-n cell at a time.

    On the cell [i, i+1] x [j, j+1] (units of 2^-n) the integrand equals
    (i (+) j) 2^-n plus a scaled copy of u (+) v, whose integral is I(1, 1)/8^n
    with I(1, 1) = 1/2.
    """
    side = 1 << n
    if not (0 <= p <= side and 0 <= q <= side):
        raise ValueError("p and q must lie in [0, 2^n]")
    s = 0
    for i in range(p):
        for j in range(q):
            s += i ^ j
    return Fraction(2 * s + p * q, 2 * 8**n)


def f_via_integral(x: RationalLike, y: RationalLike) -> Fraction:
    """8 I(x, y) - 2 I(x, x) - 2 I(y, y)."""
    return 8 * I_eval(x, y) - 2 * I_eval(x, x) - 2 * I_eval(y, y)


def _row_xor_prefix(n: int) -> list[list[int]]:
    # P[i][j] = sum_{j' < j} (i xor j')
    side = 1 << n
    out = []
    for i in range(side):
        acc, row = 0, [0]
        for j in range(side):
            acc += i ^ j
            row.append(acc)
        out.append(row)
    return out


def xor_integral_means(level: int = 2) -> tuple[Fraction, Fraction]:
    """(int int_[0,1]^2 I, int_0^1 I(x, x) dx), exactly.

    The unit square is cut into level-n cells.  On each cell I equals its
    corner value plus terms linear in the offsets, plus a copy of I scaled by
    2^-3n, so both means solve a scalar fixed-point equation.  Any level gives
    the same answer; the choice only changes how the work is split.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    side = 1 << level
    h = Fraction(1, side)
    prefix = _row_xor_prefix(level)

    def A(i: int, j: int) -> int:  # sum_{j' < j} i xor j'
        return prefix[i][j]

    def B(i: int, j: int) -> int:  # sum_{i' < i} i' xor j
        return prefix[j][i]

    rest_square = Fraction(0)
    rest_diag = Fraction(0)
    for i in range(side):
        for j in range(side):
            corner = I_eval(i * h, j * h)
            rest_square += (h**2 * corner
                            + h**5 / 2 * (A(i, j) + Fraction(j, 2))
                            + h**5 / 2 * (B(i, j) + Fraction(i, 2))
                            + (i ^ j) * h**5 / 4)
        corner = I_eval(i * h, i * h)
        rest_diag += h * corner + h**4 / 2 * (2 * A(i, i) + i)
    contraction = 1 - h**3
    return rest_square / contraction, rest_diag / contraction


def potential_mean(level: int = 2) -> Fraction:
    """int int_[0,1]^2 f_C, via the integral representation."""
    J, K = xor_integral_means(level)
    return 8 * J - 4 * K


def dual_objective_value(level: int = 2) -> Fraction:
    """Dual objective of the triple (f_C/8, f_C/8, f_C/8) under Lebesgue marginals."""
    return 3 * potential_mean(level) / 8


def verify_integral(n: int) -> list[Report]:
    """Property sweep, oracle equivalence and f_C agreement on level-n grids."""
    side = 1 << n
    pts = [Fraction(i, side) for i in range(side + 1)]

    props = Report(f"integral.properties[n={n}]")
    vals = {(i, j): I_eval(pts[i], pts[j]) for i in range(side + 1) for j in range(side + 1)}
    for (i, j), v in vals.items():
        props.checked += 1
        if v != vals[(j, i)]:
            props.fail(identity="symmetry", a=pts[i], b=pts[j])
        if 2 * i <= side and 2 * j <= side and vals[(2 * i, 2 * j)] != 8 * v:
            props.fail(identity="homogeneity", a=pts[i], b=pts[j])
    for i in range(side + 1):
        if vals[(i, side)] != pts[i] / 2:
            props.fail(identity="I(a,1)=a/2", a=pts[i])

    oracle = Report(f"integral.oracle[n<={n}]")
    for m in range(n + 1):
        s = 1 << m
        for p in range(s + 1):
            for q in range(s + 1):
                oracle.checked += 1
                want = closed_sum_oracle(p, q, m)
                got = I_eval(Fraction(p, s), Fraction(q, s))
                if got != want:
                    oracle.fail(identity="I_eval == closed_sum_oracle", p=p, q=q, n=m,
                                got=got, want=want)

    rep = Report(f"integral.representation[n={n}]")
    for i in range(side + 1):
        for j in range(side + 1):
            rep.checked += 1
            lhs = 8 * vals[(i, j)] - 2 * vals[(i, i)] - 2 * vals[(j, j)]
            rhs = f_dyadic(Dyadic(i, n), Dyadic(j, n))
            if lhs != rhs:
                rep.fail(identity="f_via_integral == f_dyadic", x=pts[i], y=pts[j],
                         integral=lhs, recurrence=rhs)
    return [props, oracle, rep]
