"""Discrete measures on 3D grids and the XOR transport plans.

A :class:`GridMeasure3` stores sparse nonnegative rational weights indexed by
``(i, j, k)``.  Coordinates come either from a dyadic level ``n`` (cells of
width ``2^-n``) or from explicit sorted coordinate lists.
"""

from __future__ import annotations

from functools import cached_property
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from . import kernels
from .dyadic import RationalLike, to_rational

Index3 = tuple[int, int, int]

AXIS_PAIRS = ("xy", "xz", "yz")


class GridMeasure3:
    """Nonnegative rational weights on an ``sx x sy x sz`` index grid.

    Exactly one of ``level`` or ``coords`` describes the geometry.  ``kind``
    tags the XOR plans so that exact continuous costs can be computed for
    them.  Instances are immutable.
    """

    def __init__(
        self,
        weights: Mapping[Index3, RationalLike],
        shape: tuple[int, int, int] | None = None,
        *,
        level: int | None = None,
        coords: Sequence[Sequence[RationalLike]] | None = None,
        kind: str | None = None,
    ) -> None:
        if (level is None) == (coords is None):
            raise ValueError("give exactly one of level or coords")
        if level is not None:
            if level < 0:
                raise ValueError("level must be nonnegative")
            side = 1 << level
            grid_shape = (side, side, side)
            self.coords = None
        else:
            if len(coords) != 3:
                raise ValueError("coords must hold three coordinate lists")
            cs = tuple(tuple(to_rational(v) for v in axis) for axis in coords)
            for axis in cs:
                if any(a >= b for a, b in zip(axis, axis[1:])):
                    raise ValueError("coordinate lists must be strictly increasing")
            grid_shape = tuple(len(axis) for axis in cs)
            self.coords = cs
        if shape is not None and tuple(shape) != grid_shape:
            raise ValueError(f"shape {shape} does not match grid {grid_shape}")
        clean: dict[Index3, Fraction] = {}
        for idx, w in weights.items():
            w = to_rational(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {idx}")
            if not all(0 <= v < s for v, s in zip(idx, grid_shape)):
                raise IndexError(f"index {idx} outside grid {grid_shape}")
            if w:
                clean[tuple(idx)] = w
        self.level = level
        self.shape: tuple[int, int, int] = grid_shape
        self.kind = kind
        self.weights: Mapping[Index3, Fraction] = MappingProxyType(clean)

    @classmethod
    def from_dense(cls, dense, **kw) -> "GridMeasure3":
        weights = {}
        for i, plane in enumerate(dense):
            for j, row in enumerate(plane):
                for k, w in enumerate(row):
                    weights[(i, j, k)] = w
        return cls(weights, **kw)

    @property
    def mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def axis_coords(self, axis: int, representative: str = "left") -> tuple[Fraction, ...]:
        if self.coords is not None:
            if representative != "left":
                raise ValueError("explicit grids only support the left (stored) coordinates")
            return self.coords[axis]
        side = 1 << self.level
        if representative == "left":
            return tuple(Fraction(i, side) for i in range(side))
        if representative == "midpoint":
            return tuple(Fraction(2 * i + 1, 2 * side) for i in range(side))
        raise ValueError(f"unknown representative {representative!r}")

    def dense(self) -> list[list[list[Fraction]]]:
        sx, sy, sz = self.shape
        out = [[[Fraction(0)] * sz for _ in range(sy)] for _ in range(sx)]
        for (i, j, k), w in self.weights.items():
            out[i][j][k] = w
        return out

    @cached_property
    def _marginals(self) -> dict[str, list[list[Fraction]]]:
        sx, sy, sz = self.shape
        xy = [[Fraction(0)] * sy for _ in range(sx)]
        xz = [[Fraction(0)] * sz for _ in range(sx)]
        yz = [[Fraction(0)] * sz for _ in range(sy)]
        for (i, j, k), w in self.weights.items():
            xy[i][j] += w
            xz[i][k] += w
            yz[j][k] += w
        return {"xy": xy, "xz": xz, "yz": yz}

    def marginals2(self) -> dict[str, list[list[Fraction]]]:
        return {k: [row[:] for row in v] for k, v in self._marginals.items()}

    def atoms(self) -> list[tuple[Index3, Fraction]]:
        return sorted(self.weights.items())

    def same_geometry(self, weights: Mapping[Index3, RationalLike], kind: str | None = None) -> "GridMeasure3":
        if self.coords is not None:
            return GridMeasure3(weights, coords=self.coords, kind=kind)
        return GridMeasure3(weights, level=self.level, kind=kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridMeasure3):
            return NotImplemented
        return (self.shape == other.shape and self.level == other.level
                and self.coords == other.coords and dict(self.weights) == dict(other.weights))

    def __repr__(self) -> str:
        geo = f"level={self.level}" if self.coords is None else f"shape={self.shape}"
        return f"GridMeasure3({geo}, atoms={len(self.weights)}, mass={self.mass})"


def xor_plan(n: int, sense: str = "min") -> GridMeasure3:
    """Uniform measure on (i, j, i^j) (min) or (i, j, 2^n-1-(i^j)) (max)."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    side = 1 << n
    w = Fraction(1, side * side)
    top = side - 1
    if sense == "min":
        weights = {(i, j, i ^ j): w for i in range(side) for j in range(side)}
    elif sense == "max":
        weights = {(i, j, top - (i ^ j)): w for i in range(side) for j in range(side)}
    else:
        raise ValueError("sense must be 'min' or 'max'")
    return GridMeasure3(weights, level=n, kind=f"xor-{sense}")


def xor_measure_on(coords: Sequence[Sequence[RationalLike]]) -> GridMeasure3:
    """mu_xor on an explicit 2^n-point grid: weight 4^-n where i^j^k = 0."""
    sizes = {len(c) for c in coords}
    if len(sizes) != 1:
        raise ValueError("all three axes need the same size")
    side = sizes.pop()
    if side & (side - 1):
        raise ValueError("axis size must be a power of two")
    w = Fraction(1, side * side)
    weights = {(i, j, i ^ j): w for i in range(side) for j in range(side)}
    return GridMeasure3(weights, coords=coords)


def marginals2(m: GridMeasure3) -> dict[str, list[list[Fraction]]]:
    return m.marginals2()


def _xor_moments(level: int = 1) -> dict[tuple[int, int], Fraction]:
    """M[p, q] = int int_[0,1]^2 u^p v^q (u (+) v), p, q in {0, 1}.

    Cut into level-n cells; each cell contributes polynomial terms plus a
    2^-(n(p+q+3)) copy of lower or equal moments, which gives a triangular
    fixed-point system.
    """
    side = 1 << level
    h = Fraction(1, side)

    def poly(p: int, q: int) -> Fraction:  # int_[0,h]^2 s^p t^q
        return h ** (p + q + 2) / ((p + 1) * (q + 1))

    M: dict[tuple[int, int], Fraction] = {}
    for p, q in ((0, 0), (1, 0), (0, 1), (1, 1)):
        rest = Fraction(0)
        self_coeff = Fraction(0)
        for i in range(side):
            for j in range(side):
                x0, y0, c = i * h, j * h, (i ^ j) * h
                # (x0 + s)^p (y0 + t)^q (c + s(+)t), expanded
                for pp in range(p + 1):
                    for qq in range(q + 1):
                        coef = (x0 ** (p - pp)) * (y0 ** (q - qq))
                        if not coef:
                            continue
                        rest += coef * c * poly(pp, qq)
                        scaled = h ** (pp + qq + 3)
                        if (pp, qq) == (p, q):
                            self_coeff += coef * scaled
                        else:
                            rest += coef * scaled * M[(pp, qq)]
        M[(p, q)] = rest / (1 - self_coeff)
    return M


def _exact_xor_cost(m: GridMeasure3) -> Fraction:
    n = m.level
    side = 1 << n
    h = Fraction(1, side)
    M = _xor_moments(1)
    total = Fraction(0)
    for (i, j, _k), w in m.weights.items():
        x0, y0, c = i * h, j * h, (i ^ j) * h
        # cell integral of (x0+s)(y0+t)(c + s(+)t), normalized to mass w
        cell = (x0 * y0 * (c * h * h + h**3 * M[(0, 0)])
                + x0 * (c * h**3 / 2 + h**4 * M[(0, 1)])
                + y0 * (c * h**3 / 2 + h**4 * M[(1, 0)])
                + c * h**4 / 4 + h**5 * M[(1, 1)])
        if m.kind == "xor-max":
            xy = (x0 * h + h * h / 2) * (y0 * h + h * h / 2)
            cell = xy - cell
        total += w * cell / (h * h)
    return total


def plan_cost(m: GridMeasure3, representative: str = "left") -> Fraction:
    """Sum of w * x * y * z, or the exact continuous cost of an XOR plan."""
    if representative == "exact_cell":
        if m.kind not in ("xor-min", "xor-max") or m.level is None:
            raise ValueError("exact_cell cost is only available for xor_plan measures")
        if m != xor_plan(m.level, m.kind[4:]):
            raise ValueError("measure tagged as an XOR plan does not match one")
        return _exact_xor_cost(m)
    X = m.axis_coords(0, representative)
    Y = m.axis_coords(1, representative)
    Z = m.axis_coords(2, representative)
    return sum((w * X[i] * Y[j] * Z[k] for (i, j, k), w in m.weights.items()), Fraction(0))


def xor_left_cost(n: int, sense: str = "min") -> Fraction:
    """Left-rule cost of xor_plan(n, sense) without building the measure."""
    side = 1 << n
    moment = kernels.xor_moment_sum(n)
    if sense == "min":
        num = moment
    elif sense == "max":
        # k -> side-1-k on the third axis
        num = (side - 1) * (side * (side - 1) // 2) ** 2 - moment
    else:
        raise ValueError("sense must be 'min' or 'max'")
    return Fraction(num, side**5)


def _check_symmetric(m: GridMeasure3, axes: Iterable[int]) -> None:
    if m.coords is None:
        return
    for a in axes:
        c = m.coords[a]
        if any(c[i] + c[-1 - i] != 1 for i in range(len(c))):
            raise ValueError(f"axis {a} coordinates are not symmetric about 1/2")


def reflect(m: GridMeasure3, pair: str) -> GridMeasure3:
    """Push forward under (x, y, z) -> (1-x, 1-y, z) and its xz / yz analogues."""
    if pair not in AXIS_PAIRS:
        raise ValueError(f"pair must be one of {AXIS_PAIRS}")
    axes = ["xyz".index(ch) for ch in pair]
    _check_symmetric(m, axes)
    weights = {}
    for idx, w in m.weights.items():
        new = list(idx)
        for a in axes:
            new[a] = m.shape[a] - 1 - new[a]
        weights[tuple(new)] = w
    return m.same_geometry(weights)


def cdf3(m: GridMeasure3, i: int, j: int, k: int) -> Fraction:
    """mu([0, x_i] x [0, y_j] x [0, z_k])."""
    if not all(0 <= v < s for v, s in zip((i, j, k), m.shape)):
        raise IndexError("cdf index outside grid")
    return sum((w for (a, b, c), w in m.weights.items() if a <= i and b <= j and c <= k),
               Fraction(0))


def cdf_table(m: GridMeasure3) -> list[list[list[Fraction]]]:
    """All values of cdf3 via 3D prefix sums."""
    sx, sy, sz = m.shape
    F = m.dense()
    for i, j, k in product(range(sx), range(sy), range(sz)):
        if k:
            F[i][j][k] += F[i][j][k - 1]
    for i, j, k in product(range(sx), range(sy), range(sz)):
        if j:
            F[i][j][k] += F[i][j - 1][k]
    for i, j, k in product(range(sx), range(sy), range(sz)):
        if i:
            F[i][j][k] += F[i - 1][j][k]
    return F


def is_uniform_marginals(m: GridMeasure3) -> bool:
    for key, mat in m._marginals.items():
        vals = {v for row in mat for v in row}
        if len(vals) != 1:
            return False
    return True
