"""The discrete (n, k)-multistochastic Kantorovich problem as an exact LP."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Any, Callable, Mapping, Sequence

from ..dyadic import RationalLike, to_rational
from ..report import Report
from .simplex import Row, SimplexResult, check_farkas, check_optimal, simplex

Subset = tuple[int, ...]
Cell = tuple[int, ...]


def _tensor_to_dict(tensor: Any, shape: Sequence[int]) -> dict[Cell, Fraction]:
    out: dict[Cell, Fraction] = {}
    if isinstance(tensor, Mapping):
        for cell, v in tensor.items():
            out[tuple(cell)] = to_rational(v)
        for cell in product(*(range(s) for s in shape)):
            out.setdefault(cell, Fraction(0))
        return out
    for cell in product(*(range(s) for s in shape)):
        v = tensor
        for c in cell:
            v = v[c]
        out[cell] = to_rational(v)
    return out


def subset_key(I: Subset) -> str:
    return "".join(str(i) for i in I)


@dataclass
class MarginalSpec:
    """Prescribed k-dimensional projections of a measure on s_1 x ... x s_n.

    ``marginals`` maps each k-subset (sorted tuple of axes) to a dict from
    cells to weights.  Use :meth:`create` to pass nested lists.
    """

    sizes: tuple[int, ...]
    k: int
    marginals: dict[Subset, dict[Cell, Fraction]]

    @classmethod
    def create(cls, sizes: Sequence[int], k: int, marginals: Mapping[Any, Any]) -> "MarginalSpec":
        sizes = tuple(int(s) for s in sizes)
        if not 1 <= k < len(sizes):
            raise ValueError("need 1 <= k < number of spaces")
        parsed: dict[Subset, dict[Cell, Fraction]] = {}
        for key, tensor in marginals.items():
            I = tuple(int(ch) for ch in key) if isinstance(key, str) else tuple(key)
            if len(I) != k or list(I) != sorted(set(I)) or I[-1] >= len(sizes):
                raise ValueError(f"bad subset {key!r}")
            parsed[I] = _tensor_to_dict(tensor, [sizes[i] for i in I])
        expected = set(combinations(range(len(sizes)), k))
        if set(parsed) != expected:
            raise ValueError(f"marginals must be given for exactly the subsets {sorted(expected)}")
        for I, t in parsed.items():
            if any(v < 0 for v in t.values()):
                raise ValueError(f"negative weight in marginal {subset_key(I)}")
        return cls(sizes, k, parsed)

    @property
    def subsets(self) -> list[Subset]:
        return sorted(self.marginals)

    def total_mass(self, I: Subset) -> Fraction:
        return sum(self.marginals[I].values(), Fraction(0))


def uniform_spec(sizes: Sequence[int], k: int = 2, mass: RationalLike = 1) -> MarginalSpec:
    """Every k-marginal uniform with the given total mass."""
    mass = to_rational(mass)
    marg = {}
    for I in combinations(range(len(sizes)), k):
        shape = [sizes[i] for i in I]
        w = mass / prod(shape)
        marg[I] = {cell: w for cell in product(*(range(s) for s in shape))}
    return MarginalSpec(tuple(sizes), k, marg)


def project(tensor: Mapping[Cell, Fraction], I: Subset, S: Subset) -> dict[Cell, Fraction]:
    """Sum a tensor on axes I down to the axes S (a subset of I)."""
    pos = [I.index(s) for s in S]
    out: dict[Cell, Fraction] = {}
    for cell, v in tensor.items():
        key = tuple(cell[p] for p in pos)
        out[key] = out.get(key, Fraction(0)) + v
    return out


def consistency_check(spec: MarginalSpec) -> Report:
    """Lower-order projections of overlapping marginals must agree."""
    rep = Report("lp.consistency")
    subsets = spec.subsets
    for I, J in combinations(subsets, 2):
        common = tuple(sorted(set(I) & set(J)))
        for S in combinations(common, spec.k - 1) if common else [()]:
            if len(S) != spec.k - 1:
                continue
            pi = project(spec.marginals[I], I, S)
            pj = project(spec.marginals[J], J, S)
            for cell in sorted(set(pi) | set(pj)):
                rep.checked += 1
                a, b = pi.get(cell, Fraction(0)), pj.get(cell, Fraction(0))
                if a != b:
                    rep.fail(equation=f"Pr_{subset_key(S) or 'total'} mu_{subset_key(I)} = "
                                      f"Pr_{subset_key(S) or 'total'} mu_{subset_key(J)}",
                             cell=list(cell), left=a, right=b)
    masses = {subset_key(I): spec.total_mass(I) for I in subsets}
    if len(set(masses.values())) > 1:
        rep.fail(equation="equal total masses", masses=masses)
    rep.values["total_mass"] = spec.total_mass(subsets[0])
    return rep


@dataclass
class LPModel:
    """Equality-form LP over the weights of a measure on the product grid.

    Column ``j`` is the row-major index of a multi-index; ``rows`` keep only
    linearly independent marginal constraints (dropped ones are listed in
    ``dropped``).  Rows whose dependency has an inconsistent right-hand side
    are kept so the solver can certify infeasibility.
    """

    sizes: tuple[int, ...]
    k: int
    subsets: list[Subset]
    sense: str
    cost: list[Fraction]
    rows: list[Row]
    rhs: list[Fraction]
    labels: list[tuple[Subset, Cell]]
    dropped: list[tuple[Subset, Cell]] = field(default_factory=list)
    raw_row_count: int = 0
    inconsistent: list[tuple[Subset, Cell]] = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.cost)

    def index(self, multi: Cell) -> int:
        j = 0
        for v, s in zip(multi, self.sizes):
            j = j * s + v
        return j

    def multi_index(self, j: int) -> Cell:
        out = []
        for s in reversed(self.sizes):
            out.append(j % s)
            j //= s
        return tuple(reversed(out))

    def min_cost(self) -> list[Fraction]:
        return self.cost if self.sense == "min" else [-c for c in self.cost]


CostLike = Any


def _cost_vector(sizes: Sequence[int], cost: CostLike) -> list[Fraction]:
    cells = list(product(*(range(s) for s in sizes)))
    if callable(cost):
        return [to_rational(cost(*cell)) for cell in cells]
    d = _tensor_to_dict(cost, sizes)
    return [d[cell] for cell in cells]


def product_cost(coords: Sequence[Sequence[RationalLike]]) -> Callable[..., Fraction]:
    """Cost x_i * y_j * z_k * ... on explicit coordinates."""
    cs = [[to_rational(v) for v in axis] for axis in coords]

    def c(*idx: int) -> Fraction:
        out = Fraction(1)
        for axis, i in zip(cs, idx):
            out *= axis[i]
        return out

    return c


def build_model(spec: MarginalSpec, cost: CostLike, sense: str = "min") -> LPModel:
    """One equality row per marginal cell; dependent rows dropped in order.

    Rows are scanned subset by subset, cells in lexicographic order; a row in
    the span of the rows kept before it is dropped, so in every dependent
    group the lexicographically last row goes.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    sizes = spec.sizes
    n_vars = prod(sizes)
    c = _cost_vector(sizes, cost)
    if len(c) != n_vars:
        raise ValueError("cost tensor does not match the grid")
    strides = []
    acc = 1
    for s in reversed(sizes):
        strides.append(acc)
        acc *= s
    strides.reverse()

    raw: list[tuple[Subset, Cell, Row, Fraction]] = []
    for I in spec.subsets:
        rest = [a for a in range(len(sizes)) if a not in I]
        for cell in product(*(range(sizes[i]) for i in I)):
            base = sum(strides[a] * v for a, v in zip(I, cell))
            row = {}
            for other in product(*(range(sizes[a]) for a in rest)):
                row[base + sum(strides[a] * v for a, v in zip(rest, other))] = Fraction(1)
            raw.append((I, cell, row, spec.marginals[I][cell]))

    # echelon basis: (pivot column, reduced row, reduced rhs)
    echelon: list[tuple[int, Row, Fraction]] = []
    rows, rhs, labels, dropped, inconsistent = [], [], [], [], []
    for I, cell, row, b in raw:
        r = dict(row)
        rb = b
        for piv, erow, eb in echelon:
            a = r.get(piv)
            if a:
                for col, v in erow.items():
                    nv = r.get(col, 0) - a * v
                    if nv:
                        r[col] = nv
                    else:
                        del r[col]
                rb -= a * eb
        if not r:
            if rb == 0:
                dropped.append((I, cell))
                continue
            inconsistent.append((I, cell))
        else:
            piv = min(r)
            p = r[piv]
            echelon.append((piv, {col: v / p for col, v in r.items()}, rb / p))
        rows.append(row)
        rhs.append(b)
        labels.append((I, cell))
    return LPModel(sizes=tuple(sizes), k=spec.k, subsets=spec.subsets, sense=sense, cost=c,
                   rows=rows, rhs=rhs, labels=labels, dropped=dropped,
                   raw_row_count=len(raw), inconsistent=inconsistent)


@dataclass
class LPSolution:
    status: str
    objective: Fraction | None
    primal: dict[int, Fraction]
    duals: list[Fraction] | None
    farkas: list[Fraction] | None
    pivots: int = 0
    certified: bool = False

    def atoms(self, model: LPModel) -> list[tuple[Cell, Fraction]]:
        return [(model.multi_index(j), w) for j, w in sorted(self.primal.items())]


def certify(model: LPModel, sol: LPSolution) -> list[str]:
    """Exact re-verification of an optimality or infeasibility certificate."""
    if sol.status == "optimal":
        y = sol.duals if model.sense == "min" else [-v for v in sol.duals]
        return check_optimal(model.rows, model.rhs, model.min_cost(), sol.primal, y)
    if sol.status == "infeasible":
        return check_farkas(model.rows, model.rhs, sol.farkas, model.n_vars)
    return []


def solve(model: LPModel) -> LPSolution:
    """Exact optimum, dual multipliers (one per kept row) or a Farkas vector.

    For max problems the duals satisfy ``y.A >= c``.  Every result is
    re-verified exactly; a failed certificate raises ``AssertionError``.
    """
    res: SimplexResult = simplex(model.rows, model.rhs, model.min_cost())
    if res.status == "optimal":
        obj = res.objective if model.sense == "min" else -res.objective
        duals = res.duals if model.sense == "min" else [-v for v in res.duals]
        sol = LPSolution("optimal", obj, res.x, duals, None, res.pivots)
    elif res.status == "infeasible":
        sol = LPSolution("infeasible", None, {}, None, res.farkas, res.pivots)
    else:
        sol = LPSolution("unbounded", None, {}, None, None, res.pivots)
    problems = certify(model, sol)
    if problems:
        raise AssertionError(f"certificate check failed: {problems}")
    sol.certified = sol.status in ("optimal", "infeasible")
    return sol


def dual_potentials(sol: LPSolution, model: LPModel) -> dict[Subset, dict[Cell, Fraction]]:
    """Per-subset potential tables f_I from the row multipliers.

    Dropped rows get multiplier zero.  The split is then normalized: every
    table except the last has zero mean over its cells and the last absorbs
    the constants, which changes neither sum_I f_I nor the dual objective.
    Asserts dual feasibility and complementary slackness exactly.
    """
    if sol.status != "optimal":
        raise ValueError("dual potentials need an optimal solution")
    pots: dict[Subset, dict[Cell, Fraction]] = {}
    for I in model.subsets:
        pots[I] = {cell: Fraction(0) for cell in product(*(range(model.sizes[i]) for i in I))}
    for (I, cell), y in zip(model.labels, sol.duals):
        pots[I][cell] += y
    shift = Fraction(0)
    for I in model.subsets[:-1]:
        mean = sum(pots[I].values(), Fraction(0)) / len(pots[I])
        if mean:
            pots[I] = {cell: v - mean for cell, v in pots[I].items()}
            shift += mean
    last = model.subsets[-1]
    pots[last] = {cell: v + shift for cell, v in pots[last].items()}

    for j in range(model.n_vars):
        multi = model.multi_index(j)
        total = sum((pots[I][tuple(multi[a] for a in I)] for I in model.subsets), Fraction(0))
        c = model.cost[j]
        if (model.sense == "min" and total > c) or (model.sense == "max" and total < c):
            raise AssertionError(f"dual constraint violated at {multi}")
        if sol.primal.get(j) and total != c:
            raise AssertionError(f"complementary slackness fails at {multi}")
    return pots


def dual_objective(pots: Mapping[Subset, Mapping[Cell, Fraction]], spec: MarginalSpec) -> Fraction:
    return sum((v * spec.marginals[I][cell] for I, t in pots.items() for cell, v in t.items()),
               Fraction(0))
