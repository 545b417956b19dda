"""Cyclical monotonicity of finite sets for the cost xyz.

A finite set G is monotone (max sense) when no measure with the same three
2D projections as the uniform measure on G has a larger integral of xyz.
Any such competitor lives on the grid spanned by the coordinates of G,
because its projections pin every atom to coordinate values of G, so one LP
on that grid decides the question.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .dyadic import RationalLike, to_rational
from .lp.experiments import EVEN_PARITY, ODD_PARITY, level_coords
from .lp.model import MarginalSpec, build_model, product_cost, solve, uniform_spec
from .report import Report
from .transport import GridMeasure3, plan_cost

MAX_GRID_CELLS = 512

Point = tuple[Fraction, Fraction, Fraction]


class PointSet3:
    """Distinct points in R^3 with rational coordinates."""

    def __init__(self, points: Iterable[Sequence[RationalLike]]) -> None:
        pts = []
        for p in points:
            if len(p) != 3:
                raise ValueError(f"point {p!r} does not have three coordinates")
            pts.append(tuple(to_rational(v) for v in p))
        if not pts:
            raise ValueError("empty point set")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        self.points: tuple[Point, ...] = tuple(sorted(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def grid(self) -> list[list[Fraction]]:
        return [sorted({p[a] for p in self.points}) for a in range(3)]

    def uniform_measure(self) -> GridMeasure3:
        """pi_G on the coordinate grid of G."""
        coords = self.grid()
        pos = [{v: i for i, v in enumerate(ax)} for ax in coords]
        w = Fraction(1, len(self.points))
        return GridMeasure3({tuple(pos[a][p[a]] for a in range(3)): w for p in self.points},
                           coords=coords)

    def __repr__(self) -> str:
        return f"PointSet3({len(self.points)} points)"


def competitor_optimum(g: PointSet3, sense: str = "max") -> tuple[Fraction, GridMeasure3]:
    """Best integral of xyz among measures sharing the 2D projections of pi_G.

    ``sense="min"`` minimizes instead, i.e. monotonicity for the cost -xyz.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    pi = g.uniform_measure()
    cells = pi.shape[0] * pi.shape[1] * pi.shape[2]
    if cells > MAX_GRID_CELLS:
        raise ValueError(f"coordinate grid has {cells} cells, limit is {MAX_GRID_CELLS}")
    marg = pi.marginals2()
    spec = MarginalSpec.create(pi.shape, 2, {"01": marg["xy"], "02": marg["xz"], "12": marg["yz"]})
    model = build_model(spec, product_cost(pi.coords), sense)
    sol = solve(model)
    if sol.status != "optimal":  # pi_G itself is feasible
        raise RuntimeError(f"competitor LP returned {sol.status}")
    witness = GridMeasure3(dict(sol.atoms(model)), coords=pi.coords)
    return sol.objective, witness


def is_cyclically_monotone(g: PointSet3, sense: str = "max") -> tuple[bool, GridMeasure3 | None]:
    """(True, None) if pi_G is optimal, else (False, a strictly better competitor)."""
    value, witness = competitor_optimum(g, sense)
    own = plan_cost(g.uniform_measure())
    better = value > own if sense == "max" else value < own
    return (False, witness) if better else (True, None)


def four_point_set(a1, a2, b1, b2, c1, c2) -> PointSet3:
    a1, a2, b1, b2, c1, c2 = (to_rational(v) for v in (a1, a2, b1, b2, c1, c2))
    return PointSet3([(a1, b1, c2), (a1, b2, c1), (a2, b1, c1), (a2, b2, c2)])


def four_point_criterion(a1, a2, b1, b2, c1, c2, sense: str = "max") -> bool:
    """Closed-form monotonicity test for {(a1,b1,c2), (a1,b2,c1), (a2,b1,c1), (a2,b2,c2)}.

    Swapping to the complementary parity set changes the cost by
    (c2-c1)(a1-a2)(b1-b2), so the set is max-monotone iff
    (a1-a2)(b1-b2)(c1-c2) <= 0.
    """
    a1, a2, b1, b2, c1, c2 = (to_rational(v) for v in (a1, a2, b1, b2, c1, c2))
    if a1 == a2 or b1 == b2 or c1 == c2:
        raise ValueError("four-point configuration needs a1 != a2, b1 != b2, c1 != c2")
    s = (a1 - a2) * (b1 - b2) * (c1 - c2)
    if sense == "max":
        return s <= 0
    if sense == "min":
        return s >= 0
    raise ValueError("sense must be 'max' or 'min'")


def four_point_subsets(points: Iterable[Sequence[RationalLike]]):
    """Yield (a1, a2, b1, b2, c1, c2) for every four-point sub-configuration.

    A configuration is two points (a1,b1,c2), (a2,b2,c2) at a common height
    plus (a1,b2,c1), (a2,b1,c1) at another height.
    """
    by_xy: dict[tuple, set] = {}
    pts = [tuple(to_rational(v) for v in p) for p in points]
    for x, y, z in pts:
        by_xy.setdefault((x, y), set()).add(z)
    seen = set()
    for (a1, b1, c2), (a2, b2, c2b) in product(pts, repeat=2):
        if c2 != c2b or a1 >= a2 or b1 == b2:
            continue
        for c1 in by_xy.get((a1, b2), ()) & by_xy.get((a2, b1), set()):
            if c1 == c2:
                continue
            key = frozenset([(a1, b1, c2), (a1, b2, c1), (a2, b1, c1), (a2, b2, c2)])
            if key not in seen:
                seen.add(key)
                yield a1, a2, b1, b2, c1, c2


def support_violations(atoms: Iterable[Sequence[RationalLike]], sense: str) -> list[tuple]:
    """Four-point sub-configurations of a support that fail the criterion."""
    return [cfg for cfg in four_point_subsets(atoms) if not four_point_criterion(*cfg, sense=sense)]


def support_points(m: GridMeasure3) -> list[Point]:
    X, Y, Z = (m.axis_coords(a) for a in range(3))
    return [(X[i], Y[j], Z[k]) for (i, j, k) in sorted(m.weights)]


def random_four_point(rng: random.Random, denominator: int = 32) -> tuple[Fraction, ...]:
    vals = []
    for _ in range(3):
        u, v = rng.sample(range(denominator + 1), 2)
        vals += [Fraction(u, denominator), Fraction(v, denominator)]
    return tuple(vals)


def criterion_agreement(trials: int = 200, seed: int = 0) -> Report:
    """four_point_criterion against the LP competitor test on random configurations."""
    rng = random.Random(seed)
    rep = Report(f"monotone.criterion_agreement[trials={trials},seed={seed}]")
    verdicts = {True: 0, False: 0}
    for t in range(trials):
        cfg = random_four_point(rng)
        closed = four_point_criterion(*cfg)
        lp, _ = is_cyclically_monotone(four_point_set(*cfg))
        verdicts[lp] += 1
        rep.checked += 1
        if closed != lp:
            rep.fail(trial=t, config=list(cfg), criterion=closed, lp=lp)
    rep.values.update(monotone=verdicts[True], not_monotone=verdicts[False])
    return rep


def baby_cube_parity_check() -> Report:
    """Even parity set: min-monotone, not max-monotone; odd parity: the reverse."""
    rep = Report("monotone.baby_cube_parity")
    want = {("even", "min"): True, ("even", "max"): False,
            ("odd", "min"): False, ("odd", "max"): True}
    sets = {"even": PointSet3(EVEN_PARITY), "odd": PointSet3(ODD_PARITY)}
    for (name, sense), expected in sorted(want.items()):
        got, _ = is_cyclically_monotone(sets[name], sense)
        rep.checked += 1
        rep.values[f"{name}.{sense}"] = got
        if got != expected:
            rep.fail(set=name, sense=sense, got=got)
    return rep


def optimal_support_check(n: int) -> Report:
    """Supports of optimal (3,2) plans on level-n grids pass the four-point test."""
    rep = Report(f"monotone.optimal_supports[n={n}]")
    side = 1 << n
    coords = level_coords(n)
    for sense in ("min", "max"):
        model = build_model(uniform_spec((side,) * 3), product_cost(coords), sense)
        sol = solve(model)
        m = GridMeasure3(dict(sol.atoms(model)), coords=coords)
        configs = list(four_point_subsets(support_points(m)))
        bad = [c for c in configs if not four_point_criterion(*c, sense=sense)]
        rep.checked += len(configs)
        rep.values[f"{sense}.configurations"] = len(configs)
        for c in bad:
            rep.fail(sense=sense, config=list(c))
    return rep
