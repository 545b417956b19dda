"""Worked examples and verification sweeps on top of the exact LP."""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction
from itertools import product

from ..dyadic import RationalLike, to_rational
from ..report import Report
from ..transport import GridMeasure3, cdf_table, plan_cost, xor_measure_on, xor_plan
from .model import (
    MarginalSpec,
    build_model,
    certify,
    consistency_check,
    dual_objective,
    dual_potentials,
    product_cost,
    solve,
    uniform_spec,
)
from .simplex import enumerate_basic_solutions

BABY_COORDS = ((0, 1), (0, 1), (0, 1))
EVEN_PARITY = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))
ODD_PARITY = ((1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1))


def _measure_from(sol, model, coords) -> GridMeasure3:
    return GridMeasure3(dict(sol.atoms(model)), coords=coords)


def baby_cube(sense: str = "min") -> Report:
    """2x2x2 cube with vertices {0,1}^3, uniform 2D marginals, cost xyz."""
    rep = Report(f"examples.baby_cube[{sense}]")
    spec = uniform_spec((2, 2, 2))
    model = build_model(spec, product_cost(BABY_COORDS), sense)
    sol = solve(model)
    rep.checked += 1
    c = model.min_cost()
    best, bfs = enumerate_basic_solutions(model.rows, model.rhs, c)
    brute = best if sense == "min" else -best
    if brute != sol.objective:
        rep.fail(check="simplex == basis enumeration", simplex=sol.objective, enumeration=brute)
    parity = EVEN_PARITY if sense == "min" else ODD_PARITY
    plan = GridMeasure3({p: Fraction(1, 4) for p in parity}, coords=BABY_COORDS)
    rep.checked += 1
    if plan_cost(plan) != sol.objective:
        rep.fail(check="parity plan is optimal", parity_cost=plan_cost(plan), optimum=sol.objective)
    pots = dual_potentials(sol, model)
    rep.checked += 1
    if dual_objective(pots, spec) != sol.objective:
        rep.fail(check="dual objective == primal")
    rep.values.update(optimum=sol.objective, basic_solutions=len(bfs),
                      atoms=[[list(a), w] for a, w in sol.atoms(model)])
    return rep


def infeasible_marginals_spec(size: int = 4) -> MarginalSpec:
    """Consistent marginals with no joint measure.

    mu_12 sits on the diagonal and mu_13 is uniform, which forces the joint
    measure (i, i, k); mu_23 is a non-uniform doubly stochastic matrix, so it
    cannot be the yz-projection of that measure.
    """
    if size < 2:
        raise ValueError("size must be at least 2")
    s = size
    diag = [[Fraction(1, s) if i == j else 0 for j in range(s)] for i in range(s)]
    unif = [[Fraction(1, s * s)] * s for _ in range(s)]
    # a cyclic shift is doubly stochastic and differs from the uniform matrix
    shift = [[Fraction(1, s) if j == (i + 1) % s else 0 for j in range(s)] for i in range(s)]
    return MarginalSpec.create((s, s, s), 2, {"01": diag, "02": unif, "12": shift})


def infeasible_marginals_check(size: int = 4) -> Report:
    rep = Report(f"examples.infeasible_marginals[size={size}]")
    spec = infeasible_marginals_spec(size)
    cons = consistency_check(spec)
    rep.checked += cons.checked
    if not cons.passed:
        rep.fail(check="consistency", violations=cons.violations)
    model = build_model(spec, lambda *idx: 0)
    sol = solve(model)
    rep.checked += 1
    if sol.status != "infeasible":
        rep.fail(check="infeasible", status=sol.status)
    else:
        problems = certify(model, sol)
        if problems:
            rep.fail(check="farkas certificate", problems=problems)
        rep.values["farkas_yb"] = sum((y * b for y, b in zip(sol.farkas, model.rhs)), Fraction(0))
        rep.values["farkas_support"] = sum(1 for y in sol.farkas if y)
    rep.values["status"] = sol.status
    return rep


def level_coords(n: int) -> list[list[Fraction]]:
    side = 1 << n
    return [[Fraction(i, side) for i in range(side)] for _ in range(3)]


def xor_optimality_check(n: int, sense: str = "min") -> Report:
    """LP optimum of the uniform (3,2) problem on the level-n grid vs the XOR plan.

    Equality is asserted for n <= 2 only; larger levels are recorded.
    """
    if not 0 <= n <= 4:
        raise ValueError("level must be in 0..4")
    rep = Report(f"lp.xor_optimality[n={n},{sense}]", asserted=n <= 2)
    side = 1 << n
    spec = uniform_spec((side,) * 3)
    model = build_model(spec, product_cost(level_coords(n)), sense)
    sol = solve(model)
    xor_cost = plan_cost(xor_plan(n, sense))
    pots = dual_potentials(sol, model)
    rep.checked += 2
    if sol.objective != xor_cost:
        rep.fail(check="LP optimum == xor-plan cost", lp=sol.objective, xor=xor_cost)
    if dual_objective(pots, spec) != sol.objective:
        rep.fail(check="dual objective == primal")
    rep.values.update(lp_optimum=sol.objective, xor_cost=xor_cost, pivots=sol.pivots,
                      variables=model.n_vars, rows=len(model.rows))
    return rep


def random_grid(rng: random.Random, size: int = 4, denominator: int = 96) -> list[Fraction]:
    return [Fraction(v, denominator) for v in sorted(rng.sample(range(denominator + 1), size))]


def four_point_theorem_check(trials: int = 100, seed: int = 0, measures_per_grid: int = 20) -> Report:
    """Random sorted 4-point grids: LP min equals the mu_xor cost, and the
    CDF of mu_xor dominates the CDF of random feasible measures."""
    rng = random.Random(seed)
    rep = Report(f"examples.four_point[trials={trials},seed={seed}]")
    spec = uniform_spec((4, 4, 4))
    # the feasible polytope is the same for every grid; only the cost moves
    polytope = build_model(spec, lambda *idx: 0)
    xor_cdf = None
    for t in range(trials):
        coords = [random_grid(rng) for _ in range(3)]
        model = replace(polytope, cost=[product_cost(coords)(*polytope.multi_index(j))
                                        for j in range(polytope.n_vars)])
        sol = solve(model)
        mu_xor = xor_measure_on(coords)
        want = plan_cost(mu_xor)
        rep.checked += 1
        if sol.objective != want:
            rep.fail(check="LP min == mu_xor cost", trial=t, grid=coords, lp=sol.objective, xor=want)
        if xor_cdf is None:
            xor_cdf = cdf_table(mu_xor)
            for i, j in product(range(4), repeat=2):
                rep.checked += 1
                if xor_cdf[i][j][3] != Fraction((i + 1) * (j + 1), 16):
                    rep.fail(check="F_xor(x_i, y_j, z_3) == (i+1)(j+1)/16", i=i, j=j)
        for m in range(measures_per_grid):
            cost = [Fraction(rng.randint(-8, 8)) for _ in range(polytope.n_vars)]
            other = solve(replace(polytope, cost=cost))
            F = cdf_table(_measure_from(other, polytope, coords))
            rep.checked += 1
            bad = [(i, j, k) for i, j, k in product(range(4), repeat=3) if F[i][j][k] > xor_cdf[i][j][k]]
            if bad:
                rep.fail(check="F_xor >= F_mu", trial=t, measure=m, points=bad[:4])
            if F[3][3][3] != 1:
                rep.fail(check="total mass", trial=t, measure=m)
    rep.values["solves"] = trials * (1 + measures_per_grid)
    return rep


SMALL = 3  # indices 0, 1, 2 are small in the epsilon example
M2_WEIGHTS = {3: Fraction(1, 3), 2: Fraction(0), 1: Fraction(1, 5), 0: Fraction(2, 25)}


def epsilon_grid(eps: RationalLike) -> list[Fraction]:
    e = to_rational(eps)
    if not 0 < e < Fraction(1, 8):
        raise ValueError("eps must satisfy 0 < eps < 1/8")
    return [Fraction(0), e, 2 * e, 1 - 4 * e, 1 - 3 * e, 1 - 2 * e, 1 - e, Fraction(1)]


def epsilon_measures(eps: RationalLike) -> tuple[GridMeasure3, GridMeasure3]:
    """M' (unit weight on i^j^k = 0) and the small/large competitor M''."""
    X = epsilon_grid(eps)
    coords = [X, X, X]
    m1 = {(i, j, i ^ j): 1 for i in range(8) for j in range(8)}
    m2 = {}
    for idx in product(range(8), repeat=3):
        w = M2_WEIGHTS[sum(1 for v in idx if v < SMALL)]
        if w:
            m2[idx] = w
    return GridMeasure3(m1, coords=coords), GridMeasure3(m2, coords=coords)


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (constant first) of the Lagrange interpolant."""
    coeffs = [Fraction(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = _poly_mul(basis, [-xj, Fraction(1)])
                denom *= xi - xj
        for d, c in enumerate(basis):
            coeffs[d] += yi * c / denom
    return coeffs


def epsilon_cost_polynomials() -> tuple[list[Fraction], list[Fraction]]:
    """cost(M') and cost(M'') as cubic polynomials in eps.

    Every coordinate is affine in eps, so each cost has degree at most 3 and
    is fixed by four sample values.
    """
    xs = [Fraction(1, 2 ** k) for k in (4, 5, 6, 7)]
    ys1, ys2 = [], []
    for e in xs:
        m1, m2 = epsilon_measures(e)
        ys1.append(plan_cost(m1))
        ys2.append(plan_cost(m2))
    return interpolate(xs, ys1), interpolate(xs, ys2)


def epsilon_example(eps: RationalLike = Fraction(1, 128), solve_lp: bool = True) -> Report:
    e = to_rational(eps)
    rep = Report(f"examples.epsilon[eps={e}]")
    m1, m2 = epsilon_measures(e)
    for name, m in (("M'", m1), ("M''", m2)):
        for key, mat in m.marginals2().items():
            rep.checked += 1
            if any(v != 1 for row in mat for v in row):
                rep.fail(check="uniform pairwise marginals", measure=name, pair=key)
    if m1.marginals2() != m2.marginals2():
        rep.fail(check="identical marginals")
    c1, c2 = plan_cost(m1), plan_cost(m2)
    rep.checked += 1
    if not c2 < c1:
        rep.fail(check="cost(M'') < cost(M')", cost_m1=c1, cost_m2=c2)
    p1, p2 = epsilon_cost_polynomials()
    rep.checked += 2
    if p1[0] != 12:
        rep.fail(check="free term of cost(M') == 12", got=p1[0])
    if p2[0] != 10:
        rep.fail(check="free term of cost(M'') == 10", got=p2[0])
    rep.values.update(cost_m1=c1, cost_m2=c2, poly_m1=p1, poly_m2=p2)
    if solve_lp:
        X = epsilon_grid(e)
        spec = uniform_spec((8, 8, 8), mass=64)
        sol = solve(build_model(spec, product_cost([X, X, X]), "min"))
        rep.checked += 1
        if not sol.objective <= c2:
            rep.fail(check="LP min <= cost(M'')", lp=sol.objective, cost_m2=c2)
        rep.values["lp_min"] = sol.objective
    return rep


def cdf_cost_identity_check(m: GridMeasure3) -> Report:
    """sum w (1-x)(1-y)(1-z) == integral over [0,1]^3 of the step CDF."""
    rep = Report("lp.cdf_cost_identity")
    axes = [m.axis_coords(a) for a in range(3)]
    for ax in axes:
        if ax[0] < 0 or ax[-1] > 1:
            raise ValueError("grid coordinates must lie in [0, 1]")
    lhs = sum(((1 - axes[0][i]) * (1 - axes[1][j]) * (1 - axes[2][k]) * w
               for (i, j, k), w in m.weights.items()), Fraction(0))
    # F is constant on [x_i, x_{i+1}) x ... with x_{s} = 1
    widths = [[(ax[i + 1] if i + 1 < len(ax) else 1) - ax[i] for i in range(len(ax))] for ax in axes]
    F = cdf_table(m)
    rhs = Fraction(0)
    for i, j, k in product(*(range(s) for s in m.shape)):
        if F[i][j][k]:
            rhs += F[i][j][k] * widths[0][i] * widths[1][j] * widths[2][k]
    rep.checked = 1
    if lhs != rhs:
        rep.fail(check="cdf identity", lhs=lhs, rhs=rhs)
    rep.values.update(lhs=lhs, rhs=rhs)
    return rep


def rectangle_increments(f) -> Fraction | None:
    """Minimum of f(i',j') + f(i,j) - f(i',j) - f(i,j') over i < i', j < j'.

    ``f`` is a 2D table (list of rows).  Returns None if it has fewer than
    two rows or columns.
    """
    rows = [[to_rational(v) for v in row] for row in f]
    if len(rows) < 2 or len(rows[0]) < 2:
        return None
    best = None
    h, w = len(rows), len(rows[0])
    for i in range(h):
        for i2 in range(i + 1, h):
            diff = [rows[i2][j] - rows[i][j] for j in range(w)]
            for j in range(w):
                for j2 in range(j + 1, w):
                    v = diff[j2] - diff[j]
                    if best is None or v < best:
                        best = v
    return best


def random_potential_increments(seed: int = 0, side: int = 4) -> Report:
    """Sign of the rectangle increment of a dual potential from a random (3,2) LP.

    Exploratory: nothing is asserted.
    """
    rng = random.Random(seed)
    rep = Report(f"lp.rectangle_increments[seed={seed}]", asserted=False)
    spec = uniform_spec((side,) * 3)
    model = build_model(spec, lambda *idx: Fraction(rng.randint(0, 16), 16))
    sol = solve(model)
    pots = dual_potentials(sol, model)
    for I, table in pots.items():
        mat = [[table[(a, b)] for b in range(side)] for a in range(side)]
        rep.values["".join(map(str, I))] = rectangle_increments(mat)
    rep.checked = len(pots)
    return rep
