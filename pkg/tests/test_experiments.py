from fractions import Fraction
from itertools import product

import pytest

from nimtransport.lp import experiments as ex
from nimtransport.transport import GridMeasure3, xor_plan


def test_baby_cube_reports():
    lo, hi = ex.baby_cube("min"), ex.baby_cube("max")
    assert lo.passed and hi.passed
    assert lo.values["optimum"] == 0 and hi.values["optimum"] == Fraction(1, 4)


def test_infeasible_marginals():
    rep = ex.infeasible_marginals_check(4)
    assert rep.passed
    assert rep.values["status"] == "infeasible"
    assert rep.values["farkas_yb"] > 0
    with pytest.raises(ValueError):
        ex.infeasible_marginals_spec(1)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_xor_optimality(n):
    for sense in ("min", "max"):
        rep = ex.xor_optimality_check(n, sense)
        assert rep.asserted and rep.passed


def test_xor_optimality_bounds():
    with pytest.raises(ValueError):
        ex.xor_optimality_check(5)


def test_four_point_small():
    rep = ex.four_point_theorem_check(trials=4, seed=1, measures_per_grid=5)
    assert rep.passed, rep.violations[:2]


def test_four_point_fixed_grid():
    from nimtransport.lp import build_model, product_cost, solve, uniform_spec
    from nimtransport.transport import plan_cost, xor_measure_on

    coords = [[0, "1/4", "1/2", 1]] * 3
    sol = solve(build_model(uniform_spec((4, 4, 4)), product_cost(coords)))
    assert sol.objective == plan_cost(xor_measure_on(coords))


def test_epsilon_measures_and_polynomials():
    m1, m2 = ex.epsilon_measures(Fraction(1, 128))
    assert m1.marginals2() == m2.marginals2()
    assert m1.mass == m2.mass == 64
    p1, p2 = ex.epsilon_cost_polynomials()
    # independent count: at eps = 0 only all-large triples with xor 0 cost 1 each
    large = range(3, 8)
    assert p1[0] == sum(1 for i, j, k in product(large, repeat=3) if i ^ j ^ k == 0) == 12
    assert p2[0] == 125 * Fraction(2, 25) == 10
    rep = ex.epsilon_example(Fraction(1, 128), solve_lp=False)
    assert rep.passed
    assert rep.values["cost_m2"] < rep.values["cost_m1"]
    with pytest.raises(ValueError):
        ex.epsilon_grid(Fraction(1, 8))


def test_interpolate_recovers_cubic():
    xs = [Fraction(k) for k in range(4)]
    ys = [1 - 2 * x + 3 * x ** 3 for x in xs]
    assert ex.interpolate(xs, ys) == [1, -2, 0, 3]


def test_cdf_identity():
    assert ex.cdf_cost_identity_check(GridMeasure3({(0, 0, 0): 1}, coords=[[0]] * 3)).values["lhs"] == 1
    rep = ex.cdf_cost_identity_check(GridMeasure3({(0, 0, 0): 1}, coords=[[1]] * 3))
    assert rep.values["lhs"] == rep.values["rhs"] == 0
    rep = ex.cdf_cost_identity_check(xor_plan(2))
    assert rep.passed
    rep = ex.cdf_cost_identity_check(GridMeasure3({(0, 1, 2): Fraction(1, 3), (2, 0, 1): Fraction(2, 3)},
                                                  coords=[[0, "1/5", "2/3"]] * 3))
    assert rep.passed
    with pytest.raises(ValueError):
        ex.cdf_cost_identity_check(GridMeasure3({}, coords=[[0, 2]] * 3))


def test_rectangle_increments():
    grid = [[Fraction(i * j, 16) for j in range(5)] for i in range(5)]
    assert ex.rectangle_increments(grid) > 0
    assert ex.rectangle_increments([[7] * 4] * 4) == 0
    assert ex.rectangle_increments([[1, 2, 3]]) is None
    rep = ex.random_potential_increments(seed=2)
    assert not rep.asserted and rep.passed
    assert set(rep.values) == {"01", "02", "12"}
