from dataclasses import replace
from fractions import Fraction
from itertools import product
import random

import pytest

from nimtransport.lp import build_model, solve, uniform_spec
from nimtransport.transport import (
    GridMeasure3,
    cdf3,
    cdf_table,
    is_uniform_marginals,
    marginals2,
    plan_cost,
    reflect,
    xor_left_cost,
    xor_measure_on,
    xor_plan,
)


def test_xor_plan_atoms():
    assert xor_plan(0).atoms() == [((0, 0, 0), 1)]
    assert [a for a, _ in xor_plan(1, "min").atoms()] == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert {a for a, _ in xor_plan(1, "max").atoms()} == {(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)}
    with pytest.raises(ValueError):
        xor_plan(1, "sideways")


@pytest.mark.parametrize("n", range(0, 9))
def test_xor_marginals_uniform(n):
    for sense in ("min", "max"):
        m = xor_plan(n, sense)
        w = Fraction(1, 4 ** n)
        for mat in marginals2(m).values():
            assert all(v == w for row in mat for v in row)
        assert m.mass == 1


def test_marginals_linear_and_cached():
    a = GridMeasure3({(0, 0, 0): 1}, level=1)
    assert marginals2(a)["xy"] == [[1, 0], [0, 0]]
    b = xor_plan(1)
    mix = GridMeasure3({k: (a.weights.get(k, 0) + b.weights.get(k, 0)) / 2
                        for k in set(a.weights) | set(b.weights)}, level=1)
    for key in ("xy", "xz", "yz"):
        ma, mb, mm = marginals2(a)[key], marginals2(b)[key], marginals2(mix)[key]
        assert all(mm[i][j] == (ma[i][j] + mb[i][j]) / 2 for i in range(2) for j in range(2))
    # the returned tables are copies
    marginals2(b)["xy"][0][0] = 99
    assert marginals2(b)["xy"][0][0] == Fraction(1, 4)


def test_measure_validation():
    with pytest.raises(ValueError):
        GridMeasure3({(0, 0, 0): -1}, level=1)
    with pytest.raises(IndexError):
        GridMeasure3({(2, 0, 0): 1}, level=1)
    with pytest.raises(ValueError):
        GridMeasure3({}, level=1, coords=[[0], [0], [0]])
    with pytest.raises(ValueError):
        GridMeasure3({}, coords=[[0, 0], [0, 1], [0, 1]])
    with pytest.raises(TypeError):
        GridMeasure3({(0, 0, 0): 0.5}, level=0)


def test_costs():
    assert plan_cost(xor_plan(1, "min")) == 0
    for n in range(1, 5):
        assert plan_cost(xor_plan(n, "min"), "exact_cell") == Fraction(3, 28)
        assert plan_cost(xor_plan(n, "max"), "exact_cell") == Fraction(1, 7)
    assert Fraction(1, 4) - Fraction(3, 28) == Fraction(1, 7)
    with pytest.raises(ValueError):
        plan_cost(GridMeasure3({(0, 0, 0): 1}, level=1), "exact_cell")


def test_left_costs_monotone_and_converge():
    prev = Fraction(-1)
    for n in range(1, 9):
        c = plan_cost(xor_plan(n, "min"))
        assert prev <= c <= Fraction(3, 28)
        prev = c
        assert abs(Fraction(3, 28) - c) <= Fraction(2, 2 ** n)
        cmax = plan_cost(xor_plan(n, "max"))
        assert abs(Fraction(1, 7) - cmax) <= Fraction(2, 2 ** n)


def test_left_cost_brute_force_oracle():
    # direct triple loop over the support, independent of plan_cost
    for n in range(1, 5):
        side = 1 << n
        s = sum(i * j * (i ^ j) for i in range(side) for j in range(side))
        assert plan_cost(xor_plan(n)) == Fraction(s, side ** 5)


def test_reflections():
    m = xor_plan(2)
    for p in ("xy", "xz", "yz"):
        assert reflect(reflect(m, p), p) == m
    assert reflect(reflect(m, "xy"), "xz") == reflect(m, "yz")
    with pytest.raises(ValueError):
        reflect(GridMeasure3({}, coords=[[0, "1/3"], [0, 1], [0, 1]]), "xy")


def test_reflection_cost_invariance_on_lp_measures():
    rng = random.Random(5)
    model = build_model(uniform_spec((4, 4, 4)), lambda *idx: 0)
    for _ in range(5):
        cost = [Fraction(rng.randint(-5, 5)) for _ in range(model.n_vars)]
        sol = solve(replace(model, cost=cost))
        m = GridMeasure3(dict(sol.atoms(model)), level=2)
        assert is_uniform_marginals(m)
        for p in ("xy", "xz", "yz"):
            for rule in ("left", "midpoint"):
                assert plan_cost(reflect(m, p), rule) == plan_cost(m, rule)


def test_cdf():
    m = xor_plan(2)
    F = cdf_table(m)
    assert F[3][3][3] == cdf3(m, 3, 3, 3) == 1
    for j, k in product(range(4), repeat=2):
        assert F[0][j][k] == Fraction(min(j + 1, k + 1), 16)
    for i, j in product((1, 2), repeat=2):
        assert F[i][j][2] == Fraction(i * j + 3, 16)
    for i, j, k in product(range(4), repeat=3):
        assert F[i][j][k] == cdf3(m, i, j, k)
    with pytest.raises(IndexError):
        cdf3(m, 4, 0, 0)


def test_xor_measure_on_explicit_grid():
    coords = [[0, "1/3", "1/2", 1]] * 3
    m = xor_measure_on(coords)
    assert m.shape == (4, 4, 4)
    assert is_uniform_marginals(m)
    with pytest.raises(ValueError):
        xor_measure_on([[0, 1, 2]] * 3)


@pytest.mark.parametrize("n", range(0, 6))
def test_xor_left_cost_matches_plan(n):
    for sense in ("min", "max"):
        assert xor_left_cost(n, sense) == plan_cost(xor_plan(n, sense))
    with pytest.raises(ValueError):
        xor_left_cost(n, "up")
