from fractions import Fraction
import random

import pytest

from nimtransport.lp.experiments import EVEN_PARITY, ODD_PARITY
from nimtransport.monotone import (
    PointSet3,
    baby_cube_parity_check,
    competitor_optimum,
    criterion_agreement,
    four_point_criterion,
    four_point_set,
    four_point_subsets,
    is_cyclically_monotone,
    optimal_support_check,
    support_violations,
)
from nimtransport.transport import plan_cost


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet3([(0, 0, 0), (0, 0, 0)])
    with pytest.raises(ValueError):
        PointSet3([])
    with pytest.raises(ValueError):
        PointSet3([(0, 0)])
    assert len(PointSet3([("1/2", 0, 1)])) == 1


def test_single_point():
    g = PointSet3([("1/3", "1/2", "1/5")])
    value, witness = competitor_optimum(g)
    assert value == Fraction(1, 30)
    assert witness == g.uniform_measure()
    assert is_cyclically_monotone(g) == (True, None)


def test_pair_sharing_two_coordinates():
    assert is_cyclically_monotone(PointSet3([(0, 0, 0), (0, 0, 1)]))[0]
    assert is_cyclically_monotone(PointSet3([(1, 0, 1), (1, 1, 1)]), "min")[0]


def test_baby_cube_sets():
    even, odd = PointSet3(EVEN_PARITY), PointSet3(ODD_PARITY)
    value, witness = competitor_optimum(even)
    assert value == Fraction(1, 4) > plan_cost(even.uniform_measure()) == 0
    ok, better = is_cyclically_monotone(even)
    assert not ok and plan_cost(better) == Fraction(1, 4)
    assert is_cyclically_monotone(odd)[0]
    assert is_cyclically_monotone(even, "min")[0]
    assert baby_cube_parity_check().passed


def test_criterion_examples():
    # even-parity configuration: max-monotonicity fails
    assert four_point_criterion(0, 1, 0, 1, 1, 0) is False
    assert four_point_criterion(0, 1, 0, 1, 0, 1) is True
    assert four_point_criterion(0, 1, 0, 1, 1, 0, sense="min") is True
    with pytest.raises(ValueError):
        four_point_criterion(0, 0, 0, 1, 0, 1)
    with pytest.raises(ValueError):
        four_point_criterion(0, 1, 0, 1, 0, 1, sense="up")


def test_criterion_relabeling_symmetry():
    rng = random.Random(11)
    for _ in range(50):
        a1, a2, b1, b2, c1, c2 = (Fraction(rng.randint(0, 20), 20) for _ in range(6))
        if a1 == a2 or b1 == b2 or c1 == c2:
            continue
        base = four_point_criterion(a1, a2, b1, b2, c1, c2)
        # same point set, different labelling
        assert four_point_set(a1, a2, b1, b2, c1, c2).points == four_point_set(a2, a1, b2, b1, c1, c2).points
        assert four_point_criterion(a2, a1, b2, b1, c1, c2) == base


def test_criterion_matches_lp():
    rep = criterion_agreement(trials=60, seed=4)
    assert rep.passed, rep.violations[:2]
    assert rep.values["monotone"] and rep.values["not_monotone"]


def test_subsets_and_support_violations():
    pts = list(four_point_set(0, 1, 0, 1, 1, 0))
    assert len(list(four_point_subsets(pts))) == 1
    assert len(support_violations(pts, "max")) == 1
    assert support_violations(pts, "min") == []


@pytest.mark.parametrize("n", [1, 2])
def test_optimal_supports(n):
    assert optimal_support_check(n).passed


def test_grid_limit():
    pts = [(Fraction(i, 9), Fraction(i, 9), Fraction(i, 9)) for i in range(9)]
    with pytest.raises(ValueError):
        competitor_optimum(PointSet3(pts))
