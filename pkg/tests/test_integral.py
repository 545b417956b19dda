from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nimtransport.integral import (
    I_eval,
    closed_sum_oracle,
    dual_objective_value,
    f_via_integral,
    potential_mean,
    verify_integral,
    xor_integral_means,
)
from nimtransport.potential import f_dyadic


def test_I_examples():
    assert I_eval(1, 1) == Fraction(1, 2)
    assert I_eval("1/2", "1/2") == Fraction(1, 16)
    assert I_eval("3/4", "1/2") == closed_sum_oracle(3, 2, 2) == Fraction(5, 32)
    assert I_eval("7/8", 0) == 0


def test_oracle_examples():
    assert closed_sum_oracle(8, 8, 3) == Fraction(1, 2)
    assert closed_sum_oracle(1, 1, 1) == Fraction(1, 16)
    # I(1/2, 1) = (1/2)/2 by I(a, 1) = a/2
    assert closed_sum_oracle(2, 4, 2) == I_eval("1/2", 1) == Fraction(1, 4)


@pytest.mark.parametrize("n", range(1, 5))
def test_corollary_on_its_domain(n):
    side = 1 << n
    for p in range(side + 1):
        a = Fraction(p, side * side)  # 0 <= a <= 2^-n
        assert I_eval(a, Fraction(1, side)) == a / 2 ** (2 * n + 1)


def test_f_via_integral_examples():
    assert f_via_integral(1, 1) == 2
    assert f_via_integral(0, "3/8") == -2 * I_eval("3/8", "3/8")
    assert f_via_integral("1/2", "1/4") == f_dyadic("1/2", "1/4") == Fraction(7, 64)


@pytest.mark.parametrize("n", [3, 5])
def test_verify_integral(n):
    for rep in verify_integral(n):
        assert rep.passed, (rep.name, rep.violations[:3])


def test_I_a_one_level8():
    side = 256
    for p in range(side + 1):
        assert I_eval(Fraction(p, side), 1) == Fraction(p, 2 * side)


@given(st.integers(0, 64), st.integers(0, 64))
def test_symmetry_property(p, q):
    a, b = Fraction(p, 64), Fraction(q, 64)
    assert I_eval(a, b) == I_eval(b, a)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        I_eval("3/2", 0)
    with pytest.raises(ValueError):
        I_eval("1/3", 0)
    with pytest.raises(ValueError):
        xor_integral_means(0)


def test_means_independent_of_split_level():
    assert {xor_integral_means(k) for k in (1, 2, 3)} == {(Fraction(3, 28), Fraction(1, 7))}
    assert potential_mean() == Fraction(2, 7)
    assert dual_objective_value() == Fraction(3, 28)


def test_dual_value_float_oracle():
    # midpoint Riemann sum of x*y*(x xor y) in floating point, level 11
    n = 11
    side = 1 << n
    i = np.arange(side, dtype=np.int64)
    deep = 20
    # x xor y evaluated at deep binary precision on cell midpoints
    xi = (2 * i + 1) << (deep - n - 1)
    X = xi[:, None].astype(np.float64) / (1 << deep)
    Z = np.bitwise_xor(xi[:, None], xi[None, :]).astype(np.float64) / (1 << deep)
    est = float((X * X.T * Z).mean())
    assert abs(est - 3 / 28) < 2.0 ** (1 - n)
