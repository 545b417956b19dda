import importlib

import pytest

from nimtransport import _pykernels, kernels
from nimtransport.potential import f_int


def _compiled():
    try:
        return importlib.import_module("nimtransport._kernels")
    except ImportError:
        return None


def _rows(table):
    return [list(map(int, row)) for row in table]


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("n", range(0, 7))
def test_python_table_matches_recurrence(n):
    table = _rows(_pykernels.potential_table(n))
    side = 1 << n
    assert table == [[f_int(a, b) for b in range(side + 1)] for a in range(side + 1)]


@pytest.mark.parametrize("n", range(0, 8))
def test_python_reductions(n):
    side = 1 << n
    assert _pykernels.potential_grid_sum(n) == sum(f_int(a, b) for a in range(side) for b in range(side))
    assert _pykernels.xor_moment_sum(n) == sum(i * j * (i ^ j) for i in range(side) for j in range(side))
    assert _pykernels.carry_free_count(n) == 3 ** n


@pytest.mark.skipif(_compiled() is None, reason="compiled extension not built")
@pytest.mark.parametrize("n", range(0, 10))
def test_backend_parity(n):
    ck = _compiled()
    assert _rows(ck.potential_table(n)) == _rows(_pykernels.potential_table(n))
    assert ck.potential_grid_sum(n) == _pykernels.potential_grid_sum(n)
    assert ck.xor_moment_sum(n) == _pykernels.xor_moment_sum(n)
    assert ck.carry_free_count(n) == _pykernels.carry_free_count(n)


def test_limits_enforced():
    with pytest.raises(ValueError):
        kernels.potential_table(kernels.MAX_TABLE_LEVEL + 1)
    with pytest.raises(ValueError):
        kernels.potential_grid_sum(kernels.MAX_SUM_LEVEL + 1)
