from fractions import Fraction
from functools import lru_cache
from itertools import product
import threading

import pytest
from hypothesis import given, strategies as st

from nimtransport.dyadic import Dyadic
from nimtransport.potential import (
    F_dyadic,
    F_triple,
    PotentialTable,
    check_identities,
    equality_closure_witness,
    f_dyadic,
    f_int,
    homogeneity_check,
    lipschitz_check,
    lipschitz_increment,
    table_agreement,
    verify_bound,
)


@lru_cache(maxsize=None)
def oracle_f(a, b):
    """Straight recursive transcription of the recurrence, for cross-checking."""
    if a < 2 and b < 2:
        return {(0, 0): 0, (0, 1): -1, (1, 0): -1, (1, 1): 2}[(a, b)]
    if a % 2 == 0 and b % 2 == 0:
        return 8 * oracle_f(a // 2, b // 2)
    if a % 2 == 1 and b % 2 == 0:
        return 4 * (oracle_f((a - 1) // 2, b // 2) + oracle_f((a + 1) // 2, b // 2)) + 3
    if a % 2 == 0:
        return oracle_f(b, a)
    lo_a, hi_a, lo_b, hi_b = (a - 1) // 2, (a + 1) // 2, (b - 1) // 2, (b + 1) // 2
    return 2 * (oracle_f(lo_a, lo_b) + oracle_f(lo_a, hi_b) + oracle_f(hi_a, lo_b) + oracle_f(hi_a, hi_b)) + 2


def test_base_values_and_examples():
    assert f_int(0, 0) == 0
    assert f_int(0, 1) == f_int(1, 0) == -1
    assert f_int(1, 1) == 2
    assert f_int(2, 2) == 16
    assert f_int(1, 2) == oracle_f(1, 2) == 7
    assert f_int(1, 3) == oracle_f(1, 3) == 2


def test_matches_independent_recurrence():
    for a, b in product(range(70), repeat=2):
        assert f_int(a, b) == oracle_f(a, b)


def test_block_identity_values():
    # 2*8 + 6*4*2 + f(1,1) and -8 - 6*4 + 0 + 0 + f(1,0)
    assert f_int(3, 3) == oracle_f(3, 3) == 66
    assert f_int(3, 0) == oracle_f(3, 0) == -33


def test_dyadic_values():
    assert f_dyadic(1, 1) == 2
    assert f_dyadic("1/2", "1/2") == Fraction(1, 4)
    assert f_dyadic("1/2", "1/4") == Fraction(oracle_f(2, 1), 64) == Fraction(7, 64)


@pytest.mark.parametrize("n", range(0, 6))
def test_level_independence(n):
    side = 1 << n
    for a, b in product(range(side + 1), repeat=2):
        assert f_dyadic(Dyadic(a, n), Dyadic(b, n)) == Fraction(f_int(2 * a, 2 * b), 8 ** (n + 1))


def test_triple_examples():
    assert F_triple(0, 0, 0) == 0
    assert F_triple(1, 1, 0) == 0 == 8 * 1 * 1 * 0
    assert F_triple(1, 1, 1) == 6


@pytest.mark.parametrize("n", range(0, 6))
def test_verify_bound(n):
    rep = verify_bound(n)
    assert rep.passed, rep.violations[:3]
    assert not rep.violations  # includes the closure-witness conjecture
    if n == 0:
        assert [1, 1, 0] in rep.values["equality_triples"]


def test_equality_counts_stable():
    # frozen from the exhaustive sweep; regressions show up here first
    assert [verify_bound(n).values["equality_count"] for n in range(4)] == [4, 10, 34, 130]


def test_closure_witness_examples():
    assert equality_closure_witness(1, 1, 2, n=2)
    assert F_triple(1, 1, 2) == 16
    assert not equality_closure_witness(1, 1, 1)
    assert equality_closure_witness(5, 9, 5 ^ 9)
    with pytest.raises(ValueError):
        equality_closure_witness(5, 0, 0, n=2)


@pytest.mark.parametrize("n", range(0, 6))
def test_check_identities(n):
    rep = check_identities(n)
    assert rep.passed, rep.violations[:3]


def test_homogeneity_and_parity_large():
    assert homogeneity_check(7).passed
    for a, b in product(range(257), repeat=2):
        v = f_int(a, b)
        assert (v + a + b) % 2 == 0


def test_lipschitz():
    N, _ = lipschitz_increment(0, 0)
    assert N == 15
    for n, m in product(range(4), repeat=2):
        assert lipschitz_check(n, m).passed


def test_scaled_bound_level3():
    side = 8
    for a, b, c in product(range(side + 1), repeat=3):
        x, y, z = (Fraction(v, side) for v in (a, b, c))
        lhs = F_dyadic(x, y, z)
        assert lhs <= 8 * x * y * z
        if a ^ b ^ c == 0:
            assert lhs == 8 * x * y * z


@pytest.mark.parametrize("n", [0, 4, 8])
def test_kernel_table_agrees(n):
    assert table_agreement(n).passed


def test_fault_injection_is_detected():
    broken = PotentialTable(base={(1, 1): 3})
    reps = [verify_bound(2, broken), check_identities(2, broken)]
    assert not all(r.passed for r in reps)
    assert any(v.get("identity") for r in reps for v in r.violations)


def test_memo_budget(monkeypatch):
    t = PotentialTable(max_entries=8)
    with pytest.raises(MemoryError):
        t(1000, 777)
    monkeypatch.setenv("NIMTRANSPORT_MEMO_BUDGET", "8")
    with pytest.raises(MemoryError):
        PotentialTable()(999, 321)


def test_concurrent_fill_is_deterministic():
    t = PotentialTable()
    keys = [(a, b) for a in range(0, 400, 13) for b in range(0, 400, 17)]
    out = {}

    def work(i):
        out[i] = [t(a, b) for a, b in keys]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    expected = [oracle_f(a, b) for a, b in keys]
    assert all(v == expected for v in out.values())


@given(st.integers(0, 2000), st.integers(0, 2000))
def test_symmetry_and_homogeneity_property(a, b):
    assert f_int(a, b) == f_int(b, a)
    assert f_int(2 * a, 2 * b) == 8 * f_int(a, b)


def test_negative_arguments_rejected():
    with pytest.raises(ValueError):
        f_int(-1, 0)
