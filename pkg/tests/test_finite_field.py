import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpspectra.finite_field import (
    FieldSizeError,
    build_field,
    divisors,
    find_irreducible,
    is_irreducible,
    is_prime,
    prime_factors,
    prime_power,
)

SMALL = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (5, 2), (7, 2), (11, 1), (2, 6)]


def test_integer_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(360) == [2, 3, 5]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert prime_power(2401) == (7, 4)
    assert prime_power(12) is None
    assert prime_power(1) is None


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (5, 2), (7, 4), (13, 2)])
def test_find_irreducible(p, m):
    f = find_irreducible(p, m)
    assert len(f) == m + 1 and f[-1] == 1
    assert is_irreducible(f, p)


@pytest.mark.parametrize("p,m", SMALL)
def test_tables_are_consistent(p, m):
    F = build_field(p, m)
    q = F.q
    assert sorted(F.exp_table[: q - 1].tolist()) == list(range(1, q))
    assert F.log_table[0] == -1
    for i in range(q - 1):
        assert F.log_table[F.exp_table[i]] == i
    # trace is F_p-linear and onto
    assert set(F.trace_table.tolist()) == set(range(p))
    assert F.trace_table[0] == 0


@pytest.mark.parametrize("p,m", SMALL)
def test_trace_matches_frobenius_sum(p, m):
    F = build_field(p, m)
    for x in range(F.q):
        s = 0
        y = x
        for _ in range(m):
            s = F.add(s, y)
            y = F.pow(y, p)
        assert s == F.trace(x)


def test_gf4_multiplication_table():
    F = build_field(2, 2)
    # any irreducible quadratic over GF(2) is t^2 + t + 1: t * t = t + 1
    assert F.mul(2, 2) == 3
    assert F.mul(2, 3) == 1
    assert F.mul(3, 3) == 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pm, data):
    F = build_field(*pm)
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(x, F.neg(x)) == 0
    assert F.sub(F.add(x, y), y) == x
    if x:
        assert F.mul(x, F.inv(x)) == 1
    assert F.trace(F.add(x, y)) == (F.trace(x) + F.trace(y)) % F.p


@pytest.mark.parametrize("p,m,k", [(3, 2, 4), (7, 2, 3), (2, 4, 5), (5, 2, 6)])
def test_cosets_partition_units(p, m, k):
    F = build_field(p, m)
    seen = np.concatenate([F.coset(i, k) for i in range(k)])
    assert sorted(seen.tolist()) == list(range(1, F.q))
    for i in range(k):
        for x in F.coset(i, k):
            assert F.coset_index(int(x), k) == i


def test_kth_powers_are_coset_zero():
    F = build_field(7, 2)
    powers = {F.pow(x, 3) for x in range(1, F.q)}
    assert powers == set(F.coset(0, 3).tolist())


def test_with_generator():
    F = build_field(5, 2)
    other = F.exp_table[5]  # gcd(5, 24) = 1, so still primitive
    G = F.with_generator(int(other))
    assert G.omega == other
    assert G.exp_table[1] == other
    assert sorted(G.exp_table[:24].tolist()) == list(range(1, 25))
    with pytest.raises(ValueError):
        F.with_generator(int(F.exp_table[2]))


def test_size_cap(monkeypatch):
    with pytest.raises(FieldSizeError):
        build_field(2, 12, max_q=1000)
    monkeypatch.setenv("GP_SPECTRA_MAX_Q", "100")
    with pytest.raises(FieldSizeError):
        build_field(11, 2)


def test_rejects_non_prime():
    with pytest.raises(ValueError):
        build_field(6, 2)
