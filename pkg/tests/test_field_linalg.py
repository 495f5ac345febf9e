import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hopfsupport import linalg as la
from hopfsupport.field import MODULI, PRIMES, FieldError, field, is_irreducible

FIELDS = [(p, 1) for p in PRIMES] + [(p, e) for p in (2, 3, 5) for e in (2, 3)]


@st.composite
def field_and_elements(draw, n=3):
    p, e = draw(st.sampled_from(FIELDS))
    F = field(p, e)
    return F, [draw(st.integers(0, F.q - 1)) for _ in range(n)]


@settings(max_examples=300, deadline=None)
@given(field_and_elements())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@settings(max_examples=200, deadline=None)
@given(field_and_elements(2))
def test_frobenius_is_additive_and_fixes_prime_field(data):
    F, (a, b) = data
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    for x in range(F.p):
        assert F.frobenius(x) == x


@pytest.mark.parametrize("key", sorted(MODULI))
def test_moduli_irreducible(key):
    p, e = key
    assert is_irreducible(MODULI[key], p)


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, e):
    F = field(p, e)
    orders = []
    for a in range(1, F.q):
        k, x = 1, a
        while x != 1:
            x = int(F.mul(x, a))
            k += 1
        orders.append(k)
    assert max(orders) == F.q - 1
    assert all((F.q - 1) % k == 0 for k in orders)


def test_prime_subfield_embeds_without_conversion():
    F, K = field(3), field(3, 2)
    for a in range(3):
        for b in range(3):
            assert int(K.mul(a, b)) == int(F.mul(a, b))
            assert int(K.add(a, b)) == int(F.add(a, b))


def test_unsupported_prime_rejected():
    with pytest.raises(FieldError):
        field(11)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_rank_nullity_and_kernel(pe, n, m, seed):
    F = field(*pe)
    a = F.random(np.random.default_rng(seed), (n, m))
    k = la.kernel_basis(a, F)
    assert la.rank(a, F) + k.shape[1] == m
    assert not np.any(F.matmul(a, k))
    assert la.rank(k, F) == k.shape[1]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_rank_matches_plain_oracle(p, n, seed):
    F = field(p)
    a = F.random(np.random.default_rng(seed), (n, n + 1))
    assert la.rank(a, F) == oracles.rank(a.tolist(), p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_solve_and_inverse(pe, n, seed):
    F = field(*pe)
    rng = np.random.default_rng(seed)
    a = F.random(rng, (n, n))
    x = F.random(rng, n)
    b = F.matmul(a, x[:, None])[:, 0]
    sol = la.solve(a, b, F)
    assert sol is not None and np.array_equal(F.matmul(a, sol[:, None])[:, 0], b)
    if la.rank(a, F) == n:
        assert np.array_equal(F.matmul(a, la.inverse(a, F)), la.identity(n))


def random_nilpotent(rng, p, n):
    """Conjugated shift blocks of sizes <= p, plus the sorted block list."""
    sizes = []
    while sum(sizes) < n:
        sizes.append(int(rng.integers(1, min(p, n - sum(sizes)) + 1)))
    m = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for s in sizes:
        for i in range(s - 1):
            m[pos + i + 1, pos + i] = 1
        pos += s
    F = field(p)
    while True:
        g = F.random(rng, (n, n))
        if la.rank(g, F) == n:
            break
    return F.matmul(F.matmul(g, m), la.inverse(g, F)), sorted(sizes, reverse=True)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from((2, 3, 5)), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_jordan_type_matches_oracle(p, n, seed):
    rng = np.random.default_rng(seed)
    mat, sizes = random_nilpotent(rng, p, n)
    got = la.jordan_type(mat, p, field(p))
    assert got == sizes == oracles.jordan_type_oracle(mat.tolist(), p)
    assert la.is_free_over_truncated_line(mat, p, field(p)) == all(s == p for s in sizes)


def test_jordan_type_rejects_non_nilpotent():
    with pytest.raises(la.NotNilpotentError):
        la.jordan_type(la.identity(3), 3, field(3))


def test_jordan_type_over_extension():
    K = field(2, 2)
    w = 2  # the generator of F_4 over F_2
    n = np.array([[0, 0], [w, 0]])
    assert la.jordan_type(n, 2, K) == [2]


def test_dominance_order():
    assert la.dominates([3, 1], [2, 2])
    assert not la.dominates([2, 2], [3, 1])
    assert la.dominates([2, 1, 1], [1, 1, 1, 1])
