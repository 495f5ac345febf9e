import numpy as np
import pytest

import oracles
from hopfsupport import cohomology as co
from hopfsupport import linalg as la
from hopfsupport.algebra import identity_morphism
from hopfsupport.field import field
from hopfsupport.kernels import (coordinate_algebra, extended_double, group_algebra, o_subalgebra, parse_spec,
                                 quotient_to_double)


def ga(p):
    return parse_spec(f"Ga:n=1,p={p},r=1")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_betti_numbers_of_truncated_polynomial_algebras(p):
    g = ga(p)
    assert list(co.minimal_resolution(co.truncated_line(p), None, 8).betti) == oracles.betti_truncated_polynomial(1, 8)
    assert list(co.minimal_resolution(coordinate_algebra(g, 2), None, 8).betti) == \
        oracles.betti_truncated_polynomial(1, 8)
    assert list(co.minimal_resolution(extended_double(g), None, 6).betti) == oracles.betti_truncated_polynomial(2, 6)


def test_betti_of_three_variable_algebra():
    a = group_algebra(parse_spec("Ga:n=3,p=2,r=1"), 1)
    assert list(co.minimal_resolution(a, None, 5).betti) == oracles.betti_truncated_polynomial(3, 5)


def test_kunneth_convolution():
    assert co.kunneth([1, 1, 1, 1], [1, 2, 3, 4]) == [1, 3, 6, 10]


def test_resolution_is_exact():
    res = co.minimal_resolution(group_algebra(parse_spec("Heis3:p=2,r=1"), 1), None, 4)
    assert co.resolution_problems(res) == []
    assert res.betti[:2] == (1, 2)  # two generators of the augmentation ideal


def test_growth_degree():
    assert co.growth_degree(list(range(1, 10))).degree == 1
    assert co.growth_degree([1] * 9).degree == 0
    assert co.growth_degree([1, 3, 6, 10, 15, 21, 28, 36, 45]).degree == 2


def test_resolution_length_guard():
    with pytest.raises(la.DimensionGuard):
        co.minimal_resolution(co.truncated_line(2), None, 40)


@pytest.mark.parametrize("p", [2, 3])
def test_restriction_to_o_ranks_follow_kunneth(p):
    od = o_subalgebra(ga(p))
    mats = co.restriction_on_cohomology(od.i_O, 4)
    F = od.algebra.F
    # k[x]/x^{p^2} -> k[x^p]/x^{p^2} is zero in odd degrees and nonzero in even degrees; the u factor is the identity
    assert [la.rank(m, F) for m in mats] == [n // 2 + 1 for n in range(5)]


def test_restriction_to_o_frozen_matrices():
    od = o_subalgebra(ga(2))
    mats = co.restriction_on_cohomology(od.i_O, 2)
    assert [m.tolist() for m in mats] == [[[1]], [[1, 0], [0, 0]], [[1, 0, 0], [0, 0, 0], [0, 0, 1]]]


@pytest.mark.parametrize("p", [2, 3])
def test_restriction_kernel_is_nilpotent(p):
    rep = co.kernel_nilpotency(o_subalgebra(ga(p)).i_O, 2, 4)
    assert rep.kernel_dims == {1: 1, 2: 1}
    assert rep.nilpotent_up_to_bound


def test_yoneda_products_on_a_truncated_line():
    res2 = co.minimal_resolution(co.truncated_line(2), None, 6)
    y = co.class_basis(res2, 1)[0]
    assert not co.power(y, 5).is_zero()  # polynomial on a degree-one class at p = 2
    res3 = co.minimal_resolution(co.truncated_line(3), None, 6)
    y1, z = co.class_basis(res3, 1)[0], co.class_basis(res3, 2)[0]
    assert co.yoneda_product(y1, y1).is_zero()  # exterior in odd degree
    assert not co.power(z, 3).is_zero()
    assert not co.yoneda_product(y1, z).is_zero()


def test_pullback_along_identity_and_zero():
    a = co.truncated_line(3)
    res = co.minimal_resolution(a, None, 2)
    z = co.class_basis(res, 2)[0]
    K = field(3)
    t = a.basis(1)
    assert co.pullback_class(z, t, K) != 0
    assert co.pullback_class(z, np.zeros(3, dtype=np.int64), K) == 0
    # rescaling t scales a degree-two class by the p-th power of the scalar
    assert co.pullback_class(z, K.mul(2, t), K) == K.mul(co.pullback_class(z, t, K), K.power(2, 3))


def test_carlson_module_dimension_and_zero_class():
    g = ga(2)
    res = co.minimal_resolution(extended_double(g).dense_realization(), None, 2)
    assert res.betti[2] == 3
    omega_dim = res.syzygy(2).dim
    for zeta in co.all_nonzero_classes(res, 2):
        assert co.carlson_module(zeta).dim == omega_dim - 1
    zero = co.CohomologyClass(res, 2, np.zeros(3, dtype=np.int64))
    with pytest.raises(co.CohomologyError):
        co.carlson_module(zero)
    assert co.carlson_module(zero, allow_zero=True).dim == omega_dim + res.syzygy(1).dim


def test_odd_classes_rejected_for_carlson_modules_at_odd_primes():
    res = co.minimal_resolution(co.truncated_line(3), None, 2)
    with pytest.raises(co.CohomologyError):
        co.carlson_module(co.class_basis(res, 1)[0])


def test_restriction_along_identity_is_identity():
    a = group_algebra(parse_spec("Ga:n=2,p=2,r=1"), 1)
    for m in co.restriction_on_cohomology(identity_morphism(a), 3):
        assert np.array_equal(m, la.identity(m.shape[0]))


def test_inflation_along_q_is_injective_in_degree_one():
    q = quotient_to_double(ga(2))
    # restriction maps H^n(target) -> H^n(source); q : D~ -> D, so this is H^1(D) -> H^1(D~)
    m1 = co.restriction_on_cohomology(co.dense_morphism(q), 1)[1]
    assert la.rank(m1, field(2)) == m1.shape[1] == 2
