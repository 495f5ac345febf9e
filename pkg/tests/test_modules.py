import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hopfsupport import linalg as la
from hopfsupport.algebra import AxiomError
from hopfsupport.battery import (coordinate_module, dtilde_battery, inflate, inflated_witnesses, o_battery,
                                 restricted_to_coordinates_is_free)
from hopfsupport.field import field
from hopfsupport.kernels import extended_double, group_algebra, o_subalgebra, parse_spec
from hopfsupport.modules import (ModuleError, direct_sum, dual, hom_space, is_isomorphic, is_projective_local,
                                 module_from_generators, quotient, regular_module, restrict_along, split_free,
                                 stably_isomorphic, submodule_span, tensor, to_dense, top_dimension,
                                 trivial_module)

GA2 = parse_spec("Ga:n=1,p=2,r=1")
GA3 = parse_spec("Ga:n=1,p=3,r=1")


def test_battery_shape():
    bat = dtilde_battery(GA2)
    assert len(bat) >= 8
    assert all(m.dim <= 8 for m in bat)
    assert len({m.name for m in bat}) == len(bat)


def test_battery_p3_contains_small_and_free_modules():
    bat = dtilde_battery(GA3)
    assert len(bat) >= 8
    assert sum(is_projective_local(m) for m in bat) >= 1
    assert sum(m.dim <= 8 for m in bat) >= 8


@pytest.mark.parametrize("g", [GA2, GA3])
def test_tensor_with_trivial_is_identity(g):
    dt = extended_double(g)
    k = trivial_module(dt)
    for m in dtilde_battery(g)[:6]:
        assert is_isomorphic(tensor(m, k), m)
        assert is_isomorphic(tensor(k, m), m)


def test_tensor_dimension_and_projective_ideal():
    bat = dtilde_battery(GA2)
    reg = bat[1]
    for m in bat[:5]:
        t = tensor(m, reg)
        assert t.dim == m.dim * reg.dim
        assert is_projective_local(t)


def test_direct_sum_projectivity_and_top():
    bat = dtilde_battery(GA2)
    for m in bat[:4]:
        for n in bat[:4]:
            s = direct_sum(m, n)
            assert is_projective_local(s) == (is_projective_local(m) and is_projective_local(n))
            assert top_dimension(s) == top_dimension(m) + top_dimension(n)


def test_trivial_not_projective_regular_is():
    dt = extended_double(GA3)
    assert not is_projective_local(trivial_module(dt))
    assert is_projective_local(regular_module(dt))


def test_restriction_of_regular_to_o_is_free():
    od = o_subalgebra(GA3)
    res = restrict_along(od.i_O, regular_module(extended_double(GA3)))
    assert is_projective_local(res)
    assert top_dimension(res) == extended_double(GA3).dim // od.algebra.dim


def test_o_battery_lives_over_o():
    od = o_subalgebra(GA2)
    assert all(m.algebra is od.algebra for m in o_battery(GA2))


def test_dual_twice_is_isomorphic():
    h = group_algebra(parse_spec("Heis3:p=2,r=1"), 1)
    reg = regular_module(h)
    sub = submodule_span(reg, h.augmentation_ideal_basis()[:, :2])
    m = quotient(reg, sub)
    assert is_isomorphic(dual(dual(m)), m)


def test_split_free_recovers_core():
    h = group_algebra(GA3, 1)
    k = trivial_module(h)
    m = direct_sum(direct_sum(regular_module(h), k), regular_module(h))
    core, rank = split_free(m)
    assert rank == 2 and is_isomorphic(core, k)
    assert stably_isomorphic(m, k)


def test_inconsistent_generators_rejected():
    h = group_algebra(GA3, 1)
    with pytest.raises(AxiomError):
        module_from_generators(h, [la.identity(2)])  # the generator must be nilpotent


def test_duals_need_dense_algebra():
    with pytest.raises(ModuleError):
        dual(trivial_module(extended_double(GA2)))


def test_lazy_and_dense_modules_agree():
    dt = extended_double(GA2)
    for m in dtilde_battery(GA2)[:5]:
        d = to_dense(m)
        rng = np.random.default_rng(0)
        for _ in range(5):
            x = dt.F.random(rng, dt.dim)
            assert np.array_equal(m.act(x), d.act(x))


def test_coordinate_module_is_a_module_and_not_free():
    g = parse_spec("Heis3:p=2,r=1")
    m = coordinate_module(g)
    assert m.dim == 8
    assert not is_projective_local(m)


def test_inflated_witnesses_have_trivial_coordinate_action():
    for m in inflated_witnesses(GA3):
        assert not restricted_to_coordinates_is_free(m)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_hom_from_regular_is_the_module(p, seed, k):
    """Hom_A(A, M) = M for cyclic quotients M of a group algebra."""
    h = group_algebra(parse_spec(f"Ga:n=1,p={p},r=2"), 2)
    reg = regular_module(h)
    rng = np.random.default_rng(seed)
    vecs = np.stack([field(p).random(rng, h.dim) for _ in range(k)], axis=1)
    m = quotient(reg, submodule_span(reg, vecs))
    assert len(hom_space(reg, m)) == m.dim


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_inflation_of_cyclic_quotients_is_valid(seed):
    h = group_algebra(GA3, 1)
    reg = regular_module(h)
    rng = np.random.default_rng(seed)
    m = quotient(reg, submodule_span(reg, field(3).random(rng, (h.dim, 1))))
    infl = inflate(GA3, m)
    assert infl.dim == m.dim
    assert is_projective_local(infl) == (m.dim == 0)
