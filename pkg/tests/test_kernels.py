import numpy as np
import pytest

from hopfsupport import linalg as la
from hopfsupport.kernels import (CatalogError, GroupSchemeSpec, check_frobenius_factorization, coordinate_algebra,
                                 double, extended_double, group_algebra, group_coproduct_on_o, nu_isomorphism,
                                 o_freeness_basis, o_subalgebra, parse_spec, quasilogarithm, quotient_to_double,
                                 twisted_subalgebra)
from hopfsupport.suites import o_coproducts_coincide

# (dim k[G_(r)], dim kG_(r), dim D, dim D~, dim O) from p^{height * dim g}
FROZEN_DIMS = {
    "Ga:n=1,p=2,r=1": (2, 2, 4, 8, 4),
    "Ga:n=1,p=3,r=2": (9, 9, 81, 243, 27),
    "Ga:n=2,p=2,r=1": (4, 4, 16, 64, 16),
    "Heis3:p=2,r=1": (8, 8, 64, 512, 64),
    "Heis3:p=3,r=1": (27, 27, 729, 19683, 729),
    "Gm:p=5,r=1": (5, 5, 25, 125, 25),
}


@pytest.mark.parametrize("ident", sorted(FROZEN_DIMS))
def test_catalog_dimensions(ident):
    g = parse_spec(ident)
    got = (coordinate_algebra(g, g.r).dim, group_algebra(g, g.r).dim, double(g).dim, extended_double(g).dim,
           o_subalgebra(g).algebra.dim)
    assert got == FROZEN_DIMS[ident]


@pytest.mark.parametrize("text", ["Ga:p=2", "Ga:n=4,p=2", "Heis3:n=1,p=3", "Ga:p=11", "Sp4:p=2", "Ga:p=2,p=3",
                                  "Ga p=2"])
def test_malformed_ids_rejected(text):
    with pytest.raises(CatalogError):
        parse_spec(text) if text != "Ga:p=2" else GroupSchemeSpec("Ga", 2, r=0)


def test_ident_round_trip():
    for ident in FROZEN_DIMS:
        assert parse_spec(ident).ident == ident


@pytest.mark.parametrize("ident", ["Ga:n=1,p=2,r=1", "Ga:n=1,p=2,r=2", "Ga:n=1,p=3,r=1", "Ga:n=1,p=3,r=2",
                                   "Heis3:p=3,r=1"])
def test_nu_is_a_bijective_algebra_map(ident):
    g = parse_spec(ident)
    nd = nu_isomorphism(g)
    assert nd.nu.is_injective() and nd.nu.is_surjective()
    assert nd.nu.check() == []


@pytest.mark.parametrize("ident", ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=2", "Heis3:p=2,r=1", "Heis3:p=3,r=1",
                                   "Gm:p=3,r=1"])
def test_dtilde_free_over_o_with_monomial_section(ident):
    fd = o_freeness_basis(parse_spec(ident))
    assert fd.ok and fd.rank == fd.dim


@pytest.mark.parametrize("ident", ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=2", "Heis3:p=2,r=1", "Heis3:p=3,r=1"])
def test_frobenius_factorization(ident):
    g = parse_spec(ident)
    assert check_frobenius_factorization(g, g.r) == []


@pytest.mark.parametrize("ident", ["Ga:n=1,p=2,r=1", "Heis3:p=2,r=1", "Gm:p=3,r=1"])
def test_quotient_to_double_is_surjective_algebra_map(ident):
    q = quotient_to_double(parse_spec(ident))
    assert q.is_surjective()
    assert q.check() == []


def test_top_twist_is_o():
    g = parse_spec("Heis3:p=2,r=1")
    top = twisted_subalgebra(g, 1, 1).algebra.dense_realization()
    assert top.mult.equals(o_subalgebra(g).algebra.mult)


def test_o_embedding_is_an_algebra_map():
    od = o_subalgebra(parse_spec("Heis3:p=3,r=1"))
    assert od.i_O.is_injective()
    assert od.i_O.check() == []


def test_quasilog_bijective_for_heisenberg_p3():
    ql = quasilogarithm(parse_spec("Heis3:p=3,r=1"))
    assert ql.morphism.is_injective() and ql.morphism.is_surjective()
    assert ql.morphism.check() == []
    # the identity goes to the origin: no constant terms in the pulled-back coordinates
    assert all(not np.any(np.all(poly.exps == 0, axis=1) & (poly.coeffs % 3 != 0)) for poly in ql.polys)


def test_quasilog_rejected_at_p2_heisenberg_and_gm():
    for ident in ("Heis3:p=2,r=1", "Gm:p=3,r=1"):
        with pytest.raises(CatalogError):
            quasilogarithm(parse_spec(ident))


def test_o_coproducts_agree_for_vector_groups_only():
    assert o_coproducts_coincide(parse_spec("Ga:n=1,p=3,r=1"))
    assert o_coproducts_coincide(parse_spec("Ga:n=2,p=2,r=1"))
    assert not o_coproducts_coincide(parse_spec("Heis3:p=3,r=1"))


def test_group_coproduct_on_o_is_counital():
    g = parse_spec("Heis3:p=2,r=1")
    hd = group_coproduct_on_o(g)
    n = o_subalgebra(g).algebra.dim
    delta = hd.delta_dense(n)  # (source, left, right)
    left = np.einsum("ijk,j->ik", delta, hd.counit) % 2
    right = np.einsum("ijk,k->ij", delta, hd.counit) % 2
    assert np.array_equal(left, la.identity(n)) and np.array_equal(right, la.identity(n))


def test_multiplicative_group_doubles_are_commutative():
    dt = extended_double(parse_spec("Gm:p=3,r=1"))
    assert dt.is_trivial_action
    assert dt.dense_realization().is_commutative()
