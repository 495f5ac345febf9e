import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hopfsupport import linalg as la
from hopfsupport.battery import dtilde_battery, inflate, monomial_quotient
from hopfsupport.kernels import extended_double, group_algebra, parse_spec
from hopfsupport.modules import direct_sum, regular_module, tensor, trivial_module
from hopfsupport.pipoints import (Family, FamilyError, PiPointPair, families, flat_points, max_jordan_type, pullback,
                                  support)

GA2 = parse_spec("Ga:n=1,p=2,r=1")
GA3 = parse_spec("Ga:n=1,p=3,r=1")
BATTERY = {2: dtilde_battery(GA2), 3: dtilde_battery(GA3)}


def test_family_sizes_and_normalization():
    fam = Family(GA2)
    assert fam.coordinates == ("x^2", "d[x]")
    assert fam.points() == [(0, 1), (1, 0), (1, 1)]
    assert Family(GA2, 2).size == 5
    assert Family(GA3, 2).size == 10
    for pt in Family(GA3, 2).points():
        assert pt[next(i for i, c in enumerate(pt) if c)] == 1


def test_family_rules():
    with pytest.raises(FamilyError):
        Family(parse_spec("Heis3:p=3,r=1"))
    with pytest.raises(FamilyError):
        Family(parse_spec("Gm:p=3,r=1"), legs="beta")
    with pytest.raises(FamilyError):
        Family(GA2, 3)
    with pytest.raises(FamilyError):
        PiPointPair(Family(GA2), (0,), (0,))
    assert [f.subgroup for f in families(parse_spec("Heis3:p=3,r=1"))] == ["a", "b", "c"]
    assert families(parse_spec("Gm:p=3,r=1"))[0].legs == "alpha"


@pytest.mark.parametrize("p", [2, 3])
def test_pullbacks_are_p_nilpotent(p):
    fam = Family(GA2 if p == 2 else GA3, 2)
    for m in BATTERY[p]:
        for pt in flat_points(fam):
            t = pullback(m, PiPointPair.from_point(fam, pt))
            assert not np.any(la.matpow(t, p, fam.K))


@pytest.mark.parametrize("g", [GA2, GA3])
def test_trivial_and_regular_supports(g):
    dt = extended_double(g)
    fam = Family(g)
    assert support(trivial_module(dt), fam).as_set == frozenset(flat_points(fam))
    assert support(regular_module(dt), fam).is_empty()


def test_inflated_group_algebra_support_is_beta_zero_point():
    m = inflate(GA2, regular_module(group_algebra(GA2, 1)))
    assert support(m, Family(GA2)).points == ((1, 0),)


def test_max_jordan_type_of_monomial_quotient():
    rep = max_jordan_type(monomial_quotient(GA2, 2, 2), Family(GA2))
    assert rep.top == (2, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_support_stable_under_field_extension(p):
    g = GA2 if p == 2 else GA3
    small, big = Family(g, 1), Family(g, 2)
    for m in BATTERY[p]:
        s1 = support(m, small).as_set
        s2 = support(m, big).as_set
        assert s1 == {pt for pt in s2 if all(c < p for c in pt)}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_support_of_direct_sum_is_union(p, data):
    bat = BATTERY[p]
    m = data.draw(st.sampled_from(bat))
    n = data.draw(st.sampled_from(bat))
    fam = Family(GA2 if p == 2 else GA3, data.draw(st.sampled_from([1, 2])))
    assert support(direct_sum(m, n), fam).as_set == support(m, fam).as_set | support(n, fam).as_set


@pytest.mark.parametrize("i,j", list(itertools.combinations(range(6), 2)))
def test_support_of_tensor_is_intersection(i, j):
    bat = BATTERY[2]
    fam = Family(GA2, 2)
    m, n = bat[i], bat[j]
    assert support(tensor(m, n), fam).as_set == support(m, fam).as_set & support(n, fam).as_set


def test_heisenberg_families_cover_alpha_and_beta():
    g = parse_spec("Heis3:p=2,r=1")
    fams = families(g)
    assert all(f.n_alpha == 3 and len(f.beta_slots) == 1 for f in fams)
    k = trivial_module(extended_double(g))
    for f in fams:
        assert support(k, f).as_set == frozenset(flat_points(f))


def test_parallel_verdicts_match_serial():
    fam = Family(GA3, 2)
    m = BATTERY[3][4]
    assert support(m, fam, workers=2).as_set == support(m, fam, workers=1).as_set
