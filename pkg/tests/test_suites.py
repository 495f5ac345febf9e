import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hopfsupport import linalg as la
from hopfsupport.field import field
from hopfsupport.suites import (DEFAULT_CASES, SUITES, SuiteReport, betti_oracle, commuting_triple,
                                dense_realizable_cases, run_all, run_suite, suite_fp1, suite_lazy_dense)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.sampled_from([1, 2]), st.integers(0, 2**32 - 1))
def test_freeness_unchanged_by_commuting_correction(p, r, seed):
    """alpha is free over k[t]/t^p exactly when alpha + beta gamma is."""
    F = field(p)
    a, b, c = commuting_triple(np.random.default_rng(seed), p, r)
    assert a.shape[0] <= 12
    for x, y in ((a, b), (a, c), (b, c)):
        assert np.array_equal(F.matmul(x, y), F.matmul(y, x))
    assert not la.matpow(a, p, F).any() and not la.matpow(b, p, F).any() and not la.matpow(c, p**r, F).any()
    assert la.is_free_over_truncated_line(a, p, F) == \
        la.is_free_over_truncated_line(F.add(a, F.matmul(b, c)), p, F)


def test_fp1_small_run_passes_and_sees_both_verdicts():
    rep = suite_fp1(3, 2, trials=200)
    assert rep.passed and rep.trials == 202
    assert 0 < rep.details["free_alpha_trials"] < rep.trials


def test_report_json_shape():
    rep = SuiteReport("x", "y", 1)
    rep.fail(reason="demo")
    d = json.loads(json.dumps(rep.to_json()))
    assert d["pass"] is False and d["counterexamples"] == [{"reason": "demo"}]
    assert set(d) == {"suite", "case", "seed", "trials", "pass", "counterexamples", "details", "elapsed_ms"}


def test_counterexamples_are_capped():
    rep = SuiteReport("x", "y", 1)
    for i in range(50):
        rep.fail(i=i)
    assert len(rep.counterexamples) == 20 and rep.details["truncated_counterexamples"] == 30


def test_registry_is_complete():
    assert set(SUITES) == set(DEFAULT_CASES)
    with pytest.raises(KeyError):
        run_suite("missing")


def test_betti_oracle_values():
    assert betti_oracle("product", 2, 3) == [1, 2, 3, 4]
    assert betti_oracle("line", 3, 3) == [1, 1, 1, 1]


def test_dense_realizable_cases_respect_the_guard():
    cases = dense_realizable_cases()
    assert {"case": "Ga:n=1,p=2,r=1", "which": "D~"} in cases
    assert {"case": "Heis3:p=3,r=1", "which": "D"} in cases
    assert {"case": "Heis3:p=3,r=1", "which": "D~"} not in cases
    assert len(cases) == 65


def test_lazy_dense_small():
    rep = suite_lazy_dense("Heis3:p=2,r=1", "D~", pairs=20)
    assert rep.passed and rep.trials == 20


def test_run_all_is_deterministic_across_workers():
    one = run_all(["betti"], workers=1)
    two = run_all(["betti"], workers=2)
    strip = [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in one]
    assert strip == [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in two]
    assert all(r["pass"] for r in one)


@pytest.mark.parametrize("name,params", [
    ("coproduct_invariance", {"case": "Ga:n=1,p=2,r=1", "e": 1}),
    ("projectivity_detection", {"case": "Ga:n=1,p=3,r=1", "e": 1}),
    ("module_classes", {"case": "Heis3:p=2,r=1"}),
    ("carlson", {"case": "Ga:n=1,p=2,r=1", "e": 1}),
])
def test_quick_suite_cases_pass(name, params):
    assert run_suite(name, **params).passed
