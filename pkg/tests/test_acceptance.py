"""The eight acceptance criteria; each records one PASS/FAIL line for the terminal summary."""

import time

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE
from hopfsupport import linalg as la
from hopfsupport.battery import dtilde_battery
from hopfsupport.field import field
from hopfsupport.kernels import parse_spec
from hopfsupport.suites import (dense_realizable_cases, suite_betti, suite_carlson, suite_coproduct_invariance,
                                suite_fp1, suite_lazy_dense, suite_module_classes, suite_projectivity_detection,
                                suite_structure_maps, suite_tensor_property)

FP1_BUDGET_S = 60.0
JORDAN_SAMPLES = 500
LAZY_PAIRS = 1000
GA_CASES = [(f"Ga:n=1,p={p},r=1", e) for p in (2, 3) for e in (1, 2)]


def record(num, reports, extra=""):
    failed = [f"{r.suite}[{r.case}]" for r in reports if not r.passed]
    trials = sum(r.trials for r in reports)
    ok = not failed
    line = f"{len(reports)} cases, {trials} checks" + (f", {extra}" if extra else "")
    if failed:
        line += f"; failing: {', '.join(failed)}"
    ACCEPTANCE[num] = (ok, line)
    return ok, failed


def test_criterion_1_commuting_correction_fuzz():
    start = time.perf_counter()
    reports = [suite_fp1(p, r, trials=1000, max_dim=12) for p in (2, 3, 5) for r in (1, 2)]
    elapsed = time.perf_counter() - start
    ok, failed = record(1, reports, f"{elapsed:.1f} s (budget {FP1_BUDGET_S:.0f} s)")
    if elapsed >= FP1_BUDGET_S:
        ACCEPTANCE[1] = (False, ACCEPTANCE[1][1] + "; over budget")
    assert not failed
    assert elapsed < FP1_BUDGET_S


def test_criterion_2_tensor_product_property():
    for p in (2, 3):
        bat = dtilde_battery(parse_spec(f"Ga:n=1,p={p},r=1"))
        assert len(bat) >= 8 and sum(m.dim <= 8 for m in bat) >= 8
    reports = [suite_tensor_property(c, e) for c, e in GA_CASES]
    reports += [suite_coproduct_invariance(c, e) for c, e in GA_CASES]
    _, failed = record(2, reports, "both coproducts, F_p and F_p^2 points")
    assert not failed


def test_criterion_3_projectivity_detection():
    reports = [suite_projectivity_detection(c, e) for c, e in GA_CASES]
    _, failed = record(3, reports)
    assert not failed


def test_criterion_4_structure_maps():
    cases = [f"Ga:n=1,p={p},r={r}" for p in (2, 3) for r in (1, 2)] + ["Heis3:p=3,r=1"]
    reports = [suite_structure_maps(c) for c in cases]
    _, failed = record(4, reports, "nu, freeness, Frobenius factorization, quasilog")
    assert not failed
    assert reports[-1].details["quasilog"] == "bijective"


def test_criterion_5_betti_numbers():
    reports = [suite_betti(f"Ga:n=1,p={p},r=1", length=8) for p in (2, 3)]
    _, failed = record(5, reports, "through degree 8, linear growth")
    assert not failed
    assert all(r.details["growth"]["degree"] == 1 for r in reports)


def test_criterion_6_carlson_supports():
    reports = [suite_carlson("Ga:n=1,p=2,r=1", degree=2, e=e, check_split=True) for e in (1, 2)]
    _, failed = record(6, reports, "P^1(F_2) and P^1(F_4), restriction split")
    assert not failed


def test_criterion_7_module_classes():
    cases = ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=2,r=1", "Heis3:p=3,r=1"]
    reports = [suite_module_classes(c) for c in cases]
    _, failed = record(7, reports, "inflated and coordinate-projective witnesses")
    assert not failed


def _nilpotent_sample(rng, p):
    """Conjugated shift blocks of size <= p, or a random strictly triangular matrix of size <= p."""
    F = field(p)
    if rng.random() < 0.8:
        n = int(rng.integers(1, 13))
        sizes = []
        while sum(sizes) < n:
            sizes.append(int(rng.integers(1, min(p, n - sum(sizes)) + 1)))
        m = np.zeros((n, n), dtype=np.int64)
        pos = 0
        for s in sizes:
            for i in range(s - 1):
                m[pos + i + 1, pos + i] = int(rng.integers(1, p))
            pos += s
    else:
        n = int(rng.integers(1, p + 1))
        m = np.tril(F.random(rng, (n, n)), -1)
    while True:
        g = F.random(rng, (n, n))
        if la.rank(g, F) == n:
            return F.matmul(F.matmul(g, m), la.inverse(g, F))


def test_criterion_8_oracle_equivalence():
    rng = np.random.default_rng(8)
    mismatches = 0
    for p in (2, 3, 5):
        for _ in range(JORDAN_SAMPLES):
            mat = _nilpotent_sample(rng, p)
            if la.jordan_type(mat, p, field(p)) != oracles.jordan_type_oracle(mat.tolist(), p):
                mismatches += 1
    reports = [suite_lazy_dense(pairs=LAZY_PAIRS, **c) for c in dense_realizable_cases()]
    ok, failed = record(8, reports, f"{3 * JORDAN_SAMPLES} Jordan samples, {mismatches} mismatches")
    if mismatches:
        ACCEPTANCE[8] = (False, ACCEPTANCE[8][1])
    assert mismatches == 0
    assert not failed


@pytest.fixture(autouse=True, scope="module")
def _require_all_recorded():
    yield
    missing = set(range(1, 9)) - set(ACCEPTANCE)
    for num in missing:
        ACCEPTANCE[num] = (False, "did not complete")
