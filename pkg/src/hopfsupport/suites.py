"""Named verification suites with machine-readable reports.

Every suite is deterministic given its seed and emits
``{suite, case, seed, trials, pass, counterexamples, elapsed_ms, details}``.
Counterexamples carry enough data (matrices, module actions, points) to be
replayed without rerunning the suite.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import cohomology as co
from . import linalg as la
from .battery import (coordinate_projective_witnesses, dtilde_battery, inflated_witnesses, o_battery,
                      restricted_to_coordinates_is_free)
from .field import MAX_DIM, PRIMES, field
from .kernels import (CatalogError, GroupSchemeSpec, catalog_checks, check_frobenius_factorization,
                      coordinate_algebra, double, extended_double, group_coproduct_on_o, nu_isomorphism,
                      o_freeness_basis, o_subalgebra, parse_spec, quasilog_eligible, quasilogarithm, quotient_to_double,
                      twisted_subalgebra)
from .modules import FDModule, is_projective_local, restrict_along, tensor
from .pipoints import (Family, PiPointPair, combined_element, coordinate_actions, families, flat_points,
                       free_verdicts, support)
from .smash import LazySmash

DEFAULT_SEED = 20240601
MAX_TENSOR_ENTRIES = 2**24
MAX_COUNTEREXAMPLES = 20


@dataclass
class SuiteReport:
    suite: str
    case: str
    seed: int
    trials: int = 0
    counterexamples: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, **info):
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(info)
        else:
            self.details["truncated_counterexamples"] = self.details.get("truncated_counterexamples", 0) + 1

    def to_json(self) -> dict:
        return {"suite": self.suite, "case": self.case, "seed": self.seed, "trials": self.trials,
                "pass": self.passed, "counterexamples": self.counterexamples, "details": self.details,
                "elapsed_ms": round(self.elapsed_ms, 3)}


class _Timer:
    def __init__(self, report: SuiteReport):
        self.report = report

    def __enter__(self):
        self.start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed_ms = (time.perf_counter() - self.start) * 1000
        return False


def _spec(case) -> GroupSchemeSpec:
    return case if isinstance(case, GroupSchemeSpec) else parse_spec(case)


def _pts(points) -> list:
    return [list(pt) for pt in sorted(points)]


def _module_dump(m: FDModule) -> dict:
    return {"name": m.name, "dim": m.dim, "generators": [g.tolist() for g in m.generator_actions]}


# -- commuting triples ---------------------------------------------------------------------

def _shift(n: int) -> np.ndarray:
    return np.eye(n, k=-1, dtype=np.int64)


def _block_operators(shape: tuple[int, int, int], p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    i, j, l = shape
    F = field(p)
    X = la.kron(la.kron(_shift(i), la.identity(j), F), la.identity(l), F)
    Y = la.kron(la.kron(la.identity(i), _shift(j), F), la.identity(l), F)
    Z = la.kron(la.kron(la.identity(i), la.identity(j), F), _shift(l), F)
    return X, Y, Z


def _random_polynomial(rng, ops, p: int, density: float) -> np.ndarray:
    """Random combination of monomials X^a Y^b W^c without constant term."""
    F = field(p)
    X, Y, W = ops
    n = X.shape[0]
    out = la.zeros(n)
    for a, b, c in itertools.product(range(3), repeat=3):
        if (a, b, c) == (0, 0, 0) or rng.random() > density:
            continue
        coeff = int(rng.integers(1, p))
        mono = F.matmul(F.matmul(la.matpow(X, a, F), la.matpow(Y, b, F)), la.matpow(W, c, F))
        out = F.add(out, F.mul(coeff, mono))
    return out


def _block_shapes(rng, p: int, r: int, max_dim: int) -> list[tuple[int, int, int]]:
    shapes, budget = [], max_dim
    for _ in range(int(rng.integers(1, 3))):
        for _attempt in range(50):
            s = (int(rng.integers(1, p + 1)), int(rng.integers(1, p + 1)), int(rng.integers(1, p**r + 1)))
            if s[0] * s[1] * s[2] <= budget:
                shapes.append(s)
                budget -= s[0] * s[1] * s[2]
                break
    return shapes or [(1, 1, 1)]


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = la.zeros(n)
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at:at + k, at:at + k] = m
        at += k
    return out


def _random_invertible(rng, n: int, p: int) -> np.ndarray:
    F = field(p)
    while True:
        m = F.random(rng, (n, n))
        if la.rank(m, F) == n:
            return m


def commuting_triple(rng: np.random.Generator, p: int, r: int, max_dim: int = 12):
    """alpha, beta p-nilpotent and gamma p^r-nilpotent, pairwise commuting.

    Built blockwise as polynomials in commuting shifts X, Y, Z on
    k[X]/X^i (x) k[Y]/Y^j (x) k[Z]/Z^l (i, j <= p, l <= p^r), then conjugated
    by a random invertible matrix.
    """
    F = field(p)
    q = p ** (r - 1)
    density = float(rng.choice([0.15, 0.35, 0.7]))
    alphas, betas, gammas = [], [], []
    for shape in _block_shapes(rng, p, r, max_dim):
        X, Y, Z = _block_operators(shape, p)
        Zq = la.matpow(Z, q, F)
        alphas.append(_random_polynomial(rng, (X, Y, Zq), p, density))
        betas.append(_random_polynomial(rng, (X, Y, Zq), p, density))
        gammas.append(_random_polynomial(rng, (X, Y, Z), p, density))
    a, b, c = _block_diag(alphas), _block_diag(betas), _block_diag(gammas)
    P = _random_invertible(rng, a.shape[0], p)
    Pi = la.inverse(P, F)
    conj = [F.matmul(F.matmul(P, m), Pi) for m in (a, b, c)]
    return tuple(conj)


def _triple_problems(a, b, c, p: int, r: int) -> list[str]:
    F = field(p)
    out = []
    for nm, x, y in (("ab", a, b), ("ac", a, c), ("bc", b, c)):
        if not np.array_equal(F.matmul(x, y), F.matmul(y, x)):
            out.append(f"{nm} do not commute")
    for nm, x, k in (("alpha", a, p), ("beta", b, p), ("gamma", c, p**r)):
        if la.matpow(x, k, F).any():
            out.append(f"{nm} not nilpotent of the required order")
    return out


def suite_fp1(p: int, r: int = 1, trials: int = 1000, seed: int = DEFAULT_SEED, max_dim: int = 12) -> SuiteReport:
    """alpha free over k[t]/t^p iff alpha + beta gamma is, on random commuting triples."""
    rep = SuiteReport("fp1", f"p={p},r={r}", seed)
    F = field(p)
    rng = np.random.default_rng([seed, p, r])
    with _Timer(rep):
        # fixed sanity triples: two shift blocks, and beta*gamma = 0
        two = _block_diag([_shift(p), _shift(p)])
        fixed = [(two, la.zeros(2 * p), la.zeros(2 * p)),
                 (la.zeros(p), _shift(p), la.matpow(_shift(p), p - 1, F))]
        free_count = 0
        for idx in range(trials + len(fixed)):
            a, b, c = fixed[idx] if idx < len(fixed) else commuting_triple(rng, p, r, max_dim)
            bad = _triple_problems(a, b, c, p, r)
            lhs = la.is_free_over_truncated_line(a, p, F)
            rhs = la.is_free_over_truncated_line(F.add(a, F.matmul(b, c)), p, F)
            free_count += lhs
            rep.trials += 1
            if bad or lhs != rhs:
                rep.fail(trial=idx, problems=bad, alpha_free=lhs, shifted_free=rhs,
                         alpha=a.tolist(), beta=b.tolist(), gamma=c.tolist())
        rep.details = {"free_alpha_trials": free_count, "max_dim": max_dim}
    return rep


# -- tensor products and coproducts ----------------------------------------------------------

def _tensor_entries(a, d: int) -> int:
    n = a.b.dim + a.h.dim if isinstance(a, LazySmash) else a.dim
    return n * d * d


def _pairs(mods: list[FDModule]):
    return [(i, j) for i in range(len(mods)) for j in range(i, len(mods))]


def _case_families(g: GroupSchemeSpec, e: int, where: str) -> list[Family]:
    if g.kind == "Heis3" and where == "O-coproducts":
        return [Family(g, e, None, "alpha")]
    return families(g, e)


def suite_coproduct_invariance(case, e: int = 1, seed: int = DEFAULT_SEED) -> SuiteReport:
    """The two coproducts on O give the same freeness verdict at every flat point."""
    g = _spec(case)
    rep = SuiteReport("coproduct_invariance", f"{g.ident}|e={e}", seed)
    with _Timer(rep):
        mods = o_battery(g)
        fams = _case_families(g, e, "O-coproducts")
        skipped = []
        for i, j in _pairs(mods):
            m1, m2 = mods[i], mods[j]
            if _tensor_entries(m1.algebra, m1.dim * m2.dim) > MAX_TENSOR_ENTRIES:
                skipped.append([m1.name, m2.name])
                continue
            th, tg = tensor(m1, m2, "hopf"), tensor(m1, m2, "group")
            for fam in fams:
                vh, vg = free_verdicts(th, fam), free_verdicts(tg, fam)
                rep.trials += len(vh)
                diff = [pt for pt in vh if vh[pt] != vg[pt]]
                if diff:
                    rep.fail(pair=[m1.name, m2.name], family=fam.ident, points=_pts(diff))
        rep.details = {"battery": [m.name for m in mods], "families": [f.ident for f in fams],
                       "skipped_pairs": skipped, "coproducts_coincide": o_coproducts_coincide(g)}
    return rep


def suite_tensor_property(case, e: int = 1, seed: int = DEFAULT_SEED) -> SuiteReport:
    """support(M (x) M') = support(M) & support(M'), over D~ and over O with both coproducts."""
    g = _spec(case)
    rep = SuiteReport("tensor_property", f"{g.ident}|e={e}", seed)
    with _Timer(rep):
        dmods = dtilde_battery(g)
        od = o_subalgebra(g)
        fams = families(g, e)
        sup = {(i, f.ident): support(m, f).as_set for i, m in enumerate(dmods) for f in fams}
        skipped = []
        omods = [restrict_along(od.i_O, m, f"res({m.name})") for m in dmods]
        for i, m in enumerate(omods):
            for f in fams:
                rep.trials += 1
                direct = support(m, f).as_set
                if direct != sup[(i, f.ident)]:
                    rep.fail(check="restriction to O", module=m.name, family=f.ident,
                             over_dtilde=_pts(sup[(i, f.ident)]), over_o=_pts(direct))
        for i, j in _pairs(dmods):
            m1, m2 = dmods[i], dmods[j]
            d = m1.dim * m2.dim
            variants = []
            if _tensor_entries(m1.algebra, d) <= MAX_TENSOR_ENTRIES:
                variants.append(("D~", tensor(m1, m2, "hopf")))
            if _tensor_entries(od.algebra, d) <= MAX_TENSOR_ENTRIES:
                variants.append(("O/hopf", tensor(omods[i], omods[j], "hopf")))
                variants.append(("O/group", tensor(omods[i], omods[j], "group")))
            if not variants:
                skipped.append([m1.name, m2.name])
            for label, t in variants:
                for f in fams:
                    rep.trials += 1
                    got = support(t, f).as_set
                    want = sup[(i, f.ident)] & sup[(j, f.ident)]
                    if got != want:
                        rep.fail(check=label, pair=[m1.name, m2.name], family=f.ident,
                                 tensor_support=_pts(got), intersection=_pts(want))
        rep.details = {"battery": [[m.name, m.dim] for m in dmods], "families": [f.ident for f in fams],
                       "skipped_pairs": skipped,
                       "supports": {f"{dmods[i].name}@{fid}": _pts(s) for (i, fid), s in sup.items()}}
    return rep


def suite_projectivity_detection(case, e: int = 1, seed: int = DEFAULT_SEED) -> SuiteReport:
    """A battery module is projective exactly when its support is empty."""
    g = _spec(case)
    rep = SuiteReport("projectivity_detection", f"{g.ident}|e={e}", seed)
    with _Timer(rep):
        fams = families(g, e)
        rows = []
        for label, mods in (("D~", dtilde_battery(g)), ("O", o_battery(g))):
            for m in mods:
                proj = is_projective_local(m)
                empty = all(support(m, f).is_empty() for f in fams)
                rep.trials += 1
                rows.append([label, m.name, proj, empty])
                if proj != empty:
                    rep.fail(algebra=label, module=_module_dump(m), projective=proj, empty_support=empty)
        rep.details = {"verdicts": rows, "families": [f.ident for f in fams]}
    return rep


# -- structure maps ------------------------------------------------------------------------

def _coproduct_matrix(hd, x, n: int, p: int) -> np.ndarray:
    """Delta(x) as an n x n coefficient matrix."""
    idx, val = hd.coproduct.idx, hd.coproduct.val
    out = np.zeros((n, n), dtype=np.int64)
    np.add.at(out, (idx[:, 1], idx[:, 2]), np.asarray(x, dtype=np.int64)[idx[:, 0]] * val)
    return out % p


def o_coproducts_coincide(g: GroupSchemeSpec) -> bool:
    """Whether the Hopf coproduct of O and the transported group coproduct agree on its generators."""
    o = o_subalgebra(g).algebra
    hd_g = group_coproduct_on_o(g)
    return all(np.array_equal(_coproduct_matrix(o.hopf, x, o.dim, g.p), _coproduct_matrix(hd_g, x, o.dim, g.p))
               for _, x in o.generators)


def _check_q(g: GroupSchemeSpec) -> list[str]:
    q = quotient_to_double(g)
    T, _ = q.kron_factors
    big, small = coordinate_algebra(g, g.r + 1), coordinate_algebra(g, g.r)
    p = g.p
    out = []
    if not q.is_surjective():
        out.append("q not surjective")
    out += [f"q {s}" for s in q.check()]
    if not np.array_equal(small.hopf.counit.dot(T) % p, big.hopf.counit % p):
        out.append("q does not preserve the counit")
    for nm, x in big.generators:
        lhs = T.dot(_coproduct_matrix(big.hopf, x, big.dim, p)).dot(T.T) % p
        rhs = _coproduct_matrix(small.hopf, T.dot(x) % p, small.dim, p)
        if not np.array_equal(lhs, rhs):
            out.append(f"q not comultiplicative on {nm}")
    return out


def _check_quasilog(g: GroupSchemeSpec) -> dict:
    if not quasilog_eligible(g):
        try:
            quasilogarithm(g)
        except CatalogError:
            return {"status": "rejected", "problems": []}
        return {"status": "accepted", "problems": ["ineligible case was not rejected"]}
    qd = quasilogarithm(g)
    R = coordinate_algebra(g, g.r).meta["ring"]
    k = R.nvars
    const = int(R.index(np.zeros((1, k), dtype=np.int64))[0])
    lin = R.index(np.eye(k, dtype=np.int64))
    problems = []
    if not (qd.morphism.is_injective() and qd.morphism.is_surjective()):
        problems.append("not bijective")
    problems += qd.morphism.check()
    vecs = np.stack([poly.vector() for poly in qd.polys]) % g.p
    if vecs[:, const].any():
        problems.append("L(e) != 0")
    if not np.array_equal(vecs[:, lin], np.eye(k, dtype=np.int64)):
        problems.append("differential at e is not the identity")
    return {"status": "bijective" if not problems else "failed", "problems": problems}


def suite_structure_maps(case, seed: int = DEFAULT_SEED) -> SuiteReport:
    """Constructor-level checks of q, i_O, freeness over O, nu, the Frobenius factorization and quasilog."""
    g = _spec(case)
    rep = SuiteReport("structure_maps", g.ident, seed)
    with _Timer(rep):
        checks: dict[str, list[str]] = {}
        checks["q"] = _check_q(g)
        od = o_subalgebra(g)
        checks["i_O"] = ([] if od.i_O.is_injective() else ["not injective"]) + od.i_O.check(seed)
        fr = o_freeness_basis(g)
        checks["freeness"] = [] if fr.ok else [f"rank {fr.rank} != dim {fr.dim}"]
        nd = nu_isomorphism(g)
        checks["nu"] = ([] if nd.nu.is_injective() and nd.nu.is_surjective() else ["not bijective"]) \
            + nd.nu.check(seed)
        checks["frobenius_factorization"] = check_frobenius_factorization(g, g.r)
        td = twisted_subalgebra(g, g.r, g.r)
        same = np.array_equal(td.coord_part.meta["embedding"], od.frob_part.meta["embedding"])
        checks["twist_s_equals_r"] = [] if same and td.algebra.dim == od.algebra.dim else ["differs from O"]
        ql = _check_quasilog(g)
        checks["quasilog"] = ql["problems"]
        for nm, probs in catalog_checks(g).items():
            checks[f"hopf {nm}"] = [s for s in probs if not s.startswith("skipped")]
        rep.trials = len(checks)
        for nm, probs in checks.items():
            if probs:
                rep.fail(check=nm, problems=probs)
        rep.details = {"quasilog": ql["status"], "o_coproducts_coincide": o_coproducts_coincide(g),
                       "dims": {"D~": extended_double(g).dim, "O": od.algebra.dim, "rank over O": fr.rank}}
    return rep


# -- module classes ------------------------------------------------------------------------

def suite_module_classes(case, e: int = 1, seed: int = DEFAULT_SEED) -> SuiteReport:
    """Inflated modules: support is the beta=0 locus joined with the beta-only support.
    Modules free over the coordinate algebra: support misses the beta=0 locus."""
    g = _spec(case)
    rep = SuiteReport("module_classes", f"{g.ident}|e={e}", seed)
    with _Timer(rep):
        fams = families(g, e)
        rows = []
        for m in inflated_witnesses(g):
            for f in fams:
                sup = support(m, f).as_set
                flat = flat_points(f)
                zero_locus = {pt for pt in flat if f.beta_zero(pt)}
                mats = coordinate_actions(m, f)[f.n_alpha:]
                beta_part = {pt for pt in flat if not f.beta_zero(pt)
                             and not la.is_free_over_truncated_line(f.K.lincomb(pt[f.n_alpha:], mats), g.p, f.K)}
                rep.trials += 1
                rows.append(["inflated", m.name, f.ident, _pts(sup)])
                if not zero_locus <= sup or sup != zero_locus | beta_part:
                    rep.fail(kind="inflated", module=m.name, family=f.ident, support=_pts(sup),
                             beta_zero_locus=_pts(zero_locus), beta_support=_pts(beta_part))
        witnesses = coordinate_projective_witnesses(g)
        for m in witnesses:
            if not restricted_to_coordinates_is_free(m):
                rep.fail(kind="witness", module=m.name, problems=["restriction is not free"])
            for f in fams:
                sup = support(m, f).as_set
                hit = {pt for pt in sup if f.beta_zero(pt)}
                rep.trials += 1
                rows.append(["coordinate-projective", m.name, f.ident, _pts(sup)])
                if hit:
                    rep.fail(kind="coordinate-projective", module=m.name, family=f.ident, points=_pts(hit))
        rep.details = {"supports": rows}
        if not witnesses:
            rep.details["note"] = "no coordinate-projective witness within the size cap"
    return rep


# -- Carlson modules -----------------------------------------------------------------------

def suite_carlson(case, degree: int = 2, e: int = 1, seed: int = DEFAULT_SEED, check_split: bool = True) -> SuiteReport:
    """support(L_zeta) equals the zero locus of zeta on every flat point, for all nonzero classes."""
    g = _spec(case)
    rep = SuiteReport("carlson", f"{g.ident}|deg={degree}|e={e}", seed)
    if degree % 2 and g.p != 2:
        raise co.CohomologyError("Carlson suite needs an even degree for odd p")
    with _Timer(rep):
        dt = extended_double(g)
        if dt.dim > co.MAX_ALGEBRA_DIM:
            raise co.CohomologyError(f"{dt.name} has dim {dt.dim} > {co.MAX_ALGEBRA_DIM}")
        A = dt.dense_realization()
        od = o_subalgebra(g)
        phi = co.dense_morphism(od.i_O)
        res = co.minimal_resolution(A, None, degree)
        res_o = co.minimal_resolution(od.algebra, None, degree) if check_split else None
        fams = families(g, e)
        rows = []
        for zeta in co.all_nonzero_classes(res, degree):
            L = co.carlson_module(zeta)
            for f in fams:
                K = f.K
                sup = support(L, f).as_set
                zeros = {pt for pt in flat_points(f)
                         if co.pullback_class(zeta, combined_element(PiPointPair.from_point(f, pt), A), K) == 0}
                rep.trials += 1
                rows.append([zeta.values.tolist(), L.dim, f.ident, _pts(sup)])
                if sup != zeros:
                    rep.fail(check="zero locus", zeta=zeta.values.tolist(), family=f.ident,
                             support=_pts(sup), zero_locus=_pts(zeros))
                for c in range(2, g.p):
                    scaled = support(co.carlson_module(zeta.scaled(c)), f).as_set
                    if scaled != sup:
                        rep.fail(check="unit scaling", zeta=zeta.values.tolist(), unit=c, family=f.ident)
            if check_split:
                zo = co.restrict_class(zeta, phi, res_o)
                Lo = co.carlson_module(zo, allow_zero=True)
                ok, rank = co.splits_as(restrict_along(phi, L), Lo)
                rep.trials += 1
                rows.append([zeta.values.tolist(), "restriction", zo.values.tolist(), ok, rank])
                if not ok:
                    rep.fail(check="restriction splitting", zeta=zeta.values.tolist(), zeta_o=zo.values.tolist())
        rep.details = {"betti": list(res.betti), "classes": rows}
    return rep


# -- Betti numbers -------------------------------------------------------------------------

def betti_oracle(kind: str, p: int, length: int) -> list[int]:
    """Betti numbers of k over k[x]/x^N (all ones) and of tensor products of such algebras."""
    ones = [1] * (length + 1)
    if kind in ("truncated", "line"):
        return ones
    return co.kunneth(ones, ones)[: length + 1]


def suite_betti(case, length: int = 8, seed: int = DEFAULT_SEED) -> SuiteReport:
    """Betti numbers of k over D~, O, k[x]/x^{p^2} and k[u]/u^p against the Kunneth oracle."""
    g = _spec(case)
    rep = SuiteReport("betti", f"{g.ident}|L={length}", seed)
    if g.kind != "Ga" or g.n != 1 or g.r != 1:
        raise CatalogError("the Betti suite covers the one-variable additive group at height 1")
    with _Timer(rep):
        from .kernels import group_algebra
        algebras = {"D~": (extended_double(g).dense_realization(), "product"),
                    "O": (o_subalgebra(g).algebra, "product"),
                    "k[x]/x^{p^2}": (coordinate_algebra(g, 2), "truncated"),
                    "k[u]/u^p": (co.truncated_line(g.p), "line"),
                    "kG_(1)": (group_algebra(g, 1), "truncated")}
        rows = {}
        for nm, (a, kind) in algebras.items():
            res = co.minimal_resolution(a, None, length)
            want = betti_oracle(kind, g.p, length)
            probs = co.resolution_problems(res)
            rows[nm] = list(res.betti)
            rep.trials += 1
            if rows[nm] != want or probs:
                rep.fail(algebra=nm, betti=rows[nm], oracle=want, problems=probs)
        growth = co.growth_degree(rows["D~"])
        rep.trials += 1
        if growth.degree != 1:
            rep.fail(check="growth", report=growth.to_json())
        rep.details = {"betti": rows, "growth": growth.to_json()}
    return rep


# -- lazy versus dense multiplication --------------------------------------------------------

def dense_realizable_cases(max_dim: int = MAX_DIM) -> list[dict]:
    """Every catalog double D or D~ whose dense structure tensor fits under the dimension guard."""
    out = []
    kinds = [("Ga", n) for n in (1, 2, 3)] + [("Heis3", 1), ("Gm", 1)]
    for (kind, n), p in itertools.product(kinds, PRIMES):
        for r in itertools.count(1):
            g = GroupSchemeSpec(kind, p, n, r)
            fits = [w for w, exp in (("D", 2 * r), ("D~", 2 * r + 1)) if p ** (exp * g.dim_g) <= max_dim]
            if not fits:
                break
            out.extend({"case": g.ident, "which": w} for w in fits)
    return out


def suite_lazy_dense(case, which: str = "D~", pairs: int = 1000, seed: int = DEFAULT_SEED) -> SuiteReport:
    """Products computed factor-wise agree with the dense structure tensor on random pairs."""
    g = _spec(case)
    rep = SuiteReport("lazy_dense", f"{g.ident}|{which}", seed)
    if which not in ("D", "D~"):
        raise CatalogError(f"unknown double {which!r}; use D or D~")
    with _Timer(rep):
        s = double(g) if which == "D" else extended_double(g)
        dense = s.dense_realization()
        rng = np.random.default_rng(seed)
        F = s.F
        for _ in range(pairs):
            x, y = F.random(rng, s.dim), F.random(rng, s.dim)
            rep.trials += 1
            if not np.array_equal(s.mul(x, y), dense.mul(x, y)):
                rep.fail(x=x.tolist(), y=y.tolist())
        rep.details = {"dim": s.dim}
    return rep


# -- registry ------------------------------------------------------------------------------

SUITES = {
    "fp1": suite_fp1,
    "coproduct_invariance": suite_coproduct_invariance,
    "tensor_property": suite_tensor_property,
    "projectivity_detection": suite_projectivity_detection,
    "structure_maps": suite_structure_maps,
    "module_classes": suite_module_classes,
    "carlson": suite_carlson,
    "betti": suite_betti,
    "lazy_dense": suite_lazy_dense,
}

DEFAULT_CASES: dict[str, list[dict]] = {
    "fp1": [{"p": p, "r": r} for p in (2, 3, 5) for r in (1, 2)],
    "coproduct_invariance": [{"case": c, "e": e} for c in ("Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1") for e in (1, 2)]
    + [{"case": "Heis3:p=3,r=1"}],
    "tensor_property": [{"case": c, "e": e} for c in ("Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1") for e in (1, 2)],
    "projectivity_detection": [{"case": c, "e": e} for c in ("Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1") for e in (1, 2)]
    + [{"case": "Heis3:p=3,r=1"}],
    "structure_maps": [{"case": c} for c in ("Ga:n=1,p=2,r=1", "Ga:n=1,p=2,r=2", "Ga:n=1,p=3,r=1",
                                             "Ga:n=1,p=3,r=2", "Heis3:p=3,r=1", "Heis3:p=2,r=1")],
    "module_classes": [{"case": c} for c in ("Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=2,r=1",
                                             "Heis3:p=3,r=1")],
    "carlson": [{"case": "Ga:n=1,p=2,r=1", "e": 1}, {"case": "Ga:n=1,p=2,r=1", "e": 2},
                {"case": "Ga:n=1,p=3,r=1", "e": 1}],
    "betti": [{"case": "Ga:n=1,p=2,r=1"}, {"case": "Ga:n=1,p=3,r=1"}],
    "lazy_dense": dense_realizable_cases(),
}


def run_suite(name: str, seed: int = DEFAULT_SEED, **params) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](seed=seed, **params)


def _run_task(task) -> dict:
    name, seed, params = task
    return run_suite(name, seed, **params).to_json()


def run_all(names=None, seed: int = DEFAULT_SEED, workers: int = 1) -> list[dict]:
    """Run the default cases of the named suites (all by default), optionally across processes."""
    names = list(SUITES) if names is None else list(names)
    tasks = [(nm, seed, params) for nm in names for params in DEFAULT_CASES[nm]]
    if workers <= 1:
        return [_run_task(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_run_task, tasks))


__all__ = ["SuiteReport", "commuting_triple", "suite_fp1", "suite_coproduct_invariance", "suite_tensor_property",
           "suite_projectivity_detection", "suite_structure_maps", "suite_module_classes", "suite_carlson",
           "suite_betti", "betti_oracle", "suite_lazy_dense", "dense_realizable_cases", "SUITES", "DEFAULT_CASES",
           "run_suite", "run_all",
           "o_coproducts_coincide"]
