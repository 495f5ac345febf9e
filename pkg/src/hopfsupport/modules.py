"""Finite-dimensional modules over dense algebras and lazy smash products.

Over a dense algebra a module stores the full action (one matrix per basis
element), derived from generator actions when needed.  Over a lazy smash
product B # H it stores the full actions of the two factors; the element
f # h acts by rho(f) rho(h).  Action matrices hold field codes, so a module
may be defined over an extension K of the algebra's prime field.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import AlgebraMorphism, AxiomError, HopfData, StructuredAlgebra
from .field import GF, field
from .smash import LazySmash

MAX_REGULAR_DIM = 256
MAX_LAZY_PROJECTIVITY_DIM = 512
ISO_ATTEMPTS = 24


class ModuleError(ValueError):
    pass


# -- generator words ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WordBasis:
    """Basis of an algebra by words in its generators: word w = gens[g] * word[parent]."""

    steps: tuple[tuple[int, int], ...]
    to_basis: np.ndarray  # to_basis[w, i] = coefficient of word w in basis element i


def word_basis(a: StructuredAlgebra) -> WordBasis:
    cached = a.meta.get("_words")
    if cached is not None:
        return cached
    F = a.F
    gens = [v for _, v in a.generators]
    if not gens and a.dim > 1:
        raise ModuleError(f"{a.name}: no designated generators")
    span = la.EchelonSpan(a.dim, F)
    span.add(a.unit[None, :])
    vecs = [a.unit.copy()]
    steps: list[tuple[int, int]] = [(-1, -1)]
    frontier = [0]
    while frontier and span.dim < a.dim:
        cands, where = [], []
        for w in frontier:
            for gi, g in enumerate(gens):
                cands.append(a.mul(g, vecs[w]))
                where.append((gi, w))
        fresh = span.add(np.stack(cands))
        frontier = []
        for c in fresh:
            frontier.append(len(vecs))
            vecs.append(cands[c])
            steps.append(where[c])
    if span.dim < a.dim:
        raise ModuleError(f"{a.name}: designated generators do not generate the algebra")
    W = np.stack(vecs, axis=1)
    wb = WordBasis(tuple(steps), la.inverse(W, F))
    a.meta["_words"] = wb
    return wb


def full_from_generators(a: StructuredAlgebra, mats: list[np.ndarray], F: GF) -> np.ndarray:
    """Action of every basis element, given the action of each designated generator."""
    wb = word_basis(a)
    d = mats[0].shape[0] if mats else 1
    words = np.zeros((len(wb.steps), d, d), dtype=np.int64)
    words[0] = la.identity(d)
    for w, (g, parent) in enumerate(wb.steps):
        if w:
            words[w] = F.matmul(mats[g], words[parent])
    coef = wb.to_basis.T  # [i, w]
    return F.matmul(coef, words.reshape(len(wb.steps), d * d)).reshape(a.dim, d, d)


def _stack_combination(coeffs: np.ndarray, full: np.ndarray, F: GF) -> np.ndarray:
    """sum_i coeffs[i] * full[i] for a coefficient vector or matrix of coefficient rows."""
    n, d, e = full.shape
    c = np.atleast_2d(np.asarray(coeffs, dtype=np.int64))
    out = F.matmul(c, full.reshape(n, d * e)).reshape(c.shape[0], d, e)
    return out[0] if np.ndim(coeffs) == 1 else out


def relation_problems(a: StructuredAlgebra, full: np.ndarray, F: GF) -> list[str]:
    """rho(1) = 1 and rho(g) rho(b_j) = rho(g b_j) for generators g and all basis b_j."""
    d = full.shape[1]
    problems = []
    if not np.array_equal(_stack_combination(a.unit, full, F), la.identity(d)):
        problems.append("unit acts as identity")
    flat = full.transpose(1, 0, 2).reshape(d, a.dim * d)
    for name, g in a.generators:
        rg = _stack_combination(g, full, F)
        lhs = F.matmul(rg, flat).reshape(d, a.dim, d).transpose(1, 0, 2)
        L = a.left_matrix(g)  # L[k, j] = coeff of b_k in g b_j
        rhs = _stack_combination(L.T, full, F)
        if not np.array_equal(lhs, rhs):
            problems.append(f"relation for generator {name}")
            break
    return problems


# -- modules ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FDModule:
    """A module over ``algebra``; ``full`` for dense algebras, ``parts`` = (B action, H action) for lazy."""

    algebra: object
    dim: int
    F: GF
    full: np.ndarray | None = None
    parts: tuple[np.ndarray, np.ndarray] | None = None
    name: str = ""
    meta: dict = dc_field(default_factory=dict)

    @property
    def is_lazy(self) -> bool:
        return isinstance(self.algebra, LazySmash)

    def act(self, x) -> np.ndarray:
        """Matrix of the algebra element x (coefficients may lie in K)."""
        x = np.asarray(x, dtype=np.int64)
        if not self.is_lazy:
            return _stack_combination(x, self.full, self.F)
        s = self.algebra
        X = x.reshape(s.b.dim, s.h.dim)
        rb, rh = self.parts
        out = la.zeros(self.dim)
        for j in np.nonzero(X.any(axis=0))[0]:
            out = self.F.add(out, self.F.matmul(_stack_combination(X[:, j], rb, self.F), rh[j]))
        return out

    @cached_property
    def generator_actions(self) -> list[np.ndarray]:
        return [self.act(v) for _, v in self.algebra.generators]

    def over(self, K: GF) -> "FDModule":
        """Base change to an extension field (codes are unchanged)."""
        if K.p != self.F.p or K.e % self.F.e:
            raise ModuleError(f"cannot base change from {self.F} to {K}")
        return FDModule(self.algebra, self.dim, K, self.full, self.parts, self.name, dict(self.meta))

    def describe(self) -> dict:
        return {"name": self.name, "dim": self.dim, "algebra": getattr(self.algebra, "name", "")}


def _validate(m: FDModule) -> FDModule:
    if m.is_lazy:
        s = m.algebra
        rb, rh = m.parts
        problems = relation_problems(s.b, rb, m.F) + relation_problems(s.h, rh, m.F)
        problems += _smash_compatibility(s, rb, rh, m.F)
    else:
        problems = relation_problems(m.algebra, m.full, m.F)
    if problems:
        raise AxiomError(f"module {m.name or ''} violates: " + ", ".join(problems))
    return m


def _smash_compatibility(s: LazySmash, rb: np.ndarray, rh: np.ndarray, F: GF) -> list[str]:
    """rho(h) rho(f) = sum rho(h_1 . f) rho(h_2) on generator pairs."""
    terms = s._delta_terms
    for _, hv in s.h.generators:
        rhv = _stack_combination(hv, rh, F)
        for _, f in s.b.generators:
            lhs = F.matmul(rhv, _stack_combination(f, rb, F))
            rhs = la.zeros(rb.shape[1])
            for j in np.nonzero(hv)[0]:
                for a, b2, c in terms.get(int(j), ()):
                    moved = s.action_matrix(a).dot(f) % s.p
                    if moved.any():
                        term = F.matmul(_stack_combination(moved, rb, F), rh[b2])
                        rhs = F.add(rhs, F.mul(int(hv[j]) * c % s.p, term))
            if not np.array_equal(lhs, rhs):
                return ["smash compatibility h.(f.m) = sum (h1.f).(h2.m)"]
    return []


def module_from_full(algebra: StructuredAlgebra, full: np.ndarray, F: GF | None = None, name: str = "",
                     check: bool = True, **meta) -> FDModule:
    F = F or algebra.F
    full = np.asarray(full, dtype=np.int64)
    m = FDModule(algebra, full.shape[1], F, full, None, name, meta)
    return _validate(m) if check else m


def module_from_parts(s: LazySmash, rb: np.ndarray, rh: np.ndarray, F: GF | None = None, name: str = "",
                      check: bool = True, **meta) -> FDModule:
    F = F or s.F
    m = FDModule(s, rb.shape[1], F, None, (np.asarray(rb, dtype=np.int64), np.asarray(rh, dtype=np.int64)),
                 name, meta)
    return _validate(m) if check else m


def module_from_generators(algebra, mats, F: GF | None = None, name: str = "", check: bool = True,
                           **meta) -> FDModule:
    """Module from the action of each designated generator (in ``algebra.generators`` order)."""
    F = F or algebra.F
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    if len(mats) != len(algebra.generators):
        raise ModuleError(f"expected {len(algebra.generators)} generator matrices, got {len(mats)}")
    if isinstance(algebra, LazySmash):
        nb = len(algebra.b.generators)
        rb = full_from_generators(algebra.b, mats[:nb], F)
        rh = full_from_generators(algebra.h, mats[nb:], F)
        m = module_from_parts(algebra, rb, rh, F, name, check, **meta)
    else:
        full = full_from_generators(algebra, mats, F)
        m = module_from_full(algebra, full, F, name, check, **meta)
    if check:
        for (gname, _), given, got in zip(algebra.generators, mats, m.generator_actions):
            if not np.array_equal(given % F.q, got):
                raise AxiomError(f"generator {gname} action is inconsistent with the algebra relations")
    return m


# -- standard modules ----------------------------------------------------------------

def trivial_module(algebra, F: GF | None = None) -> FDModule:
    """k, with every element acting by its augmentation."""
    F = F or algebra.F
    if isinstance(algebra, LazySmash):
        return module_from_parts(algebra, algebra.b.augmentation.reshape(-1, 1, 1),
                                 algebra.h.augmentation.reshape(-1, 1, 1), F, "k", check=False)
    return module_from_full(algebra, algebra.augmentation.reshape(-1, 1, 1), F, "k", check=False)


def _left_regular_full(a: StructuredAlgebra) -> np.ndarray:
    if a.dim > MAX_REGULAR_DIM:
        raise la.DimensionGuard(f"regular module of a {a.dim}-dimensional algebra")
    return a.mult.dense((a.dim,) * 3).transpose(0, 2, 1).copy()  # full[i][k, j] = c[i, j, k]


def regular_module(algebra, F: GF | None = None) -> FDModule:
    F = F or algebra.F
    if isinstance(algebra, LazySmash):
        if algebra.dim > MAX_REGULAR_DIM:
            raise la.DimensionGuard(f"regular module of a {algebra.dim}-dimensional algebra")
        dense = algebra.dense_realization()
        m = module_from_full(dense, _left_regular_full(dense), F, "regular", check=False)
        return to_lazy(m, algebra)
    return module_from_full(algebra, _left_regular_full(algebra), F, "regular", check=False)


def to_lazy(m: FDModule, s: LazySmash) -> FDModule:
    """Reinterpret a module over the dense realization of s as a module over s."""
    db, dh = s.b.dim, s.h.dim
    rb = _stack_combination(np.kron(la.identity(db), s.h.unit[None, :]) % s.p, m.full, m.F)
    rh = _stack_combination(np.kron(s.b.unit[None, :], la.identity(dh)) % s.p, m.full, m.F)
    return FDModule(s, m.dim, m.F, None, (rb, rh), m.name, dict(m.meta))


def to_dense(m: FDModule, dense: StructuredAlgebra | None = None) -> FDModule:
    """Full action over the dense realization of a lazy smash product."""
    if not m.is_lazy:
        return m
    s = m.algebra
    dense = dense or s.dense_realization()
    rb, rh = m.parts
    full = np.stack([m.F.matmul(rb[i // s.h.dim], rh[i % s.h.dim]) for i in range(s.dim)])
    return FDModule(dense, m.dim, m.F, full, None, m.name, dict(m.meta))


def direct_sum(m1: FDModule, m2: FDModule, name: str = "") -> FDModule:
    _same_algebra(m1, m2)
    F = _common_field(m1, m2)

    def block(a, b):
        n = a.shape[0]
        out = np.zeros((n, a.shape[1] + b.shape[1], a.shape[2] + b.shape[2]), dtype=np.int64)
        out[:, : a.shape[1], : a.shape[2]] = a
        out[:, a.shape[1]:, a.shape[2]:] = b
        return out

    nm = name or f"({m1.name}+{m2.name})"
    if m1.is_lazy:
        return FDModule(m1.algebra, m1.dim + m2.dim, F, None,
                        (block(m1.parts[0], m2.parts[0]), block(m1.parts[1], m2.parts[1])), nm)
    return FDModule(m1.algebra, m1.dim + m2.dim, F, block(m1.full, m2.full), None, nm)


def free_module(algebra, rank: int, F: GF | None = None) -> FDModule:
    reg = regular_module(algebra, F)
    out = reg
    for _ in range(rank - 1):
        out = direct_sum(out, reg)
    return out


def _same_algebra(m1: FDModule, m2: FDModule):
    if m1.algebra is not m2.algebra:
        raise ModuleError("modules live over different algebra objects")


def _common_field(m1: FDModule, m2: FDModule) -> GF:
    return m1.F if m1.F.e >= m2.F.e else m2.F


def _kron_stack(a: np.ndarray, b: np.ndarray, F: GF) -> np.ndarray:
    return la.kron(a, b, F)


def tensor(m1: FDModule, m2: FDModule, coproduct: HopfData | str = "hopf", name: str = "") -> FDModule:
    """Tensor product with generators acting through a coproduct.

    ``coproduct`` is "hopf" (the algebra's own), "group" (the transported
    group-scheme coproduct, available on O), or explicit HopfData.
    """
    _same_algebra(m1, m2)
    F = _common_field(m1, m2)
    a = m1.algebra
    nm = name or f"({m1.name}*{m2.name})"
    if isinstance(coproduct, str):
        coproduct = resolve_coproduct(a, coproduct)
    if m1.is_lazy:
        return _tensor_lazy(m1, m2, F, nm)
    rows = _coproduct_by_source(coproduct)
    mats = []
    for _, g in a.generators:
        out = la.zeros(m1.dim * m2.dim)
        for i in np.nonzero(g)[0]:
            for j, k, v in rows.get(int(i), ()):
                term = la.kron(m1.full[j], m2.full[k], F)
                out = F.add(out, F.mul(int(g[i]) * v % a.p, term))
        mats.append(out)
    return module_from_generators(a, mats, F, nm)


def _tensor_lazy(m1: FDModule, m2: FDModule, F: GF, name: str) -> FDModule:
    s = m1.algebra
    bcop = _coproduct_by_source(s.b.hopf.co_opposite())
    hcop = _coproduct_by_source(s.h.hopf)

    def part(idx, r1, r2, rows, n):
        out = np.zeros((n, m1.dim * m2.dim, m1.dim * m2.dim), dtype=np.int64)
        for i in range(n):
            acc = la.zeros(m1.dim * m2.dim)
            for j, k, v in rows.get(i, ()):
                acc = F.add(acc, F.mul(v, la.kron(r1[j], r2[k], F)))
            out[i] = acc
        return out

    rb = part(0, m1.parts[0], m2.parts[0], bcop, s.b.dim)
    rh = part(1, m1.parts[1], m2.parts[1], hcop, s.h.dim)
    return module_from_parts(s, rb, rh, F, name)


def _coproduct_by_source(hd: HopfData) -> dict[int, list[tuple[int, int, int]]]:
    rows: dict[int, list] = {}
    for (i, j, k), v in zip(hd.coproduct.idx, hd.coproduct.val):
        rows.setdefault(int(i), []).append((int(j), int(k), int(v)))
    return rows


def resolve_coproduct(a, choice: str) -> HopfData:
    if choice == "hopf":
        if isinstance(a, LazySmash):
            return a.hopf_data()
        if a.hopf is None:
            raise ModuleError(f"{a.name} carries no coproduct")
        return a.hopf
    if choice == "group":
        role = getattr(a, "meta", {}).get("role")
        if role == "group_algebra":
            return a.hopf
        if role == "O":
            from .kernels import group_coproduct_on_o
            return group_coproduct_on_o(a.meta["spec"], a.meta["height"])
        raise ModuleError(f"{getattr(a, 'name', a)} carries no group coproduct")
    raise ModuleError(f"unknown coproduct choice {choice!r}")


def dual(m: FDModule, name: str = "") -> FDModule:
    """M^*, with x acting by the transpose of rho(S(x))."""
    if m.is_lazy:
        raise ModuleError("duals are only formed over dense algebras")
    a = m.algebra
    if a.hopf is None or a.hopf.antipode is None:
        raise ModuleError(f"{a.name} has no antipode")
    S = a.hopf.antipode
    full = _stack_combination(S.T, m.full, m.F).transpose(0, 2, 1).copy()
    return module_from_full(a, full, m.F, name or f"{m.name}^*")


def external_tensor(m1: FDModule, m2: FDModule, target: StructuredAlgebra, name: str = "") -> FDModule:
    """M (x) M' over A (x) B (basis index i*dim(B) + j)."""
    F = _common_field(m1, m2)
    na, nb = m1.full.shape[0], m2.full.shape[0]
    if target.dim != na * nb:
        raise ModuleError("target is not the tensor algebra of the two module algebras")
    full = np.stack([la.kron(m1.full[i], m2.full[j], F) for i in range(na) for j in range(nb)])
    return module_from_full(target, full, F, name or f"{m1.name}#{m2.name}")


def restrict_along(phi: AlgebraMorphism, m: FDModule, name: str = "") -> FDModule:
    """phi^* M: an element x of the source acts by rho(phi(x))."""
    src, tgt = phi.source, phi.target
    if tgt is not m.algebra:
        raise ModuleError("morphism target is not the module's algebra")
    F = m.F
    nm = name or f"res({m.name})"
    if phi.kron_factors is not None and isinstance(tgt, LazySmash):
        eb, eh = phi.kron_factors
        rb = _stack_combination(eb.T, m.parts[0], F)
        rh = _stack_combination(eh.T, m.parts[1], F)
        if isinstance(src, LazySmash):
            return module_from_parts(src, rb, rh, F, nm, check=False)
        # source is a dense tensor-shaped algebra C (x) H
        full = np.stack([F.matmul(rb[i], rh[j]) for i in range(rb.shape[0]) for j in range(rh.shape[0])])
        return module_from_full(src, full, F, nm, check=False)
    images = phi.dense()
    if isinstance(src, LazySmash):
        raise ModuleError("restriction from a lazy source needs a Kronecker-factored morphism")
    full = np.stack([m.act(images[:, i]) for i in range(src.dim)])
    return module_from_full(src, full, F, nm, check=False)


# -- submodules, quotients, homomorphisms -------------------------------------------

def _radical_generators(a) -> list[np.ndarray]:
    """g - eps(g) for the designated generators: they span the augmentation ideal modulo its square."""
    return [(v - int(a.augmentation.dot(v) % a.p) * a.unit) % a.p for _, v in a.generators]


def submodule_span(m: FDModule, vectors: np.ndarray) -> np.ndarray:
    """Basis (columns) of the submodule generated by the given columns."""
    F = m.F
    span = la.EchelonSpan(m.dim, F)
    todo = [v for v in np.asarray(vectors, dtype=np.int64).T]
    acts = m.generator_actions
    fresh = span.add(np.stack(todo)) if todo else []
    frontier = [todo[i] for i in fresh]
    while frontier:
        cands = [F.matmul(g, v) for v in frontier for g in acts]
        if not cands:
            break
        added = span.add(np.stack(cands))
        frontier = [cands[i] for i in added]
    return span.basis()


def radical_image(m: FDModule) -> np.ndarray:
    """Basis of rad(A) M."""
    gens = _radical_generators(m.algebra)
    if not gens:
        return la.zeros(m.dim, 0)
    stacked = np.concatenate([m.act(g) for g in gens], axis=1)
    return la.image_basis(stacked, m.F)


def top_dimension(m: FDModule) -> int:
    return m.dim - radical_image(m).shape[1]


def quotient(m: FDModule, sub: np.ndarray, name: str = "") -> FDModule:
    """M / N for a submodule basis N (columns)."""
    F = m.F
    sub = np.asarray(sub, dtype=np.int64).reshape(m.dim, -1)
    _, piv = la.row_reduce(sub.T, F) if sub.shape[1] else (None, [])
    comp = [i for i in range(m.dim) if i not in set(piv)]
    basis = np.concatenate([sub, la.identity(m.dim)[:, comp]], axis=1)
    inv = la.inverse(basis, F)
    k = sub.shape[1]

    def induced(mat):
        return F.matmul(inv, F.matmul(mat, basis))[k:, k:]

    nm = name or f"{m.name}/N"
    if m.is_lazy:
        rb = np.stack([induced(x) for x in m.parts[0]])
        rh = np.stack([induced(x) for x in m.parts[1]])
        return FDModule(m.algebra, len(comp), F, None, (rb, rh), nm)
    return FDModule(m.algebra, len(comp), F, np.stack([induced(x) for x in m.full]), None, nm)


def submodule(m: FDModule, sub: np.ndarray, name: str = "") -> FDModule:
    """The submodule with basis ``sub`` (columns), which must be stable."""
    F = m.F
    sub = np.asarray(sub, dtype=np.int64)

    def induced(mat):
        x = la.solve(sub, F.matmul(mat, sub), F)
        if x is None:
            raise ModuleError("span is not a submodule")
        return x

    nm = name or f"N<{m.name}"
    if m.is_lazy:
        return FDModule(m.algebra, sub.shape[1], F, None,
                        (np.stack([induced(x) for x in m.parts[0]]), np.stack([induced(x) for x in m.parts[1]])),
                        nm)
    return FDModule(m.algebra, sub.shape[1], F, np.stack([induced(x) for x in m.full]), None, nm)


def hom_space(m1: FDModule, m2: FDModule) -> list[np.ndarray]:
    """Basis of Hom_A(M1, M2) as d2 x d1 matrices (solved over the prime field of the data)."""
    F = _common_field(m1, m2)
    d1, d2 = m1.dim, m2.dim
    eqs = []
    for g1, g2 in zip(m1.generator_actions, m2.generator_actions):
        # g2 X - X g1 = 0, X flattened row-major
        left = la.kron(g2, la.identity(d1), F)
        right = la.kron(la.identity(d2), g1.T, F)
        eqs.append(F.sub(left, right))
    if not eqs:
        return [la.identity(d1)] if d1 == d2 else []
    ker = la.kernel_basis(np.concatenate(eqs, axis=0), F)
    return [ker[:, i].reshape(d2, d1) for i in range(ker.shape[1])]


def is_isomorphic(m1: FDModule, m2: FDModule, seed: int = 0) -> bool:
    """Search for an invertible intertwiner among random combinations of a Hom basis.

    Combinations are drawn over F_{p^4} so that a missed isomorphism is very
    unlikely; a True answer is always certified by an explicit intertwiner.
    """
    if m1.dim != m2.dim:
        return False
    if m1.dim == 0:
        return True
    basis = hom_space(m1, m2)
    if not basis:
        return False
    K = field(m1.F.p, 4)
    rng = np.random.default_rng(seed)
    for _ in range(ISO_ATTEMPTS):
        coeffs = K.random(rng, len(basis))
        x = K.lincomb(coeffs, basis)
        if la.rank(x, K) == m1.dim:
            return True
    return False


# -- projectivity ---------------------------------------------------------------------

def is_local(a) -> bool:
    if isinstance(a, LazySmash):
        return is_local(a.b) and is_local(a.h)
    cached = a.meta.get("_local")
    if cached is None:
        try:
            a.nilpotency_degree()
            cached = True
        except AxiomError:
            cached = False
        a.meta["_local"] = cached
    return cached


def is_projective_local(m: FDModule) -> bool:
    """Free iff the canonical cover A^t -> M (t = dim M/rad M) is bijective.

    The cover is surjective by Nakayama's lemma, so it is bijective exactly
    when dim M = t * dim A.
    """
    a = m.algebra
    if not is_local(a):
        raise ModuleError(f"{getattr(a, 'name', 'algebra')} is not local; projective need not mean free")
    if m.is_lazy and m.dim > MAX_LAZY_PROJECTIVITY_DIM:
        raise la.DimensionGuard(f"projectivity over a lazy algebra for modules of dim > {MAX_LAZY_PROJECTIVITY_DIM}")
    return m.dim == top_dimension(m) * a.dim


def socle_element(a: StructuredAlgebra) -> np.ndarray:
    soc = a.socle_basis()
    if soc.shape[1] != 1:
        raise ModuleError(f"{a.name}: socle is not one-dimensional")
    return soc[:, 0]


def split_free(m: FDModule) -> tuple[FDModule, int]:
    """Split off the maximal free summand of a module over a local Frobenius algebra.

    Over such an algebra a cyclic submodule A v is free exactly when the socle
    element s satisfies s v != 0, and a free submodule is a summand.  The free
    rank is rank(rho(s)); the complement is the quotient by the free part.
    """
    if m.is_lazy:
        raise ModuleError("free splitting runs over dense algebras")
    s = socle_element(m.algebra)
    rs = m.act(s)
    F = m.F
    _, piv = la.row_reduce(rs, F)
    if not piv:
        return m, 0
    gens = la.identity(m.dim)[:, piv]
    free_part = submodule_span(m, gens)
    if free_part.shape[1] != len(piv) * m.algebra.dim:
        raise AxiomError("free part has unexpected dimension")
    return quotient(m, free_part, f"core({m.name})"), len(piv)


def stably_isomorphic(m1: FDModule, m2: FDModule) -> bool:
    c1, _ = split_free(m1)
    c2, _ = split_free(m2)
    return is_isomorphic(c1, c2)
