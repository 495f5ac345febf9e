"""Smash products B # H stored lazily by factor data and an action tensor.

Elements of B # H are vectors indexed by i*dim(H) + j for b_i # h_j.  The
product is (f#h)(f'#h') = sum f (h_1 . f') # h_2 h'.  Coefficients may live in
an extension field K; the structure data itself is always over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import (AxiomError, HopfData, Sparse, StructuredAlgebra, make_hopf,
                      tensor_hopf)
from .field import GF, MAX_DIM


def split_digits(x, F: GF) -> list[np.ndarray]:
    """Write a K-vector as sum_t w^t x_t with x_t over F_p."""
    x = np.asarray(x, dtype=np.int64)
    if F.e == 1:
        return [x % F.p]
    return list(F.digits(x))


def _w_power(F: GF, s: int) -> int:
    """Code of w^s, w the root of the modulus (code p)."""
    return F.power(F.p, s) if F.e > 1 else 1


def extend_bilinear(op, x, y, F: GF) -> np.ndarray:
    """Evaluate an F_p-bilinear ``op`` on K-vectors by digit expansion."""
    if F.e == 1:
        return op(np.asarray(x) % F.p, np.asarray(y) % F.p)
    xs, ys = split_digits(x, F), split_digits(y, F)
    out = None
    for t, xt in enumerate(xs):
        for u, yu in enumerate(ys):
            if not (xt.any() and yu.any()):
                continue
            term = F.mul(_w_power(F, t + u), op(xt, yu))
            out = term if out is None else F.add(out, term)
    return op(xs[0] * 0, ys[0] * 0) if out is None else out


def extend_linear(op, x, F: GF) -> np.ndarray:
    """Evaluate an F_p-linear ``op`` on a K-vector."""
    if F.e == 1:
        return op(np.asarray(x) % F.p)
    xs = split_digits(x, F)
    out = None
    for t, xt in enumerate(xs):
        if xt.any():
            term = F.mul(_w_power(F, t), op(xt))
            out = term if out is None else F.add(out, term)
    return op(xs[0] * 0) if out is None else out


def action_dense(action: Sparse, a: int, dim_b: int) -> np.ndarray:
    sel = action.idx[:, 0] == a
    out = np.zeros((dim_b, dim_b), dtype=np.int64)
    out[action.idx[sel, 1], action.idx[sel, 2]] = action.val[sel]
    return out


def trivial_action(b: StructuredAlgebra, h: StructuredAlgebra) -> Sparse:
    eps = h.hopf.counit
    hs = np.nonzero(eps)[0]
    n = b.dim
    idx = np.stack([np.repeat(hs, n), np.tile(np.arange(n), len(hs)), np.tile(np.arange(n), len(hs))], 1)
    return Sparse(idx.astype(np.int64), np.repeat(eps[hs], n))


@dataclass(eq=False)
class LazySmash:
    """B # H without a global structure tensor."""

    b: StructuredAlgebra
    h: StructuredAlgebra
    action: Sparse
    name: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self._acts: dict[int, np.ndarray] = {}
        self._dense: StructuredAlgebra | None = None

    # -- shape ----------------------------------------------------------------
    @property
    def F(self) -> GF:
        return self.b.F

    @property
    def p(self) -> int:
        return self.b.p

    @property
    def dim(self) -> int:
        return self.b.dim * self.h.dim

    @property
    def unit(self) -> np.ndarray:
        return np.kron(self.b.unit, self.h.unit) % self.p

    @property
    def augmentation(self) -> np.ndarray:
        return np.kron(self.b.augmentation, self.h.augmentation) % self.p

    @cached_property
    def generators(self) -> tuple[tuple[str, np.ndarray], ...]:
        return tuple((f"{g}#1", np.kron(v, self.h.unit) % self.p) for g, v in self.b.generators) + \
            tuple((f"1#{g}", np.kron(self.b.unit, v) % self.p) for g, v in self.h.generators)

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def pure(self, f, h) -> np.ndarray:
        """f # h for factor vectors over F_p."""
        return np.kron(np.asarray(f) % self.p, np.asarray(h) % self.p) % self.p

    def label(self, i: int) -> str:
        return f"{self.b.labels[i // self.h.dim]}#{self.h.labels[i % self.h.dim]}"

    @cached_property
    def is_trivial_action(self) -> bool:
        return self.action.equals(trivial_action(self.b, self.h))

    # -- structure data -------------------------------------------------------
    def action_matrix(self, a: int) -> np.ndarray:
        m = self._acts.get(a)
        if m is None:
            m = action_dense(self.action, a, self.b.dim)
            self._acts[a] = m
        return m

    def act(self, hvec, f) -> np.ndarray:
        """h . f for F_p vectors."""
        out = np.zeros(self.b.dim, dtype=np.int64)
        for a in np.nonzero(hvec)[0]:
            out = out + int(hvec[a]) * self.action_matrix(int(a)).dot(f)
        return out % self.p

    @cached_property
    def _delta_terms(self) -> dict[int, list[tuple[int, int, int]]]:
        terms: dict[int, list] = {}
        for (j, a, b2), c in zip(self.h.hopf.coproduct.idx, self.h.hopf.coproduct.val):
            terms.setdefault(int(j), []).append((int(a), int(b2), int(c)))
        return terms

    @cached_property
    def _h_right(self) -> list[np.ndarray]:
        # R[b'] with (Y @ R[b'])[k, m] = sum_l Y[k, l] * coeff of h_m in h_b' h_l
        return [self.h.left_matrix(self.h.basis(b2)).T.copy() for b2 in range(self.h.dim)]

    def _mul_fp(self, x, y) -> np.ndarray:
        db, dh, p = self.b.dim, self.h.dim, self.p
        X = np.asarray(x).reshape(db, dh)
        Y = np.asarray(y).reshape(db, dh).astype(np.float64)
        Z = np.zeros((db, dh), dtype=np.float64)
        acted: dict[int, np.ndarray] = {}
        for j in np.nonzero(X.any(axis=0))[0]:
            W = np.zeros((db, dh), dtype=np.float64)
            for a, b2, c in self._delta_terms.get(int(j), ()):
                if a not in acted:
                    acted[a] = (self.action_matrix(a).astype(np.float64) @ Y) % p
                W += c * (acted[a] @ self._h_right[b2])
            W %= p
            L = self.b.left_matrix(X[:, j]).astype(np.float64)
            Z = (Z + L @ W) % p
        return Z.astype(np.int64).reshape(-1) % p

    def mul(self, x, y, F: GF | None = None) -> np.ndarray:
        F = F or self.F
        return extend_bilinear(self._mul_fp, x, y, F)

    def power(self, x, n: int, F: GF | None = None) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(n):
            out = self.mul(out, x, F)
        return out

    # -- Hopf data -----------------------------------------------------------
    def hopf_data(self) -> HopfData:
        """Co-opposite coordinate coproduct tensored with the group-algebra coproduct."""
        bh = self.b.hopf.co_opposite()
        hh = self.h.hopf
        hd = tensor_hopf(HopfData(bh.coproduct, bh.counit, None, self.p),
                         HopfData(hh.coproduct, hh.counit, None, self.p), self.b.dim, self.h.dim, self.p)
        anti = None
        if self.is_trivial_action and bh.antipode is not None and hh.antipode is not None:
            anti = la.kron(bh.antipode, hh.antipode, self.F)
        return make_hopf(hd.coproduct, hd.counit, anti, self.p)

    # -- dense form ------------------------------------------------------------
    def dense_realization(self) -> StructuredAlgebra:
        """Structure tensor of the smash product (computed once, same basis order)."""
        if self._dense is None:
            if self.dim > MAX_DIM:
                raise la.DimensionGuard(f"smash product of dimension {self.dim} exceeds {MAX_DIM}")
            mult = _smash_tensor(self)
            labels = tuple(self.label(i) for i in range(self.dim))
            self._dense = StructuredAlgebra(self.F, labels, mult, self.unit, self.augmentation, self.hopf_data(),
                                            self.generators, self.name, {**self.meta, "lazy": self})
        return self._dense

    def random_element(self, rng: np.random.Generator, F: GF | None = None) -> np.ndarray:
        F = F or self.F
        return F.random(rng, self.dim)


def _join_action(mult: Sparse, act: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Entries (i, k, m) of b_i * (act b_k) expanded in the basis."""
    n_idx, k_idx = np.nonzero(act)
    w = act[n_idx, k_idx]
    mi = mult.idx
    order = np.argsort(mi[:, 1], kind="stable")
    mi, mv = mi[order], mult.val[order]
    dim = act.shape[0]
    starts = np.searchsorted(mi[:, 1], np.arange(dim), side="left")
    ends = np.searchsorted(mi[:, 1], np.arange(dim), side="right")
    counts = (ends - starts)[n_idx]
    total = int(counts.sum())
    if total == 0:
        return np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.int64)
    rep = np.repeat(np.arange(len(n_idx)), counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    pos = starts[n_idx][rep] + offs
    idx = np.stack([mi[pos, 0], k_idx[rep], mi[pos, 2]], axis=1)
    return idx, mv[pos] * w[rep]


def _smash_tensor(s: LazySmash) -> Sparse:
    db, dh, p = s.b.dim, s.h.dim, s.p
    hm = s.h.mult
    by_left: dict[int, np.ndarray] = {}
    for b2 in range(dh):
        sel = hm.idx[:, 0] == b2
        by_left[b2] = np.nonzero(sel)[0]
    joined: dict[int, Sparse] = {}
    idx_parts, val_parts = [], []
    for j, terms in s._delta_terms.items():
        for a, b2, c in terms:
            if a not in joined:
                ji, jv = _join_action(s.b.mult, s.action_matrix(a))
                joined[a] = Sparse.from_arrays(ji, jv, (db,) * 3, p)
            tb = joined[a]
            rows = by_left[b2]
            if not tb.nnz or not len(rows):
                continue
            hl, hmm, hv = hm.idx[rows, 1], hm.idx[rows, 2], hm.val[rows]
            nb, nh = tb.nnz, len(rows)
            i = np.repeat(tb.idx[:, 0], nh) * dh + j
            k = np.repeat(tb.idx[:, 1], nh) * dh + np.tile(hl, nb)
            m = np.repeat(tb.idx[:, 2], nh) * dh + np.tile(hmm, nb)
            idx_parts.append(np.stack([i, k, m], axis=1))
            val_parts.append((c * np.repeat(tb.val, nh) * np.tile(hv, nb)) % p)
    if not idx_parts:
        return Sparse(np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.int64))
    return Sparse.from_arrays(np.concatenate(idx_parts), np.concatenate(val_parts), (db * dh,) * 3, p)


def check_module_algebra(b: StructuredAlgebra, h: StructuredAlgebra, action: Sparse) -> list[str]:
    """Module-algebra axioms of the action, checked on generators."""
    problems: list[str] = []
    p, db = b.p, b.dim
    mats = {a: action_dense(action, a, db) for a in range(h.dim)}

    def act_of(hvec):
        out = np.zeros((db, db), dtype=np.int64)
        for a in np.nonzero(hvec)[0]:
            out = (out + int(hvec[a]) * mats[int(a)]) % p
        return out

    if not np.array_equal(act_of(h.unit), la.identity(db)):
        problems.append("unit of H acts as identity")
    eps = h.hopf.counit
    for a in range(h.dim):
        if not np.array_equal(mats[a].dot(b.unit) % p, (eps[a] * b.unit) % p):
            problems.append("h.1 = eps(h)1")
            break
    rows: dict[int, list] = {}
    for (j, a, c), v in zip(h.hopf.coproduct.idx, h.hopf.coproduct.val):
        rows.setdefault(int(j), []).append((int(a), int(c), int(v)))
    hgens = [v for _, v in h.generators]
    bgens = [v for _, v in b.generators]
    for hv in hgens:
        lhs_act = act_of(hv)
        for f in bgens:
            for g in bgens:
                lhs = lhs_act.dot(b.mul(f, g)) % p
                rhs = np.zeros(db, dtype=np.int64)
                for j in np.nonzero(hv)[0]:
                    for a, c, v in rows.get(int(j), ()):
                        rhs = (rhs + int(hv[j]) * v * b.mul(mats[a].dot(f) % p, mats[c].dot(g) % p)) % p
                if not np.array_equal(lhs, rhs):
                    problems.append("h.(ff') = sum (h1.f)(h2.f')")
                    return problems
    F = b.F
    for h1 in hgens:
        for h2 in hgens:
            if not np.array_equal(act_of(h.mul(h1, h2)), F.matmul(act_of(h1), act_of(h2))):
                problems.append("(hh').f = h.(h'.f)")
                return problems
    return problems


def smash_product(b: StructuredAlgebra, h: StructuredAlgebra, action: Sparse | None = None,
                  name: str = "", check: bool = True, **meta) -> LazySmash:
    if b.hopf is None or h.hopf is None:
        raise AxiomError("smash product factors need Hopf data")
    if action is None:
        action = trivial_action(b, h)
    if check:
        problems = check_module_algebra(b, h, action)
        if problems:
            raise AxiomError("action is not a module-algebra action: " + ", ".join(problems))
    return LazySmash(b, h, action, name, meta)
