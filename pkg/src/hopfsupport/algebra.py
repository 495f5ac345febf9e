"""Finite-dimensional algebras over F_p given by sparse structure constants.

Structure tensors are stored as coordinate arrays sorted lexicographically,
which keeps serialization canonical.  Algebras are immutable after
construction and are only ever defined over the prime field; scalars from an
extension K enter through linear combinations of F_p matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg as la
from .field import GF, MAX_DIM

EXHAUSTIVE_DIM = 64
SAMPLED_TRIPLES = 10_000
SAMPLED_INDICES = 24
DEFAULT_SEED = 20240917


class AxiomError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Sparse:
    """Sparse tensor: coordinate rows ``idx`` (n x k) with nonzero ``val``."""

    idx: np.ndarray
    val: np.ndarray

    @classmethod
    def from_entries(cls, entries, arity: int, p: int) -> "Sparse":
        acc: dict[tuple, int] = {}
        for *key, v in entries:
            key = tuple(int(k) for k in key)
            acc[key] = (acc.get(key, 0) + int(v)) % p
        return cls.from_dict(acc, arity)

    @classmethod
    def from_dict(cls, acc: dict, arity: int) -> "Sparse":
        keys = sorted(k for k, v in acc.items() if v)
        idx = np.array(keys, dtype=np.int64).reshape(len(keys), arity)
        val = np.array([acc[k] for k in keys], dtype=np.int64)
        return cls(idx, val)

    @classmethod
    def from_arrays(cls, idx: np.ndarray, val: np.ndarray, shape: tuple, p: int) -> "Sparse":
        """Coalesce duplicate coordinates (summing mod p) and sort."""
        val = np.asarray(val, dtype=np.int64) % p
        if idx.shape[0] == 0:
            return cls(idx.reshape(0, len(shape)).astype(np.int64), val)
        flat = np.ravel_multi_index(tuple(idx.T), shape)
        uniq, inv = np.unique(flat, return_inverse=True)
        sums = np.bincount(inv, weights=val.astype(np.float64)).astype(np.int64) % p
        keep = sums != 0
        coords = np.stack(np.unravel_index(uniq[keep], shape), axis=1).astype(np.int64)
        return cls(coords, sums[keep])

    @property
    def nnz(self) -> int:
        return len(self.val)

    def dense(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=np.int64)
        if self.nnz:
            out[tuple(self.idx.T)] = self.val
        return out

    def entries(self) -> list[list[int]]:
        return [list(map(int, r)) + [int(v)] for r, v in zip(self.idx, self.val)]

    def permuted(self, order: Sequence[int]) -> "Sparse":
        idx = self.idx[:, list(order)]
        key = np.lexsort(idx.T[::-1]) if len(idx) else np.arange(0)
        return Sparse(idx[key], self.val[key])

    def equals(self, other: "Sparse") -> bool:
        return (self.idx.shape == other.idx.shape and np.array_equal(self.idx, other.idx)
                and np.array_equal(self.val, other.val))


def _accumulate(index: np.ndarray, weights: np.ndarray, size: int, p: int) -> np.ndarray:
    if index.size == 0:
        return np.zeros(size, dtype=np.int64)
    return np.bincount(index, weights=weights.astype(np.float64), minlength=size).astype(np.int64) % p


@dataclass(frozen=True, eq=False)
class HopfData:
    """Coproduct (i -> sum v b_j (x) b_k), counit and antipode (columns S(b_i))."""

    coproduct: Sparse
    counit: np.ndarray
    antipode: np.ndarray | None = None
    p: int = 0

    def co_opposite(self) -> "HopfData":
        anti = self.antipode
        if anti is not None:
            # antipode of the co-opposite is the inverse antipode
            anti = _inverse_or_none(anti, self.p)
        return HopfData(self.coproduct.permuted([0, 2, 1]), self.counit, anti, self.p)

    def delta_dense(self, dim: int) -> np.ndarray:
        return self.coproduct.dense((dim, dim, dim))


def _inverse_or_none(m, p):
    try:
        return la.inverse(m, GF(p))
    except ValueError:
        return None


def make_hopf(coproduct: Sparse, counit, antipode, p: int) -> HopfData:
    return HopfData(coproduct, np.asarray(counit, dtype=np.int64) % p,
                    None if antipode is None else np.asarray(antipode, dtype=np.int64) % p, p)


def co_opposite(hd: HopfData) -> HopfData:
    """flip o Delta; an involution on the stored tensors."""
    return hd.co_opposite()


@dataclass(frozen=True, eq=False)
class StructuredAlgebra:
    """Associative unital F_p-algebra with basis, sparse structure tensor, unit and augmentation."""

    F: GF
    labels: tuple[str, ...]
    mult: Sparse
    unit: np.ndarray
    augmentation: np.ndarray
    hopf: HopfData | None = None
    generators: tuple[tuple[str, np.ndarray], ...] = ()
    name: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.dim > MAX_DIM:
            raise la.DimensionGuard(f"algebra dimension {self.dim} exceeds {MAX_DIM}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def p(self) -> int:
        return self.F.p

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def element(self, label: str) -> np.ndarray:
        return self.basis(self.labels.index(label))

    def generator(self, name: str) -> np.ndarray:
        return dict(self.generators)[name]

    # -- multiplication ------------------------------------------------------
    def mul(self, x, y) -> np.ndarray:
        i, j, k = self.mult.idx.T if self.mult.nnz else (np.zeros(0, int),) * 3
        w = np.asarray(x)[i] * np.asarray(y)[j] * self.mult.val
        return _accumulate(k, w, self.dim, self.p)

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        if not self.mult.nnz:
            return la.zeros(self.dim)
        i, j, k = self.mult.idx.T
        w = np.asarray(x)[i] * self.mult.val
        return _accumulate(k * self.dim + j, w, self.dim**2, self.p).reshape(self.dim, self.dim)

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of x -> x y."""
        if not self.mult.nnz:
            return la.zeros(self.dim)
        i, j, k = self.mult.idx.T
        w = np.asarray(y)[j] * self.mult.val
        return _accumulate(k * self.dim + i, w, self.dim**2, self.p).reshape(self.dim, self.dim)

    def power(self, x, n: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def dense_tensor(self) -> np.ndarray:
        return self.mult.dense((self.dim,) * 3)

    def is_commutative(self) -> bool:
        return self.mult.equals(self.mult.permuted([1, 0, 2]))

    def with_hopf(self, hopf: HopfData | None) -> "StructuredAlgebra":
        return StructuredAlgebra(self.F, self.labels, self.mult, self.unit, self.augmentation,
                                 hopf, self.generators, self.name, dict(self.meta))

    def renamed(self, name: str, **meta) -> "StructuredAlgebra":
        return StructuredAlgebra(self.F, self.labels, self.mult, self.unit, self.augmentation,
                                 self.hopf, self.generators, name, {**self.meta, **meta})

    # -- structure -----------------------------------------------------------
    def augmentation_ideal_basis(self) -> np.ndarray:
        return la.kernel_basis(self.augmentation[None, :], self.F)

    def _radical_multipliers(self) -> list[np.ndarray]:
        # nonempty words in u_g = g - eps(g) span the augmentation ideal when the generators
        # generate the algebra, so left multiplication by the u_g controls every power of it
        if self.generators:
            us = [(v - int(self.augmentation.dot(v) % self.p) * self.unit) % self.p for _, v in self.generators]
        else:
            rad = self.augmentation_ideal_basis()
            us = [rad[:, k] for k in range(rad.shape[1])]
        return [self.left_matrix(u) for u in us]

    def nilpotency_degree(self) -> int:
        """Least n with (augmentation ideal)^n = 0; raises AxiomError if it is not nilpotent."""
        mats = self._radical_multipliers()
        span = self.augmentation_ideal_basis()
        n = 1
        while span.shape[1]:
            acc = la.EchelonSpan(self.dim, self.F)
            for m in mats:
                acc.add(self.F.matmul(m, span).T)
            nxt = acc.basis()
            if nxt.shape[1] == span.shape[1]:
                raise AxiomError(f"{self.name}: augmentation ideal is not nilpotent")
            span = nxt
            n += 1
        return n

    def socle_basis(self) -> np.ndarray:
        """Left socle: {a : r a = 0 for r in the augmentation ideal}."""
        mats = self._radical_multipliers()
        if not mats:
            return la.identity(self.dim)
        return la.kernel_basis(np.concatenate(mats, axis=0), self.F)


def algebra_from_table(F: GF, labels, table: dict, unit, augmentation, **kw) -> StructuredAlgebra:
    """Build from {(i, j): {k: c}} products."""
    entries = [(i, j, k, c) for (i, j), prod in table.items() for k, c in prod.items()]
    mult = Sparse.from_entries(entries, 3, F.p)
    return StructuredAlgebra(F, tuple(labels), mult, np.asarray(unit, dtype=np.int64),
                             np.asarray(augmentation, dtype=np.int64), **kw)


# -- axiom checks ---------------------------------------------------------------

def _basis_triples(dim: int, rng: np.random.Generator):
    if dim <= EXHAUSTIVE_DIM:
        return None
    return rng.integers(0, dim, size=(SAMPLED_TRIPLES, 3))


def check_algebra_axioms(a: StructuredAlgebra, seed: int = DEFAULT_SEED) -> list[str]:
    """Associativity, unit laws, and multiplicativity of the augmentation."""
    F, n = a.F, a.dim
    problems: list[str] = []
    triples = _basis_triples(n, np.random.default_rng(seed))
    if triples is None:
        c = a.dense_tensor()
        # (b_i b_j) b_k  vs  b_i (b_j b_k)
        left = F.matmul(c.reshape(n * n, n), c.reshape(n, n * n)).reshape(n, n, n, n)
        if not np.array_equal(left, _assoc_right(c, F)):
            problems.append("associativity")
    else:
        table = _product_rows(a)

        def times(x: dict, k: int, left: bool) -> dict:
            out: dict = {}
            for m, c in x.items():
                for o, w in table.get((m, k) if left else (k, m), {}).items():
                    out[o] = (out.get(o, 0) + c * w) % a.p
            return {o: w for o, w in out.items() if w}

        for i, j, k in triples:
            lhs = times(dict(table.get((int(i), int(j)), {})), int(k), True)
            rhs = times(dict(table.get((int(j), int(k)), {})), int(i), False)
            if lhs != rhs:
                problems.append(f"associativity (sampled, seed={seed})")
                break
    lu = a.left_matrix(a.unit)
    ru = a.right_matrix(a.unit)
    if not (np.array_equal(lu, la.identity(n)) and np.array_equal(ru, la.identity(n))):
        problems.append("unit")
    eps = a.augmentation
    if F.dot(eps, a.unit) != 1:
        problems.append("augmentation(unit)")
    i, j, k = a.mult.idx.T if a.mult.nnz else (np.zeros(0, int),) * 3
    # eps(b_i b_j) = eps(b_i) eps(b_j), as an n x n identity
    prod = _accumulate(i * n + j, eps[k] * a.mult.val, n * n, a.p).reshape(n, n)
    if not np.array_equal(prod, np.outer(eps, eps) % a.p):
        problems.append("augmentation multiplicative")
    return problems


def _assoc_right(c: np.ndarray, F: GF) -> np.ndarray:
    n = c.shape[0]
    # out[i,j,k,o] = sum_m c[j,k,m] c[i,m,o]
    jk_m = c.reshape(n * n, n)
    i_m_o = c.transpose(1, 0, 2).reshape(n, n * n)  # [m, (i,o)]
    r = F.matmul(jk_m, i_m_o).reshape(n, n, n, n)  # [j,k,i,o]
    return r.transpose(2, 0, 1, 3)


def check_hopf_axioms(a: StructuredAlgebra, seed: int = DEFAULT_SEED) -> list[str]:
    """Report of violated axioms (empty on success)."""
    problems = check_algebra_axioms(a, seed)
    hd = a.hopf
    if hd is None:
        return problems + ["no Hopf data"]
    F, n, p = a.F, a.dim, a.p
    rng = np.random.default_rng(seed)
    exhaustive = n <= EXHAUSTIVE_DIM
    if exhaustive:
        idx = range(n)
    else:
        # Delta is checked multiplicative, so generators plus a sample suffice
        gens = [int(np.nonzero(g)[0][0]) for _, g in a.generators if np.count_nonzero(g) == 1]
        idx = sorted(set(gens) | set(int(i) for i in rng.integers(0, n, size=SAMPLED_INDICES)))
    delta = _coproduct_rows(hd, n)

    def dvec(i):
        return delta.get(int(i), {})

    eps = hd.counit
    # coassociativity
    for i in idx:
        lhs: dict = {}
        rhs: dict = {}
        for (j, k), v in dvec(i).items():
            for (j1, j2), w in dvec(j).items():
                key = (j1, j2, k)
                lhs[key] = (lhs.get(key, 0) + v * w) % p
            for (k1, k2), w in dvec(k).items():
                key = (j, k1, k2)
                rhs[key] = (rhs.get(key, 0) + v * w) % p
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            problems.append("coassociativity")
            break
    # counit laws
    for i in idx:
        left = np.zeros(n, dtype=np.int64)
        right = np.zeros(n, dtype=np.int64)
        for (j, k), v in dvec(i).items():
            left[k] += v * eps[j]
            right[j] += v * eps[k]
        target = a.basis(i)
        if not (np.array_equal(left % p, target) and np.array_equal(right % p, target)):
            problems.append("counit")
            break
    if F.dot(eps, a.unit) != 1 or not _is_algebra_map_counit(a, eps):
        problems.append("counit multiplicative")
    # Delta is an algebra map
    if not _delta_multiplicative(a, delta, rng):
        problems.append("coproduct multiplicative")
    # antipode convolution m(S (x) id) Delta = u eps = m(id (x) S) Delta
    if hd.antipode is not None:
        S = hd.antipode
        for i in idx:
            left = np.zeros(n, dtype=np.int64)
            right = np.zeros(n, dtype=np.int64)
            for (j, k), v in dvec(i).items():
                left = (left + v * a.mul(S[:, j], a.basis(k))) % p
                right = (right + v * a.mul(a.basis(j), S[:, k])) % p
            target = (eps[i] * a.unit) % p
            if not (np.array_equal(left, target) and np.array_equal(right, target)):
                problems.append("antipode")
                break
    return problems


def _coproduct_rows(hd: HopfData, n: int) -> dict:
    rows: dict[int, dict] = {}
    for (i, j, k), v in zip(hd.coproduct.idx, hd.coproduct.val):
        rows.setdefault(int(i), {})[(int(j), int(k))] = int(v)
    return rows


def _is_algebra_map_counit(a: StructuredAlgebra, eps) -> bool:
    n = a.dim
    if not a.mult.nnz:
        return True
    i, j, k = a.mult.idx.T
    prod = _accumulate(i * n + j, eps[k] * a.mult.val, n * n, a.p).reshape(n, n)
    return np.array_equal(prod, np.outer(eps, eps) % a.p)


def _delta_multiplicative(a: StructuredAlgebra, delta: dict, rng) -> bool:
    n, p = a.dim, a.p
    if n <= EXHAUSTIVE_DIM:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        gens = [int(np.nonzero(g)[0][0]) for _, g in a.generators if np.count_nonzero(g) == 1]
        pairs = [(int(i), g) for g in gens for i in rng.integers(0, n, size=50)]
    table = _product_rows(a)

    def tensor_mul(x: dict, y: dict) -> dict:
        out: dict = {}
        for (x1, x2), v in x.items():
            for (y1, y2), w in y.items():
                for k1, c1 in table.get((x1, y1), {}).items():
                    for k2, c2 in table.get((x2, y2), {}).items():
                        key = (k1, k2)
                        out[key] = (out.get(key, 0) + v * w * c1 * c2) % p
        return {k: v for k, v in out.items() if v}

    for i, j in pairs:
        lhs: dict = {}
        for k, c in table.get((i, j), {}).items():
            for key, v in delta.get(k, {}).items():
                lhs[key] = (lhs.get(key, 0) + c * v) % p
        lhs = {k: v for k, v in lhs.items() if v}
        if lhs != tensor_mul(delta.get(i, {}), delta.get(j, {})):
            return False
    return True


def _product_rows(a: StructuredAlgebra) -> dict:
    cache = a.meta.get("_product_rows")
    if cache is not None:
        return cache
    rows: dict = {}
    for (i, j, k), v in zip(a.mult.idx, a.mult.val):
        rows.setdefault((int(i), int(j)), {})[int(k)] = int(v)
    a.meta["_product_rows"] = rows
    return rows


def basis_product(a: StructuredAlgebra, i: int, j: int) -> dict:
    return _product_rows(a).get((i, j), {})


# -- constructions ---------------------------------------------------------------

def dual_hopf(a: StructuredAlgebra, labels: Sequence[str] | None = None) -> StructuredAlgebra:
    """Linear dual in the dual basis: product = transpose of the coproduct and vice versa."""
    if a.hopf is None:
        raise AxiomError("dual_hopf needs Hopf data")
    hd = a.hopf
    n, p = a.dim, a.p
    mult = hd.coproduct.permuted([1, 2, 0])  # (j,k,i): delta_j * delta_k has b_i-coefficient
    cop = a.mult.permuted([2, 0, 1])
    anti = None if hd.antipode is None else hd.antipode.T.copy()
    dual = StructuredAlgebra(
        a.F,
        tuple(labels) if labels else tuple(f"d[{l}]" for l in a.labels),
        mult,
        hd.counit.copy(),
        a.unit.copy(),
        make_hopf(cop, a.unit.copy(), anti, p),
        (),
        f"dual({a.name})",
    )
    return dual


def tensor_algebra(a: StructuredAlgebra, b: StructuredAlgebra, name: str = "") -> StructuredAlgebra:
    """A (x) B with basis a_i (x) b_j at index i*dim(B)+j; Hopf data tensored when both present."""
    p, nb = a.p, b.dim
    shape = (a.dim * nb,) * 3
    if a.mult.nnz and b.mult.nnz:
        ia = np.repeat(a.mult.idx, b.mult.nnz, axis=0)
        ib = np.tile(b.mult.idx, (a.mult.nnz, 1))
        idx = ia * nb + ib
        val = np.repeat(a.mult.val, b.mult.nnz) * np.tile(b.mult.val, a.mult.nnz)
        mult = Sparse.from_arrays(idx, val, shape, p)
    else:
        mult = Sparse(np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.int64))
    labels = tuple(f"{x}#{y}" for x in a.labels for y in b.labels)
    unit = np.kron(a.unit, b.unit) % p
    aug = np.kron(a.augmentation, b.augmentation) % p
    hopf = None
    if a.hopf is not None and b.hopf is not None:
        hopf = tensor_hopf(a.hopf, b.hopf, a.dim, nb, p)
    gens = tuple((f"{g}#1", np.kron(v, b.unit) % p) for g, v in a.generators) + \
        tuple((f"1#{g}", np.kron(a.unit, v) % p) for g, v in b.generators)
    return StructuredAlgebra(a.F, labels, mult, unit, aug, hopf, gens, name or f"{a.name}(x){b.name}")


def tensor_hopf(ha: HopfData, hb: HopfData, na: int, nb: int, p: int) -> HopfData:
    ca, cb = ha.coproduct, hb.coproduct
    if ca.nnz and cb.nnz:
        ia = np.repeat(ca.idx, cb.nnz, axis=0)
        ib = np.tile(cb.idx, (ca.nnz, 1))
        idx = ia * nb + ib
        val = np.repeat(ca.val, cb.nnz) * np.tile(cb.val, ca.nnz)
        cop = Sparse.from_arrays(idx, val, (na * nb,) * 3, p)
    else:
        cop = Sparse(np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.int64))
    counit = np.kron(ha.counit, hb.counit) % p
    anti = None
    if ha.antipode is not None and hb.antipode is not None:
        anti = np.kron(ha.antipode, hb.antipode) % p
    return make_hopf(cop, counit, anti, p)


# -- morphisms -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """Linear map source -> target, stored either densely or as a Kronecker pair."""

    source: object
    target: object
    matrix: np.ndarray | None = None
    kron_factors: tuple[np.ndarray, np.ndarray] | None = None
    name: str = ""

    @property
    def F(self) -> GF:
        return self.source.F

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.matrix is not None:
            return self.F.matmul(self.matrix, x)
        a, b = self.kron_factors
        X = x.reshape(a.shape[1], b.shape[1])
        return self.F.matmul(self.F.matmul(a, X), b.T).reshape(-1)

    def dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        return la.kron(*self.kron_factors, self.F)

    def rank(self) -> int:
        if self.matrix is not None:
            return la.rank(self.matrix, self.F)
        a, b = self.kron_factors
        return la.rank(a, self.F) * la.rank(b, self.F)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def compose(self, other: "AlgebraMorphism", name: str = "") -> "AlgebraMorphism":
        """self o other."""
        if self.kron_factors and other.kron_factors:
            (a1, b1), (a2, b2) = self.kron_factors, other.kron_factors
            return AlgebraMorphism(other.source, self.target, None,
                                   (self.F.matmul(a1, a2), self.F.matmul(b1, b2)), name)
        return AlgebraMorphism(other.source, self.target, self.F.matmul(self.dense(), other.dense()),
                               None, name)

    def check(self, seed: int = DEFAULT_SEED) -> list[str]:
        """Multiplicative on basis pairs (generator pairs above the exhaustive range) and unital."""
        src, tgt = self.source, self.target
        problems = []
        if not np.array_equal(self.apply(src.unit), tgt.unit % self.F.p):
            problems.append("unit")
        if src.dim <= EXHAUSTIVE_DIM:
            elems = [src.basis(i) for i in range(src.dim)]
            pairs = [(x, y) for x in elems for y in elems]
        else:
            gens = [v for _, v in src.generators]
            rng = np.random.default_rng(seed)
            pairs = [(x, y) for x in gens for y in gens]
            pairs += [(src.basis(int(i)), g) for g in gens for i in rng.integers(0, src.dim, 8)]
        for x, y in pairs:
            if not np.array_equal(self.apply(src.mul(x, y)), tgt.mul(self.apply(x), self.apply(y))):
                problems.append("multiplicative")
                break
        return problems


def identity_morphism(a) -> AlgebraMorphism:
    return AlgebraMorphism(a, a, la.identity(a.dim), None, "id")


def contract(sp: Sparse, axis: int, mat: np.ndarray, shape: tuple, p: int) -> Sparse:
    """Change basis on one tensor leg: index j on ``axis`` becomes sum_a mat[a, j] e_a."""
    mat = np.asarray(mat, dtype=np.int64) % p
    a_idx, j_idx = np.nonzero(mat)
    order = np.argsort(j_idx, kind="stable")
    a_idx, j_idx = a_idx[order], j_idx[order]
    w = mat[a_idx, j_idx]
    n = mat.shape[1]
    starts = np.searchsorted(j_idx, np.arange(n), side="left")
    ends = np.searchsorted(j_idx, np.arange(n), side="right")
    key = sp.idx[:, axis]
    counts = (ends - starts)[key]
    total = int(counts.sum())
    rep = np.repeat(np.arange(sp.nnz), counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    pos = starts[key][rep] + offs
    idx = sp.idx[rep].copy()
    idx[:, axis] = a_idx[pos]
    return Sparse.from_arrays(idx, sp.val[rep] * w[pos], shape, p)
