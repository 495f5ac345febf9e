"""Minimal free resolutions over local algebras, Betti numbers, chain lifts and Carlson modules.

A free module A^b has basis index j*dim(A) + i for the i-th basis element in
the j-th summand.  A map of free left modules A^c -> A^b is stored as a
(b, c, dim A) array D with e_j -> sum_i D[i, j] e_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .algebra import AlgebraMorphism, StructuredAlgebra
from .field import GF
from .modules import (FDModule, _radical_generators, direct_sum, free_module, is_isomorphic, is_local, radical_image,
                      split_free, submodule, trivial_module)
from .smash import LazySmash, extend_bilinear, extend_linear

MAX_ALGEBRA_DIM = 512
MAX_MODULE_DIM = 128
MAX_LENGTH = 12


class CohomologyError(ValueError):
    pass


def _dense(a) -> StructuredAlgebra:
    return a.dense_realization() if isinstance(a, LazySmash) else a


def free_action(a: StructuredAlgebra, b: int, x, F: GF | None = None) -> np.ndarray:
    """Left multiplication by x on A^b (x may have coefficients in F)."""
    F = F or a.F
    left = extend_linear(a.left_matrix, x, F)
    return la.kron(la.identity(b), left, F)


def _map_columns(a: StructuredAlgebra, images: np.ndarray, b: int) -> np.ndarray:
    """k-linear matrix of the A-linear map A^c -> A^b sending e_j to images[:, j]."""
    n = a.dim
    cols = []
    for j in range(images.shape[1]):
        z = images[:, j].reshape(b, n)
        cols.append(np.concatenate([a.right_matrix(z[i]) for i in range(b)], axis=0))
    if not cols:
        return la.zeros(b * n, 0)
    return np.concatenate(cols, axis=1)


def minimal_generators(a: StructuredAlgebra, b: int, sub: np.ndarray) -> list[int]:
    """Columns of a submodule basis of A^b whose classes form a basis of N / rad(A) N."""
    F = a.F
    span = la.EchelonSpan(b * a.dim, F)
    for u in _radical_generators(a):
        if sub.shape[1]:
            span.add(F.matmul(free_action(a, b, u), sub).T)
    return span.add(sub.T) if sub.shape[1] else []


# -- resolutions -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FreeResolution:
    algebra: StructuredAlgebra
    module: FDModule
    betti: tuple[int, ...]
    cover: np.ndarray  # columns: the images in M of the generators of P_0
    differentials: tuple[np.ndarray, ...]  # D_n for n = 1..L, shape (b_{n-1}, b_n, dim A)
    linear: tuple[np.ndarray, ...]  # k-linear matrices: [eps_0, d_1, ..., d_L]
    kernels: tuple[np.ndarray, ...]  # bases of ker eps_0, ker d_1, ..., ker d_L

    @property
    def length(self) -> int:
        return len(self.betti) - 1

    def d(self, n: int) -> np.ndarray:
        return self.linear[n]

    def syzygy(self, n: int) -> FDModule:
        """Omega^n(M) as the image of d_n inside P_{n-1} (n >= 1)."""
        if n == 0:
            return self.module
        a = self.algebra
        free = free_module(a, self.betti[n - 1])
        return submodule(free, self.kernels[n - 1], f"Omega^{n}({self.module.name})")

    def to_json(self) -> dict:
        return {"algebra": self.algebra.name, "module": self.module.name, "betti": list(self.betti),
                "differentials": [d.tolist() for d in self.differentials]}


def minimal_resolution(a, m: FDModule | None = None, length: int = 8) -> FreeResolution:
    """Iterated projective covers of M over a local algebra."""
    a = _dense(a)
    if a.dim > MAX_ALGEBRA_DIM:
        raise la.DimensionGuard(f"resolutions over algebras of dim > {MAX_ALGEBRA_DIM}")
    if not 0 <= length <= MAX_LENGTH:
        raise la.DimensionGuard(f"resolution length must lie in 0..{MAX_LENGTH}")
    if not is_local(a):
        raise CohomologyError(f"{a.name} is not local")
    m = m if m is not None else trivial_module(a)
    if m.is_lazy:
        raise CohomologyError("resolve modules over the dense realization")
    if m.dim > MAX_MODULE_DIM:
        raise la.DimensionGuard(f"resolutions of modules of dim > {MAX_MODULE_DIM}")
    F, n = a.F, a.dim
    rad = radical_image(m)
    span = la.EchelonSpan(m.dim, F)
    if rad.shape[1]:
        span.add(rad.T)
    top = span.add(la.identity(m.dim))
    cover = la.identity(m.dim)[:, top]
    # eps_0(a_i e_j) = a_i m_j
    eps = np.concatenate([np.stack([F.matmul(m.full[i], cover[:, j]) for i in range(n)], axis=1)
                          for j in range(len(top))], axis=1) if top else la.zeros(m.dim, 0)
    betti = [len(top)]
    linear = [eps]
    kernels = [la.kernel_basis(eps, F) if top else la.zeros(0, 0)]
    diffs = []
    for _ in range(length):
        b_prev = betti[-1]
        ker = kernels[-1]
        gens = minimal_generators(a, b_prev, ker)
        images = ker[:, gens] if gens else la.zeros(b_prev * n, 0)
        diffs.append(images.reshape(b_prev, n, len(gens)).transpose(0, 2, 1).copy())
        lin = _map_columns(a, images, b_prev)
        linear.append(lin)
        kernels.append(la.kernel_basis(lin, F) if gens else la.zeros(0, 0))
        betti.append(len(gens))
    return FreeResolution(a, m, tuple(betti), cover, tuple(diffs), tuple(linear), tuple(kernels))


def resolution_problems(res: FreeResolution) -> list[str]:
    """d o d = 0, exactness, and minimality (entries in the augmentation ideal)."""
    a, F = res.algebra, res.algebra.F
    problems = []
    for n in range(1, res.length + 1):
        if np.any(F.matmul(res.linear[n - 1], res.linear[n])):
            problems.append(f"d_{n - 1} d_{n} != 0")
        if la.rank(res.linear[n], F) != res.kernels[n - 1].shape[1]:
            problems.append(f"not exact at P_{n - 1}")
        D = res.differentials[n - 1]
        if D.size and np.any(F.matmul(D.reshape(-1, a.dim), a.augmentation[:, None])):
            problems.append(f"d_{n} has an entry outside the augmentation ideal")
    return problems


def poincare_series(a, length: int = 8) -> list[int]:
    return list(minimal_resolution(a, None, length).betti)


@dataclass(frozen=True)
class GrowthReport:
    betti: tuple[int, ...]
    degree: int | None
    method: str

    @property
    def complexity(self) -> int | None:
        """Polynomial growth degree plus one: the rate-of-growth shadow of a Krull dimension."""
        return None if self.degree is None else self.degree + 1

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "degree": self.degree, "complexity": self.complexity,
                "method": self.method}


def growth_degree(betti) -> GrowthReport:
    """Smallest d whose (d+1)-st finite differences vanish on the tail; log-log fit otherwise."""
    b = np.asarray(betti, dtype=np.int64)
    tail = b[len(b) // 3:] if len(b) >= 6 else b
    diffs = tail
    for d in range(len(tail) - 1):
        diffs = np.diff(diffs)
        if len(diffs) >= 2 and not diffs.any():
            return GrowthReport(tuple(map(int, b)), d, "finite differences")
    n = np.arange(1, len(b))
    ok = b[1:] > 0
    if ok.sum() < 3:
        return GrowthReport(tuple(map(int, b)), None, "insufficient data")
    slope = np.polyfit(np.log(n[ok]), np.log(b[1:][ok]), 1)[0]
    return GrowthReport(tuple(map(int, b)), int(round(slope)), "log-log fit")


def kunneth(b1, b2) -> list[int]:
    """Betti numbers of a tensor product of algebras from those of the factors."""
    return [sum(b1[i] * b2[n - i] for i in range(n + 1)) for n in range(min(len(b1), len(b2)))]


# -- classes and chain lifts ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CohomologyClass:
    """A cocycle Hom(P_n, k): the value on each generator of P_n."""

    resolution: FreeResolution
    degree: int
    values: np.ndarray
    F: GF = dc_field(default=None)

    def __post_init__(self):
        if self.F is None:
            object.__setattr__(self, "F", self.resolution.algebra.F)
        if len(self.values) != self.resolution.betti[self.degree]:
            raise CohomologyError("cocycle length differs from the Betti number")

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def scaled(self, c: int) -> "CohomologyClass":
        return CohomologyClass(self.resolution, self.degree, self.F.mul(c, self.values), self.F)

    def evaluate(self, v) -> int:
        """zeta(v) for v in P_n (coefficients in self.F): sum_j zeta_j eps(v_j)."""
        res = self.resolution
        blocks = np.asarray(v, dtype=np.int64).reshape(res.betti[self.degree], res.algebra.dim)
        eps = self.F.matmul(blocks, res.algebra.augmentation[:, None])[:, 0]
        return self.F.dot(eps, self.values)


def class_basis(res: FreeResolution, n: int) -> list[CohomologyClass]:
    return [CohomologyClass(res, n, row) for row in la.identity(res.betti[n])]


def all_nonzero_classes(res: FreeResolution, n: int, normalized: bool = True) -> list[CohomologyClass]:
    """Every nonzero class of H^n over the prime field (up to scalars when normalized)."""
    F, b = res.algebra.F, res.betti[n]
    out = []
    for code in range(1, F.p**b):
        vals = np.array([(code // F.p**i) % F.p for i in range(b)], dtype=np.int64)
        if normalized and vals[np.nonzero(vals)[0][0]] != 1:
            continue
        out.append(CohomologyClass(res, n, vals))
    return out


def _images_of_generators(res: FreeResolution, n: int) -> np.ndarray:
    """Columns: d_n(e_j) in P_{n-1}."""
    b_prev = res.betti[n - 1]
    D = res.differentials[n - 1]
    return D.transpose(0, 2, 1).reshape(b_prev * res.algebra.dim, res.betti[n])


def chain_lift(src: FreeResolution, tgt: FreeResolution, phi: np.ndarray, K: GF, degree: int,
               rng: np.random.Generator | None = None) -> list[np.ndarray]:
    """Lift phi: source -> target (matrix over K) to f_n: Q_n -> phi^* P_n for n <= degree.

    Returns the images f_n(e_j) as columns of a (b^P_n dim A) x b^Q_n matrix over K.  With
    ``rng`` given, each stage adds a random cycle, giving a different lift.
    """
    A, B = tgt.algebra, src.algebra
    if src.module.dim != 1 or tgt.module.dim != 1:
        raise CohomologyError("chain lifts are formed between resolutions of the trivial module")
    n_a = A.dim
    phi = np.asarray(phi, dtype=np.int64)

    def act(bvec, b, v):
        """phi(bvec) acting on v in P (A^b), over K."""
        x = K.matmul(phi, bvec[:, None])[:, 0] if bvec.ndim else bvec
        return K.matmul(free_action(A, b, x, K), v)

    lifts = []
    # f_0(e_j): a preimage of the cover image, here the unit of A in each summand
    f0 = la.zeros(tgt.betti[0] * n_a, src.betti[0])
    for j in range(src.betti[0]):
        target = src.cover[0, j]
        f0[: n_a, j] = K.mul(int(target), A.unit)
    lifts.append(f0)
    for n in range(1, degree + 1):
        imgs = _images_of_generators(src, n)  # columns in Q_{n-1} over F_p
        b_src_prev = src.betti[n - 1]
        prev = lifts[-1]
        rhs = la.zeros(tgt.betti[n - 1] * n_a, src.betti[n])
        for j in range(src.betti[n]):
            blocks = imgs[:, j].reshape(b_src_prev, B.dim)
            acc = la.zeros(tgt.betti[n - 1] * n_a, 1)[:, 0]
            for i in range(b_src_prev):
                if blocks[i].any():
                    acc = K.add(acc, act(blocks[i], tgt.betti[n - 1], prev[:, i]))
            rhs[:, j] = acc
        sol = la.solve(tgt.linear[n], rhs, K)
        if sol is None:
            raise CohomologyError(f"no chain lift in degree {n}")
        if rng is not None and tgt.kernels[n].shape[1]:
            noise = K.matmul(tgt.kernels[n], K.random(rng, (tgt.kernels[n].shape[1], sol.shape[1])))
            sol = K.add(sol, noise)
        lifts.append(sol)
    return lifts


def induced_matrix(tgt: FreeResolution, lift: np.ndarray, n: int, K: GF) -> np.ndarray:
    """Matrix H^n(target) -> H^n(source): entry [j, i] = eps of block i of f_n(e_j)."""
    A = tgt.algebra
    blocks = lift.T.reshape(lift.shape[1], tgt.betti[n], A.dim)
    return K.matmul(blocks, A.augmentation[:, None])[..., 0] if blocks.size else la.zeros(lift.shape[1], tgt.betti[n])


def restriction_on_cohomology(phi: AlgebraMorphism, degree: int, check_lifts: bool = True) -> list[np.ndarray]:
    """Matrices H^n(target, k) -> H^n(source, k) for n <= degree."""
    if degree > 8:
        raise la.DimensionGuard("restriction maps are computed through degree 8")
    src_alg, tgt_alg = _dense(phi.source), _dense(phi.target)
    src = minimal_resolution(src_alg, None, degree)
    tgt = minimal_resolution(tgt_alg, None, degree)
    K = tgt_alg.F
    lifts = chain_lift(src, tgt, phi.dense(), K, degree)
    mats = [induced_matrix(tgt, lifts[n], n, K) for n in range(degree + 1)]
    if check_lifts:
        other = chain_lift(src, tgt, phi.dense(), K, degree, np.random.default_rng(1))
        for n in range(degree + 1):
            if not np.array_equal(mats[n], induced_matrix(tgt, other[n], n, K)):
                raise CohomologyError(f"induced map depends on the lift in degree {n}")
    return mats


# -- Yoneda products -----------------------------------------------------------------------

def lift_cocycle(zeta: CohomologyClass, steps: int, rng: np.random.Generator | None = None) -> list[np.ndarray]:
    """Chain map f_k: P_{n+k} -> P_k over zeta: P_n -> k, for k <= steps (columns f_k(e_j))."""
    res, n = zeta.resolution, zeta.degree
    if n + steps > res.length:
        raise CohomologyError(f"resolution of length {res.length} is too short for degree {n + steps}")
    A, F = res.algebra, zeta.F
    f0 = la.zeros(res.betti[0] * A.dim, res.betti[n])
    for j in range(res.betti[n]):
        f0[: A.dim, j] = F.mul(int(zeta.values[j]), A.unit)
    lifts = [f0]
    for k in range(1, steps + 1):
        imgs = _images_of_generators(res, n + k)
        prev = lifts[-1]
        b_prev = res.betti[k - 1]
        rhs = la.zeros(b_prev * A.dim, res.betti[n + k])
        for j in range(res.betti[n + k]):
            blocks = imgs[:, j].reshape(res.betti[n + k - 1], A.dim)
            acc = np.zeros(b_prev * A.dim, dtype=np.int64)
            for i in np.nonzero(blocks.any(axis=1))[0]:
                acc = F.add(acc, F.matmul(free_action(A, b_prev, blocks[i]), prev[:, i]))
            rhs[:, j] = acc
        sol = la.solve(res.linear[k], rhs, F)
        if sol is None:
            raise CohomologyError(f"cocycle does not lift in degree {k}")
        if rng is not None and res.kernels[k].shape[1]:
            sol = F.add(sol, F.matmul(res.kernels[k], F.random(rng, (res.kernels[k].shape[1], sol.shape[1]))))
        lifts.append(sol)
    return lifts


def yoneda_product(eta: CohomologyClass, zeta: CohomologyClass) -> CohomologyClass:
    """eta . zeta in degree deg(eta) + deg(zeta): eta composed with the lift of zeta."""
    if eta.resolution is not zeta.resolution:
        raise CohomologyError("classes live on different resolutions")
    res, m = zeta.resolution, eta.degree
    f = lift_cocycle(zeta, m)[m]
    vals = np.array([eta.evaluate(f[:, j]) for j in range(f.shape[1])], dtype=np.int64)
    return CohomologyClass(res, zeta.degree + m, vals, zeta.F)


def power(zeta: CohomologyClass, k: int) -> CohomologyClass:
    out = zeta
    for _ in range(k - 1):
        out = yoneda_product(zeta, out)
    return out


@dataclass(frozen=True)
class NilpotencyReport:
    """Kernel classes of a restriction map and the first power found to vanish."""

    degree_bound: int
    kernel_dims: dict
    vanishing: dict

    @property
    def nilpotent_up_to_bound(self) -> bool:
        return all(v is not None for v in self.vanishing.values())

    def to_json(self) -> dict:
        return {"degree_bound": self.degree_bound, "kernel_dims": self.kernel_dims,
                "vanishing_power": {k: v for k, v in self.vanishing.items()},
                "nilpotent_up_to_bound": self.nilpotent_up_to_bound}


def kernel_nilpotency(phi: AlgebraMorphism, degree: int, bound: int | None = None) -> NilpotencyReport:
    """For kernel classes of phi^* in degrees 1..degree, the least k with zeta^k = 0 in degrees <= bound."""
    bound = bound or 2 * degree
    mats = restriction_on_cohomology(phi, degree, check_lifts=False)
    res = minimal_resolution(_dense(phi.target), None, bound)
    F = res.algebra.F
    dims, vanish = {}, {}
    for n in range(1, degree + 1):
        ker = la.kernel_basis(mats[n], F)
        dims[n] = ker.shape[1]
        for c in range(ker.shape[1]):
            zeta = CohomologyClass(res, n, ker[:, c])
            found = None
            k, cur = 1, zeta
            while (k + 1) * n <= bound:
                cur = yoneda_product(zeta, cur)
                k += 1
                if cur.is_zero():
                    found = k
                    break
            vanish[f"{n}:{','.join(map(str, ker[:, c]))}"] = found
    return NilpotencyReport(bound, dims, vanish)


# -- pullback along K[t]/t^p -----------------------------------------------------------------

def truncated_line(p: int) -> StructuredAlgebra:
    """k[t]/t^p in the monomial basis 1, t, ..., t^{p-1}."""
    from .kernels import GroupSchemeSpec, coordinate_algebra
    return coordinate_algebra(GroupSchemeSpec("Ga", p), 1)


def line_image_matrix(a: StructuredAlgebra, x, K: GF) -> np.ndarray:
    """Columns x^0, ..., x^{p-1}: the map K[t]/t^p -> A_K, t -> x."""
    cols = [a.unit % a.p]
    for _ in range(1, a.p):
        cols.append(extend_bilinear(a.mul, cols[-1], x, K))
    return np.stack(cols, axis=1)


def pullback_class(zeta: CohomologyClass, x, K: GF, check_lifts: bool = True) -> int:
    """The value in H^n(K[t]/t^p, K) = K of zeta pulled back along t -> x."""
    res = zeta.resolution
    a = res.algebra
    n = zeta.degree
    if not zeta.values.any():
        return 0
    line = minimal_resolution(truncated_line(a.p), None, n)
    phi = line_image_matrix(a, x, K)
    lifts = chain_lift(line, res, phi, K, n)
    kz = CohomologyClass(res, n, zeta.values, K)
    value = kz.evaluate(lifts[n][:, 0])
    if check_lifts:
        other = chain_lift(line, res, phi, K, n, np.random.default_rng(7))
        if kz.evaluate(other[n][:, 0]) != value:
            raise CohomologyError("pullback depends on the chain lift")
    return value


# -- Carlson modules -------------------------------------------------------------------------

def representing_map(zeta: CohomologyClass) -> tuple[FDModule, np.ndarray]:
    """Omega^n(k) and the covector (on its basis) of the map Omega^n(k) -> k representing zeta."""
    res, n = zeta.resolution, zeta.degree
    if n < 1:
        raise CohomologyError("representing maps start in degree 1")
    omega = res.syzygy(n)
    basis = res.kernels[n - 1]
    pre = la.solve(res.linear[n], basis, res.algebra.F)
    cov = np.array([zeta.evaluate(pre[:, i]) for i in range(basis.shape[1])], dtype=np.int64)
    return omega, cov


def carlson_module(zeta: CohomologyClass, allow_zero: bool = False) -> FDModule:
    """L_zeta: the kernel of the map Omega^n(k) -> k representing zeta.

    A zero class has no surjective representative on Omega^n(k); with
    ``allow_zero`` it is represented on Omega^n(k) (+) P_0 by (0, eps), whose
    kernel is Omega^n(k) (+) Omega^1(k).
    """
    res = zeta.resolution
    if zeta.degree % 2 and res.algebra.p != 2:
        raise CohomologyError("Carlson modules are formed for even-degree classes")
    if zeta.is_zero():
        if not allow_zero:
            raise CohomologyError("L_zeta is only formed for nonzero classes")
        return direct_sum(res.syzygy(zeta.degree), res.syzygy(1), f"L[0;{zeta.degree}]")
    omega, cov = representing_map(zeta)
    ker = la.kernel_basis(cov[None, :], omega.F)
    return submodule(omega, ker, f"L[{','.join(map(str, zeta.values))}]")


def splits_as(m: FDModule, core: FDModule) -> tuple[bool, int]:
    """Whether M = core (+) free, returning the free rank when it does."""
    c1, r1 = split_free(m)
    c2, r2 = split_free(core)
    if (m.dim - core.dim) % m.algebra.dim or m.dim < core.dim:
        return False, 0
    return is_isomorphic(c1, c2), (m.dim - core.dim) // m.algebra.dim


def restrict_class(zeta: CohomologyClass, phi: AlgebraMorphism, src_res: FreeResolution) -> CohomologyClass:
    """phi^*(zeta) expressed in the given resolution of the source."""
    tgt = zeta.resolution
    K = tgt.algebra.F
    lifts = chain_lift(src_res, tgt, phi.dense(), K, zeta.degree)
    mat = induced_matrix(tgt, lifts[zeta.degree], zeta.degree, K)
    return CohomologyClass(src_res, zeta.degree, K.matmul(mat, zeta.values[:, None])[:, 0])


def dense_morphism(phi: AlgebraMorphism) -> AlgebraMorphism:
    """The same map with lazy endpoints replaced by their dense realizations."""
    return AlgebraMorphism(_dense(phi.source), _dense(phi.target), phi.dense(), None, phi.name)


__all__ = [
    "FreeResolution", "minimal_resolution", "resolution_problems", "poincare_series", "growth_degree",
    "GrowthReport", "kunneth", "CohomologyClass", "class_basis", "all_nonzero_classes", "chain_lift",
    "induced_matrix", "restriction_on_cohomology", "truncated_line", "line_image_matrix", "pullback_class",
    "representing_map", "carlson_module", "splits_as", "restrict_class", "dense_morphism",
    "lift_cocycle", "yoneda_product", "power", "NilpotencyReport", "kernel_nilpotency", "MAX_ALGEBRA_DIM",
    "MAX_MODULE_DIM", "MAX_LENGTH", "CohomologyError",
]
