"""Dense exact linear algebra over F_{p^e}.

Matrices are numpy int64 arrays of field codes (see :mod:`hopfsupport.field`);
every function takes the field explicitly.  Pivoting always takes the first
nonzero entry of a column.
"""

from __future__ import annotations

import numpy as np

from .field import GF, MAX_DIM


class NotNilpotentError(ValueError):
    pass


class DimensionGuard(ValueError):
    pass


def _guard(m: np.ndarray):
    if max(m.shape, default=0) > MAX_DIM:
        raise DimensionGuard(f"matrix of shape {m.shape} exceeds {MAX_DIM}")


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.zeros((n, n if m is None else m), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def row_reduce(m: np.ndarray, F: GF) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(m, dtype=np.int64, copy=True)
    _guard(a)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = F.inv(a[r, c])
        if inv != 1:
            a[r] = F.mul(inv, a[r])
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = F.sub(a[hit], F.mul(col[hit][:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, F: GF) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(row_reduce(m, F)[1])


def kernel_basis(m, F: GF) -> np.ndarray:
    """Columns form a basis of {v : m v = 0}."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return identity(cols)
    red, pivots = row_reduce(m, F)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = F.neg(red[i, f])
    return basis


def image_basis(m, F: GF) -> np.ndarray:
    """Columns form a basis of the column space (taken from m's own columns)."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, pivots = row_reduce(m, F)
    return m[:, pivots]


def solve(a, b, F: GF) -> np.ndarray | None:
    """One solution x of a x = b (b a vector or matrix), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    red, pivots = row_reduce(aug, F)
    if any(pc >= n for pc in pivots):
        return None
    x = zeros(n, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = red[i, n:]
    return x[:, 0] if vec else x


def inverse(a, F: GF) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    red, pivots = row_reduce(np.concatenate([a, identity(n)], axis=1), F)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return red[:, n:]


def matpow(a, k: int, F: GF) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    out = identity(a.shape[0])
    base = a
    while k:
        if k & 1:
            out = F.matmul(out, base)
        k >>= 1
        if k:
            base = F.matmul(base, base)
    return out


def kron(a, b, F: GF) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if F.e == 1:
        return np.kron(a, b) % F.p
    return F.mul(np.kron(a, np.ones_like(b)), np.kron(np.ones_like(a), b))


def rank_sequence(n, p: int, F: GF) -> list[int]:
    """[rank n^0, rank n^1, ..., rank n^p]; raises unless n^p = 0."""
    n = np.asarray(n, dtype=np.int64)
    d = n.shape[0]
    if n.shape != (d, d):
        raise ValueError("Jordan type of a non-square matrix")
    ranks = [d]
    power = identity(d)
    for _ in range(p):
        power = F.matmul(power, n)
        ranks.append(rank(power, F) if ranks[-1] else 0)
    if ranks[-1] != 0:
        raise NotNilpotentError(f"matrix is not {p}-nilpotent")
    return ranks


def jordan_type(n, p: int, F: GF) -> list[int]:
    """Block sizes, weakly decreasing, of a p-nilpotent operator."""
    ranks = rank_sequence(n, p, F)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, p + 1)]
    parts: list[int] = []
    for size in range(p, 0, -1):
        exactly = at_least[size - 1] - (at_least[size] if size < p else 0)
        parts.extend([size] * exactly)
    return parts


def is_free_over_truncated_line(n, p: int, F: GF) -> bool:
    """True iff K[t]/t^p acting through n is free (every block has size p)."""
    n = np.asarray(n, dtype=np.int64)
    d = n.shape[0]
    if d == 0:
        return True
    if d % p:
        if not np.any(matpow(n, p, F)):
            return False
        raise NotNilpotentError(f"matrix is not {p}-nilpotent")
    top = matpow(n, p - 1, F)
    if np.any(F.matmul(top, n)):
        raise NotNilpotentError(f"matrix is not {p}-nilpotent")
    return rank(top, F) == d // p


def dominates(a: list[int], b: list[int]) -> bool:
    """Dominance order a >= b for partitions of the same integer."""
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            return False
    return True


class EchelonSpan:
    """Growing subspace kept in reduced row echelon form (rows span it)."""

    def __init__(self, n: int, F: GF):
        self.F = F
        self.n = n
        self.rows = zeros(0, n)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Residues of the row vectors modulo the span."""
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if not self.pivots:
            return vecs.copy()
        return self.F.sub(vecs, self.F.matmul(vecs[:, self.pivots], self.rows))

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def add(self, vecs: np.ndarray) -> list[int]:
        """Add row vectors; return the indices (in order) that enlarged the span."""
        res = self.reduce(vecs)
        if not res.any():
            return []
        _, fresh = row_reduce(res.T, self.F)
        red, piv = row_reduce(res[fresh], self.F)
        red = red[: len(piv)]
        if self.pivots:
            self.rows = self.F.sub(self.rows, self.F.matmul(self.rows[:, piv], red))
        self.rows = np.concatenate([self.rows, red], axis=0)
        self.pivots = self.pivots + list(piv)
        return list(fresh)

    def basis(self) -> np.ndarray:
        """Spanning rows as columns."""
        return self.rows.T.copy()
