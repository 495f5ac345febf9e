"""Sparse polynomials in truncated (x^N = 0) or cyclic (x^N = 1) variables over F_p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Ring:
    names: tuple[str, ...]
    bounds: tuple[int, ...]
    cyclic: tuple[bool, ...]
    p: int

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def dim(self) -> int:
        return int(np.prod(self.bounds))

    def tensor(self, other: "Ring", suffix: str = "'") -> "Ring":
        return Ring(self.names + tuple(n + suffix for n in other.names), self.bounds + other.bounds,
                    self.cyclic + other.cyclic, self.p)

    def var(self, i: int) -> "Poly":
        e = np.zeros((1, self.nvars), dtype=np.int64)
        e[0, i] = 1
        return Poly(self, e, np.ones(1, dtype=np.int64))

    def const(self, c: int) -> "Poly":
        if c % self.p == 0:
            return self.zero()
        return Poly(self, np.zeros((1, self.nvars), dtype=np.int64), np.array([c % self.p]))

    def zero(self) -> "Poly":
        return Poly(self, np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0, dtype=np.int64))

    def monomial(self, exps) -> "Poly":
        return Poly(self, np.array([exps], dtype=np.int64), np.ones(1, dtype=np.int64))

    def index(self, exps: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple(np.asarray(exps).T), self.bounds)

    def exponents(self) -> np.ndarray:
        """All basis exponent vectors in index order."""
        return np.stack(np.unravel_index(np.arange(self.dim), self.bounds), axis=1)

    def label(self, exps) -> str:
        parts = []
        for n, e in zip(self.names, exps):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{int(e)}")
        return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class Poly:
    ring: Ring
    exps: np.ndarray
    coeffs: np.ndarray

    def _normalized(self, exps, coeffs) -> "Poly":
        r = self.ring
        bounds = np.array(r.bounds)
        cyc = np.array(r.cyclic)
        exps = np.where(cyc, exps % bounds, exps)
        keep = np.all(exps < bounds, axis=1)
        exps, coeffs = exps[keep], coeffs[keep]
        if len(coeffs) == 0:
            return r.zero()
        flat = np.ravel_multi_index(tuple(exps.T), r.bounds)
        uniq, inv = np.unique(flat, return_inverse=True)
        sums = np.bincount(inv, weights=coeffs.astype(np.float64)).astype(np.int64) % r.p
        nz = sums != 0
        out = np.stack(np.unravel_index(uniq[nz], r.bounds), axis=1).astype(np.int64)
        return Poly(r, out.reshape(-1, r.nvars), sums[nz])

    def __add__(self, other: "Poly") -> "Poly":
        return self._normalized(np.concatenate([self.exps, other.exps]),
                                np.concatenate([self.coeffs, other.coeffs]))

    def __neg__(self) -> "Poly":
        return Poly(self.ring, self.exps, (-self.coeffs) % self.ring.p)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c: int) -> "Poly":
        return self._normalized(self.exps, self.coeffs * c)

    def __mul__(self, other: "Poly") -> "Poly":
        if not len(self.coeffs) or not len(other.coeffs):
            return self.ring.zero()
        e = (self.exps[:, None, :] + other.exps[None, :, :]).reshape(-1, self.ring.nvars)
        c = (self.coeffs[:, None] * other.coeffs[None, :]).reshape(-1) % self.ring.p
        return self._normalized(e, c)

    def __pow__(self, n: int) -> "Poly":
        out = self.ring.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def vector(self) -> np.ndarray:
        v = np.zeros(self.ring.dim, dtype=np.int64)
        if len(self.coeffs):
            v[self.ring.index(self.exps)] = self.coeffs
        return v

    def as_dict(self) -> dict:
        return {tuple(map(int, e)): int(c) for e, c in zip(self.exps, self.coeffs)}

    def embed(self, target: Ring, positions) -> "Poly":
        """Rename variables into ``target`` (variable i goes to positions[i])."""
        e = np.zeros((len(self.coeffs), target.nvars), dtype=np.int64)
        for i, pos in enumerate(positions):
            e[:, pos] = self.exps[:, i]
        return Poly(target, e, self.coeffs.copy())._normalized(e, self.coeffs.copy())

    def substitute(self, images: list["Poly"]) -> "Poly":
        """Algebra map sending variable i to images[i]."""
        target = images[0].ring
        out = target.zero()
        for e, c in zip(self.exps, self.coeffs):
            term = target.const(int(c))
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** int(k)
            out = out + term
        return out


def poly_from_vector(ring: Ring, v) -> Poly:
    v = np.asarray(v)
    nz = np.nonzero(v)[0]
    exps = np.stack(np.unravel_index(nz, ring.bounds), axis=1).astype(np.int64).reshape(-1, ring.nvars)
    return Poly(ring, exps, v[nz].astype(np.int64) % ring.p)
