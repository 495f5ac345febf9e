"""Finite fields F_{p^e} with elements encoded as small integers.

An element sum_i d_i w^i (w a root of the fixed modulus) is stored as the
integer code sum_i d_i p^i.  Prime-field elements are therefore their own
codes, so F_p data embeds into every extension without conversion.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

# Monic irreducible moduli, low degree first, leading 1 omitted.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (7, 4): (3, 4, 5, 0),
}

PRIMES = (2, 3, 5, 7)
MAX_DIM = 4096


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    num = list(num)
    inv = pow(den[-1], p - 2, p)
    while len(num) >= len(den):
        c = num[-1] * inv % p
        shift = len(num) - len(den)
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - c * d) % p
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return num


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Brute-force factor search: no monic factor of degree 1..e//2."""
    full = list(modulus) + [1]
    e = len(modulus)
    for deg in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=deg):
            if not _poly_mod(full, list(tail) + [1], p):
                return False
    return True


class GF:
    """The field F_{p^e}; arithmetic acts elementwise on integer code arrays."""

    def __init__(self, p: int, e: int = 1):
        if p not in PRIMES:
            raise FieldError(f"unsupported characteristic {p}")
        if not 1 <= e <= 4:
            raise FieldError(f"extension degree {e} outside 1..4")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = MODULI[(p, e)] if e > 1 else (0,)
        if e > 1:
            if not is_irreducible(self.modulus, p):
                raise FieldError(f"modulus for F_{p}^{e} is reducible")
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.e})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def descriptor(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus) + [1]}

    # -- code <-> digit conversion ------------------------------------------
    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // self.p**i) % self.p for i in range(self.e)])

    def undigits(self, d) -> np.ndarray:
        out = np.zeros(d.shape[1:], dtype=np.int64)
        for i in range(self.e):
            out += (d[i] % self.p) * self.p**i
        return out

    def _reduction_rows(self) -> np.ndarray:
        # red[t] = coordinates of w^t, 0 <= t <= 2e-2
        e, p = self.e, self.p
        rows = []
        cur = [0] * e
        cur[0] = 1
        for _ in range(2 * e - 1):
            rows.append(list(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c - top * m) % p for c, m in zip(cur, self.modulus)]
        return np.array(rows, dtype=np.int64)

    def _build_tables(self):
        q = self.q
        codes = np.arange(q)
        d = self.digits(codes)
        self.add_table = self.undigits(d[:, :, None] + d[:, None, :])
        self.neg_table = self.undigits(-d)
        self._red = self._reduction_rows()
        prod = np.zeros((2 * self.e - 1, q, q), dtype=np.int64)
        for i in range(self.e):
            for j in range(self.e):
                prod[i + j] += d[i][:, None] * d[j][None, :]
        coords = np.einsum("tc,tab->cab", self._red, prod)
        self.mul_table = self.undigits(coords)
        self.inv_table = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_table[a] = int(np.nonzero(self.mul_table[a] == 1)[0][0])

    # -- elementwise arithmetic ---------------------------------------------
    def add(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + b) % self.p
        return self.add_table[a, b]

    def neg(self, a):
        if self.e == 1:
            return (-np.asarray(a)) % self.p
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a) * b) % self.p
        return self.mul_table[a, b]

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return int(self.inv_table[a])

    def power(self, a: int, n: int) -> int:
        out, base = 1, int(a)
        while n:
            if n & 1:
                out = int(self.mul(out, base))
            base = int(self.mul(base, base))
            n >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    def frobenius(self, a):
        """x -> x^p, elementwise."""
        if self.e == 1:
            return np.asarray(a) % self.p
        out = np.asarray(a)
        res = out
        for _ in range(self.p - 1):
            res = self.mul(res, out)
        return res

    # -- matrix arithmetic ----------------------------------------------------
    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            # float BLAS is exact: entries < 7, inner dim <= MAX_DIM
            return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % self.p
        da = self.digits(a).astype(np.float64)
        db = self.digits(b).astype(np.float64)
        parts = []
        for t in range(2 * self.e - 1):
            acc = None
            for i in range(max(0, t - self.e + 1), min(t, self.e - 1) + 1):
                term = da[i] @ db[t - i]
                acc = term if acc is None else acc + term
            parts.append(np.asarray(acc).astype(np.int64) % self.p)
        coords = np.einsum("tc,t...->c...", self._red, np.stack(parts))
        return self.undigits(coords)

    def dot(self, a, b) -> int:
        return int(self.matmul(np.asarray(a)[None, :], np.asarray(b)[:, None])[0, 0])

    def lincomb(self, coeffs, mats) -> np.ndarray:
        """sum_i coeffs[i] * mats[i] for code matrices."""
        out = None
        for c, m in zip(coeffs, mats):
            c = int(c)
            if c == 0:
                continue
            term = self.mul(c, np.asarray(m, dtype=np.int64))
            out = term if out is None else self.add(out, term)
        if out is None:
            return np.zeros_like(np.asarray(mats[0], dtype=np.int64))
        return out

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


@lru_cache(maxsize=None)
def field(p: int, e: int = 1) -> GF:
    return GF(p, e)
