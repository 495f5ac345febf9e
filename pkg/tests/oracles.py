"""Independent reference computations for the tests.

Everything here is plain Python over the prime field: lists of ints, no
numpy linear algebra and nothing imported from the package under test.
"""

from __future__ import annotations

from itertools import product


# -- row reduction mod p ----------------------------------------------------------

def _reduce(rows, p):
    """Reduced row echelon form and pivot columns."""
    rows = [[x % p for x in r] for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    piv, r = [], 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], piv


def rank(rows, p) -> int:
    return len(_reduce(rows, p)[1])


def kernel(mat, p):
    """Basis (as vectors) of {v : mat v = 0}, mat given as a list of rows."""
    n = len(mat[0]) if mat else 0
    red, piv = _reduce(mat, p)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(red, piv):
            v[pc] = -row[f] % p
        out.append(v)
    return out


def matvec(m, v, p):
    return [sum(a * b for a, b in zip(row, v)) % p for row in m]


def matmul(a, b, p):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]


def matpow(m, k, p):
    n = len(m)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = matmul(out, m, p)
    return out


# -- Jordan basis ------------------------------------------------------------------

def jordan_basis(n_mat, p):
    """Explicit Jordan chains of a nilpotent matrix over F_p.

    Returns the list of chains (top vector first).  Chains are chosen from the
    top level down: at level k the new tops complete ker N^{k-1} plus the images
    of longer chains to a basis of ker N^k.
    """
    n = len(n_mat)
    kers = [[]]
    k = 0
    while len(kers[-1]) < n:
        k += 1
        kers.append(kernel(matpow(n_mat, k, p), p))
        if k > n:
            raise ValueError("matrix is not nilpotent")
    height = k
    chains: list[list[list[int]]] = []
    for level in range(height, 0, -1):
        span = list(kers[level - 1])
        for ch in chains:
            depth = len(ch) - level  # N^depth(top) sits at this level
            if depth >= 0:
                span.append(ch[depth])
        base = rank(span, p)
        for v in kers[level]:
            if rank(span + [v], p) > base:
                span.append(v)
                base += 1
                chain = [v]
                for _ in range(level - 1):
                    chain.append(matvec(n_mat, chain[-1], p))
                chains.append(chain)
    return chains


def jordan_type_oracle(n_mat, p):
    """Jordan type read off a verified Jordan basis (descending block sizes)."""
    n = len(n_mat)
    chains = jordan_basis(n_mat, p)
    vecs = [v for ch in chains for v in ch]
    if len(vecs) != n or rank(vecs, p) != n:
        raise AssertionError("chains do not form a basis")
    for ch in chains:
        if any(matvec(n_mat, ch[i], p) != ch[i + 1] for i in range(len(ch) - 1)):
            raise AssertionError("chain is not a Jordan chain")
        if any(matvec(n_mat, ch[-1], p)):
            raise AssertionError("chain bottom is not killed")
    return sorted((len(ch) for ch in chains), reverse=True)


# -- binomials and divided powers -----------------------------------------------------

def lucas_binomial(n, k, p) -> int:
    """C(n, k) mod p digit by digit."""
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        num = den = 1
        for i in range(b):
            num *= a - i
            den *= i + 1
        out = out * (num // den) % p
        n //= p
        k //= p
    return out


# -- Heisenberg conjugation ------------------------------------------------------------

def _poly_mul(f, g, p):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % p
    return {e: c for e, c in out.items() if c}


def _poly_pow(f, k, p, nvars):
    out = {(0,) * nvars: 1}
    for _ in range(k):
        out = _poly_mul(out, f, p)
    return out


def heisenberg_conjugation(p, r, s):
    """Coefficients of a^i b^j c^k evaluated at x^-1 g x, g = (a,b,c) in G_(s), x = (u,v,w) in G_(r).

    For upper unitriangular matrices x^-1 g x = (a, b, c + a v - u b).
    Returns {(g_exps_out, x_exps, g_exps_in): coeff} keeping only exponents
    below p^s (g) and p^r (x).
    """
    qs, qr = p**s, p**r
    # variables ordered (a, b, c, u, v, w)
    a = {(1, 0, 0, 0, 0, 0): 1}
    b = {(0, 1, 0, 0, 0, 0): 1}
    c_new = {(0, 0, 1, 0, 0, 0): 1, (1, 0, 0, 0, 1, 0): 1, (0, 1, 0, 1, 0, 0): p - 1}
    out = {}
    for i, j, k in product(range(qs), repeat=3):
        f = _poly_mul(_poly_mul(_poly_pow(a, i, p, 6), _poly_pow(b, j, p, 6), p), _poly_pow(c_new, k, p, 6), p)
        for e, coeff in f.items():
            ge, xe = e[:3], e[3:]
            if max(ge) >= qs or max(xe) >= qr:
                continue
            out[(ge, xe, (i, j, k))] = coeff
    return out


# -- Betti numbers ---------------------------------------------------------------------

def betti_truncated_polynomial(nvars, length):
    """Betti numbers of k over a tensor product of nvars truncated polynomial rings."""
    # each factor contributes 1 + t + t^2 + ...; the product has coefficient C(n + nvars - 1, nvars - 1)
    from math import comb
    return [comb(n + nvars - 1, nvars - 1) for n in range(length + 1)]
