"""Fixed module batteries and witness constructions for the catalog cases."""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from .kernels import (GroupSchemeSpec, _truncation_matrix, coordinate_algebra, extended_double, group_algebra,
                      o_subalgebra)
from .modules import (FDModule, direct_sum, is_projective_local, module_from_full, module_from_parts, quotient,
                      regular_module, restrict_along, submodule_span, trivial_module)

BATTERY_DIM = 8
BATTERY_SEED = 1729
WITNESS_MAX_BASE = 256


def _basis_quotient(m: FDModule, killed: list[int], name: str) -> FDModule:
    """M modulo the submodule generated by the listed basis vectors."""
    if not killed:
        return FDModule(m.algebra, m.dim, m.F, m.full, m.parts, name)
    sub = submodule_span(m, la.identity(m.dim)[:, killed])
    return quotient(m, sub, name)


def monomial_quotient(g: GroupSchemeSpec, x_exp: int, u_exp: int) -> FDModule:
    """D~/(x^i, u^j) for a one-variable additive kernel, as a module over the lazy algebra."""
    dt = extended_double(g)
    reg = regular_module(dt)
    hd = dt.h.dim
    killed = [i for i in range(dt.dim) if i // hd >= x_exp or i % hd >= u_exp]
    return _basis_quotient(reg, killed, f"A/(x^{x_exp},u^{u_exp})")


def staircase_quotient(g: GroupSchemeSpec, corners: list[tuple[int, int]], name: str) -> FDModule:
    """D~ modulo the monomial ideal generated by x^i u^j for the given corners."""
    dt = extended_double(g)
    reg = regular_module(dt)
    hd = dt.h.dim
    killed = [i for i in range(dt.dim) if any(i // hd >= a and i % hd >= b for a, b in corners)]
    return _basis_quotient(reg, killed, name)


def random_quotient(g: GroupSchemeSpec, max_dim: int = BATTERY_DIM, seed: int = BATTERY_SEED) -> FDModule:
    """A two-generator module: D~^2 modulo random radical elements until dim <= max_dim."""
    dt = extended_double(g)
    reg = regular_module(dt)
    free2 = direct_sum(reg, reg, "A^2")
    rng = np.random.default_rng(seed)
    F = dt.F
    aug = dt.augmentation
    rels = []
    while True:
        v = F.random(rng, free2.dim)
        for blk in range(2):
            s = slice(blk * dt.dim, (blk + 1) * dt.dim)
            v[s] = F.sub(v[s], F.mul(int(aug.dot(v[s]) % F.p), dt.unit))  # keep v in the radical
        rels.append(v)
        sub = submodule_span(free2, np.stack(rels, axis=1))
        if free2.dim - sub.shape[1] <= max_dim:
            return quotient(free2, sub, f"random2gen[{seed}]")


def coordinate_module(g: GroupSchemeSpec) -> FDModule:
    """k[G_(r)] as a D~-module: functions act through restriction, kG_(r) by the coadjoint action."""
    dt = extended_double(g)
    small = coordinate_algebra(g, g.r)
    T = _truncation_matrix(g, g.r + 1, g.r)
    Rb = dt.b.meta["ring"]
    Rs = small.meta["ring"]
    sigma = np.zeros((dt.b.dim, small.dim), dtype=np.int64)
    sigma[Rb.index(Rs.exponents()), np.arange(small.dim)] = 1
    rb = np.stack([small.left_matrix(T[:, i]) for i in range(dt.b.dim)])
    rh = np.stack([T.dot(dt.action_matrix(a)).dot(sigma) % g.p for a in range(dt.h.dim)])
    return module_from_parts(dt, rb, rh, name="k[G_(r)]")


def inflate(g: GroupSchemeSpec, n: FDModule, name: str = "") -> FDModule:
    """A kG_(r)-module viewed over D~ with functions acting through the counit."""
    dt = extended_double(g)
    eye = la.identity(n.dim)
    rb = np.stack([int(e) * eye for e in dt.b.augmentation])
    return module_from_parts(dt, rb, n.full, n.F, name or f"infl({n.name})")


def induced_module(g: GroupSchemeSpec, n: FDModule, name: str = "") -> FDModule:
    """k[G_(r+1)] (x) N with f(f' (x) m) = ff' (x) m and h(f' (x) m) = sum h_1.f' (x) h_2 m."""
    dt = extended_double(g)
    F = n.F
    eye = la.identity(n.dim)
    rb = np.stack([la.kron(dt.b.left_matrix(dt.b.basis(i)), eye, F) for i in range(dt.b.dim)])
    rh = np.zeros((dt.h.dim, dt.b.dim * n.dim, dt.b.dim * n.dim), dtype=np.int64)
    for (a, a1, a2), c in zip(dt.h.hopf.coproduct.idx, dt.h.hopf.coproduct.val):
        rh[a] = F.add(rh[a], F.mul(int(c), la.kron(dt.action_matrix(int(a1)), n.full[a2], F)))
    return module_from_parts(dt, rb, rh, F, name or f"ind({n.name})")


def group_algebra_quotient(g: GroupSchemeSpec, keep_below: int) -> FDModule:
    """kG_(r) modulo the ideal generated by dual basis elements of weighted degree >= keep_below.

    The centre coordinate of the Heisenberg group has weight 2, which makes the
    coproduct homogeneous.
    """
    h = group_algebra(g, g.r)
    reg = regular_module(h)
    R = h.meta["ring"]
    weights = np.array([1, 1, 2] if g.kind == "Heis3" else [1] * R.nvars)
    killed = [i for i, e in enumerate(R.exponents()) if int(e.dot(weights)) >= keep_below]
    return _basis_quotient(reg, killed, f"kG/deg>={keep_below}")


# -- batteries ---------------------------------------------------------------------------------

def dtilde_battery(g: GroupSchemeSpec, max_dim: int = BATTERY_DIM) -> list[FDModule]:
    """Modules over D~(G_(r)) shared by the tensor, coproduct and detection suites."""
    dt = extended_double(g)
    if g.kind == "Heis3":
        return [trivial_module(dt), coordinate_module(g), inflate(g, group_algebra_quotient(g, 2))]
    if g.kind != "Ga" or g.n != 1:
        return [trivial_module(dt)]
    out = [trivial_module(dt), regular_module(dt)]
    nb, nh = dt.b.dim, dt.h.dim
    for i, j in itertools.product(range(1, nb + 1), range(1, nh + 1)):
        if (i, j) not in ((1, 1), (nb, nh)) and i * j <= max_dim:
            out.append(monomial_quotient(g, i, j))
    out.append(staircase_quotient(g, [(2, 0), (1, 1), (0, 2)], "A/(x^2,xu,u^2)"))
    out.append(random_quotient(g, max_dim))
    return out


def _c_quotient_module(g: GroupSchemeSpec, bounds: tuple[int, ...]) -> FDModule:
    """(C / (X_v^{bounds_v})) (x) k over O, C the Frobenius-power part."""
    od = o_subalgebra(g)
    c, o = od.frob_part, od.algebra
    regc = regular_module(c)
    # C-basis index -> exponents of the generators X_v = x_v^{p^r}
    ring = coordinate_algebra(g, g.r + 1).meta["ring"]
    exps = ring.exponents()[c.meta["embedding"]] // g.p**g.r
    killed = [i for i, e in enumerate(exps) if any(int(e[v]) >= bounds[v] for v in range(len(bounds)))]
    quo = _basis_quotient(regc, killed, "")
    hdim = o.dim // c.dim
    heps = group_algebra(g, g.r).augmentation
    full = np.stack([quo.full[i // hdim] * int(heps[i % hdim]) % g.p for i in range(o.dim)])
    label = ",".join(str(b) for b in bounds)
    return module_from_full(o, full, name=f"C/({label})#k")


def o_battery(g: GroupSchemeSpec, max_dim: int = BATTERY_DIM) -> list[FDModule]:
    """O-modules: restrictions of the D~ battery plus Frobenius-part quotients with trivial group action."""
    od = o_subalgebra(g)
    out = [restrict_along(od.i_O, m, f"res({m.name})") for m in dtilde_battery(g, max_dim)]
    if g.kind == "Heis3":
        for bounds in ((1, 2, 1), (2, 1, 1), (2, 2, 1), (1, 1, 2)):
            out.append(_c_quotient_module(g, bounds))
    return out


def inflated_witnesses(g: GroupSchemeSpec) -> list[FDModule]:
    """Modules on which k[G_(r+1)] acts through the counit."""
    h = group_algebra(g, g.r)
    out = [inflate(g, trivial_module(h), "infl(k)"), inflate(g, regular_module(h), "infl(kG)")]
    if g.p > 2:
        out.append(inflate(g, group_algebra_quotient(g, 2)))
    return out


def coordinate_projective_witnesses(g: GroupSchemeSpec) -> list[FDModule]:
    """Modules whose restriction to k[G_(r+1)] is free (empty when these exceed the size cap)."""
    h = group_algebra(g, g.r)
    dt = extended_double(g)
    if dt.b.dim > WITNESS_MAX_BASE:
        return []  # every such module has dim >= dim k[G_(r+1)], stored as dim^3 entries
    out = [induced_module(g, trivial_module(h), "ind(k)")]
    if dt.b.dim * h.dim <= 64:
        out.append(induced_module(g, group_algebra_quotient(g, 2)))
        out.append(regular_module(dt))
    return out


def restricted_to_coordinates_is_free(m: FDModule) -> bool:
    """Whether M restricted to k[G_(r+1)] # 1 is free."""
    s = m.algebra
    return is_projective_local(module_from_full(s.b, m.parts[0], m.F, check=False))


__all__ = ["monomial_quotient", "staircase_quotient", "random_quotient", "coordinate_module", "inflate",
           "induced_module", "group_algebra_quotient", "dtilde_battery", "o_battery", "inflated_witnesses",
           "coordinate_projective_witnesses", "restricted_to_coordinates_is_free"]
