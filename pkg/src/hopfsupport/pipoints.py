"""Pi-point pairs, pullbacks along them, support sets and Jordan types.

A family is the projective space of coefficient vectors (alpha | beta) over
F_{p^e}.  The alpha coordinates multiply the generators x_v^{p^r} of the
Frobenius-power part of O; the beta coordinates multiply the generators
d[x_v^{p^i}] of the group algebra of an abelian unipotent subgroup.  A
point t -> alpha(t) # 1 + 1 # beta(t) is evaluated on a module by a linear
combination of precomputed coordinate action matrices.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import linalg as la
from .field import GF, field
from .kernels import GroupSchemeSpec, extended_double, o_subalgebra
from .modules import FDModule, ModuleError
from .smash import LazySmash

MAX_FAMILY_POINTS = 1_000_000
MAX_FIELD_EXT = 2
HEIS_SUBGROUPS = ("a", "b", "c")
HEIS_CAVEAT = ("alpha ranges over combinations of the designated generators only; whether these "
               "families meet every equivalence class is not settled")


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    """Parameter space P(alpha coefficients + beta coefficients) over F_{p^e}."""

    spec: GroupSchemeSpec
    e: int = 1
    subgroup: str | None = None
    legs: str = "both"

    def __post_init__(self):
        if not 1 <= self.e <= MAX_FIELD_EXT:
            raise FamilyError(f"field extension degree must be in 1..{MAX_FIELD_EXT}")
        if self.legs not in ("both", "alpha", "beta"):
            raise FamilyError(f"unknown legs {self.legs!r}")
        if self.spec.kind == "Heis3" and self.legs != "alpha" and self.subgroup not in HEIS_SUBGROUPS:
            raise FamilyError("Heis3 families need a subgroup selector a, b or c")
        if self.spec.kind != "Heis3" and self.subgroup is not None:
            raise FamilyError("subgroup selectors only apply to Heis3")
        if self.spec.kind == "Gm" and self.legs == "beta":
            raise FamilyError("the group algebra of a multiplicative kernel has no pi-points")
        if not self.coordinates:
            raise FamilyError("empty family")

    @property
    def K(self) -> GF:
        return field(self.spec.p, self.e)

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def ident(self) -> str:
        sel = f"/{self.subgroup}" if self.subgroup else ""
        return f"{self.spec.ident}|F{self.spec.p ** self.e}|{self.legs}{sel}"

    @property
    def alpha_names(self) -> tuple[str, ...]:
        if self.legs == "beta":
            return ()
        return tuple(f"{v}^{self.spec.p ** self.r}" for v in self.spec.var_names())

    @property
    def beta_slots(self) -> tuple[tuple[int, str], ...]:
        """(position among the group-algebra generators, name) for the beta coordinates."""
        if self.legs == "alpha" or self.spec.kind == "Gm":
            return ()
        names = self.spec.var_names()
        p, r = self.spec.p, self.r
        chosen = range(len(names)) if self.subgroup is None else [HEIS_SUBGROUPS.index(self.subgroup)]
        out = []
        for v in chosen:
            for i in range(r):
                out.append((v * r + i, f"d[{names[v]}^{p ** i}]" if i else f"d[{names[v]}]"))
        return tuple(out)

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.alpha_names + tuple(nm for _, nm in self.beta_slots)

    @property
    def n_alpha(self) -> int:
        return len(self.alpha_names)

    @property
    def size(self) -> int:
        q, n = self.K.q, len(self.coordinates)
        return (q**n - 1) // (q - 1)

    def points(self) -> list[tuple[int, ...]]:
        """Normalized points (first nonzero coordinate 1) in lexicographic order."""
        if self.size > MAX_FAMILY_POINTS:
            raise FamilyError(f"family {self.ident} has {self.size} points > {MAX_FAMILY_POINTS}")
        n, q = len(self.coordinates), self.K.q
        pts = []
        for lead in range(n):
            for tail in itertools.product(range(q), repeat=n - lead - 1):
                pts.append((0,) * lead + (1,) + tail)
        return sorted(pts)

    def beta_zero(self, point) -> bool:
        return not any(point[self.n_alpha:])

    def alpha_zero(self, point) -> bool:
        return not any(point[: self.n_alpha])

    def describe(self) -> dict:
        out = {"id": self.ident, "spec": self.spec.ident, "field": self.K.descriptor(),
               "coordinates": list(self.coordinates), "size": self.size}
        if self.spec.kind == "Heis3":
            out["caveat"] = HEIS_CAVEAT
        return out


def families(spec: GroupSchemeSpec, e: int = 1, legs: str = "both") -> list[Family]:
    """The standard families for a catalog entry (one per Heis3 subgroup)."""
    if spec.kind == "Heis3" and legs != "alpha":
        return [Family(spec, e, s, legs) for s in HEIS_SUBGROUPS]
    if spec.kind == "Gm":
        return [Family(spec, e, None, "alpha")]
    return [Family(spec, e, None, legs)]


# -- pairs and combined elements ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PiPointPair:
    family: Family
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != self.family.n_alpha or len(self.beta) != len(self.family.beta_slots):
            raise FamilyError("coefficient vector lengths do not match the family")
        if not any(self.alpha) and not any(self.beta):
            raise FamilyError("both legs of a pi-point pair are zero")

    @classmethod
    def from_point(cls, family: Family, point) -> "PiPointPair":
        point = tuple(int(c) for c in point)
        return cls(family, point[: family.n_alpha], point[family.n_alpha:])

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.alpha + self.beta

    @property
    def K(self) -> GF:
        return self.family.K


@lru_cache(maxsize=None)
def _o_coordinate_elements(family: Family) -> np.ndarray:
    """Rows: the coordinate elements of the family as vectors of O (over F_p)."""
    o = o_subalgebra(family.spec).algebra
    gens = [v for _, v in o.generators]
    dim_g = family.spec.dim_g
    rows = [gens[i] for i in range(family.n_alpha)] if family.legs != "beta" else []
    rows += [gens[dim_g + pos] for pos, _ in family.beta_slots]
    return np.stack(rows)


def _target_kind(algebra, family: Family) -> str:
    od = o_subalgebra(family.spec)
    if algebra is od.algebra:
        return "O"
    dt = extended_double(family.spec)
    if algebra is dt:
        return "D~"
    if not isinstance(algebra, LazySmash) and algebra.meta.get("lazy") is dt:
        return "D~"  # dense realization, same basis
    raise FamilyError(f"family {family.ident} does not apply to {getattr(algebra, 'name', algebra)}")


def coordinate_elements(algebra, family: Family) -> np.ndarray:
    """Coordinate elements as vectors of ``algebra`` (O, D~ or its dense realization)."""
    rows = _o_coordinate_elements(family)
    if _target_kind(algebra, family) == "O":
        return rows
    i_O = o_subalgebra(family.spec).i_O
    return np.stack([i_O.apply(v) for v in rows])


def combined_element(pair: PiPointPair, algebra=None) -> np.ndarray:
    """alpha(t) # 1 + 1 # beta(t) over K, in O or (given ``algebra``) in D~."""
    algebra = algebra if algebra is not None else o_subalgebra(pair.family.spec).algebra
    return pair.K.lincomb(pair.coefficients, coordinate_elements(algebra, pair.family))


# -- flatness --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _regular_coordinate_actions(family: Family, where: str) -> np.ndarray:
    if where == "O":
        a = o_subalgebra(family.spec).algebra
    else:
        a = extended_double(family.spec).dense_realization()
    return np.stack([a.left_matrix(v) for v in coordinate_elements(a, family)])


def regular_matrix(pair: PiPointPair, where: str = "O") -> np.ndarray:
    return pair.K.lincomb(pair.coefficients, _regular_coordinate_actions(pair.family, where))


def certify_flat(pair: PiPointPair, where: str = "O") -> bool:
    """Flat iff the regular action of the combined element is free over K[t]/t^p."""
    return la.is_free_over_truncated_line(regular_matrix(pair, where), pair.family.spec.p, pair.K)


@lru_cache(maxsize=None)
def flat_points(family: Family) -> tuple[tuple[int, ...], ...]:
    return tuple(pt for pt in family.points() if certify_flat(PiPointPair.from_point(family, pt)))


# -- pullbacks -------------------------------------------------------------------------

def coordinate_actions(m: FDModule, family: Family) -> np.ndarray:
    """Action matrices on M of the family's coordinate elements (cached on the module)."""
    cache = m.meta.setdefault("_coordinate_actions", {})
    key = (family.spec, family.subgroup, family.legs)
    if key not in cache:
        elems = coordinate_elements(m.algebra, family)
        cache[key] = np.stack([m.act(v) for v in elems]) if m.dim else np.zeros((len(elems), 0, 0), np.int64)
    return cache[key]


def pullback(m: FDModule, pair: PiPointPair) -> np.ndarray:
    """The p-nilpotent operator by which t acts on M_K."""
    if m.F.p != pair.K.p or pair.K.e % m.F.e:
        raise ModuleError(f"module over {m.F} cannot be base changed to {pair.K}")
    return pair.K.lincomb(pair.coefficients, coordinate_actions(m, pair.family))


def jordan_type_at(m: FDModule, pair: PiPointPair) -> list[int]:
    return la.jordan_type(pullback(m, pair), pair.family.spec.p, pair.K)


# -- support sets ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SupportSet:
    family: Family
    points: tuple[tuple[int, ...], ...]
    module: str
    elapsed_ms: float = 0.0
    meta: dict = dc_field(default_factory=dict)

    def __contains__(self, point) -> bool:
        return tuple(point) in self.as_set

    @property
    def as_set(self) -> frozenset:
        return frozenset(self.points)

    def is_empty(self) -> bool:
        return not self.points

    def to_json(self) -> dict:
        return {"family": self.family.describe(), "points": [list(pt) for pt in self.points],
                "module": self.module, "timing": {"elapsed_ms": round(self.elapsed_ms, 3)}, **self.meta}


def _verdicts(p: int, e: int, mats: np.ndarray, points: list) -> list[bool]:
    K = field(p, e)
    return [la.is_free_over_truncated_line(K.lincomb(pt, mats), p, K) for pt in points]


def _default_workers() -> int:
    return int(os.environ.get("HOPFSUPPORT_WORKERS", "1"))


def free_verdicts(m: FDModule, family: Family, points=None, workers: int | None = None) -> dict:
    """Map each flat point to whether the pullback of M is free."""
    points = list(flat_points(family) if points is None else points)
    mats = coordinate_actions(m, family)
    p, e = family.spec.p, family.e
    workers = workers or _default_workers()
    if m.dim == 0:
        return {pt: True for pt in points}
    if workers <= 1 or len(points) < 64:
        flags = _verdicts(p, e, mats, points)
    else:
        chunk = -(-len(points) // workers)
        parts = [points[i:i + chunk] for i in range(0, len(points), chunk)]
        with ProcessPoolExecutor(workers) as pool:
            flags = [f for res in pool.map(_verdicts, *zip(*[(p, e, mats, c) for c in parts])) for f in res]
    return dict(zip(points, flags))


def support(m: FDModule, family: Family, workers: int | None = None) -> SupportSet:
    """Flat points of the family whose pullback of M is not free."""
    start = time.perf_counter()
    verdicts = free_verdicts(m, family, workers=workers)
    pts = tuple(sorted(pt for pt, free in verdicts.items() if not free))
    ms = (time.perf_counter() - start) * 1000
    return SupportSet(family, pts, m.name, ms, {"flat_points": len(verdicts), "family_size": family.size})


# -- Jordan types ----------------------------------------------------------------------

@dataclass(frozen=True)
class JordanReport:
    maximal: tuple[tuple[int, ...], ...]
    attained: dict
    types: dict

    @property
    def top(self) -> tuple[int, ...] | None:
        """The unique dominance-maximal type, or None when the maxima are incomparable."""
        return self.maximal[0] if len(self.maximal) == 1 else None

    def to_json(self) -> dict:
        return {"maximal": [list(t) for t in self.maximal],
                "top": list(self.top) if self.top is not None else None,
                "incomparable": self.top is None,
                "attained": {",".join(map(str, t)): [list(pt) for pt in pts] for t, pts in self.attained.items()}}


def jordan_types(m: FDModule, family: Family) -> dict:
    mats = coordinate_actions(m, family)
    K, p = family.K, family.spec.p
    return {pt: tuple(la.jordan_type(K.lincomb(pt, mats), p, K)) for pt in flat_points(family)}


def max_jordan_type(m: FDModule, family: Family) -> JordanReport:
    types = jordan_types(m, family)
    distinct = sorted(set(types.values()), reverse=True)
    maximal = tuple(t for t in distinct
                    if not any(u != t and la.dominates(list(u), list(t)) for u in distinct))
    attained = {t: sorted(pt for pt, u in types.items() if u == t) for t in maximal}
    return JordanReport(maximal, attained, types)
