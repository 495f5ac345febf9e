"""Canonical JSON for algebras, morphisms and modules, plus catalog algebra ids."""

from __future__ import annotations

import hashlib
import json
import re

import numpy as np

from .algebra import AlgebraMorphism, HopfData, Sparse, StructuredAlgebra, make_hopf
from .field import field
from .kernels import (CatalogError, coordinate_algebra, double, extended_double, group_algebra, o_subalgebra,
                      parse_spec)
from .modules import FDModule, module_from_generators
from .smash import LazySmash, smash_product

ROLES = ("coord", "group", "D", "D~", "O")
_ALG_ID = re.compile(r"^(coord|group|D~|D|O)(?:\[(\d+)\])?@(.+)$")


def dumps(obj) -> str:
    """Sorted keys, no whitespace variation: byte-identical output for equal data."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


def _ints(a) -> list:
    return np.asarray(a, dtype=np.int64).tolist()


# -- algebra ids -------------------------------------------------------------------------

def algebra_id(role: str, spec_text: str, height: int | None = None) -> str:
    """Ids such as ``D~@Ga:n=1,p=2,r=1`` or ``coord[2]@Heis3:p=3,r=1``."""
    if role not in ROLES:
        raise CatalogError(f"unknown algebra role {role!r}")
    return f"{role}[{height}]@{spec_text}" if height is not None else f"{role}@{spec_text}"


def resolve_algebra(text: str):
    """Catalog object for an algebra id (a bare spec id means D~)."""
    m = _ALG_ID.match(text.strip())
    if not m:
        return extended_double(parse_spec(text))
    role, height, spec_text = m.group(1), m.group(2), m.group(3)
    g = parse_spec(spec_text)
    s = int(height) if height else g.r
    if role == "coord":
        return coordinate_algebra(g, s)
    if role == "group":
        return group_algebra(g, s)
    if role == "D":
        return double(g)
    if role == "D~":
        return extended_double(g)
    return o_subalgebra(g).algebra


# -- algebras ----------------------------------------------------------------------------

def sparse_to_json(sp: Sparse) -> list:
    return [list(map(int, row)) + [int(v)] for row, v in zip(sp.idx, sp.val)]


def sparse_from_json(rows: list, arity: int, p: int) -> Sparse:
    return Sparse.from_entries([tuple(r) for r in rows], arity, p)


def hopf_to_json(hd: HopfData | None):
    if hd is None:
        return None
    return {"coproduct": sparse_to_json(hd.coproduct), "counit": _ints(hd.counit),
            "antipode": None if hd.antipode is None else _ints(hd.antipode)}


def algebra_to_json(a) -> dict:
    if isinstance(a, LazySmash):
        return {"kind": "smash", "name": a.name, "b": algebra_to_json(a.b), "h": algebra_to_json(a.h),
                "action": sparse_to_json(a.action)}
    return {"kind": "dense", "name": a.name, "field": a.F.descriptor(), "labels": list(a.labels),
            "mult": sparse_to_json(a.mult), "unit": _ints(a.unit), "augmentation": _ints(a.augmentation),
            "generators": [[nm, _ints(v)] for nm, v in a.generators], "hopf": hopf_to_json(a.hopf)}


def algebra_from_json(d: dict):
    if d["kind"] == "smash":
        b, h = algebra_from_json(d["b"]), algebra_from_json(d["h"])
        return smash_product(b, h, sparse_from_json(d["action"], 3, b.p), d["name"])
    F = field(d["field"]["p"], d["field"].get("e", 1))
    p = F.p
    hd = None
    if d["hopf"] is not None:
        anti = d["hopf"]["antipode"]
        hd = make_hopf(sparse_from_json(d["hopf"]["coproduct"], 3, p), np.array(d["hopf"]["counit"]),
                       None if anti is None else np.array(anti, dtype=np.int64), p)
    gens = tuple((nm, np.array(v, dtype=np.int64)) for nm, v in d["generators"])
    return StructuredAlgebra(F, tuple(d["labels"]), sparse_from_json(d["mult"], 3, p), np.array(d["unit"]),
                             np.array(d["augmentation"]), hd, gens, d["name"])


def morphism_to_json(phi: AlgebraMorphism) -> dict:
    out = {"name": phi.name, "source": phi.source.name, "target": phi.target.name}
    if phi.kron_factors is not None:
        out["kron_factors"] = [_ints(f) for f in phi.kron_factors]
    else:
        out["matrix"] = _ints(phi.matrix)
    return out


# -- modules -----------------------------------------------------------------------------

def module_to_json(m: FDModule, algebra_ref: str) -> dict:
    return {"algebra": algebra_ref, "name": m.name, "dim": m.dim, "field": m.F.descriptor(),
            "generators": [_ints(g) for g in m.generator_actions]}


def module_from_json(d: dict, algebra=None) -> FDModule:
    """Reload a module, re-checking every defining relation."""
    algebra = algebra if algebra is not None else resolve_algebra(d["algebra"])
    F = field(d["field"]["p"], d["field"].get("e", 1))
    mats = [np.array(g, dtype=np.int64).reshape(d["dim"], d["dim"]) for g in d["generators"]]
    return module_from_generators(algebra, mats, F, d.get("name", ""))


def load_module(path: str, algebra=None) -> FDModule:
    with open(path) as fh:
        return module_from_json(json.load(fh), algebra)


def save_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")
