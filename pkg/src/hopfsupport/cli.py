"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(a counterexample was found), 2 for usage errors, malformed inputs and
tripped size guards.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import cohomology as co
from . import field as fieldmod
from . import pipoints as pp
from . import serialize as ser
from .algebra import AxiomError
from .battery import dtilde_battery, o_battery
from .kernels import (CatalogError, coordinate_algebra, double, extended_double, group_algebra, nu_isomorphism,
                      o_subalgebra, parse_spec, quotient_to_double)
from .linalg import DimensionGuard
from .modules import ModuleError, restrict_along, tensor
from .suites import DEFAULT_CASES, SUITES, run_suite

CONFIG_ENV = "HOPFSUPPORT_CONFIG"
log = logging.getLogger("hopfsupport")

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class WorkbenchConfig:
    seed: int = 20240601
    max_dim: int = co.MAX_ALGEBRA_DIM
    max_family_points: int = pp.MAX_FAMILY_POINTS
    workers: int = 1
    output_dir: str = "hopfsupport-out"
    field_table: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        for nm in ("max_dim", "max_family_points", "workers"):
            if getattr(self, nm) <= 0:
                raise UsageError(f"{nm} must be positive")

    @classmethod
    def load(cls, path: str | None) -> "WorkbenchConfig":
        if not path:
            return cls()
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)


def apply_config(cfg: WorkbenchConfig) -> None:
    """Push guards and the field table into the library modules."""
    co.MAX_ALGEBRA_DIM = cfg.max_dim
    pp.MAX_FAMILY_POINTS = cfg.max_family_points
    os.environ["HOPFSUPPORT_WORKERS"] = str(cfg.workers)
    if cfg.field_table:
        try:
            table = json.loads(Path(cfg.field_table).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read field table {cfg.field_table}: {exc}") from exc
        for key, coeffs in table.items():
            p, e = (int(s) for s in key.split(","))
            if not fieldmod.is_irreducible(tuple(coeffs), p):
                raise UsageError(f"field table entry {key} is reducible")
            fieldmod.MODULI[(p, e)] = tuple(coeffs)
        fieldmod.field.cache_clear()


# -- helpers ----------------------------------------------------------------------------

def _out_dir(args, cfg) -> Path:
    d = Path(args.out or cfg.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _emit(obj, path: Path | None = None) -> None:
    text = ser.dumps(obj)
    if path is not None:
        path.write_text(text + "\n")
    print(text)


def _safe(text: str) -> str:
    text = text.replace("~", "tilde")
    return "".join(c if c.isalnum() or c in "-=." else "_" for c in text)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _family(spec, args) -> pp.Family:
    legs = getattr(args, "legs", "both")
    sub = getattr(args, "subgroup", None)
    if spec.kind == "Heis3" and legs != "alpha" and sub is None:
        sub = "a"
    if spec.kind == "Gm":
        legs = "alpha"
    return pp.Family(spec, args.field_ext, sub, legs)


def _module_with_algebra(path: str, algebra_ref: str | None):
    data = _read_json(path)
    ref = algebra_ref or data.get("algebra")
    if not ref:
        raise UsageError("no algebra id given and the module file names none")
    algebra = ser.resolve_algebra(ref)
    return ser.module_from_json(data, algebra), ref, ser.digest(data)


def _spec_of(algebra):
    meta = getattr(algebra, "meta", {})
    if "spec" in meta:
        return meta["spec"]
    raise UsageError(f"{getattr(algebra, 'name', algebra)} is not a catalog D~ or O algebra")


# -- commands -----------------------------------------------------------------------------

def cmd_build(args, cfg) -> int:
    g = parse_spec(args.spec)
    out = _out_dir(args, cfg)
    algebras = {"coord": coordinate_algebra(g, g.r), "group": group_algebra(g, g.r), "D": double(g),
                "D~": extended_double(g), "O": o_subalgebra(g).algebra}
    bundle = {"spec": g.ident, "seed": cfg.seed,
              "dims": {k: a.dim for k, a in algebras.items()},
              "algebras": {k: ser.algebra_to_json(a) for k, a in algebras.items()},
              "morphisms": {"i_O": ser.morphism_to_json(o_subalgebra(g).i_O),
                            "q": ser.morphism_to_json(quotient_to_double(g)),
                            "nu": ser.morphism_to_json(nu_isomorphism(g).nu)}}
    path = out / f"bundle-{_safe(g.ident)}.json"
    ser.save_json(str(path), bundle)
    written = [str(path)]
    if args.battery:
        for role, mods in (("D~", dtilde_battery(g)), ("O", o_battery(g))):
            for m in mods:
                p = out / f"module-{_safe(role)}-{_safe(m.name)}-{_safe(g.ident)}.json"
                ser.save_json(str(p), ser.module_to_json(m, ser.algebra_id(role, g.ident)))
                written.append(str(p))
    _emit({"spec": g.ident, "dims": bundle["dims"], "bundle_sha256": ser.digest(bundle), "files": written,
           "seed": cfg.seed})
    return EXIT_OK


def cmd_support(args, cfg) -> int:
    m, ref, digest = _module_with_algebra(args.module, args.algebra)
    fam = _family(_spec_of(m.algebra), args)
    result = {"algebra": ref, "input_sha256": digest, "seed": cfg.seed, "family": fam.describe()}
    if args.tensor_with:
        m2, _, d2 = _module_with_algebra(args.tensor_with, ref)
        result["tensor_input_sha256"] = d2
        choices = ["hopf", "group"] if args.both_coproducts else ["hopf"]
        base1, base2 = m, m2
        if args.both_coproducts and m.algebra.meta.get("role") != "O":
            od = o_subalgebra(_spec_of(m.algebra))
            base1, base2 = restrict_along(od.i_O, m), restrict_along(od.i_O, m2)
        sets = {c: pp.support(tensor(base1, base2, c), fam) for c in choices}
        result["supports"] = {c: s.to_json() for c, s in sets.items()}
        s1, s2 = pp.support(m, fam), pp.support(m2, fam)
        inter = s1.as_set & s2.as_set
        result["intersection"] = [list(pt) for pt in sorted(inter)]
        agree = all(s.as_set == inter for s in sets.values())
        result["tensor_property_holds"] = agree
        rows = sorted(inter | set().union(*(s.as_set for s in sets.values())))
        code = EXIT_OK if agree else EXIT_MATH
    else:
        s = pp.support(m, fam)
        result.update(s.to_json())
        rows = s.points
        code = EXIT_OK
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(list(fam.coordinates))
            w.writerows(rows)
    _emit(result)
    return code


def cmd_jordan(args, cfg) -> int:
    m, ref, digest = _module_with_algebra(args.module, args.algebra)
    fam = _family(_spec_of(m.algebra), args)
    rep = pp.max_jordan_type(m, fam)
    _emit({"algebra": ref, "input_sha256": digest, "seed": cfg.seed, "family": fam.describe(),
           "module": m.name, "dim": m.dim, **rep.to_json()})
    return EXIT_OK


def cmd_cohomology(args, cfg) -> int:
    if args.length > co.MAX_LENGTH:
        raise UsageError(f"length {args.length} exceeds the guard {co.MAX_LENGTH}")
    algebra = ser.resolve_algebra(args.algebra)
    module, digest = None, None
    if args.module:
        module, _, digest = _module_with_algebra(args.module, args.algebra)
    res = co.minimal_resolution(algebra, module, args.length)
    out = _out_dir(args, cfg)
    stem = _safe(args.algebra)
    with open(out / f"betti-{stem}.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["degree", "betti"])
        w.writerows(enumerate(res.betti))
    ser.save_json(str(out / f"resolution-{stem}.json"), {**res.to_json(), "seed": cfg.seed})
    growth = co.growth_degree(list(res.betti))
    summary = {"algebra": args.algebra, "input_sha256": digest, "seed": cfg.seed, "betti": list(res.betti),
               "growth": growth.to_json(), "problems": co.resolution_problems(res), "files": []}
    if args.carlson:
        if module is not None:
            raise UsageError("Carlson modules are formed from the resolution of k")
        if args.carlson > args.length:
            raise UsageError("--carlson degree exceeds the resolution length")
        ref = args.algebra
        for i, zeta in enumerate(co.class_basis(res, args.carlson)):
            L = co.carlson_module(zeta)
            path = out / f"carlson-{stem}-deg{args.carlson}-{i}.json"
            ser.save_json(str(path), {**ser.module_to_json(L, ref), "class": zeta.values.tolist()})
            summary["files"].append({"path": str(path), "class": zeta.values.tolist(), "dim": L.dim,
                                     "omega_dim": res.syzygy(args.carlson).dim})
    _emit(summary)
    return EXIT_MATH if summary["problems"] else EXIT_OK


def _suite_names(name: str) -> list[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return [name]


def cmd_verify(args, cfg) -> int:
    names = _suite_names(args.suite)
    tasks = [(nm, cfg.seed, params) for nm in names for params in DEFAULT_CASES[nm]]
    if args.quick:
        shrink = {"fp1": {"trials": 100}, "lazy_dense": {"pairs": 50}}
        tasks = [(nm, s, {**p, **shrink.get(nm, {})}) for nm, s, p in tasks]
    if cfg.workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        from .suites import _run_task
        with ProcessPoolExecutor(cfg.workers) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        reports = [run_suite(nm, s, **p).to_json() for nm, s, p in tasks]
    out = _out_dir(args, cfg)
    for r in reports:
        ser.save_json(str(out / f"report-{_safe(r['suite'])}-{_safe(r['case'])}.json"), r)
    ok = all(r["pass"] for r in reports)
    _emit({"pass": ok, "seed": cfg.seed, "output_dir": str(out),
           "results": [{"suite": r["suite"], "case": r["case"], "pass": r["pass"], "trials": r["trials"]}
                       for r in reports]})
    return EXIT_OK if ok else EXIT_MATH


def cmd_report(args, cfg) -> int:
    d = Path(args.directory)
    files = sorted(d.glob("report-*.json"))
    if not files:
        raise UsageError(f"no report files in {d}")
    reports = [_read_json(str(f)) for f in files]
    failing = [r for r in reports if not r.get("pass")]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["suite", "case", "seed", "trials", "pass", "counterexamples"])
            for r in reports:
                w.writerow([r["suite"], r["case"], r["seed"], r["trials"], r["pass"], len(r["counterexamples"])])
    _emit({"reports": len(reports), "failing": [f"{r['suite']}:{r['case']}" for r in failing],
           "trials": sum(r["trials"] for r in reports), "pass": not failing})
    return EXIT_MATH if failing else EXIT_OK


# -- parser -------------------------------------------------------------------------------

def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field-ext", type=int, default=1, help="extension degree e of F_{p^e} (1 or 2)")
    p.add_argument("--legs", choices=("both", "alpha", "beta"), default="both")
    p.add_argument("--subgroup", choices=pp.HEIS_SUBGROUPS, help="Heis3 subgroup for the beta leg")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopfsupport", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--max-dim", type=int)
    ap.add_argument("--max-family-points", type=int)
    ap.add_argument("--field-table")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the catalog algebras for a spec id")
    p.add_argument("spec", help="catalog id such as Ga:n=1,p=2,r=1")
    p.add_argument("--out")
    p.add_argument("--battery", action="store_true", help="also write the fixed module battery")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("support", help="support set of a module")
    p.add_argument("algebra", nargs="?", help="algebra id (defaults to the one named in the module file)")
    p.add_argument("--module", required=True)
    p.add_argument("--tensor-with", help="second module: compare support(M (x) M') with the intersection")
    p.add_argument("--both-coproducts", action="store_true",
                   help="with --tensor-with, form the tensor product over O under both coproducts")
    p.add_argument("--csv")
    _add_family_flags(p)
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("jordan", help="maximal Jordan types over the flat points")
    p.add_argument("algebra", nargs="?")
    p.add_argument("--module", required=True)
    _add_family_flags(p)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("cohomology", help="minimal resolution, Betti numbers and Carlson modules")
    p.add_argument("algebra")
    p.add_argument("--module")
    p.add_argument("--length", type=int, default=8)
    p.add_argument("--carlson", type=int, metavar="DEGREE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", help=f"all or one of: {', '.join(SUITES)}")
    p.add_argument("--out")
    p.add_argument("--quick", action="store_true",
                   help="100 fp1 triples and 50 lazy/dense pairs per case instead of 1000")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize report files written by verify")
    p.add_argument("directory")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)
    return ap


def _config(args) -> WorkbenchConfig:
    cfg = WorkbenchConfig.load(args.config or os.environ.get(CONFIG_ENV))
    overrides = {"seed": args.seed, "workers": args.workers, "max_dim": args.max_dim,
                 "max_family_points": args.max_family_points, "field_table": args.field_table}
    data = asdict(cfg)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return WorkbenchConfig(**data)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        apply_config(cfg)
        np.random.seed(cfg.seed % 2**32)
        return args.func(args, cfg)
    except (UsageError, CatalogError, pp.FamilyError, DimensionGuard, co.CohomologyError, ModuleError,
            AxiomError, fieldmod.FieldError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
