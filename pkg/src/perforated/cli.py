"""Command-line front end.

Exit codes: 0 success / PASS, 1 mathematical refusal, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import homological as H
from . import invariants as inv
from . import reps as R
from .mutation import mutate
from .path_algebra import NotProvenFiniteDimensional, PathAlgebra, RelationError, load_algebra
from .phi_yoneda import NonAdmissiblePhi, PhiYoneda, is_admissible, parse_phi
from .scalgebra import SCAlgebra

OK, REFUSED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, payload: dict, lines: Sequence[str]):
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _write_json(path: str, obj: dict):
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def _algebra(path: str) -> PathAlgebra:
    if not Path(path).is_file():
        raise InputError(f"algebra file not found: {path}")
    return load_algebra(path)


def _sc(path: str) -> SCAlgebra:
    if not Path(path).is_file():
        raise InputError(f"algebra file not found: {path}")
    return SCAlgebra.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def _named(A: PathAlgebra, exprs: Sequence[str], prefix: str) -> List[Tuple[str, R.Rep]]:
    out = []
    for k, e in enumerate(exprs):
        name, expr = (e.split("=", 1) if "=" in e.split("(")[0] else (f"{prefix}{k + 1}", e))
        out.append((name.strip(), R.parse_module(A, expr.strip())))
    return out


def _phi(text: str):
    try:
        return parse_phi(text)
    except ValueError as exc:
        raise InputError(f"bad degree set {text!r}: {exc}") from exc


def _dims(m: R.Rep) -> str:
    return "(" + ",".join(str(d) for d in m.dims) + ")"


# -- commands -------------------------------------------------------------------

def cmd_check_admissible(args) -> int:
    phi = _phi(args.set)
    ok, w = is_admissible(phi)
    payload = {"set": list(phi), "admissible": ok, "witness": list(w) if w else None}
    lines = [f"{sorted(phi)} is admissible"] if ok else \
        [f"{sorted(phi)} is not admissible", f"witness (i,j,k) = {w}"]
    _emit(args, payload, lines)
    return OK if ok else REFUSED


def cmd_basis(args) -> int:
    A = _algebra(args.algebra)
    labels = [A.basis_label(i) for i in range(A.dim)]
    _emit(args, {"dim": A.dim, "field": A.field.to_json(), "basis": labels},
          [f"dim {A.dim} over {A.field}"] + labels)
    return OK


def cmd_hom(args) -> int:
    A = _algebra(args.algebra)
    m = R.parse_module(A, args.source)
    n = R.parse_module(A, args.target)
    d, sd = R.hom_dim(m, n), R.stable_hom_dim(m, n)
    _emit(args, {"hom_dim": d, "stable_hom_dim": sd},
          [f"dim Hom = {d}", f"dim stable Hom = {sd}"])
    return OK


def cmd_ext(args) -> int:
    A = _algebra(args.algebra)
    if args.degree < 0:
        raise InputError("degree must be a natural number")
    m = R.parse_module(A, args.source)
    n = R.parse_module(A, args.target)
    sp = H.ext_space(m, n, args.degree)
    F = A.field
    labels = [f"ext{args.degree}#{k}" for k in range(sp.dim)]
    cocycles = [[F.to_str(x) for x in b.cocycle] for b in sp.basis]
    lines = [f"dim Ext^{args.degree} = {sp.dim}"]
    lines += [f"{lab}: cocycle [{' '.join(c)}]" for lab, c in zip(labels, cocycles)]
    _emit(args, {"dim": sp.dim, "degree": args.degree, "basis": labels, "cocycles": cocycles}, lines)
    return OK


def cmd_yoneda(args) -> int:
    A = _algebra(args.algebra)
    phi = _phi(args.phi)
    mods = _named(A, args.module, "V")
    alg = PhiYoneda(mods, phi, check_admissible=not args.no_check)
    obj = alg.to_json()
    obj["summands"] = {nm: list(m.dims) for nm, m in mods}
    obj["phi"] = list(phi)
    if args.out:
        _write_json(args.out, obj)
    blocks = {f"{alg.names[s]}->{alg.names[t]}[{d}]": len(ix) for (s, t, d), ix in alg.blocks.items() if ix}
    lines = [f"dim = {alg.dim}", f"associative = {alg.is_associative()}"]
    lines += [f"  {k}: {v}" for k, v in blocks.items()]
    _emit(args, {"dim": alg.dim, "blocks": blocks, "associative": alg.is_associative()}, lines)
    return OK


def cmd_mutate(args) -> int:
    A = _algebra(args.algebra)
    phi = _phi(args.phi)
    direction = args.direction or ("right" if args.y else "left")
    expr = args.x if direction == "left" else args.y
    if expr is None:
        raise InputError(f"direction {direction} needs --{'x' if direction == 'left' else 'y'}")
    start = R.parse_module(A, expr)
    parts = [m for _, m in _named(A, args.m, "M")]
    if not parts:
        raise InputError("at least one --m module is required")
    report = mutate(start, parts, phi, direction, force=args.force, gldim_bound=args.gldim_bound)
    obj = report.to_json()
    if args.report:
        _write_json(args.report, obj)
    s = report.sequence
    lines = [f"sequence: X {_dims(s.X)} -> M1 {_dims(s.M1)} -> Y {_dims(s.Y)}"]
    if report.lam is not None:
        lines.append(f"dim Lambda = {report.lam.dim}, dim Gamma = {report.gam.dim}")
    if report.certificate:
        c = report.certificate
        lines.append(f"Hom(T,T[-1]) = {c['hom_minus1']}, Hom(T,T[1]) = {c['hom_plus1']}, "
                     f"dim End(T) = {c['end_dim']}")
        lines.append(f"Theta bijective = {c['theta_bijective']}, multiplicative = {c['theta_multiplicative']}")
    lines.append(f"verdict: {report.verdict}")
    lines += [f"  reason: {r}" for r in report.reasons]
    _emit(args, obj, lines)
    return OK if report.verdict == "PASS" else REFUSED


def cmd_verify(args) -> int:
    alg = _sc(args.sc)
    assoc, unit = alg.is_associative(), alg.is_unit()
    ok = assoc and unit
    _emit(args, {"dim": alg.dim, "associative": assoc, "unital": unit, "verdict": "PASS" if ok else "FAIL"},
          [f"dim = {alg.dim}", f"associative = {assoc}", f"unital = {unit}", f"verdict: {'PASS' if ok else 'FAIL'}"])
    return OK if ok else REFUSED


def cmd_invariants(args) -> int:
    a = _sc(args.sc)
    if args.sc2:
        b = _sc(args.sc2)
        table = inv.compare_invariants(a, b, gldim_bound=args.gldim_bound)
        lines = [f"{k}: {table[k][0]} | {table[k][1]}"
                 for k in ("num_simples", "cartan_det_abs", "center_dim", "gldim", "gldim_finiteness")]
        lines.append("mismatch: " + (", ".join(table["mismatch"]) or "none"))
        _emit(args, table, lines)
        return REFUSED if table["mismatch"] else OK
    an = inv.analyze(a, args.gldim_bound)
    obj = an.to_json()
    _emit(args, obj, [f"{k}: {v}" for k, v in obj.items()])
    return OK


def cmd_domdim(args) -> int:
    if (args.algebra is None) == (args.sc is None):
        raise InputError("give exactly one of --algebra or --sc")
    if args.bound < 1:
        raise InputError("bound must be at least 1")
    if args.algebra:
        val = H.domdim_bounded(_algebra(args.algebra), args.bound)
    else:
        val = inv.domdim_sc(_sc(args.sc), args.bound)
    _emit(args, {"domdim": val.to_json(), "exact": val.exact}, [f"dominant dimension: {val}"])
    return OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perforated", description="Perforated Yoneda algebras and mutations.")
    p.add_argument("--json", action="store_true", help="machine-readable output only")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check-admissible", cmd_check_admissible, "test a degree set for admissibility")
    sp.add_argument("--set", required=True, help='comma-separated degrees, e.g. "0,1,2,4"')

    sp = add("basis", cmd_basis, "normal-form basis of a path algebra")
    sp.add_argument("--algebra", required=True)

    sp = add("hom", cmd_hom, "dimension of Hom and stable Hom")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)

    sp = add("ext", cmd_ext, "basis of Ext^i(M, N)")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--degree", type=int, required=True)

    sp = add("yoneda", cmd_yoneda, "build a perforated Yoneda algebra")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--module", action="append", required=True, help="summand, optionally name=expr; repeatable")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--out")
    sp.add_argument("--no-check", action="store_true", help="skip the admissibility check")

    sp = add("mutate", cmd_mutate, "run the mutation pipeline")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--x", help="start module for a left mutation")
    sp.add_argument("--y", help="start module for a right mutation")
    sp.add_argument("--m", action="append", default=[], help="summand of M; repeatable")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--direction", choices=["left", "right"])
    sp.add_argument("--report")
    sp.add_argument("--force", action="store_true", help="continue past failed hypotheses")
    sp.add_argument("--gldim-bound", type=int, default=10)

    sp = add("verify", cmd_verify, "check associativity and unit of a structure-constant file")
    sp.add_argument("--sc", required=True)

    sp = add("invariants", cmd_invariants, "derived invariants of one or two algebras")
    sp.add_argument("--sc", required=True)
    sp.add_argument("--sc2")
    sp.add_argument("--gldim-bound", type=int, default=10)

    sp = add("domdim", cmd_domdim, "bounded dominant dimension")
    sp.add_argument("--algebra")
    sp.add_argument("--sc")
    sp.add_argument("--bound", type=int, default=6)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except NonAdmissiblePhi as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return REFUSED
    except (InputError, R.ExpressionError, RelationError, NotProvenFiniteDimensional,
            json.JSONDecodeError, KeyError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
