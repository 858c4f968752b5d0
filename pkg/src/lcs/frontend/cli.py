"""``lcs`` command line tool.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from lcs.algebra import (
    adjoint,
    center,
    check_axioms,
    check_cur_embedding,
    check_representation,
    semidirect,
)
from lcs.builtins import ALGEBRAS, LIE_ALGEBRAS, gl11, gl11_defining
from lcs.cohomology import (
    MAX_ARITY,
    check_trivial_deformation,
    deformation_check,
    differential,
    nijenhuis_minus_d_residual,
    nijenhuis_residual,
    random_cochain,
)
from lcs.confmap import (
    KINDS,
    Bounds,
    check_cend_axioms,
    compare_inner,
    identity_map,
    kind_name,
    solve_generalized,
    zero_map,
)
from lcs.element import parity_name
from lcs.errors import LCSError
from lcs.frontend import dsl
from lcs.frontend.report import Report

PARITY_CHOICES = {"even": [0], "odd": [1], "both": [0, 1]}


class UsageError(LCSError):
    pass


# -- input handling ------------------------------------------------------------


def _load(args) -> dsl.Catalog:
    path = getattr(args, "file", None)
    if not path:
        return dsl.Catalog()
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return dsl.parse(text)


def _algebra(args, cat: dsl.Catalog):
    name = getattr(args, "algebra", None)
    if name:
        return cat.algebra(name)
    if len(cat.algebras) == 1:
        return next(iter(cat.algebras.values()))
    if cat.algebras:
        raise UsageError("the input declares several algebras; choose one with --algebra")
    raise UsageError("no algebra given; use --algebra NAME or --file PATH")


def _bounds(args) -> Bounds:
    if args.ddeg < 0 or args.ldeg < 0:
        raise UsageError("degree bounds must be nonnegative")
    return Bounds(args.ddeg, args.ldeg)


def _map_basis(maps, order):
    return [{g: f.value(g).render(order) for g in order} for f in maps]


def _module(args, cat, A=None):
    if getattr(args, "rep", None):
        R = cat.rep(args.rep)
        if not hasattr(R, "algebra"):
            raise UsageError(f"{args.rep} is a module over a Lie superalgebra, not a conformal module")
        return R
    return adjoint(A if A is not None else _algebra(args, cat))


# -- commands --------------------------------------------------------------------


def cmd_builtins(args, cat) -> Report:
    r = Report("builtins")
    r.info["algebras"] = {n: (p or "") for n, (_, p) in ALGEBRAS.items()}
    r.info["lie_algebras"] = sorted(LIE_ALGEBRAS)
    return r


def cmd_parse(args, cat) -> Report:
    r = Report("parse", inputs={"file": args.file})
    r.info["declarations"] = [f"{kind} {name}" for kind, name in cat.order]
    for kind, name in cat.order:
        if kind == "algebra":
            rep = check_axioms(cat.algebras[name])
            r.check(f"{name} axioms", rep.ok)
            r.witnesses += rep.witnesses
    return r


def cmd_render(args, cat) -> Report:
    r = Report("render", inputs={"file": args.file, "algebra": args.algebra})
    if args.algebra or not cat.order:
        text = dsl.render_algebra(_algebra(args, cat))
    else:
        text = dsl.render(cat).rstrip("\n")
    r.text = text
    return r


def cmd_check_axioms(args, cat) -> Report:
    A = _algebra(args, cat)
    r = Report("check-axioms", inputs={"algebra": A.name})
    rep = check_axioms(A)
    r.check("skew-symmetry", rep.skew_ok)
    r.check("jacobi", rep.jacobi_ok)
    r.check("parity", rep.parity_ok)
    r.witnesses = rep.witnesses
    return r


def cmd_derivations(args, cat) -> Report:
    A = _algebra(args, cat)
    b = _bounds(args)
    r = Report("derivations", inputs={"algebra": A.name, "parity": args.parity, "ddeg": b.ddeg, "ldeg": b.ldeg,
                                      "compare_inner": args.compare_inner})
    for p in PARITY_CHOICES[args.parity]:
        tag = parity_name(p)
        if args.compare_inner:
            cmp = compare_inner(A, p, b)
            r.info[f"{tag} der_dim"] = cmp["der_dim"]
            r.info[f"{tag} inner_dim"] = cmp["inner_dim"]
            r.info[f"{tag} outer_dim"] = cmp["quotient_dim"]
            r.bases[f"{tag} Der"] = _map_basis(cmp["der"].maps, A.names)
            r.bases[f"{tag} Inner"] = _map_basis(cmp["inner"].maps, A.names)
            r.check(f"{tag} derivations are inner", cmp["all_inner"])
        else:
            space = solve_generalized(A, "Der", p, b)
            r.info[f"{tag} der_dim"] = space.dim
            r.bases[f"{tag} Der"] = _map_basis(space.maps, A.names)
            r.check(f"{tag} solutions verified", True)
    return r


def cmd_generalized(args, cat) -> Report:
    A = _algebra(args, cat)
    b = _bounds(args)
    kind = kind_name(args.kind)
    r = Report("generalized", inputs={"algebra": A.name, "kind": kind, "parity": args.parity,
                                      "ddeg": b.ddeg, "ldeg": b.ldeg})
    for p in PARITY_CHOICES[args.parity]:
        tag = parity_name(p)
        space = solve_generalized(A, kind, p, b)
        r.info[f"{tag} dim"] = space.dim
        r.bases[f"{tag} {kind}"] = _map_basis(space.maps, A.names)
        r.check(f"{tag} solutions verified", True)
    return r


def cmd_center(args, cat) -> Report:
    A = _algebra(args, cat)
    if args.ddeg < 0:
        raise UsageError("degree bound must be nonnegative")
    res = center(A, args.ddeg)
    r = Report("center", inputs={"algebra": A.name, "ddeg": args.ddeg})
    r.info["dim"] = res.dim
    r.bases["center"] = [e.render(A.names) for e in res.elements]
    return r


def cmd_check_rep(args, cat) -> Report:
    R = _module(args, cat)
    r = Report("check-rep", inputs={"module": R.name, "algebra": R.algebra.name})
    rep = check_representation(R)
    r.check("sesquilinearity", rep.sesquilinear_ok)
    r.check("commutator identity", rep.commutator_ok)
    r.witnesses = rep.witnesses
    return r


def cmd_semidirect(args, cat) -> Report:
    R = _module(args, cat)
    r = Report("semidirect", inputs={"module": R.name, "algebra": R.algebra.name})
    rrep = check_representation(R)
    r.check("module axioms", rrep.ok)
    r.witnesses += rrep.witnesses
    S = semidirect(R, validate=False)
    rep = check_axioms(S)
    r.check("semidirect skew-symmetry", rep.skew_ok)
    r.check("semidirect jacobi", rep.jacobi_ok)
    r.witnesses += rep.witnesses
    r.info["generators"] = [f"{g.name} {parity_name(g.parity)}" for g in S.generators]
    r.info["text"] = dsl.render_algebra(S)
    return r


def cmd_cur_embedding(args, cat) -> Report:
    lie = cat.lie_algebra(args.lie) if args.lie else gl11()
    pi = cat.rep(args.rep) if args.rep else gl11_defining()
    if not hasattr(pi, "lie"):
        raise UsageError(f"{args.rep} is not a module over a Lie superalgebra")
    r = Report("cur-embedding", inputs={"lie": lie.name, "module": pi.name})
    problems = lie.check() + pi.check()
    r.check("input data valid", not problems)
    if problems:
        r.witnesses = problems
        return r
    emb = check_cur_embedding(lie, pi)
    r.check("Cur(g ⋉ V) = Cur g ⋉ Cur V", emb.ok)
    r.witnesses = emb.mismatches
    return r


def _cochain(args, cat):
    if not args.cochain:
        if len(cat.cochains) == 1:
            return next(iter(cat.cochains.values()))
        raise UsageError("choose a cochain with --cochain NAME")
    if args.cochain not in cat.cochains:
        raise UsageError(f"unknown cochain {args.cochain!r}")
    return cat.cochains[args.cochain]


def _cochain_basis(c):
    return {", ".join(k): v.render(c.module.names) for k, v in sorted(c.values.items())}


def cmd_differential(args, cat) -> Report:
    c = _cochain(args, cat)
    r = Report("differential", inputs={"cochain": c.name, "arity": c.arity, "parity": parity_name(c.parity)})
    if c.arity >= MAX_ARITY:
        raise UsageError(f"differential needs arity below {MAX_ARITY}")
    dc = differential(c)
    r.bases["d gamma"] = [f"({k}) = {v}" for k, v in _cochain_basis(dc).items()]
    r.info["cocycle"] = dc.is_zero()
    if c.arity + 1 < MAX_ARITY:
        r.check("d(d gamma) = 0", differential(dc).is_zero())
    return r


def cmd_d2(args, cat) -> Report:
    A = _algebra(args, cat)
    M = _module(args, cat, A)
    arities = [int(x) for x in args.arity.split(",")]
    for n in arities:
        if n < 0 or n + 2 > MAX_ARITY:
            raise UsageError(f"arity must be between 0 and {MAX_ARITY - 2}")
    rng = random.Random(args.seed)
    r = Report("d2", inputs={"algebra": A.name, "module": M.name, "seed": args.seed, "count": args.count,
                             "arity": arities})
    fails = 0
    for k in range(args.count):
        n = arities[k % len(arities)]
        c = random_cochain(rng, A, M, n, rng.randint(0, 1), degree=args.degree)
        if not differential(differential(c)).is_zero():
            fails += 1
            r.witnesses.append({"trial": k, "arity": n})
    r.info["trials"] = args.count
    r.check("d^2 = 0", not fails)
    return r


def cmd_deformation(args, cat) -> Report:
    c = _cochain(args, cat)
    r = Report("deformation", inputs={"cochain": c.name, "algebra": c.algebra.name})
    rep = deformation_check(c)
    r.check("skew-symmetry", rep.skew_ok)
    r.check("Jacobi at t^1", rep.defor1_ok)
    r.check("Jacobi at t^2", rep.defor2_ok)
    r.info["2-cocycle"] = rep.cocycle_ok
    r.witnesses = rep.witnesses
    return r


def cmd_nijenhuis(args, cat) -> Report:
    if args.map in ("identity", "zero"):
        A = _algebra(args, cat)
        f = identity_map(A) if args.map == "identity" else zero_map(A)
    else:
        if args.map not in cat.maps:
            raise UsageError(f"unknown map {args.map!r}")
        f, A = cat.maps[args.map]
        if args.algebra and cat.algebra(args.algebra).names != A.names:
            raise UsageError(f"map {args.map} is not defined on {args.algebra}")
    if f.parity:
        raise UsageError("Nijenhuis operators are even maps")
    r = Report("nijenhuis", inputs={"algebra": A.name, "map": args.map, "check_trivial": args.check_trivial})
    res = nijenhuis_residual(A, f)
    r.check("Nijenhuis identity", not res)
    r.witnesses += [{"pair": list(k), "residual": v} for k, v in res.items()]
    res2 = nijenhuis_minus_d_residual(A, f)
    r.check("identity at -∂", not res2)
    r.witnesses += [{"pair": list(k), "residual": v, "at": "-d"} for k, v in res2.items()]
    if args.check_trivial:
        rep = check_trivial_deformation(A, f)
        r.check("deformation skew-symmetry", rep.skew_ok)
        r.check("deformation Jacobi at t^1", rep.defor1_ok)
        r.check("deformation Jacobi at t^2", rep.defor2_ok)
        r.check("trivial (id + t f intertwines)", bool(rep.trivial_ok))
        r.check("bracket_N = d f", bool(rep.n2_ok))
        r.witnesses += rep.witnesses
    return r


def cmd_check_cend(args, cat) -> Report:
    rep = check_cend_axioms(args.rank, args.trials, args.seed, args.ddeg, args.ldeg)
    r = Report("check-cend", inputs={"rank": args.rank, "trials": args.trials, "seed": args.seed})
    for key in ("identity1", "identity2", "identity3", "assoc", "sesqui"):
        r.check(key, getattr(rep, key) == 0)
    r.info.update(rep.as_dict())
    return r


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcs", description="Exact computations with Lie conformal superalgebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, func, help_, algebra=False, bounds=False, parity=False, rep=False):
        c = sub.add_parser(name, help=help_)
        c.add_argument("--file", metavar="PATH", help="input document ('-' for stdin)")
        c.add_argument("--json", metavar="PATH", help="write a JSON report ('-' for stdout)")
        if algebra:
            c.add_argument("--algebra", metavar="NAME", help="declared or builtin algebra, e.g. NS or 'R5(alpha=1)'")
        if bounds:
            c.add_argument("--ddeg", type=int, default=4, help="bound on ∂-degree (default 4)")
            c.add_argument("--ldeg", type=int, default=4, help="bound on λ-degree (default 4)")
        if parity:
            c.add_argument("--parity", choices=sorted(PARITY_CHOICES), default="both")
        if rep:
            c.add_argument("--rep", metavar="NAME", help="declared module (default: adjoint)")
        c.set_defaults(func=func)
        return c

    cmd("builtins", cmd_builtins, "list builtin algebras")
    cmd("parse", cmd_parse, "parse a document and check its algebras")
    cmd("render", cmd_render, "print the canonical text form", algebra=True)
    cmd("check-axioms", cmd_check_axioms, "skew-symmetry, Jacobi and parity", algebra=True)
    c = cmd("derivations", cmd_derivations, "derivations in a degree box", algebra=True, bounds=True, parity=True)
    c.add_argument("--compare-inner", action="store_true", help="compare with inner derivations")
    c = cmd("generalized", cmd_generalized, "generalized derivations of a given kind", algebra=True, bounds=True,
            parity=True)
    c.add_argument("--kind", required=True, help=", ".join(KINDS))
    c = cmd("center", cmd_center, "center up to a ∂-degree", algebra=True)
    c.add_argument("--ddeg", type=int, default=4)
    cmd("check-rep", cmd_check_rep, "conformal module axioms", algebra=True, rep=True)
    cmd("semidirect", cmd_semidirect, "build and check a semidirect product", algebra=True, rep=True)
    c = cmd("cur-embedding", cmd_cur_embedding, "compare Cur(g ⋉ V) with Cur g ⋉ Cur V")
    c.add_argument("--lie", metavar="NAME")
    c.add_argument("--rep", metavar="NAME")
    c = cmd("differential", cmd_differential, "differential of a declared cochain")
    c.add_argument("--cochain", metavar="NAME")
    c = cmd("d2", cmd_d2, "d^2 = 0 on random cochains", algebra=True, rep=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--arity", default="0,1,2", help="comma separated arities")
    c.add_argument("--degree", type=int, default=2)
    c = cmd("deformation", cmd_deformation, "first and second order deformation equations")
    c.add_argument("--cochain", metavar="NAME")
    c = cmd("nijenhuis", cmd_nijenhuis, "Nijenhuis identity for an even map", algebra=True)
    c.add_argument("--map", default="identity", help="identity, zero or a declared map")
    c.add_argument("--check-trivial", action="store_true", help="also check the induced trivial deformation")
    c = cmd("check-cend", cmd_check_cend, "composition identities on random maps")
    c.add_argument("--rank", type=int, default=2)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--ddeg", type=int, default=2)
    c.add_argument("--ldeg", type=int, default=2)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cat = _load(args)
        report = args.func(args, cat)
    except (LCSError, OSError, ValueError) as exc:
        print(f"lcs: error: {exc}", file=sys.stderr)
        return 2
    report.finish()
    if args.json == "-":
        print(report.to_json())
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(report.to_json() + "\n")
        print(report.text if report.text is not None else report.summary())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
