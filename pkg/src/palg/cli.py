"""Command-line driver.

Exit codes are a stable contract: 0 pass/found, 1 violation/none,
2 input error, 3 resource limit, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import reports, serialize
from .core import (
    DEFAULT_SEARCH_BUDGET,
    FiniteAlgebra,
    ResourceLimitError,
    StructureError,
    enumerate_embeddings,
    enumerate_homomorphisms,
    is_isomorphic,
    make_bn,
)
from .duality import (
    FinitePoset,
    PPMap,
    delta,
    epsilon,
    find_surjective_ppmorphism,
    finite_membership,
    posets_isomorphic,
    validate_poset,
    validate_ppmap,
)
from .free import build_free
from .logic import ONE, Quasiequation, format_quasiequation, make_ib, make_qb, parse, satisfies
from .serialize import (
    algebra_to_dict,
    algebra_to_dot,
    load_json,
    load_object,
    poset_to_dict,
    poset_to_dot,
    save_json,
)
from .steiner import construct_sts, fano_system, make_p1, paste_w, poset_of

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INCONCLUSIVE = 4


def _emit(data: dict, out: str | None) -> None:
    if out:
        save_json(out, data)
    else:
        print(json.dumps(data, indent=1))


def _load_algebra(path: str) -> FiniteAlgebra:
    obj = load_object(path)
    if not isinstance(obj, FiniteAlgebra):
        raise StructureError(f"{path} does not hold an algebra")
    return obj


def _load_poset(path: str) -> FinitePoset:
    obj = load_object(path)
    if not isinstance(obj, FinitePoset):
        raise StructureError(f"{path} does not hold a poset")
    return obj


def _cmd_make(args) -> int:
    kind = args.kind
    if kind in ("bn", "p1", "sts", "w") and args.n is None:
        print(f"make {kind} needs a numeric parameter", file=sys.stderr)
        return EXIT_INPUT
    if kind == "bn":
        data = algebra_to_dict(make_bn(args.n))
        dot = algebra_to_dot(make_bn(args.n)) if args.dot else None
    elif kind == "p1":
        p = make_p1(args.n)
        data, dot = poset_to_dict(p), poset_to_dot(p) if args.dot else None
    elif kind == "fano":
        p = poset_of(fano_system())
        data, dot = poset_to_dict(p), poset_to_dot(p) if args.dot else None
    elif kind == "sts":
        p = poset_of(construct_sts(args.n))
        data, dot = poset_to_dict(p), poset_to_dot(p) if args.dot else None
    elif kind == "w":
        p = paste_w(args.n)
        data, dot = poset_to_dict(p), poset_to_dot(p) if args.dot else None
    elif kind == "free":
        if args.m is None or args.k is None:
            print("make free needs --m and --k", file=sys.stderr)
            return EXIT_INPUT
        a = build_free(args.m, args.k).algebra
        data = algebra_to_dict(a)
        dot = algebra_to_dot(a) if args.dot else None
    else:
        return EXIT_INPUT
    _emit(data, args.out)
    if dot is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    return EXIT_OK


def _cmd_check(args) -> int:
    if args.what == "palgebra":
        from .core import validate_palgebra
        try:
            a = FiniteAlgebra(**{k: load_json(args.file)[k]
                                 for k in ("size", "meet", "join", "star", "zero", "one")})
        except KeyError as exc:
            print(f"malformed algebra file: {exc}", file=sys.stderr)
            return EXIT_INPUT
        rep = validate_palgebra(a)
    elif args.what == "poset":
        data = load_json(args.file)
        p = FinitePoset.from_covers(int(data["size"]), [tuple(c) for c in data["covers"]])
        rep = validate_poset(p)
    elif args.what == "ppmap":
        src = _load_poset(args.src)
        dst = _load_poset(args.dst)
        table = serialize.map_from_dict(load_json(args.map))
        f = PPMap(src, dst, table)
        rep = validate_ppmap(f)
        if rep.ok and not f.is_surjective():
            print("valid pp-morphism (not surjective)")
    elif args.what == "quasieq":
        a = _load_algebra(args.algebra)
        q = _parse_quasieq(args)
        res = satisfies(a, q, budget=args.budget)
        if res.status == "inconclusive":
            print("inconclusive")
            return EXIT_INCONCLUSIVE
        if res.status == "satisfied":
            print("true")
            return EXIT_OK
        print("false")
        print("falsifier:", json.dumps(res.falsifier, sort_keys=True))
        return EXIT_FAIL
    else:
        return EXIT_INPUT
    if args.json:
        print(json.dumps({"ok": rep.ok,
                          "violations": [{"law": v.law, "witness": list(v.witness)}
                                         for v in rep.violations]}))
    elif rep.ok:
        print("ok")
    else:
        for v in rep.violations:
            print(f"violation {v.law!r} witness {v.witness}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _parse_quasieq(args) -> Quasiequation:
    if args.q is None and args.q_file is None:
        raise StructureError("check quasieq needs --q or --q-file")
    text = args.q if args.q is not None else open(args.q_file, encoding="utf-8").read()
    q = parse(text)
    if not isinstance(q, Quasiequation):
        q = Quasiequation((), (q, ONE))  # a bare term t is read as t = 1
    return q


def _cmd_dual(args) -> int:
    obj = load_object(args.file)
    if args.direction == "delta":
        if not isinstance(obj, FiniteAlgebra):
            print("delta expects an algebra file", file=sys.stderr)
            return EXIT_INPUT
        poset, labels = delta(obj)
        _emit(poset_to_dict(poset), args.out)
        if args.roundtrip:
            ok = is_isomorphic(epsilon(poset), obj)[0]
            print(f"roundtrip {'ok' if ok else 'FAILED'}")
            return EXIT_OK if ok else EXIT_FAIL
    else:
        if not isinstance(obj, FinitePoset):
            print("epsilon expects a poset file", file=sys.stderr)
            return EXIT_INPUT
        alg = epsilon(obj)
        _emit(algebra_to_dict(alg), args.out)
        if args.roundtrip:
            ok = posets_isomorphic(delta(alg)[0], obj)
            print(f"roundtrip {'ok' if ok else 'FAILED'}")
            return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def _cmd_search(args) -> int:
    if args.kind == "ppmorph":
        src = _load_poset(args.src)
        dst = _load_poset(args.dst)
        res = find_surjective_ppmorphism(src, dst, budget=args.budget)
        if res.status == "found":
            _emit(serialize.map_to_dict(res.witness.table), args.out)
            return EXIT_OK
        print(res.status)
        return EXIT_FAIL if res.status == "none" else EXIT_INCONCLUSIVE
    if args.kind in ("embed", "homs"):
        small = _load_algebra(args.small)
        big = _load_algebra(args.big)
        find = enumerate_embeddings if args.kind == "embed" else enumerate_homomorphisms
        res = find(small, big, limit=args.limit, budget=args.budget)
        if res.maps:
            print(f"{len(res.maps)} found (complete={res.complete})")
            _emit(serialize.map_to_dict(res.maps[0].table), args.out)
            return EXIT_OK
        if res.complete:
            print("none")
            return EXIT_FAIL
        print("inconclusive")
        return EXIT_INCONCLUSIVE
    if args.kind == "member":
        a = _load_algebra(args.algebra)
        gens = [_load_algebra(g) for g in args.gens]
        res = finite_membership(a, gens, budget=args.budget)
        print(res.status)
        if res.status == "yes":
            _emit(serialize.map_to_dict(res.witness.table), args.out)
            return EXIT_OK
        return EXIT_FAIL if res.status == "no" else EXIT_INCONCLUSIVE
    return EXIT_INPUT


def _cmd_report(args) -> int:
    data = reports.run_suite(args.suite, expensive=args.expensive)
    if args.json:
        print(json.dumps(data, indent=1))
    else:
        print(f"suite {data['suite']}: {'PASS' if data['passed'] else 'FAIL'}")
        for c in data["clauses"]:
            mark = "pass" if c["passed"] else "FAIL"
            print(f"  [{mark}] {c['id']}" + (f" -- {c['detail']}" if c["detail"] else ""))
    return EXIT_OK if data["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="palg",
        description="finite p-algebras, poset duality, quasiequations")
    ap.add_argument("--threads", type=int, default=1,
                    help="upper bound on worker threads (current searches are sequential)")
    sub = ap.add_subparsers(dest="command", required=True)

    mk = sub.add_parser("make", help="construct a named algebra or poset")
    mk.add_argument("kind", choices=["bn", "p1", "fano", "sts", "w", "free"])
    mk.add_argument("n", type=int, nargs="?", help="parameter for bn/p1/sts/w")
    mk.add_argument("--m", type=int, help="variety parameter for free")
    mk.add_argument("--k", type=int, help="generator count for free")
    mk.add_argument("--out", help="output JSON path (default: stdout)")
    mk.add_argument("--dot", help="also write a Hasse diagram in DOT")
    mk.set_defaults(fn=_cmd_make)

    ck = sub.add_parser("check", help="validate an object or a quasiequation")
    ck.add_argument("what", choices=["palgebra", "poset", "ppmap", "quasieq"])
    ck.add_argument("--file", help="algebra or poset file")
    ck.add_argument("--src", help="source poset file (ppmap)")
    ck.add_argument("--dst", help="target poset file (ppmap)")
    ck.add_argument("--map", help="map table file (ppmap)")
    ck.add_argument("--algebra", help="algebra file (quasieq)")
    ck.add_argument("--q", help="quasiequation text (a bare term t is read as t = 1)")
    ck.add_argument("--q-file", help="file holding the quasiequation text")
    ck.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    ck.add_argument("--json", action="store_true")
    ck.set_defaults(fn=_cmd_check)

    du = sub.add_parser("dual", help="apply a dual functor")
    du.add_argument("direction", choices=["delta", "epsilon"])
    du.add_argument("file")
    du.add_argument("--out")
    du.add_argument("--roundtrip", action="store_true",
                    help="verify the double dual is isomorphic to the input")
    du.set_defaults(fn=_cmd_dual)

    se = sub.add_parser("search", help="witness searches")
    se.add_argument("kind", choices=["ppmorph", "embed", "member", "homs"])
    se.add_argument("--src")
    se.add_argument("--dst")
    se.add_argument("--small")
    se.add_argument("--big")
    se.add_argument("--algebra")
    se.add_argument("--gens", nargs="+", default=[])
    se.add_argument("--limit", type=int, default=None)
    se.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    se.add_argument("--out")
    se.set_defaults(fn=_cmd_search)

    rp = sub.add_parser("report", help="run a named verification suite")
    rp.add_argument("suite", choices=sorted(reports.SUITES))
    rp.add_argument("--json", action="store_true")
    rp.add_argument("--expensive", action="store_true",
                    help="include the 2-generator free-p-algebra tier")
    rp.set_defaults(fn=_cmd_report)

    qb = sub.add_parser("qb", help="print the qb_n quasiequation")
    qb.add_argument("n", type=int)
    qb.set_defaults(fn=lambda a: (print(format_quasiequation(make_qb(a.n))), EXIT_OK)[1])

    ib = sub.add_parser("ib", help="print the ib_m identity")
    ib.add_argument("m", type=int)
    ib.set_defaults(fn=lambda a: (print(format_quasiequation(make_ib(a.m))), EXIT_OK)[1])

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (StructureError, ValueError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
