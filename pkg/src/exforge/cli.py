"""Command line: build algebras, grade and verify catalog entries, export JSON.

    exforge list [--all]
    exforge build <id> [--json out.json]
    exforge grade <id>
    exforge verify <id> [--full-jacobi] [--[no-]universal-group] [--roots] [--from-json path]
    exforge report theorem-main [--jobs N]
    exforge identify <algebra-id>
    exforge export <id> --json <path>

Every command takes --format text|json.  Exit codes: 0 success, 1 a check
did not match, 2 the object could not be built (unknown id, construction
error).
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

EXIT_OK, EXIT_MISMATCH, EXIT_BUILD = 0, 1, 2

ALGEBRA_IDS = {
    "composition": ("F", "K", "Q", "C", "pF", "pK", "pQ", "pC", "Ok"),
    "jordan": ("H3F", "H3K", "H3Q", "Albert", "H4F", "H4K", "H4Q"),
    "structurable": ("CDH4F", "CDH4K", "CDH4Q", "Brown", "QxC", "KxC", "CxC"),
    "construction": ("tits:<C>:<J>", "g:<S>:<S2>", "kantor:<A>", "steinberg:<A>", "der:<A>",
                     "tkk-tits", "tkk-koecher"),
}


class BuildError(Exception):
    pass


# ----------------------------------------------------------------------
# id resolution


def _jordan(key):
    from . import jordan
    if key == "F":
        return jordan.ground_field()
    if key == "Albert":
        return jordan.albert()
    if len(key) == 3 and key[0] == "H" and key[1] in "34" and key[2] in "FKQ":
        return jordan.hermitian_jordan(key[2], int(key[1]))
    raise BuildError(f"unknown Jordan algebra {key!r}")


def _structurable(key):
    from .structurable import structurable_by_id
    try:
        return structurable_by_id(key)
    except KeyError as e:
        raise BuildError(str(e)) from None


def resolve(id):
    """Object for an algebra id, construction id or catalog id.

    Returns (kind, object) with kind one of composition, jordan,
    structurable, lie; lie objects are LieAlg instances.
    """
    from . import composition, liebuild
    from .catalog import ENTRIES, catalog
    if id in ENTRIES:
        return "lie", catalog(id)[0]
    if id in ("F", "K", "Q", "C"):
        return "composition", composition.build_hurwitz(id)
    if id in composition.SYMCOMP_KINDS:
        return "composition", composition.build_symmetric_composition(id)
    if id in ALGEBRA_IDS["jordan"]:
        return "jordan", _jordan(id)
    if id in ALGEBRA_IDS["structurable"]:
        return "structurable", _structurable(id)
    head, _, rest = id.partition(":")
    args = rest.split(":") if rest else []
    if head == "tits" and len(args) == 2:
        return "lie", liebuild.tits(composition.build_hurwitz(args[0]), _jordan(args[1]))
    if head == "g" and len(args) == 2:
        return "lie", liebuild.g_construction(args[0], args[1])
    if head == "kantor" and len(args) == 1:
        return "lie", liebuild.kantor(_structurable(args[0]))
    if head == "steinberg" and len(args) == 1:
        return "lie", liebuild.steinberg(_structurable(args[0]))
    if head == "der" and len(args) == 1:
        a = args[0]
        if a in ALGEBRA_IDS["structurable"]:
            return "lie", liebuild.der_algebra(_structurable(a), involution=True)
        if a in ALGEBRA_IDS["jordan"]:
            return "lie", liebuild.der_algebra(_jordan(a))
        return "lie", liebuild.der_algebra(resolve(a)[1])
    if id == "tkk-tits":
        return "lie", liebuild.tkk_tits()
    if id == "tkk-koecher":
        return "lie", liebuild.tkk_koecher()
    raise BuildError(f"unknown id {id!r}")


def _sc(obj):
    """The AlgebraSC behind any resolved object."""
    return getattr(obj, "algebra", obj)


# ----------------------------------------------------------------------
# output


def _fmt_type(t):
    return "(" + ",".join(str(x) for x in t) + ")" if t is not None else "-"


def _fmt_group(g):
    return g.label().replace("x", "×") if g is not None else "-"


def _emit(args, rows, columns=None):
    """Rows of dicts: aligned text or JSON lines."""
    if args.format == "json":
        for r in rows:
            print(json.dumps(r, default=str))
        return
    if not rows:
        return
    columns = columns or list(rows[0])
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    width = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(columns)]
    print(" | ".join(c.ljust(w) for c, w in zip(columns, width)).rstrip())
    print("-+-".join("-" * w for w in width))
    for x in cells:
        print(" | ".join(v.ljust(w) for v, w in zip(x, width)).rstrip())


# ----------------------------------------------------------------------
# commands


def list_rows(include_aux=True):
    from .catalog import ENTRIES
    rows = []
    for e in ENTRIES.values():
        if e.aux and not include_aux:
            continue
        flags = []
        if e.aux:
            flags.append("auxiliary")
        if not e.fine:
            flags.append("not-fine")
        rows.append({"id": e.id, "group": _fmt_group(e.group), "type": _fmt_type(e.type),
                     "algebra": e.algebra, "flags": ",".join(flags)})
    return rows


def cmd_list(args):
    rows = list_rows(include_aux=args.all)
    if args.format == "text":
        for r in rows:
            line = f"{r['id']} | {r['group']} | {r['type']}"
            print(line + (f" | {r['flags']}" if r["flags"] else ""))
    else:
        _emit(args, rows)
    return EXIT_OK


def cmd_build(args):
    kind, obj = resolve(args.id)
    A = _sc(obj)
    row = {"id": args.id, "kind": kind, "name": A.name, "dim": A.dim, "field_order": A.N}
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(A.to_json(), fh)
        row["json"] = args.json
    _emit(args, [row])
    return EXIT_OK


def cmd_grade(args):
    from .catalog import catalog
    L, g = catalog(args.id)
    comps = sorted(g.components().items())
    if args.format == "json":
        print(json.dumps({"id": args.id, "group": g.group.label(), "type": list(g.type()),
                          "components": [{"degree": list(d), "dim": len(i)} for d, i in comps]}))
        return EXIT_OK
    print(f"{args.id}: {L.name}, dim {L.dim}, group {_fmt_group(g.group)}, type {_fmt_type(g.type())}")
    for d, idx in comps:
        print(f"  {tuple(d)}  dim {len(idx)}")
    return EXIT_OK


def verify_report(id, full_jacobi=False, universal=True, roots=False, from_json=None):
    """Dict report of one catalog entry; ``ok`` is True iff every check matched."""
    from .catalog import catalog, entry, verify_grading
    from .lieanalysis import cartan_and_roots, verify_lie
    e = entry(id)
    t0 = time.time()
    if from_json:
        L, g = load_export(from_json)
    else:
        L, g = catalog(id)
    ok, checks, group = verify_grading(g, e.group, e.type, universal)
    lr = verify_lie(L, mode="full" if full_jacobi else None)
    checks["lie"] = lr.ok or f"violation {lr.violation}"
    if roots:
        want = e.lie_type.upper() if e.lie_type else None
        rd = cartan_and_roots(L)
        checks["roots"] = want is None or rd.type_label == want or f"got {rd.type_label}, expected {want}"
    good = all(v is True for v in checks.values())
    flags = set(g.flags)
    status = "FAIL" if not good else ("PASS-WITH-FLAG" if "not-fine" in flags else "PASS")
    return {"id": id, "status": status, "ok": good, "group": group.label() if group is not None else None,
            "type": list(g.type()), "declared_group": e.group.label(), "declared_type":
            list(e.type) if e.type else None, "checks": checks, "flags": sorted(flags),
            "seconds": round(time.time() - t0, 2)}


def _print_verify(r):
    grp = r["group"].replace("x", "×") if r["group"] else "-"
    print(f"{r['status']}: {r['id']} group {grp}, type {_fmt_type(r['type'])}")
    for k, v in r["checks"].items():
        if v is not True:
            print(f"  {k}: {v}")
    if "not-fine" in r["flags"]:
        print("  flagged: not fine")


def cmd_verify(args):
    r = verify_report(args.id, args.full_jacobi, args.universal_group, args.roots, args.from_json)
    if args.format == "json":
        print(json.dumps(r, default=str))
    else:
        _print_verify(r)
    return EXIT_OK if r["ok"] else EXIT_MISMATCH


def _safe_verify(id):
    try:
        return verify_report(id)
    except Exception as exc:  # reported per entry, the run continues
        return {"id": id, "status": "ERROR", "ok": False, "error": repr(exc)}


THEOREM_GROUPS = ("e6", "e7", "e8")


def theorem_ids():
    from .catalog import ENTRIES
    out = {k: [] for k in THEOREM_GROUPS}
    for e in ENTRIES.values():
        if e.aux:
            continue
        out[e.lie_type].append(e.id)
    return out


def cmd_report(args):
    if args.what != "theorem-main":
        raise BuildError(f"unknown report {args.what!r}")
    ids = theorem_ids()
    flat = [i for k in THEOREM_GROUPS for i in ids[k]]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = dict(zip(flat, ex.map(_safe_verify, flat)))
    else:
        results = {i: _safe_verify(i) for i in flat}
    bad = [r for r in results.values() if not r["ok"]]
    if args.format == "json":
        for k in THEOREM_GROUPS:
            for i in ids[k]:
                print(json.dumps(dict(results[i], algebra=k), default=str))
    else:
        for k in THEOREM_GROUPS:
            print(f"## {k} ({len(ids[k])} fine gradings)")
            print()
            print("| id | status | universal group | type |")
            print("|---|---|---|---|")
            for i in ids[k]:
                r = results[i]
                print(f"| {i} | {r['status']} | {_fmt_group_str(r.get('group'))} | {_fmt_type(r.get('type'))} |")
            print()
        print(f"{len(flat) - len(bad)} of {len(flat)} entries pass")
        for r in bad:
            detail = r.get("error") or {k: v for k, v in r["checks"].items() if v is not True}
            print(f"  {r['id']}: {detail}")
    return EXIT_OK if not bad else EXIT_MISMATCH


def _fmt_group_str(s):
    return s.replace("x", "×") if s else "-"


def cmd_identify(args):
    from .lieanalysis import cartan_and_roots, killing_simplicity
    kind, obj = resolve(args.id)
    if kind != "lie":
        raise BuildError(f"{args.id!r} is not a Lie algebra")
    rd = cartan_and_roots(obj)
    _, ss, simple = killing_simplicity(obj, roots=rd)
    row = {"id": args.id, "dim": obj.dim, "rank": rd.rank, "roots": len(rd.roots), "type": rd.type_label,
           "semisimple": ss, "simple": simple}
    _emit(args, [row])
    return EXIT_OK


def export_data(id):
    from .catalog import catalog, entry
    L, g = catalog(id)
    e = entry(id)
    return {"id": id, "declared": {"group": e.group.to_json(), "type": list(e.type) if e.type else None},
            "algebra": g.algebra.to_json(), "grading": g.to_json()}


def load_export(path):
    """(AlgebraSC, Grading) from an export file."""
    from .algcore import AlgebraSC
    from .gradlib import grading_from_json
    with open(path) as fh:
        data = json.load(fh)
    A = AlgebraSC.from_json(data["algebra"])
    A.anticommutative = True
    return A, grading_from_json(data["grading"], A)


def cmd_export(args):
    data = export_data(args.id)
    with open(args.json, "w") as fh:
        json.dump(data, fh)
    _emit(args, [{"id": args.id, "json": args.json, "dim": data["algebra"]["dim"]}])
    return EXIT_OK


# ----------------------------------------------------------------------


def parser():
    p = argparse.ArgumentParser(prog="exforge", description="Exceptional Lie algebras and their fine gradings.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kw):
        s = sub.add_parser(name, **kw)
        s.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        s.set_defaults(fn=fn)
        return s

    s = add("list", cmd_list, help="catalog ids with declared groups and types")
    s.add_argument("--all", action="store_true", help="include auxiliary gradings")
    s = add("build", cmd_build, help="build an algebra")
    s.add_argument("id")
    s.add_argument("--json")
    s = add("grade", cmd_grade, help="components of a catalog grading")
    s.add_argument("id")
    s = add("verify", cmd_verify, help="verify a catalog entry")
    s.add_argument("id")
    s.add_argument("--full-jacobi", action="store_true")
    s.add_argument("--universal-group", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--roots", action="store_true")
    s.add_argument("--from-json", help="verify an exported file instead of rebuilding")
    s = add("report", cmd_report, help="the theorem table")
    s.add_argument("what")
    s.add_argument("--jobs", type=int, default=1)
    s = add("identify", cmd_identify, help="Cartan type of a Lie algebra")
    s.add_argument("id")
    s = add("export", cmd_export, help="algebra and grading as JSON")
    s.add_argument("id")
    s.add_argument("--json", required=True)
    return p


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        return args.fn(args)
    except (BuildError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUILD
    except Exception as exc:
        print(f"error: construction failed: {exc!r}", file=sys.stderr)
        return EXIT_BUILD


if __name__ == "__main__":
    sys.exit(main())
