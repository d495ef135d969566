"""Command line: ``seqcolor {color,sds,gadget,reduce,oracle,audit}``.

Exit codes: 0 yes/success, 1 no/failure, 2 budget or cap breach, 3 input error.
All output is deterministic JSON (or DOT where asked).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections.abc import Sequence

from . import defining_sets as ds
from . import gadgets, oracle
from .engine import AuditViolation, InvariantViolation, Solver, lists_from_defining_set
from .graph import Graph, GraphError, OrderedColoredGraph, is_proper
from .io import DocumentError, Instance, dumps, load, to_document, to_dot
from .rules import RuleBase, RuleError, preset, rulebase_from_dict, validate_rule

EXIT_YES, EXIT_NO, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(doc, path: str | None) -> None:
    text = dumps(doc)
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_dot(text: str, path: str | None) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _rulebase(spec, inst: Instance | None, palette: int = 3) -> RuleBase:
    spec = spec if spec is not None else (inst.rulebase if inst is not None else None)
    spec = spec if spec is not None else "RT"
    if isinstance(spec, dict):
        return rulebase_from_dict(spec)
    if spec in ("RT", "RG", "RT+greedy"):
        return preset(spec, palette)
    if os.path.exists(spec):
        with open(spec) as fh:
            return rulebase_from_dict(json.load(fh))
    raise InputError(f"unknown rule-base {spec!r}; use RT, RG, RT+greedy or a JSON file")


def _csv(text: str | None) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


def _names(inst: Instance) -> dict[int, str]:
    out = {v: str(v) for v in inst.graph.vertices}
    for lab, v in inst.marks.items():
        out[v] = lab
    return out


def _named_set(inst: Instance, vs) -> list[str]:
    names = _names(inst)
    return [names[v] for v in sorted(vs, key=inst.ordering.__getitem__)]


def _target(inst: Instance) -> OrderedColoredGraph:
    if inst.coloring is None:
        raise InputError("this command needs a 'coloring' in the instance")
    ocg = OrderedColoredGraph(inst.graph, inst.ordering, inst.coloring, inst.palette, inst.marks)
    if not ocg.is_proper():
        raise InputError("the instance coloring is not proper")
    return ocg


def _k(args, inst: Instance | None) -> int | None:
    k = args.k if args.k is not None else (inst.k if inst is not None else None)
    if k is not None and k < 1:
        raise InputError("k must be at least 1")
    return k


# --- color ----------------------------------------------------------------------


def cmd_color(args) -> int:
    inst = load(args.instance)
    rb = _rulebase(args.rulebase, inst, inst.palette)
    full = frozenset(range(1, rb.palette + 1))
    if args.seeds is not None:
        if inst.coloring is None:
            raise InputError("--seeds needs a 'coloring' in the instance")
        start = lists_from_defining_set(inst.graph, inst.coloring, inst.resolve_all(_csv(args.seeds)), rb.palette)
    elif inst.lists is not None:
        start = inst.lists
    else:
        start = {v: full for v in inst.graph.vertices}
    solver = Solver(inst.graph, inst.ordering, rb, audit=args.audit, audit_cap=args.cap)
    res = solver.solve(start, args.rounds_cap)
    names = _names(inst)
    doc = {
        "done": res.done,
        "status": res.status,
        "rounds": res.rounds,
        "failed_at": names[res.failed_at] if res.failed_at is not None else None,
        "lists": {names[v]: sorted(res.lists[v]) for v in sorted(inst.graph.vertices, key=inst.ordering.__getitem__)},
    }
    if args.trace:
        doc["trace"] = [
            {"round": i, "changes": [
                {"vertex": names[c.vertex], "old": sorted(c.old), "new": sorted(c.new), "rule": c.rule}
                for c in changes]}
            for i, changes in enumerate(res.trace, start=1)
        ]
    _emit(doc, args.json_out)
    if args.dot_out:
        col = {v: next(iter(lst)) for v, lst in res.lists.items() if len(lst) == 1}
        _write_dot(to_dot(inst.graph, inst.ordering, col, inst.marks), args.dot_out)
    return EXIT_YES if res.done else EXIT_NO


# --- sds --------------------------------------------------------------------------


def _witness_doc(inst: Instance, w: ds.SdsWitness | None) -> dict | None:
    if w is None:
        return None
    return {"set": _named_set(inst, w.set), "size": len(w.set), "rounds": w.rounds, "index": w.index}


def cmd_sds(args) -> int:
    inst = load(args.instance)
    rb = _rulebase(args.rulebase, inst, inst.palette)
    k = _k(args, inst)
    if args.action in ("colwds", "colsds"):
        xi = args.xi if args.xi is not None else inst.xi
        if xi is None:
            raise InputError("--xi is required")
        mode = "weak" if args.action == "colwds" else "strong"
        out = ds.exists_coloring_with_sdn_le(inst.graph, inst.ordering, rb, k, xi, mode, args.budget)
        names = _names(inst)
        doc = {
            "query": args.action, "k": k, "xi": xi, "answer": out.status,
            "coloring": None if out.coloring is None else {names[v]: out.coloring[v] for v in sorted(out.coloring, key=inst.ordering.__getitem__)},
            "witness": _witness_doc(inst, out.witness), "nodes_explored": out.explored,
        }
        _emit(doc, args.json_out)
        return {"yes": EXIT_YES, "no": EXIT_NO}.get(out.status, EXIT_BUDGET)
    target = _target(inst)
    if args.action == "verify":
        if args.seeds is None:
            raise InputError("verify needs --seeds")
        w = ds.verify_sds(target, inst.resolve_all(_csv(args.seeds)), rb, k)
        _emit({"query": "verify", "k": k, "valid": w is not None, "witness": _witness_doc(inst, w)}, args.json_out)
        return EXIT_YES if w is not None else EXIT_NO
    fn = ds.wsdn if args.action == "wsdn" else ds.ssdn
    out = fn(target, rb, k, args.budget, args.threads)
    doc = {
        "query": args.action, "k": k, "status": out.status, "number": out.number,
        "witness": _witness_doc(inst, out.witness), "nodes_explored": out.explored,
    }
    if out.status == "exceeded":
        doc["upper_bound"] = None if out.witness is None else (
            len(out.witness.set) if args.action == "wsdn" else out.witness.index)
    _emit(doc, args.json_out)
    return {"found": EXIT_YES, "none": EXIT_NO}.get(out.status, EXIT_BUDGET)


# --- gadget / reduce ------------------------------------------------------------------


def _ocg_doc(g: OrderedColoredGraph, **extra) -> dict:
    return to_document(g.graph, g.ordering, g.coloring, None, g.marks, **extra)


def cmd_gadget(args) -> int:
    fam = args.family
    if fam == "D":
        inst = gadgets.build_D(args.k)
    elif fam == "Gxi":
        inst = gadgets.build_G_xi(args.xi, args.k)
    elif fam == "F":
        inst = gadgets.build_F(args.k)
    else:
        inst = gadgets.build_H(args.n)
    g = inst.graph
    if args.dot_out:
        _write_dot(to_dot(g.graph, g.ordering, g.coloring, g.marks, name=fam), args.dot_out)
        if args.dot_out == "-" and not args.json_out:
            return EXIT_YES
    _emit(_ocg_doc(g, interface=list(inst.interface), parameters=dict(inst.params)), args.json_out)
    return EXIT_YES


def _load_witness(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise DocumentError(f"malformed witness JSON: {e}") from None
    if not isinstance(doc, dict):
        raise DocumentError("a witness document must be a JSON object")
    return doc


def cmd_reduce(args) -> int:
    inst = load(args.instance)
    wit = _load_witness(args.witness)
    g = inst.graph
    if args.kind == "3col":
        k = args.k if args.k is not None else 1
        coloring = None
        if "coloring" in wit:
            coloring = {inst.resolve(a): c for a, c in wit["coloring"].items()}
        elif inst.coloring is not None:
            coloring = inst.coloring
        out = gadgets.reduce_3col(g, k, args.mode, inst.ordering, coloring)
    else:
        t = args.t if args.t is not None else (inst.xi if inst.xi is not None else None)
        cover = inst.resolve_all(wit["cover"]) if "cover" in wit else None
        if t is None:
            t = len(cover) if cover is not None else len(g)
        if args.kind == "vc-sds":
            out = gadgets.reduce_vertexcover_sds(g, t, args.k if args.k is not None else 2, inst.ordering, cover)
        else:
            out = gadgets.reduce_vertexcover_rulebase(g, t, inst.ordering, cover)
    doc = to_document(out.graph, out.ordering, out.coloring, None, out.marks, bound=out.bound,
                      rulebase="RT")
    if out.seeds is not None:
        doc["certificate"] = sorted(out.seeds, key=out.ordering.__getitem__)
        if out.coloring is not None and is_proper(out.graph, out.coloring):
            w = ds.verify_sds(out.instance, out.seeds, preset("RT", 3))
            doc["certificate_rounds"] = None if w is None else w.rounds
            doc["certificate_index"] = None if w is None else w.index
    if args.dot_out:
        _write_dot(to_dot(out.graph, out.ordering, out.coloring, out.marks, name=args.kind), args.dot_out)
    _emit(doc, args.json_out)
    return EXIT_YES


# --- oracle -------------------------------------------------------------------------


def cmd_oracle(args) -> int:
    inst = load(args.instance)
    g = inst.graph
    t = args.t if args.t is not None else inst.palette
    names = _names(inst)
    if args.action == "enumerate":
        lists = inst.lists or {}
        p = oracle.ListColoringProblem(g, lists, t)
        order = sorted(g.vertices, key=inst.ordering.__getitem__)
        e = oracle.enumerate_solutions(p, args.max_solutions, args.cap, order)
        _emit({"count": len(e), "overflow": e.overflow,
               "solutions": [{names[v]: s[v] for v in order} for s in e.solutions]}, args.json_out)
        return EXIT_BUDGET if e.overflow else (EXIT_YES if e.solutions else EXIT_NO)
    if args.action == "ucg":
        parts = oracle.partitions(g, t, args.cap)
        ok = len(parts) == 1
        _emit({"t": t, "ucg": ok, "partitions": len(parts)}, args.json_out)
        return EXIT_YES if ok else EXIT_NO
    if args.action == "chromatic":
        chi, cl = oracle.chromatic_and_clique(g, args.cap)
        _emit({"chromatic_number": chi, "clique_number": cl}, args.json_out)
        return EXIT_YES
    system = _load_system(args.system, inst)
    if args.action == "transverse-check":
        ok = oracle.check_transverse(g, system, t, args.cap)
        _emit({"t": t, "transverse": ok}, args.json_out)
        return EXIT_YES if ok else EXIT_NO
    try:
        built = oracle.build_from_transverse(g, system, t, args.cap)
    except oracle.TransverseError as e:
        _emit({"t": t, "built": False, "reason": str(e)}, args.json_out)
        return EXIT_NO
    _emit(to_document(built.graph, fixed_class=sorted(built.fixed_class), built=True), args.json_out)
    return EXIT_YES


def _load_system(path: str | None, inst: Instance):
    if path is None:
        raise InputError("transverse commands need --system FILE")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise DocumentError(f"malformed system JSON: {e}") from None
    entries = doc.get("system") if isinstance(doc, dict) else doc
    if not isinstance(entries, list) or not all(isinstance(e, list) and len(e) == 2 for e in entries):
        raise DocumentError("a transverse system is a list of [index, [vertices]] pairs")
    return [(int(i), inst.resolve_all(w)) for i, w in entries]


# --- audit ----------------------------------------------------------------------------


def cmd_audit(args) -> int:
    rb = _rulebase(args.rulebase, None, args.t)
    reports = []
    for rule in rb.structural:
        rep = validate_rule(rule, rb.palette, args.sample_bound)
        reports.append({"rule": rule.name, "ok": rep.ok, "skipped": rep.skipped,
                        "assignments": rep.assignments, "fired": rep.fired,
                        "violations": len(rep.violations)})
    ok = all(r["ok"] or r["skipped"] for r in reports)
    doc = {"rulebase": rb.name, "rules": reports}
    if args.instance:
        inst = load(args.instance)
        full = frozenset(range(1, rb.palette + 1))
        start = inst.lists or {v: full for v in inst.graph.vertices}
        if args.seeds is not None:
            if inst.coloring is None:
                raise InputError("--seeds needs a 'coloring' in the instance")
            start = lists_from_defining_set(inst.graph, inst.coloring, inst.resolve_all(_csv(args.seeds)), rb.palette)
        solver = Solver(inst.graph, inst.ordering, rb, audit=True, audit_cap=args.cap)
        try:
            res = solver.solve(start)
            doc["run"] = {"audited": solver.audit, "firings": solver.firings, "status": res.status, "violation": None}
        except (AuditViolation, InvariantViolation) as e:
            doc["run"] = {"audited": solver.audit, "violation": str(e)}
            ok = False
    doc["ok"] = ok
    _emit(doc, args.json_out)
    return EXIT_YES if ok else EXIT_NO


# --- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seqcolor", description="Rule-based sequential graph coloring.")
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("instance", help="JSON instance document, or - for stdin")
        sp.add_argument("--json-out", metavar="FILE", help="write JSON here instead of stdout")
        sp.add_argument("--budget", type=int, help="max search nodes before giving up (exit 2)")
        sp.add_argument("--cap", type=int, default=None, help="oracle vertex cap")

    c = sub.add_parser("color", help="run the sequential solver")
    common(c)
    c.add_argument("--rulebase", help="RT, RG, RT+greedy or a rule-base JSON file")
    c.add_argument("--seeds", help="comma-separated seed vertices (colors from the instance coloring)")
    c.add_argument("--rounds-cap", type=int, help="stop after this many rounds")
    c.add_argument("--trace", action="store_true", help="include the per-round change trace")
    c.add_argument("--audit", action="store_true", help="oracle-check every structural rule firing")
    c.add_argument("--dot-out", metavar="FILE", help="write the decided coloring as DOT")
    c.set_defaults(func=cmd_color)

    s = sub.add_parser("sds", help="sequential defining sets")
    s.add_argument("action", choices=["verify", "wsdn", "ssdn", "colwds", "colsds"])
    common(s)
    s.add_argument("--rulebase")
    s.add_argument("--k", type=int, help="round bound (default: unbounded)")
    s.add_argument("--xi", type=int, help="size or index bound for colwds/colsds")
    s.add_argument("--seeds", help="seed set for verify")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_sds)

    g = sub.add_parser("gadget", help="emit a gadget instance")
    g.add_argument("family", choices=["D", "Gxi", "F", "H"])
    common(g, instance=False)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--xi", type=int, default=1)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--dot-out", metavar="FILE", nargs="?", const="-", help="DOT output (stdout if no file)")
    g.set_defaults(func=cmd_gadget)

    r = sub.add_parser("reduce", help="build a reduction instance")
    r.add_argument("kind", choices=["3col", "vc-sds", "vc-rulebase"])
    common(r)
    r.add_argument("--k", type=int)
    r.add_argument("--t", type=int, help="vertex cover bound")
    r.add_argument("--mode", choices=["weak", "strong"], default="weak")
    r.add_argument("--witness", metavar="FILE", help='JSON {"coloring": {...}} or {"cover": [...]}')
    r.add_argument("--dot-out", metavar="FILE")
    r.set_defaults(func=cmd_reduce)

    o = sub.add_parser("oracle", help="brute-force checks")
    o.add_argument("action", choices=["enumerate", "ucg", "chromatic", "transverse-check", "transverse-build"])
    common(o)
    o.add_argument("--t", type=int)
    o.add_argument("--max-solutions", type=int)
    o.add_argument("--system", metavar="FILE", help="transverse system JSON: [[i, [vertices]], ...]")
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("audit", help="validate rules and audit a run")
    a.add_argument("instance", nargs="?")
    a.add_argument("--json-out", metavar="FILE")
    a.add_argument("--budget", type=int)
    a.add_argument("--cap", type=int, default=12, help="largest graph audited by the oracle")
    a.add_argument("--rulebase")
    a.add_argument("--t", type=int, default=3)
    a.add_argument("--seeds")
    a.add_argument("--sample-bound", type=int, default=6)
    a.set_defaults(func=cmd_audit)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_YES
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "cap", None) is None and args.command != "audit":
        args.cap = oracle.default_cap()
    try:
        return args.func(args)
    except oracle.OracleCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, DocumentError, GraphError, RuleError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
