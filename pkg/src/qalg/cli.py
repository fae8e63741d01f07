"""Command-line front end: ``qalg <command> ...``.

Exit codes: 0 positive verdict, 1 negative, 2 unknown within budget,
3 input error.  ``--json`` prints one object
``{"verdict", "certificate", "stats", "diagnostics"}``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import catalog, equations, formats, reductions, solver
from .algebra import (AlgebraError, is_associative, is_integral, is_semi_associative,
                      is_weakly_associative, validate_atom_structure)
from .engine import BudgetExceeded
from .networks import check_consistent, is_path_consistent, refine_path_consistent
from .representations import check_star, embed_network, verify, verify_qualitative

POSITIVE, NEGATIVE, UNKNOWN, INPUT_ERROR = 0, 1, 2, 3


class Report:
    def __init__(self, verdict: str, code: int):
        self.verdict = verdict
        self.code = code
        self.certificate = None
        self.text: list[str] = []
        self.stats: dict = {}
        self.diagnostics: list[dict] = []

    def diag(self, rule: str, message: str, **extra) -> None:
        self.diagnostics.append({"rule": rule, "message": message, **extra})

    def emit(self, as_json: bool, out) -> int:
        if as_json:
            doc = {"verdict": self.verdict, "certificate": self.certificate,
                   "stats": self.stats, "diagnostics": self.diagnostics}
            out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        else:
            out.write(f"verdict: {self.verdict}\n")
            for d in self.diagnostics:
                out.write(f"  [{d['rule']}] {d['message']}\n")
            for k, v in self.stats.items():
                out.write(f"  {k}: {v}\n")
            for line in self.text:
                out.write(line if line.endswith("\n") else line + "\n")
        return self.code


def _algebra(ref: str):
    return formats.resolve_algebra(ref)


def _algebra_ref(s) -> str | None:
    """Catalog key of ``s`` for an ``algebra:`` field; None writes the algebra inline."""
    for key in catalog.KEYS:
        if catalog.get(key).structure == s:
            return key
    return None


def _stats(report: Report, args, **kw) -> None:
    for k, v in kw.items():
        if k == "seconds" and args.deterministic:
            continue
        report.stats[k] = round(v, 3) if isinstance(v, float) else v


def _add_violations(report: Report, vr) -> None:
    for v in vr.violations:
        report.diag(v.rule, v.message, subject=[str(x) for x in v.subject])


# -- commands -------------------------------------------------------------------------


def cmd_catalog(args) -> Report:
    if args.action == "list":
        r = Report("OK", POSITIVE)
        for e in catalog.entries():
            kinds = ", ".join(f"{k}({len(rep)})" for k, rep in e.known_representations)
            r.text.append(f"{e.key:10s} {len(e.structure.atoms)} atoms; {e.notes}; reps: {kinds}")
        r.certificate = {e.key: [k for k, _ in e.known_representations] for e in catalog.entries()}
        return r
    if args.key not in catalog.KEYS:
        raise AlgebraError(f"unknown catalog key {args.key!r}")
    e = catalog.get(args.key)
    r = Report("OK", POSITIVE)
    if args.rep is None:
        text = formats.dumps_structure(e.structure)
    else:
        if not 0 <= args.rep < len(e.known_representations):
            raise AlgebraError(f"{args.key} has {len(e.known_representations)} known representations")
        kind, rep = e.known_representations[args.rep]
        text = formats.dumps_representation(rep, algebra=args.key)
        r.stats["kind"] = kind
    r.text.append(text)
    r.certificate = text
    return r


def cmd_alg_check(args) -> Report:
    s = _algebra(args.algebra)
    if args.close:
        s = s.closed()
    vr = validate_atom_structure(s)
    r = Report("VALID" if vr.ok else "INVALID", POSITIVE if vr.ok else NEGATIVE)
    _add_violations(r, vr)
    props = {}
    if vr.ok or "converse-involution" not in vr.rules():
        for name, fn in (("associative", is_associative), ("semi_associative", is_semi_associative),
                         ("weakly_associative", is_weakly_associative), ("integral", is_integral)):
            res = fn(s)
            props[name] = res.holds
            if not res.holds and res.witness is not None:
                props[name + "_witness"] = [s.atoms[x] for x in res.witness]
    r.stats.update(props)
    r.stats["atoms"] = len(s.atoms)
    if args.close:
        text = formats.dumps_structure(s)
        r.text.append(text)
        r.certificate = text
    return r


def _override(args):
    return _algebra(args.algebra) if args.algebra else None


def cmd_net(args) -> Report:
    net = formats.load_network(args.network, _override(args))
    if args.action == "check":
        vr = check_consistent(net)
        r = Report("CONSISTENT" if vr.ok else "INCONSISTENT", POSITIVE if vr.ok else NEGATIVE)
        _add_violations(r, vr)
        return r
    if args.action == "pc":
        res = is_path_consistent(net)
        r = Report("PATH_CONSISTENT" if res.holds else "NOT_PATH_CONSISTENT",
                   POSITIVE if res.holds else NEGATIVE)
        if not res.holds:
            r.diag("path-consistency", "label(x,z) is not below label(x,y);label(y,z) "
                   "or the network is inconsistent", subject=[str(x) for x in res.witness])
        return r
    ref = refine_path_consistent(net)
    if not ref.consistent:
        r = Report("INCONSISTENT", NEGATIVE)
        r.diag("triangle", "propagation emptied a label", subject=[str(x) for x in ref.witness])
        return r
    r = Report("REFINED", POSITIVE)
    text = formats.dumps_network(ref.network, algebra=_algebra_ref(ref.network.structure))
    r.text.append(text)
    r.certificate = text
    return r


def cmd_rep(args) -> Report:
    rep = formats.load_representation(args.rep, _override(args))
    s = rep.structure
    if args.action == "verify":
        if args.kind == "star":
            base = verify_qualitative(s, rep)
            if not base.ok:
                r = Report("NOT_QUALITATIVE", NEGATIVE)
                _add_violations(r, base)
                return r
            res = check_star(s, rep)
            r = Report("HOLDS" if res.holds else "FAILS", POSITIVE if res.holds else NEGATIVE)
            if not res.holds:
                a, b, c, d = (s.atoms[x] for x in res.witness)
                r.diag("star", f"({a} o {b}) and ({c} o {d}) disagree with ({a};{b}).({c};{d})",
                       subject=[a, b, c, d])
            return r
        vr = verify(s, rep, args.kind)
        r = Report("VALID" if vr.ok else "INVALID", POSITIVE if vr.ok else NEGATIVE)
        _add_violations(r, vr)
        r.stats["kind"] = args.kind
        r.stats["points"] = len(rep)
        return r
    net = formats.load_network(args.network, s)
    if net.structure != s:
        raise AlgebraError("representation and network are over different algebras")
    emb = embed_network(rep, net)
    if emb is None:
        return Report("NO_EMBEDDING", NEGATIVE)
    r = Report("EMBEDS", POSITIVE)
    r.certificate = {str(k): str(v) for k, v in emb.items()}
    r.text += [f"  {k} -> {v}" for k, v in r.certificate.items()]
    return r


_CODES = {solver.FOUND: POSITIVE, solver.NONE_EXHAUSTIVE: NEGATIVE, solver.OBSTRUCTED: NEGATIVE,
          solver.NONE_WITHIN_BUDGET: UNKNOWN, solver.SAT: POSITIVE, solver.UNSAT: NEGATIVE,
          solver.UNKNOWN: UNKNOWN}


def _budget(args) -> solver.SearchBudget:
    return solver.SearchBudget(max_base=args.max_base, node_limit=args.node_limit,
                               time_limit=None if args.deterministic else args.time_limit)


def cmd_solve(args) -> Report:
    s = _algebra(args.algebra)
    budget = _budget(args)
    if args.action == "net":
        net = formats.load_network(args.network, s)
        out = solver.decide_qual_sat(s, net, budget)
        r = Report(out.status, _CODES[out.status])
        if out.detail:
            r.diag("search", out.detail)
        if out.representation is not None:
            if not verify_qualitative(s, out.representation).ok:
                raise AssertionError("certificate failed re-verification")
            text = formats.dumps_representation(out.representation, algebra=_algebra_ref(s))
            emb = {str(k): v for k, v in out.embedding.items()}
            r.certificate = {"representation": text, "embedding": emb}
            r.text.append(text)
            r.text += [f"  {k} -> {v}" for k, v in emb.items()]
        _stats(r, args, nodes=out.nodes, seconds=out.seconds)
        return r
    fn = solver.find_qualitative_rep if args.action == "qrep" else solver.find_feeble_rep
    out = fn(s, budget)
    shown = out.status
    if out.status == solver.OBSTRUCTED:
        shown = f"OBSTRUCTED(({','.join(out.triple)}))"
    r = Report(shown, _CODES[out.status])
    if out.detail:
        r.diag("search", out.detail)
    if out.representation is not None:
        kind = "qualitative" if args.action == "qrep" else "feeble"
        if not verify(s, out.representation, kind).ok:
            raise AssertionError("certificate failed re-verification")
        text = formats.dumps_representation(out.representation, algebra=_algebra_ref(s))
        r.certificate = text
        r.text.append(text)
    if out.triple is not None:
        r.certificate = list(out.triple)
    _stats(r, args, nodes=out.nodes, seconds=out.seconds, exhausted_up_to=out.exhausted_up_to)
    return r


def cmd_eq(args) -> Report:
    eq = equations.parse_equation(args.equation)
    max_base = 3 if args.max_base is None else args.max_base
    res = equations.check_validity(eq, max_base=max_base, seed=args.seed)
    if res.valid:
        r = Report(f"VALID_UP_TO({res.bound})", POSITIVE)
        if res.sampled_up_to > res.bound:
            r.diag("sampling", f"bases {res.bound + 1}..{res.sampled_up_to} were sampled, not exhausted")
        if not res.certified:
            r.diag("bound", f"full validity needs bases up to {res.full_bound}; not certified")
    else:
        r = Report("COUNTEREXAMPLE", NEGATIVE)
        h = res.herd
        r.certificate = {
            "base": list(h.base),
            "assignment": {v: sorted(list(p) for p in h.relation(v)) for v in sorted(h.assignment)},
            "lhs": sorted(list(p) for p in res.lhs),
            "rhs": sorted(list(p) for p in res.rhs),
        }
        r.text.append(f"  base: {list(h.base)}")
        for v, pairs in r.certificate["assignment"].items():
            r.text.append(f"  {v} = {pairs}")
        r.text.append(f"  lhs = {r.certificate['lhs']}")
        r.text.append(f"  rhs = {r.certificate['rhs']}")
    r.stats.update(equation=str(eq), length=len(eq), assignments=res.assignments)
    return r


def cmd_gen(args) -> Report:
    if args.problem == "monk":
        s = reductions.monk_algebra(args.n, args.k)
        r = Report("STRUCTURE", POSITIVE)
    else:
        g = formats.load_graph(args.graph)
        fn = reductions.reduce_three_colouring if args.problem == "3col" else reductions.reduce_monochromatic_triangle
        inst = fn(g)
        if inst.status == reductions.TRIVIALLY_COLOURABLE:
            r = Report(inst.status, POSITIVE)
            r.diag("reduction", "graph has no edges")
            return r
        if inst.status == reductions.KNOWN_NO:
            r = Report(inst.status, NEGATIVE)
            r.diag("reduction", "complete graph on six or more vertices always has a monochromatic triangle")
            return r
        s = inst.structure
        r = Report("STRUCTURE", POSITIVE)
        r.stats["padded_vertices"] = len(inst.padded.vertices) - len(g.vertices)
    text = formats.dumps_structure(s)
    r.stats["atoms"] = len(s.atoms)
    r.certificate = text
    r.text.append(text)
    return r


# -- argument parsing ------------------------------------------------------------------


GLOBAL_DEFAULTS = {"json": False, "deterministic": False, "max_base": None, "seed": 0,
                   "node_limit": None, "time_limit": None}


def build_parser() -> argparse.ArgumentParser:
    # Global flags may appear before or after the subcommand.  SUPPRESS keeps a
    # subparser from resetting a flag that was given at the top level.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--deterministic", action="store_true", default=argparse.SUPPRESS,
                        help="omit timings and wall-clock limits so reports are byte-identical")
    common.add_argument("--max-base", type=int, default=argparse.SUPPRESS,
                        help="largest base size to search (solve, eq)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for sampled checks (eq)")

    p = argparse.ArgumentParser(prog="qalg", parents=[common],
                                description="Atom structures, networks and their representations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="built-in algebras")
    csub = c.add_subparsers(dest="action", required=True)
    csub.add_parser("list", parents=[common])
    ce = csub.add_parser("export", parents=[common])
    ce.add_argument("key")
    ce.add_argument("--rep", type=int, default=None, help="export the N-th known representation instead")
    c.set_defaults(func=cmd_catalog)

    a = sub.add_parser("alg", parents=[common], help="atom structure checks")
    asub = a.add_subparsers(dest="action", required=True)
    ac = asub.add_parser("check", parents=[common])
    ac.add_argument("algebra", help="catalog key or algebra file")
    ac.add_argument("--close", action="store_true", help="replace C by its Peircean closure first")
    a.set_defaults(func=cmd_alg_check)

    n = sub.add_parser("net", parents=[common], help="constraint networks")
    nsub = n.add_subparsers(dest="action", required=True)
    for name in ("check", "pc", "refine"):
        q = nsub.add_parser(name, parents=[common])
        q.add_argument("network", help="network file")
        q.add_argument("--algebra", default=None, help="override the algebra named in the file")
    n.set_defaults(func=cmd_net)

    r = sub.add_parser("rep", parents=[common], help="representations")
    rsub = r.add_subparsers(dest="action", required=True)
    rv = rsub.add_parser("verify", parents=[common])
    rv.add_argument("rep", help="representation file")
    rv.add_argument("--kind", choices=["qualitative", "feeble", "strong", "star"], default="qualitative")
    rv.add_argument("--algebra", default=None, help="override the algebra named in the file")
    re_ = rsub.add_parser("embed", parents=[common])
    re_.add_argument("rep")
    re_.add_argument("network")
    re_.add_argument("--algebra", default=None, help="override the algebra named in the files")
    r.set_defaults(func=cmd_rep)

    s = sub.add_parser("solve", parents=[common], help="search for representations")
    ssub = s.add_subparsers(dest="action", required=True)
    for name in ("qrep", "frep", "net"):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("algebra", help="catalog key or algebra file")
        if name == "net":
            q.add_argument("network")
        q.add_argument("--node-limit", type=int, default=argparse.SUPPRESS)
        q.add_argument("--time-limit", type=float, default=argparse.SUPPRESS,
                       help="seconds; ignored under --deterministic")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eq", parents=[common], help="equations over herds")
    esub = e.add_subparsers(dest="action", required=True)
    ec = esub.add_parser("check", parents=[common])
    ec.add_argument("equation")
    e.set_defaults(func=cmd_eq)

    g = sub.add_parser("gen", parents=[common], help="reduction instances")
    gsub = g.add_subparsers(dest="problem", required=True)
    for name in ("3col", "mt"):
        q = gsub.add_parser(name, parents=[common])
        q.add_argument("graph", help="graph file")
    gm = gsub.add_parser("monk", parents=[common])
    gm.add_argument("n", type=int)
    gm.add_argument("--k", type=int, default=None, help="override the Ramsey number k(n)")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else POSITIVE
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report = args.func(args)
        for w in caught:
            report.diag("warning", str(w.message))
    except formats.FormatError as exc:
        report = Report("INPUT_ERROR", INPUT_ERROR)
        report.diag("format", exc.message, file=exc.source, line=exc.line, column=exc.column)
    except equations.TermSyntaxError as exc:
        report = Report("INPUT_ERROR", INPUT_ERROR)
        report.diag("syntax", str(exc), column=exc.pos + 1)
    except OSError as exc:
        report = Report("INPUT_ERROR", INPUT_ERROR)
        report.diag("io", f"{exc.filename}: {exc.strerror}")
    except (AlgebraError, ValueError, KeyError) as exc:
        report = Report("INPUT_ERROR", INPUT_ERROR)
        report.diag("input", str(exc).strip("'\""))
    except BudgetExceeded as exc:
        report = Report("UNKNOWN", UNKNOWN)
        report.diag("budget", str(exc))
    return report.emit(args.json, out)


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
