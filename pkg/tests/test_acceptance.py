"""Acceptance run: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from itertools import combinations, product

import networkx as nx
import pytest

from qalg import catalog
from qalg.algebra import (AtomStructure, associativity_failures, identity_is_atom, is_associative,
                          is_integral, is_semi_associative, peircean_transforms,
                          validate_atom_structure)
from qalg.equations import check_validity, parse_equation
from qalg.networks import Network
from qalg.reductions import (KNOWN_NO, STRUCTURE, TRIVIALLY_COLOURABLE, SimpleGraph,
                             colouring_to_witness, extract_colouring, monk_obstruction,
                             mt_colouring_to_witness, mt_extract_colouring,
                             reduce_monochromatic_triangle, reduce_three_colouring)
from qalg.representations import (Representation, check_star, embed_network, star_violations,
                                  verify_feeble, verify_qualitative, verify_strong)
from qalg.solver import (FOUND, OBSTRUCTED, SAT, SearchBudget, decide_qual_sat, embedding_holds,
                         find_feeble_rep, find_qualitative_rep, search_base)

import test_properties
from oracles import (has_monochromatic_triangle, herd_value, relation_compose, relations_of,
                     star_failures, three_colouring, triangle_free_2_edge_colouring)

# criterion number -> (passed, one-line detail); read by the terminal summary hook
RESULTS: dict[int, tuple[bool, str]] = {}


class Checks:
    """Named boolean checks; the criterion passes when every one holds."""

    def __init__(self):
        self.items: list[tuple[str, bool]] = []
        self.notes: list[str] = []

    def __call__(self, name: str, ok) -> bool:
        self.items.append((name, bool(ok)))
        return bool(ok)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.items)

    def summary(self) -> str:
        failed = [n for n, ok in self.items if not ok]
        head = f"{len(self.items) - len(failed)}/{len(self.items)} checks"
        parts = [head] + ([f"failed: {'; '.join(failed)}"] if failed else []) + self.notes
        return " | ".join(parts)


def S(key: str) -> AtomStructure:
    return catalog.get(key).structure


def names(s: AtomStructure, t) -> tuple:
    return tuple(s.atoms[i] for i in t)


def idx(s: AtomStructure, *atoms) -> tuple:
    return tuple(s.index[a] for a in atoms)


def mutant(s: AtomStructure, t, value: bool) -> AtomStructure:
    C = s.C.copy()
    C[t] = value
    return AtomStructure(s.atoms, s.identity, s.conv, C)


# -- 1 ---------------------------------------------------------------------------------------------


def criterion_1(c: Checks) -> None:
    mutants = 0
    for e in catalog.entries():
        s = e.structure
        c(f"{e.key} validates", validate_atom_structure(s).ok)
        # drop one Peircean partner of a consistent triple, keeping the triple itself
        flips = True
        for t in s.triples():
            for p in peircean_transforms(s, t) - {t}:
                report = validate_atom_structure(mutant(s, p, False))
                mutants += 1
                flips &= (not report.ok) and "peircean-closure" in report.rules()
        c(f"{e.key}: every removed Peircean partner is reported", flips)
        # toggle any identity-law triple (e, a, b)
        flips = True
        for ident in sorted(s.identity):
            for a, b in product(range(s.n), repeat=2):
                mutants += 1
                flips &= not validate_atom_structure(mutant(s, (ident, a, b), not s.C[ident, a, b])).ok
        c(f"{e.key}: every toggled identity-law triple is reported", flips)
    c("at least 20 mutants", mutants >= 20)
    c.note(f"{mutants} mutants")


# -- 2 ---------------------------------------------------------------------------------------------


def criterion_2(c: Checks) -> None:
    ex1, ex4 = S("ex1"), S("ex4")
    w = is_associative(ex1)
    c("ex1 not associative", not w.holds)
    c("ex1 witness (e,e',a)", w.witness is not None and names(ex1, w.witness[:3]) == ("e", "e'", "a"))
    w4 = is_associative(ex4)
    c("ex4 not associative", not w4.holds)
    failing4 = {f[:3] for f in associativity_failures(ex4)}
    c("ex4 fails at (a,e',a)", idx(ex4, "a", "e'", "a") in failing4)
    c.note(f"ex4 least witness {names(ex4, w4.witness)}")
    c("ra2565 associative", is_associative(S("ra2565")).holds)
    c("mckenzie associative", is_associative(S("mckenzie")).holds)
    c("ex1 not semi-associative", not is_semi_associative(ex1).holds)
    c("ex2 not semi-associative", not is_semi_associative(S("ex2")).holds)
    for e in catalog.entries():
        s = e.structure
        c(f"{e.key}: integral iff identity atomic and semi-associative",
          is_integral(s).holds == (identity_is_atom(s) and is_semi_associative(s).holds))


# -- 3 ---------------------------------------------------------------------------------------------


def criterion_3(c: Checks) -> None:
    point = S("point")
    chain = catalog.chain_representation(point, 4)
    c("4-chain qualitative", verify_qualitative(point, chain).ok)
    c("4-chain not strong", not verify_strong(point, chain).ok)
    ra = catalog.get("ra2565")
    k4 = ra.representations("strong")[0]
    c("K4 labelling strong", verify_strong(ra.structure, k4).ok)
    k3 = k4.restrict(k4.base[1:])
    c("3-point restriction qualitative", verify_qualitative(ra.structure, k3).ok)
    c("3-point restriction not strong", not verify_strong(ra.structure, k3).ok)
    ex1 = catalog.get("ex1")
    theta = ex1.representations("feeble")[0]
    c("ex1 theta 2-point feeble", len(theta) == 2 and verify_feeble(ex1.structure, theta).ok)
    c("ex1 theta not qualitative", not verify_qualitative(ex1.structure, theta).ok)
    ex4 = catalog.get("ex4")
    fig = ex4.representations("feeble")[0]
    c("ex4 2-point figure feeble", len(fig) == 2 and verify_feeble(ex4.structure, fig).ok)
    rcc = catalog.get("rcc5")
    regions = rcc.representations("qualitative")[0]
    c("RCC5 eleven regions qualitative", len(regions) == 11 and verify_qualitative(rcc.structure, regions).ok)


# -- 4 ---------------------------------------------------------------------------------------------


def criterion_4(c: Checks) -> None:
    mck = catalog.get("mckenzie")
    s = mck.structure
    n5, eight, six = mck.representations("qualitative")
    b, a, ah = idx(s, "b", "a", "a^")
    res = check_star(s, n5)
    c("N5: (*) fails", not res.holds)
    rel = relations_of(n5)
    concrete = relation_compose(rel["b"], rel["a"]) & relation_compose(rel["b"], rel["a^"])
    abstract = s.compose_mask(1 << b, 1 << a) & s.compose_mask(1 << b, 1 << ah)
    c("N5: (# o <) & (# o >) is empty", not concrete)
    c("N5: (b;a).(b;a^) = b", abstract == 1 << b)
    c("N5: (b,a,b,a^) is a reported violation", (b, a, b, ah) in set(star_violations(s, n5)))
    res8 = check_star(s, eight)
    c("8-point order: (*) holds", res8.holds)
    oracle8 = star_failures(eight)
    c("8-point order: set oracle agrees with check_star",
      sorted(oracle8) == sorted(names(s, w) for w in star_violations(s, eight)))
    if not res8.holds:
        c.note(f"8-point order fails at {names(s, res8.witness)}, {len(oracle8)} quadruples by the set oracle")
    res6 = check_star(s, six)
    c.note(f"supplementary: 6-point order (*) {'holds' if res6.holds else 'fails'}")
    implied = True
    for e in catalog.entries():
        for kind, rep in e.known_representations:
            if kind == "feeble" or not verify_qualitative(e.structure, rep).ok:
                continue
            if check_star(e.structure, rep).holds:
                implied &= is_associative(e.structure).holds
    c("(*) implies associativity on every fixture", implied)


# -- 5 ---------------------------------------------------------------------------------------------


def criterion_5(c: Checks) -> None:
    out = find_qualitative_rep(S("ex4"))
    c("ex4 OBSTRUCTED", out.status == OBSTRUCTED)
    for key in ("point", "ex1", "ex2", "ra2565", "mckenzie"):
        out = find_qualitative_rep(S(key))
        ok = out.status == FOUND and verify_qualitative(S(key), out.representation).ok
        c(f"{key} FOUND and verified", ok)
        if key == "mckenzie" and ok:
            c("mckenzie witness base >= 5", len(out.representation) >= 5)
    none_small = all(r.exhausted and r.representation is None
                     for r in (search_base(S("mckenzie"), n) for n in range(1, 5)))
    c("mckenzie: exhaustive NONE at bases <= 4", none_small)
    ra = S("ra2565")
    out = find_feeble_rep(ra)
    c("ra2565 feeble FOUND with base < 5",
      out.status == FOUND and len(out.representation) < 5 and verify_feeble(ra, out.representation).ok)
    r5 = search_base(ra, 5, "feeble")
    c("ra2565: exhaustive NONE for feeble at base 5", r5.exhausted and r5.representation is None)


# -- 6 ---------------------------------------------------------------------------------------------


def point_network() -> Network:
    return Network.from_edges(S("point"), "abcd", {
        ("c", "a"): "<", ("a", "b"): ["<", ">"], ("c", "b"): ["<", "="],
        ("c", "d"): "<", ("d", "b"): "<", ("a", "d"): ["<", ">"],
    })


def criterion_6(c: Checks) -> None:
    point = S("point")
    net = point_network()
    out = decide_qual_sat(point, net)
    c("four-node point network SAT", out.status == SAT)
    c("SAT certificate re-verifies", out.status == SAT and verify_qualitative(point, out.representation).ok
      and embedding_holds(net, out.representation, out.embedding))
    chain4 = catalog.chain_representation(point, 4)
    emb = embed_network(chain4, net)
    c("embeds into the 4-chain", emb is not None and embedding_holds(net, chain4, emb))
    ex1 = S("ex1")
    cyc = Network.from_edges(ex1, "xyz", {("x", "y"): "a", ("y", "z"): "a", ("z", "x"): "a"})
    out = decide_qual_sat(ex1, cyc)
    c("ex1 a-cycle SAT", out.status == SAT and embedding_holds(cyc, out.representation, out.embedding))
    c("ex1 not associative", not is_associative(ex1).holds)


# -- 7 ---------------------------------------------------------------------------------------------

SWEEP_TIME_LIMIT = 60.0


def _graphs(max_vertices: int):
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() <= max_vertices:
            yield G, SimpleGraph.build([str(v) for v in G.nodes],
                                       [(str(u), str(v)) for u, v in G.edges])


def _sweep_three_colouring(c: Checks) -> None:
    counts: dict[str, int] = {}
    agree = witnesses = extracted = True
    slowest = 0.0
    for G, g in _graphs(6):
        edges = g.undirected_edges()
        colouring = three_colouring(g.vertices, edges)
        inst = reduce_three_colouring(g)
        if inst.status != STRUCTURE:
            counts[inst.status] = counts.get(inst.status, 0) + 1
            agree &= (inst.status == TRIVIALLY_COLOURABLE) == (colouring is not None)
            continue
        if colouring is not None:
            net = colouring_to_witness(inst, colouring)
            witnesses &= verify_qualitative(inst.structure, Representation.from_network(net)).ok
        t = time.perf_counter()
        out = find_qualitative_rep(inst.structure, SearchBudget(time_limit=SWEEP_TIME_LIMIT))
        slowest = max(slowest, time.perf_counter() - t)
        counts[out.status] = counts.get(out.status, 0) + 1
        agree &= (out.status == FOUND) == (colouring is not None)
        if out.status == FOUND:
            col = extract_colouring(inst, out.representation)
            extracted &= all(col[u] != col[v] for u, v in edges) and len(set(col.values())) <= 3
    c("3col: colourable => colouring_to_witness gives a verified qualitative rep", witnesses)
    c("3col: FOUND => extract_colouring is proper", extracted)
    c("3col: solver verdict agrees with brute force on every graph", agree)
    c.note("3col " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())) + f", slowest {slowest:.1f}s")


def _sweep_monochromatic_triangle(c: Checks) -> None:
    counts: dict[str, int] = {}
    agree = witnesses = extracted = True
    for G, g in _graphs(5):
        edges = g.undirected_edges()
        colouring = triangle_free_2_edge_colouring(g.vertices, edges)
        inst = reduce_monochromatic_triangle(g)
        if inst.status != STRUCTURE:
            counts[inst.status] = counts.get(inst.status, 0) + 1
            agree &= (inst.status == KNOWN_NO) == (colouring is None)
            continue
        if colouring is not None:
            net = mt_colouring_to_witness(inst, colouring)
            witnesses &= verify_feeble(inst.structure, Representation.from_network(net)).ok
        out = find_feeble_rep(inst.structure, SearchBudget(time_limit=SWEEP_TIME_LIMIT))
        counts[out.status] = counts.get(out.status, 0) + 1
        agree &= (out.status == FOUND) == (colouring is not None)
        if out.status == FOUND:
            col = mt_extract_colouring(inst, out.representation)
            extracted &= (len(col) == len(edges)
                          and not has_monochromatic_triangle(g.vertices, edges, col))
    c("MT: colourable => witness gives a verified feeble rep", witnesses)
    c("MT: FOUND => extracted edge colouring has no monochromatic triangle", extracted)
    c("MT: solver verdict agrees with brute force on every graph", agree)
    c.note("MT " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))


def criterion_7(c: Checks) -> None:
    t = time.perf_counter()
    _sweep_three_colouring(c)
    _sweep_monochromatic_triangle(c)
    elapsed = time.perf_counter() - t
    c("sweep within 10 minutes", elapsed < 600)
    c.note(f"{elapsed:.0f}s")


# -- 8 ---------------------------------------------------------------------------------------------


def criterion_8(c: Checks) -> None:
    cert = monk_obstruction(2)
    c("monk_obstruction(2) holds", cert.holds)
    c("2^15 labellings checked", cert.labellings_checked == 2 ** 15)
    c("at least 6 points needed", cert.points_needed >= 6)
    k6 = [(u, v) for u, v in combinations(range(6), 2)]
    every = all(has_monochromatic_triangle(range(6), k6, dict(zip(k6, cols)))
                for cols in product("rb", repeat=15))
    c("independent: every 2-colouring of K6 has a monochromatic triangle", every)
    k5 = [(u, v) for u, v in combinations(range(5), 2)]
    c("independent: K5 has a triangle-free 2-colouring", triangle_free_2_edge_colouring(range(5), k5))


# -- 9 ---------------------------------------------------------------------------------------------


def _reverifies(res, text: str) -> bool:
    eq = parse_equation(text)
    h = res.herd
    env = {v: h.pairs_of(m) for v, m in h.assignment.items()}
    lhs = herd_value(h.blocks, env, eq.lhs)
    rhs = herd_value(h.blocks, env, eq.rhs)
    return lhs != rhs and lhs == res.lhs and rhs == res.rhs and h.check() == []


def criterion_9(c: Checks) -> None:
    semi = "x;(1;1) = (x;1);1"
    res = check_validity(semi, max_base=3)
    c("semi-associativity counterexample within base 3",
      res.status == "COUNTEREXAMPLE" and len(res.herd.base) <= 3 and res.bound <= 3)
    for text in ("(1;x);1 = 1;(x;1)", "1';x = x"):
        r = check_validity(text, max_base=3)
        c(f"{text}: none up to 3 exhaustively", r.valid and r.bound == 3 and r.sampled_up_to == 0)
    emitted = [semi, "x;y = y;x", "x;x = x", "x^ = x", "-(x;y) = -x;-y", "x;(y+z) = x;y"]
    ok = True
    for text in emitted:
        r = check_validity(text, max_base=3)
        ok &= r.status == "COUNTEREXAMPLE" and _reverifies(r, text)
    c("every emitted counterexample re-verifies", ok)
    c.note(f"{len(emitted)} counterexamples re-verified")


# -- 10 --------------------------------------------------------------------------------------------

PROPERTIES = [
    test_properties.test_peircean_law_on_elements,
    test_properties.test_composition_is_additive,
    test_properties.test_refinement_is_idempotent_and_below,
    test_properties.test_refinement_is_monotone_and_keeps_solutions,
    test_properties.test_quotient_round_trip,
    test_properties.test_strong_implies_qualitative_implies_feeble,
]


def criterion_10(c: Checks) -> None:
    for prop in PROPERTIES:
        name = prop.__name__
        test_properties.CASES_RUN[name] = 0
        try:
            prop()
            ok = True
        except AssertionError:
            ok = False
        runs = test_properties.CASES_RUN[name]
        c(f"{name} holds", ok)
        c(f"{name} ran >= 10^4 cases", runs >= 10_000)
    c.note("cases: " + ", ".join(str(test_properties.CASES_RUN[p.__name__]) for p in PROPERTIES))


# -- driver ----------------------------------------------------------------------------------------

CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run_criterion(i: int) -> tuple[bool, str]:
    c = Checks()
    t = time.perf_counter()
    CRITERIA[i](c)
    line = f"criterion {i:2d}: {'PASS' if c.passed else 'FAIL'} ({time.perf_counter() - t:.1f}s) {c.summary()}"
    RESULTS[i] = (c.passed, line)
    return c.passed, line


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    passed, line = run_criterion(i)
    print(line)
    assert passed, line


if __name__ == "__main__":
    failures = 0
    for i in sorted(CRITERIA):
        passed, line = run_criterion(i)
        print(line, flush=True)
        failures += not passed
    sys.exit(1 if failures else 0)
