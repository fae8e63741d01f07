from __future__ import annotations

from itertools import combinations

import pytest

from qalg.algebra import validate_atom_structure
from qalg.networks import check_consistent
from qalg.reductions import (KNOWN_NO, STRUCTURE, TRIVIALLY_COLOURABLE, SimpleGraph,
                             colouring_to_witness, extract_colouring, find_triangle_free_edge_colouring,
                             find_vertex_colouring, has_one_edge_triangle, independence_number,
                             monk_algebra, monk_obstruction, mt_colouring_to_witness,
                             mt_extract_colouring, reduce_monochromatic_triangle,
                             reduce_three_colouring, three_colouring_padding)
from qalg.representations import Representation, verify_feeble, verify_qualitative
from qalg.solver import FOUND, SearchBudget, find_feeble_rep, find_qualitative_rep

from oracles import has_triangle_free_2_edge_colouring, three_colourable


def graph(n, edges):
    return SimpleGraph.build([str(i) for i in range(n)], [(str(u), str(v)) for u, v in edges])


K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
K4 = graph(4, list(combinations(range(4), 2)))
P3 = graph(3, [(0, 1), (1, 2)])


def test_graph_basics():
    assert K3.is_complete() and not P3.is_complete()
    assert independence_number(P3) == 2
    assert independence_number(K4) == 1
    assert not has_one_edge_triangle(P3)  # its only triple carries two edges
    assert has_one_edge_triangle(graph(3, [(0, 1)]))
    assert not has_one_edge_triangle(K3)
    assert three_colouring_padding(K3) == 4


def test_colouring_helpers_match_brute_force():
    for g in (K3, K4, P3):
        c = find_vertex_colouring(g)
        assert (c is not None) == three_colourable(g.vertices, g.undirected_edges())
        if c:
            assert all(c[u] != c[v] for u, v in g.undirected_edges())
    k5 = graph(5, list(combinations(range(5), 2)))
    assert find_triangle_free_edge_colouring(k5) is not None
    k6 = graph(6, list(combinations(range(6), 2)))
    assert find_triangle_free_edge_colouring(k6) is None


def test_three_colouring_instance_shape():
    inst = reduce_three_colouring(K3)
    assert inst.status == STRUCTURE
    s = inst.structure
    assert validate_atom_structure(s).ok
    assert len(s.atoms) == 29
    assert len(inst.padded.vertices) == 7
    assert inst.family_of(("1'", "g", "a")) is not None


def test_edgeless_graph_is_trivially_colourable():
    assert reduce_three_colouring(graph(3, [])).status == TRIVIALLY_COLOURABLE


def test_three_colouring_witness_round_trip():
    inst = reduce_three_colouring(K3)
    net = colouring_to_witness(inst, {"0": "r", "1": "g", "2": "b"})
    assert check_consistent(net).ok
    rep = Representation.from_network(net)
    assert verify_qualitative(inst.structure, rep).ok
    col = extract_colouring(inst, rep)
    assert all(col[u] != col[v] for u, v in K3.undirected_edges())


def test_improper_colouring_is_rejected():
    with pytest.raises(ValueError):
        colouring_to_witness(reduce_three_colouring(K3), {"0": 0, "1": 0, "2": 1})


@pytest.mark.parametrize("g,colourable", [(K3, True), (P3, True), (K4, False)])
def test_three_colouring_solver(g, colourable):
    inst = reduce_three_colouring(g)
    out = find_qualitative_rep(inst.structure, SearchBudget(time_limit=60))
    assert (out.status == FOUND) == colourable
    if out.status == FOUND:
        col = extract_colouring(inst, out.representation)
        assert all(col[u] != col[v] for u, v in g.undirected_edges())


def test_mt_instance_and_witness():
    inst = reduce_monochromatic_triangle(P3)
    assert inst.status == STRUCTURE
    assert validate_atom_structure(inst.structure).ok
    colouring = find_triangle_free_edge_colouring(P3)
    net = mt_colouring_to_witness(inst, colouring)
    assert check_consistent(net).ok
    rep = Representation.from_network(net)
    assert verify_feeble(inst.structure, rep).ok
    back = mt_extract_colouring(inst, rep)
    assert set(back.values()) <= {"r", "b"}


def test_mt_complete_graphs():
    k6 = graph(6, list(combinations(range(6), 2)))
    assert reduce_monochromatic_triangle(k6).status == KNOWN_NO
    inst = reduce_monochromatic_triangle(K3)
    assert inst.status == STRUCTURE and len(inst.padded.vertices) == 4


@pytest.mark.parametrize("g", [K3, P3, K4])
def test_mt_solver(g):
    inst = reduce_monochromatic_triangle(g)
    out = find_feeble_rep(inst.structure, SearchBudget(time_limit=60))
    expected = has_triangle_free_2_edge_colouring(g.vertices, g.undirected_edges())
    assert (out.status == FOUND) == expected
    if out.status == FOUND:
        col = mt_extract_colouring(inst, out.representation)
        assert len(col) == len(g.undirected_edges())


def test_monk_algebra_sizes():
    assert len(monk_algebra(2).atoms) == 17
    assert len(monk_algebra(3).atoms) == 139
    assert len(monk_algebra(2, k_override=3).atoms) == 5
    assert validate_atom_structure(monk_algebra(2)).ok
    with pytest.raises(ValueError):
        monk_algebra(7)


def test_monk_obstruction():
    cert = monk_obstruction(2)
    assert cert.holds
    assert cert.labellings_checked == 2 ** 15
    assert cert.points_needed == 6
    small = monk_obstruction(2, k_override=3)
    assert not small.holds and small.counterexample is not None
