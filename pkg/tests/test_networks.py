from __future__ import annotations

from itertools import product

import pytest

from qalg import catalog
from qalg.algebra import AlgebraError
from qalg.networks import (Network, atomic_refinements, check_consistent, first_atomic_refinement,
                           is_path_consistent, refine_path_consistent)

from oracles import consistent_names, converse_names

POINT = catalog.get("point").structure


def point_network() -> Network:
    return Network.from_edges(POINT, "abcd", {
        ("c", "a"): "<", ("a", "b"): ["<", ">"], ("c", "b"): ["<", "="],
        ("c", "d"): "<", ("d", "b"): "<", ("a", "d"): ["<", ">"],
    })


def brute_atomic_refinements(net: Network) -> set[tuple]:
    """All consistent atomic networks below ``net``, as label tuples (plain set logic)."""
    s = net.structure
    cons = consistent_names(s)
    conv = converse_names(s)
    n = len(net)
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    choices = [s.names(net.mask(i, j)) for i, j in cells]
    out = set()
    for pick in product(*choices):
        lab = {}
        for (i, j), a in zip(cells, pick):
            lab[i, j] = a
            if i != j:
                lab[j, i] = conv[a]
        if any(lab[i, i] != conv[lab[i, i]] for i in range(n)):
            continue
        if any(s.atoms[s.index[lab[j, i]]] not in s.names(net.mask(j, i)) for i, j in cells):
            continue
        if any(lab[i, i] not in {s.atoms[e] for e in s.identity} for i in range(n)):
            continue
        if all((lab[i, j], lab[j, k], lab[i, k]) in cons
               for i in range(n) for j in range(n) for k in range(n)):
            out.add(tuple(lab[i, j] for i in range(n) for j in range(n)))
    return out


def as_tuple(net: Network) -> tuple:
    s = net.structure
    n = len(net)
    return tuple(s.atoms[net.atom_at(i, j)] for i in range(n) for j in range(n))


def test_from_edges_defaults():
    net = Network.from_edges(POINT, "xyz", {("x", "y"): "<"})
    assert net.label("y", "x").names == [">"]
    assert net.label("z", "z").names == ["="]
    assert set(net.label("x", "z").names) == {"=", "<", ">"}


def test_from_edges_unknown_node():
    with pytest.raises(AlgebraError):
        Network.from_edges(POINT, "xy", {("x", "q"): "<"})


def test_point_network_is_consistent_but_not_path_consistent():
    net = point_network()
    assert check_consistent(net).ok
    assert not is_path_consistent(net).holds


def test_point_network_refinement():
    ref = refine_path_consistent(point_network())
    assert ref.consistent
    r = ref.network
    assert is_path_consistent(r).holds
    assert r.label("c", "b").names == ["<"]
    assert set(r.label("a", "d").names) == {"<", ">"}
    assert r.leq(point_network())


def test_point_network_atomic_refinements_match_brute_force():
    net = point_network()
    got = {as_tuple(a) for a in atomic_refinements(net)}
    assert got == brute_atomic_refinements(net)
    assert len(got) == 3  # a sits below d, between d and b, or above b


def test_inconsistent_cycle():
    net = Network.from_edges(POINT, "xyz", {("x", "y"): "<", ("y", "z"): "<", ("z", "x"): "<"})
    report = check_consistent(net)
    assert "triangle" in report.rules()
    ref = refine_path_consistent(net)
    assert not ref.consistent and ref.witness is not None
    assert first_atomic_refinement(net) is None


def test_violation_kinds():
    s = POINT
    m = [[s.mask_of(["<"]), s.mask_of(["<"])], [s.mask_of(["<"]), 0]]
    rules = check_consistent(Network(s, "xy", m)).rules()
    assert {"loop-subidentity", "converse", "nonzero"} <= rules


@pytest.mark.parametrize("key", ["ex1", "ex2", "ra2565", "mckenzie"])
def test_atomic_refinements_of_top_network_match_brute_force(key):
    s = catalog.get(key).structure
    top = [[s.full_mask] * 3 for _ in range(3)]
    for i in range(3):
        top[i][i] = s.identity_mask
    net = Network(s, "xyz", top)
    got = {as_tuple(a) for a in atomic_refinements(net)}
    assert got == brute_atomic_refinements(net)


def test_restrict_and_leq():
    net = point_network()
    sub = net.restrict(["a", "c"])
    assert sub.nodes == ("a", "c")
    assert sub.label("c", "a").names == ["<"]
    assert net.leq(net)
    assert not net.leq(net.restrict("dcba"))
