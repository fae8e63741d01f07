from __future__ import annotations

import pytest

from qalg import catalog, formats
from qalg.networks import Network
from qalg.reductions import SimpleGraph, monk_algebra, reduce_three_colouring


@pytest.mark.parametrize("key", catalog.KEYS)
def test_catalog_round_trip(key):
    e = catalog.get(key)
    text = formats.dumps_structure(e.structure)
    assert text.startswith("qalg-format 1\n")
    assert formats.loads_structure(text) == e.structure
    for _, rep in e.known_representations:
        assert formats.loads_representation(formats.dumps_representation(rep, key)) == rep
        net = rep.as_network()
        assert formats.loads_network(formats.dumps_network(net, key)) == net


def test_inline_algebra_round_trip():
    s = monk_algebra(2, k_override=3)
    net = Network.from_edges(s, "xy", {("x", "y"): ["a0_0", "a0_1"]})
    text = formats.dumps_network(net)
    assert "atoms:" in text and "algebra:" not in text
    assert formats.loads_network(text) == net


def test_generated_structures_round_trip():
    s = reduce_three_colouring(SimpleGraph.build("abc", [("a", "b"), ("b", "c")])).structure
    assert formats.loads_structure(formats.dumps_structure(s)) == s


def test_graph_round_trip():
    g = SimpleGraph.build(["u", "v", "w"], [("u", "v")])
    assert formats.loads_graph(formats.dumps_graph(g)) == g


def test_forbidden_triples_section():
    text = """qalg-format 1
kind: algebra
atoms: 1' a
identity: 1'
forbidden_triples:
  1' 1' a
  1' a 1'
  a 1' 1'
  1' a a   # keep (a, 1', a) but drop this one
end
"""
    s = formats.loads_structure(text)
    assert not s.C[0, 1, 1] and s.C[1, 1, 1]


def test_comments_and_blank_lines_are_ignored():
    text = "\n# leading comment\nqalg-format 1\nkind: graph\nvertices: a b # trailing\n\nedges:\n a b\nend\n"
    g = formats.loads_graph(text)
    assert g.adjacent("a", "b")


@pytest.mark.parametrize("text,line,column,fragment", [
    ("qalg-format 2\n", 1, 1, "header"),
    ("qalg-format 1\nkind: network\nalgebra: point\nnodes: a b\nedges:\n  a b : < zz\nend\n", 6, 11,
     "unknown atom 'zz'"),
    ("qalg-format 1\nkind: network\nalgebra: point\nnodes: a b\nedges:\n  a q : <\nend\n", 6, 5,
     "unknown node 'q'"),
    ("qalg-format 1\nkind: network\nalgebra: point\nnodes: a b\nedges:\n  a b : <\n", 6, 1, "not closed"),
    ("qalg-format 1\nkind: graph\nvertices: a\nvertices: b\n", 4, 1, "duplicate"),
    ("qalg-format 1\nkind: algebra\nnodes: x\n", 2, 7, "expected kind 'network'"),
])
def test_errors_carry_positions(text, line, column, fragment):
    with pytest.raises(formats.FormatError) as info:
        if "kind: graph" in text:
            formats.loads_graph(text)
        else:
            formats.loads_network(text)
    err = info.value
    assert (err.line, err.column) == (line, column)
    assert fragment in err.message
    assert str(err).startswith(f"<input>:{line}:{column}:")


def test_algebra_reference_resolves_relative_to_file(tmp_path):
    (tmp_path / "mine.alg").write_text(formats.dumps_structure(catalog.get("ex1").structure))
    (tmp_path / "n.net").write_text("qalg-format 1\nkind: network\nalgebra: mine.alg\nnodes: x y\n"
                                    "edges:\n  x y : a\nend\n")
    net = formats.load_network(str(tmp_path / "n.net"))
    assert net.structure == catalog.get("ex1").structure


def test_missing_algebra_file_is_a_format_error(tmp_path):
    (tmp_path / "n.net").write_text("qalg-format 1\nkind: network\nalgebra: nope.alg\nnodes: x\n")
    with pytest.raises(formats.FormatError) as info:
        formats.load_network(str(tmp_path / "n.net"))
    assert "cannot read algebra" in info.value.message and info.value.line == 3
