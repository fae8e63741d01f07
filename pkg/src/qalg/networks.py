"""Constraint networks over a finite atom structure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import AlgebraError, AtomStructure, Element, PropertyResult, ValidationReport
from .engine import Composer, Matrix, Search, normalise, propagate


class Network:
    """A finite node set with every ordered pair labelled by an element.

    ``labels`` is a square matrix of atom bitmasks, ``Element`` objects or
    iterables of atom names.
    """

    def __init__(self, structure: AtomStructure, nodes: Sequence, labels):
        self.structure = structure
        self.nodes: tuple = tuple(nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise AlgebraError("network node names must be unique")
        n = len(self.nodes)
        if len(labels) != n or any(len(row) != n for row in labels):
            raise AlgebraError("label matrix must be square over the node set")
        self._m: tuple[tuple[int, ...], ...] = tuple(
            tuple(_as_mask(structure, x) for x in row) for row in labels)
        self.index = {x: i for i, x in enumerate(self.nodes)}

    @classmethod
    def from_edges(cls, structure: AtomStructure, nodes: Sequence,
                   edges: Mapping[tuple, object] | Iterable[tuple]) -> "Network":
        """Build a network from a partial edge map.

        Unspecified reverse edges get the converse label, unspecified loops get
        the identity and every other unspecified pair gets the top element.
        """
        nodes = list(nodes)
        idx = {x: i for i, x in enumerate(nodes)}
        n = len(nodes)
        given: dict[tuple[int, int], int] = {}
        if isinstance(edges, Mapping):
            items = list(edges.items())
        else:
            items = [((x, y), lab) for x, y, lab in edges]
        for (x, y), lab in items:
            try:
                given[idx[x], idx[y]] = _as_mask(structure, lab)
            except KeyError as exc:
                raise AlgebraError(f"unknown node {exc.args[0]!r}") from None
        m = [[structure.full_mask] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = structure.identity_mask
        for (i, j), mask in given.items():
            if (j, i) not in given:
                m[j][i] = structure.converse_mask(mask)
        for (i, j), mask in given.items():
            m[i][j] = mask
        return cls(structure, nodes, m)

    @classmethod
    def from_matrix(cls, structure, nodes, D: Matrix) -> "Network":
        return cls(structure, nodes, D)

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.nodes == other.nodes and self._m == other._m and self.structure == other.structure

    def __hash__(self) -> int:
        return hash((self.nodes, self._m))

    def __repr__(self) -> str:
        return f"<Network nodes={list(self.nodes)}>"

    def mask(self, i: int, j: int) -> int:
        return self._m[i][j]

    def matrix(self) -> Matrix:
        return [list(row) for row in self._m]

    def label(self, x, y) -> Element:
        return Element(self.structure, self._m[self.index[x]][self.index[y]])

    def edges(self) -> Iterator[tuple[object, object, Element]]:
        for i, x in enumerate(self.nodes):
            for j, y in enumerate(self.nodes):
                yield x, y, Element(self.structure, self._m[i][j])

    @property
    def is_atomic(self) -> bool:
        return all(m and not m & (m - 1) for row in self._m for m in row)

    def atom_at(self, i: int, j: int) -> int:
        m = self._m[i][j]
        if not m or m & (m - 1):
            raise AlgebraError("label is not an atom")
        return m.bit_length() - 1

    def leq(self, other: "Network") -> bool:
        """Edgewise refinement order."""
        return self.nodes == other.nodes and all(
            a & ~b == 0 for ra, rb in zip(self._m, other._m) for a, b in zip(ra, rb))

    def restrict(self, nodes: Sequence) -> "Network":
        ids = [self.index[x] for x in nodes]
        return Network(self.structure, nodes, [[self._m[i][j] for j in ids] for i in ids])


def _as_mask(s: AtomStructure, x) -> int:
    if isinstance(x, Element):
        if x.structure is not s and x.structure != s:
            raise AlgebraError("label belongs to a different atom structure")
        return x.mask
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return s.mask_of([x])
    return s.mask_of(x)


AtomicNetwork = Network


# -- consistency ------------------------------------------------------------------


def check_consistent(net: Network) -> ValidationReport:
    """Loops below the identity, no zero-forcing triangle, converse-compatible, non-zero."""
    s = net.structure
    comp = Composer(s)
    names = net.nodes
    m = net._m
    n = len(names)
    report = ValidationReport()
    for i in range(n):
        if m[i][i] & ~s.identity_mask:
            report.add("loop-subidentity", (names[i],),
                       f"loop label on {names[i]} is not below the identity")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if comp(m[i][j], m[j][k]) & m[i][k] == 0:
                    report.add("triangle", (names[i], names[j], names[k]),
                               f"label({names[i]},{names[j]});label({names[j]},{names[k]}) "
                               f"meets label({names[i]},{names[k]}) in 0")
    for i in range(n):
        for j in range(n):
            if m[i][j] & comp.conv(m[j][i]) == 0:
                report.add("converse", (names[i], names[j]),
                           f"label({names[i]},{names[j]}) is disjoint from the converse of "
                           f"label({names[j]},{names[i]})")
            if m[i][j] == 0:
                report.add("nonzero", (names[i], names[j]), f"label({names[i]},{names[j]}) is 0")
    return report


def is_path_consistent(net: Network) -> PropertyResult:
    """Consistent and ``label(x,y);label(y,z) >= label(x,z)`` for all nodes."""
    report = check_consistent(net)
    if not report.ok:
        return PropertyResult(False, report.violations[0].subject)
    comp = Composer(net.structure)
    m = net._m
    n = len(net)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if m[i][k] & ~comp(m[i][j], m[j][k]):
                    return PropertyResult(False, (net.nodes[i], net.nodes[j], net.nodes[k]))
    return PropertyResult(True)


@dataclass
class Refinement:
    network: Network | None
    witness: tuple | None = None

    @property
    def consistent(self) -> bool:
        return self.network is not None


def refine_path_consistent(net: Network) -> Refinement:
    """Greatest path-consistent refinement, or the triple that emptied a label."""
    comp = Composer(net.structure)
    D = net.matrix()
    bad = normalise(comp, D)
    if bad is not None:
        return Refinement(None, tuple(net.nodes[i] for i in bad))
    bad = propagate(comp, D)
    if bad is not None:
        return Refinement(None, tuple(net.nodes[i] for i in bad))
    return Refinement(Network(net.structure, net.nodes, D))


def atomic_refinements(net: Network, node_limit: int | None = None) -> Iterator[Network]:
    """Consistent atomic networks below ``net``, in deterministic search order."""
    search = Search(net.structure, node_limit=node_limit)
    for D in search.solutions(net.matrix()):
        yield Network(net.structure, net.nodes, D)


def first_atomic_refinement(net: Network) -> Network | None:
    return next(atomic_refinements(net), None)
