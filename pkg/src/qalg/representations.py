"""Finite representations stored as complete atomic labellings of a base set.

A :class:`Representation` assigns one atom to every ordered pair of base
points.  The relation representing an element is the set of pairs whose atom
lies in it.  Verifiers work on this atomic form: a labelling is a qualitative
representation exactly when it is a consistent atomic network that witnesses
every consistent triple, and a feeble one when it witnesses every atom.
"""

from __future__ import annotations

import warnings
from itertools import product
from typing import Sequence

from .algebra import AlgebraError, AtomStructure, Element, PropertyResult, ValidationReport, bits
from .networks import Network, check_consistent


class Representation:
    def __init__(self, structure: AtomStructure, base: Sequence, matrix):
        self.structure = structure
        self.base: tuple = tuple(base)
        if len(set(self.base)) != len(self.base):
            raise AlgebraError("base point names must be unique")
        n = len(self.base)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise AlgebraError("representation matrix must be square over the base")
        self._a: tuple[tuple[int, ...], ...] = tuple(
            tuple(structure._idx(x) for x in row) for row in matrix)
        self.index = {x: i for i, x in enumerate(self.base)}

    def __len__(self) -> int:
        return len(self.base)

    def __repr__(self) -> str:
        return f"<Representation of {self.structure.name or 'algebra'} on {len(self)} points>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.base == other.base and self._a == other._a and self.structure == other.structure

    def __hash__(self) -> int:
        return hash((self.base, self._a))

    def atom_at(self, x, y) -> str:
        return self.structure.atoms[self._a[self.index[x]][self.index[y]]]

    def atom_index(self, i: int, j: int) -> int:
        return self._a[i][j]

    def matrix_names(self) -> list[list[str]]:
        atoms = self.structure.atoms
        return [[atoms[a] for a in row] for row in self._a]

    def relation(self, element: Element | str) -> set[tuple]:
        """The set of base pairs representing an element (or a single atom name)."""
        mask = self.structure.mask_of([element]) if isinstance(element, str) else element.mask
        return {(self.base[i], self.base[j]) for i, row in enumerate(self._a)
                for j, a in enumerate(row) if mask >> a & 1}

    def as_network(self) -> Network:
        return Network(self.structure, self.base, [[1 << a for a in row] for row in self._a])

    @classmethod
    def from_network(cls, net: Network) -> "Representation":
        return cls(net.structure, net.nodes, [[net.atom_at(i, j) for j in range(len(net))]
                                              for i in range(len(net))])

    def restrict(self, points: Sequence) -> "Representation":
        ids = [self.index[p] for p in points]
        return Representation(self.structure, points, [[self._a[i][j] for j in ids] for i in ids])

    def renamed(self, names: Sequence) -> "Representation":
        return Representation(self.structure, names, self._a)

    # -- witnessing ------------------------------------------------------------

    def triangles(self) -> set[tuple[int, int, int]]:
        """Atom triples labelling some (not necessarily distinct) ``x, y, z``."""
        A = self._a
        n = len(A)
        seen = set()
        for i in range(n):
            Ai = A[i]
            for j in range(n):
                a = Ai[j]
                Aj = A[j]
                for k in range(n):
                    seen.add((a, Aj[k], Ai[k]))
        return seen

    def witnessed_atoms(self) -> set[int]:
        return {a for row in self._a for a in row}


def _structural(s: AtomStructure, r: Representation, report: ValidationReport) -> None:
    if r.structure is not s and r.structure != s:
        raise AlgebraError("representation belongs to a different atom structure")
    A = r._a
    names = r.base
    for i, row in enumerate(A):
        if row[i] not in s.identity:
            report.add("loop-identity", (names[i],),
                       f"({names[i]},{names[i]}) is labelled {s.atoms[row[i]]}, not a subidentity atom")
        for j, a in enumerate(row):
            if i != j and a in s.identity:
                report.add("offdiagonal-identity", (names[i], names[j]),
                           f"({names[i]},{names[j]}) is labelled by subidentity atom {s.atoms[a]}")
            if A[j][i] != s.conv[a]:
                report.add("converse", (names[i], names[j]),
                           f"({names[j]},{names[i]}) is not labelled by the converse of {s.atoms[a]}")


def _forbidden_triangles(s: AtomStructure, r: Representation, report: ValidationReport) -> set:
    tri = r.triangles()
    for t in sorted(tri):
        if not s.C[t]:
            report.add("forbidden-triangle", tuple(s.atoms[x] for x in t),
                       f"triangle labelled ({', '.join(s.atoms[x] for x in t)}) is not consistent")
    return tri


def verify_feeble(s: AtomStructure, r: Representation) -> ValidationReport:
    """Consistent atomic labelling in which every atom labels some pair."""
    report = ValidationReport()
    _structural(s, r, report)
    _forbidden_triangles(s, r, report)
    seen = r.witnessed_atoms()
    for a in range(s.n):
        if a not in seen:
            report.add("unwitnessed-atom", (s.atoms[a],), f"atom {s.atoms[a]} labels no pair")
    return report


def verify_qualitative(s: AtomStructure, r: Representation) -> ValidationReport:
    """Consistent atomic labelling in which every consistent triple is realised."""
    report = ValidationReport()
    _structural(s, r, report)
    tri = _forbidden_triangles(s, r, report)
    seen = r.witnessed_atoms()
    for a in range(s.n):
        if a not in seen:
            report.add("unwitnessed-atom", (s.atoms[a],), f"atom {s.atoms[a]} labels no pair")
    for t in s.triples():
        if t not in tri:
            report.add("unwitnessed-triple", tuple(s.atoms[x] for x in t),
                       f"consistent triple ({', '.join(s.atoms[x] for x in t)}) has no witness")
    return report


def verify_strong(s: AtomStructure, r: Representation) -> ValidationReport:
    """Qualitative, and every composition ``a;b`` is realised at every pair it covers."""
    report = verify_qualitative(s, r)
    if not report.ok:
        return report
    A = r._a
    n = len(A)
    for i in range(n):
        for k in range(n):
            c = A[i][k]
            through = {(A[i][j], A[j][k]) for j in range(n)}
            for a, b in product(range(s.n), repeat=2):
                if s.C[a, b, c] and (a, b) not in through:
                    report.add("strong-witness", (r.base[i], r.base[k], s.atoms[a], s.atoms[b]),
                               f"({r.base[i]},{r.base[k]}) is in ({s.atoms[a]};{s.atoms[b]}) but no y "
                               f"has ({r.base[i]},y) in {s.atoms[a]} and (y,{r.base[k]}) in {s.atoms[b]}")
                    return report
    return report


def verify(s: AtomStructure, r: Representation, kind: str) -> ValidationReport:
    if kind == "qualitative":
        return verify_qualitative(s, r)
    if kind == "feeble":
        return verify_feeble(s, r)
    if kind == "strong":
        return verify_strong(s, r)
    if kind == "star":
        res = check_star(s, r)
        report = ValidationReport()
        if not res.holds:
            report.add("star", tuple(s.atoms[x] for x in res.witness),
                       "(a o b) and (c o d) are disjoint in the representation but (a;b).(c;d) != 0"
                       if res.witness else "condition fails")
        return report
    raise ValueError(f"unknown representation kind {kind!r}")


# -- condition (*) -------------------------------------------------------------------


def _atom_compositions(r: Representation) -> list[list[int]]:
    """``out[a][b]`` is the bitmask of base pairs in the true composition of the atom relations."""
    s = r.structure
    A = r._a
    n = len(A)
    out = [[0] * s.n for _ in range(s.n)]
    for i in range(n):
        for j in range(n):
            a = A[i][j]
            for k in range(n):
                out[a][A[j][k]] |= 1 << (i * n + k)
    return out


def star_violations(s: AtomStructure, r: Representation):
    """Atom quadruples ``(a, b, c, d)`` on which the (*) equivalence fails."""
    rel = _atom_compositions(r)
    t = s.table
    for a, b, c, d in product(range(s.n), repeat=4):
        concrete_empty = rel[a][b] & rel[c][d] == 0
        abstract_zero = t[a][b] & t[c][d] == 0
        if concrete_empty != abstract_zero:
            yield a, b, c, d


def check_star(s: AtomStructure, r: Representation) -> PropertyResult:
    """``(a o b) & (c o d)`` empty iff ``(a;b).(c;d) = 0`` for all atoms; least failing quadruple."""
    if not verify_qualitative(s, r).ok:
        raise AlgebraError("condition (*) is only defined for a qualitative representation")
    for w in star_violations(s, r):
        return PropertyResult(False, w)
    return PropertyResult(True)


# -- embedding and quotient --------------------------------------------------------------


def embed_network(r: Representation, net: Network) -> dict | None:
    """Map network nodes to base points so that every edge label holds, or ``None``."""
    s = r.structure
    if net.structure is not s and net.structure != s:
        raise AlgebraError("network and representation use different atom structures")
    n = len(net)
    if n == 0:
        return {}
    if len(r) == 0:
        return None
    A = r._a
    base_n = len(A)
    sizes = [sum(bin(net.mask(i, j)).count("1") for j in range(n)) for i in range(n)]
    order = sorted(range(n), key=lambda i: (sizes[i], i))
    cands = [[p for p in range(base_n) if net.mask(i, i) >> A[p][p] & 1] for i in range(n)]
    assign: dict[int, int] = {}

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        x = order[pos]
        for p in cands[x]:
            ok = True
            for y, q in assign.items():
                if not (net.mask(x, y) >> A[p][q] & 1 and net.mask(y, x) >> A[q][p] & 1):
                    ok = False
                    break
            if ok:
                assign[x] = p
                if extend(pos + 1):
                    return True
                del assign[x]
        return False

    if not extend(0):
        return None
    return {net.nodes[i]: r.base[p] for i, p in sorted(assign.items())}


def quotient(net: Network) -> tuple[Representation, dict]:
    """Collapse nodes joined by subidentity labels.

    Returns the representation on the equivalence classes (each named by its
    first node) and the map node -> class name.
    """
    s = net.structure
    if not net.is_atomic:
        raise AlgebraError("quotient needs an atomic network")
    report = check_consistent(net)
    if not report.ok:
        raise AlgebraError(f"quotient needs a consistent network: {report.violations[0].message}")
    n = len(net)
    rep_of = list(range(n))
    for i in range(n):
        for j in range(i):
            if net.atom_at(i, j) in s.identity and rep_of[j] == j:
                rep_of[i] = j
                break
    classes = sorted(set(rep_of))
    for i in range(n):
        for j in range(n):
            if net.atom_at(i, j) != net.atom_at(rep_of[i], rep_of[j]):
                raise AlgebraError("subidentity relation is not a congruence on this network")
    base = [net.nodes[c] for c in classes]
    matrix = [[net.atom_at(c, d) for d in classes] for c in classes]
    mapping = {net.nodes[i]: net.nodes[rep_of[i]] for i in range(n)}
    return Representation(s, base, matrix), mapping


def representation_from_labelling(s: AtomStructure, base, matrix) -> Representation:
    """Accept a possibly unquotiented atomic labelling, quotienting it with a warning."""
    net = Network(s, base, [[1 << s._idx(a) for a in row] for row in matrix])
    if any(i != j and net.atom_at(i, j) in s.identity for i in range(len(net)) for j in range(len(net))):
        warnings.warn("labelling has subidentity atoms off the diagonal; quotienting it",
                      stacklevel=2)
        return quotient(net)[0]
    return Representation(s, base, matrix)


def triangle_of(r: Representation, t: tuple[int, int, int]) -> tuple | None:
    """Some base triple ``(x, y, z)`` realising the atom triple ``t``."""
    A = r._a
    n = len(A)
    a, b, c = t
    for i in range(n):
        for j in range(n):
            if A[i][j] != a:
                continue
            for k in range(n):
                if A[j][k] == b and A[i][k] == c:
                    return r.base[i], r.base[j], r.base[k]
    return None


def witnessed_mask(r: Representation) -> int:
    return sum(1 << a for a in r.witnessed_atoms())


def atoms_of(mask: int) -> list[int]:
    return list(bits(mask))
