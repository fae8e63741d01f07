"""Atom structures and their complex algebras.

An atom structure ``(X, E, converse, C)`` is stored with atoms indexed
``0..n-1``; the consistent triples ``C`` live in a boolean ``n x n x n`` numpy
array and, for the hot paths, in a table of composition bitmasks
``table[a][b] = {c : (a, b, c) in C}``.  Elements of the complex algebra are
plain bitmasks over atom indices wrapped in :class:`Element`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

Triple = tuple[int, int, int]


class AlgebraError(ValueError):
    """Raised for malformed atom structures or mixed-structure operations."""


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: tuple
    message: str

    def as_dict(self) -> dict:
        return {"rule": self.rule, "subject": list(self.subject), "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, subject: tuple, message: str) -> None:
        self.violations.append(Violation(rule, tuple(subject), message))

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class AtomStructure:
    """A finite atom structure.

    Parameters
    ----------
    atoms:
        Atom names, in canonical order.
    identity:
        Names (or indices) of the subidentity atoms ``E``.
    converse:
        Mapping name -> name; unlisted atoms are self-converse.
    consistent:
        Boolean array of shape ``(n, n, n)`` or an iterable of triples of
        names/indices.
    name:
        Optional label used in reports.
    """

    def __init__(self, atoms: Sequence[str], identity: Iterable, converse: dict | None = None,
                 consistent=(), name: str = ""):
        self.atoms: tuple[str, ...] = tuple(atoms)
        if len(set(self.atoms)) != len(self.atoms):
            raise AlgebraError("atom names must be unique")
        if any(not a or any(ch.isspace() for ch in a) for a in self.atoms):
            raise AlgebraError("atom names must be non-empty tokens")
        self.name = name
        self.index = {a: i for i, a in enumerate(self.atoms)}
        n = len(self.atoms)
        self.identity: frozenset[int] = frozenset(self._idx(e) for e in identity)
        conv = list(range(n))
        if isinstance(converse, dict) or converse is None:
            for a, b in (converse or {}).items():
                ia, ib = self._idx(a), self._idx(b)
                conv[ia], conv[ib] = ib, ia
        else:
            # explicit full map, taken literally (may be non-involutive)
            conv = [self._idx(b) for b in converse]
            if len(conv) != n:
                raise AlgebraError("converse map must be total")
        self.conv: tuple[int, ...] = tuple(conv)
        if isinstance(consistent, np.ndarray):
            if consistent.shape != (n, n, n):
                raise AlgebraError(f"consistency array must have shape {(n, n, n)}")
            arr = consistent.astype(bool, copy=True)
        else:
            arr = np.zeros((n, n, n), dtype=bool)
            for t in consistent:
                a, b, c = (self._idx(x) for x in t)
                arr[a, b, c] = True
        arr.setflags(write=False)
        self.C = arr

    def _idx(self, a) -> int:
        if isinstance(a, (int, np.integer)):
            if not 0 <= a < len(self.atoms):
                raise AlgebraError(f"atom index {a} out of range")
            return int(a)
        try:
            return self.index[a]
        except KeyError:
            raise AlgebraError(f"unknown atom {a!r}") from None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_table(cls, atoms, identity, converse, table: dict, name: str = "") -> "AtomStructure":
        """Build from ``{(row, col): iterable of atoms}``; missing entries are 0."""
        triples = [(r, c, x) for (r, c), entry in table.items() for x in entry]
        return cls(atoms, identity, converse, triples, name=name)

    @classmethod
    def from_forbidden(cls, atoms, identity, converse, forbidden, name: str = "") -> "AtomStructure":
        """All triples except the Peircean closure of ``forbidden``."""
        s = cls(atoms, identity, converse, forbidden, name=name)
        closed = s.peircean_closure_array(s.C)
        return cls(atoms, identity, converse, ~closed, name=name)

    def closed(self) -> "AtomStructure":
        """Copy with ``C`` replaced by its Peircean closure."""
        return AtomStructure(self.atoms, self.identity, self.conv, self.peircean_closure_array(self.C),
                             name=self.name)

    def peircean_closure_array(self, arr: np.ndarray) -> np.ndarray:
        out = arr.copy()
        while True:
            grown = out | self._transform1(out) | self._transform2(out)
            if (grown == out).all():
                return out
            out = grown

    def _transform1(self, arr):
        # (a,b,c) in arr  ->  (b^,a^,c^) marked
        cv = np.asarray(self.conv)
        return arr[np.ix_(cv, cv, cv)].transpose(1, 0, 2)

    def _transform2(self, arr):
        # (a,b,c) in arr  ->  (c^,a,b^) marked, i.e. out[x,y,z] = arr[y, z^, x^]
        cv = np.asarray(self.conv)
        return arr[:, cv, :][:, :, cv].transpose(2, 0, 1)

    # -- basic accessors --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<AtomStructure{label} atoms={list(self.atoms)}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomStructure):
            return NotImplemented
        return (self.atoms == other.atoms and self.identity == other.identity
                and self.conv == other.conv and bool((self.C == other.C).all()))

    def __hash__(self) -> int:
        return hash((self.atoms, self.identity, self.conv))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def identity_mask(self) -> int:
        return sum(1 << e for e in self.identity)

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        """``table[a][b]`` is the bitmask of ``a;b`` for atoms ``a, b``."""
        weights = 1 << np.arange(self.n, dtype=object)
        rows = []
        for a in range(self.n):
            rows.append(tuple(int(sum(weights[self.C[a, b]])) for b in range(self.n)))
        return tuple(rows)

    @cached_property
    def conv_masks(self) -> tuple[int, ...]:
        return tuple(1 << c for c in self.conv)

    def triples(self) -> list[Triple]:
        """Consistent triples in lexicographic order."""
        return [tuple(int(i) for i in t) for t in np.argwhere(self.C)]

    def is_consistent(self, a: int, b: int, c: int) -> bool:
        return bool(self.C[a, b, c])

    def name_of(self, mask_or_atom) -> str:
        return self.atoms[mask_or_atom]

    def names(self, mask: int) -> list[str]:
        return [self.atoms[i] for i in bits(mask)]

    def mask_of(self, names: Iterable) -> int:
        m = 0
        for a in names:
            m |= 1 << self._idx(a)
        return m

    def converse_mask(self, mask: int) -> int:
        out = 0
        cm = self.conv_masks
        for a in bits(mask):
            out |= cm[a]
        return out

    def compose_mask(self, x: int, y: int) -> int:
        out = 0
        table = self.table
        ys = list(bits(y))
        for a in bits(x):
            row = table[a]
            for b in ys:
                out |= row[b]
        return out

    # -- elements -----------------------------------------------------------------

    def element(self, names: Iterable = ()) -> "Element":
        if isinstance(names, str):
            names = [names]
        return Element(self, self.mask_of(names))

    def atom(self, a) -> "Element":
        return Element(self, 1 << self._idx(a))

    def top(self) -> "Element":
        return Element(self, self.full_mask)

    def bottom(self) -> "Element":
        return Element(self, 0)

    def identity_element(self) -> "Element":
        return Element(self, self.identity_mask)

    def all_elements(self) -> Iterator["Element"]:
        for m in range(1 << self.n):
            yield Element(self, m)


@dataclass(frozen=True)
class Element:
    """An element of the complex algebra: a set of atoms, stored as a bitmask."""

    structure: AtomStructure = field(repr=False, compare=False)
    mask: int

    def _check(self, other: "Element") -> None:
        if other.structure is not self.structure and other.structure != self.structure:
            raise AlgebraError("elements belong to different atom structures")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.mask == other.mask and (
            self.structure is other.structure or self.structure == other.structure)

    def __hash__(self) -> int:
        return hash(self.mask)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(bits(self.mask))

    @property
    def names(self) -> list[str]:
        return self.structure.names(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(self.names) + "}"

    def __iter__(self):
        return iter(self.names)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.structure, self.mask | other.mask)

    def __and__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.structure, self.mask & other.mask)

    def __invert__(self) -> "Element":
        return Element(self.structure, self.structure.full_mask & ~self.mask)

    def __le__(self, other: "Element") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: "Element") -> bool:
        return other <= self

    union = __or__
    intersect = __and__
    complement = __invert__
    leq = __le__

    def converse(self) -> "Element":
        return Element(self.structure, self.structure.converse_mask(self.mask))

    def compose(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.structure, self.structure.compose_mask(self.mask, other.mask))


def compose(x: Element, y: Element) -> Element:
    return x.compose(y)


def converse(x: Element) -> Element:
    return x.converse()


# -- validation ---------------------------------------------------------------------


def peircean_transforms(s: AtomStructure, t: Triple) -> set[Triple]:
    """The (at most six) Peircean transforms of the triple ``t``."""
    a, b, c = t
    cv = s.conv
    return {
        (a, b, c),
        (b, cv[c], cv[a]),
        (c, cv[b], a),
        (cv[a], c, b),
        (cv[b], cv[a], cv[c]),
        (cv[c], a, cv[b]),
    }


def validate_atom_structure(s: AtomStructure) -> ValidationReport:
    """Check converse involution, Peircean closure of ``C`` and the identity law."""
    report = ValidationReport()
    for a, ca in enumerate(s.conv):
        if s.conv[ca] != a:
            report.add("converse-involution", (s.atoms[a],),
                       f"converse of converse of {s.atoms[a]} is {s.atoms[s.conv[ca]]}")
    if not report.ok:
        return report
    for e in sorted(s.identity):
        if s.conv[e] not in s.identity:
            report.add("identity-converse", (s.atoms[e],),
                       f"converse of subidentity atom {s.atoms[e]} is not subidentity")

    C = s.C
    missing = (s._transform1(C) | s._transform2(C)) & ~C
    for t in np.argwhere(missing):
        t = tuple(int(i) for i in t)
        src = next(u for u in sorted(peircean_transforms(s, t)) if C[u])
        report.add("peircean-closure", tuple(s.atoms[i] for i in t),
                   f"({', '.join(s.atoms[i] for i in t)}) is a Peircean transform of the "
                   f"consistent triple ({', '.join(s.atoms[i] for i in src)}) but is not consistent")

    E = sorted(s.identity)
    if E:
        ident = C[E].any(axis=0)
    else:
        ident = np.zeros((s.n, s.n), dtype=bool)
    for a, b in np.argwhere(ident != np.eye(s.n, dtype=bool)):
        a, b = int(a), int(b)
        if a == b:
            report.add("identity-law", (s.atoms[a],),
                       f"no subidentity atom e with (e, {s.atoms[a]}, {s.atoms[a]}) consistent")
        else:
            es = [s.atoms[e] for e in E if C[e, a, b]]
            report.add("identity-law", (es[0], s.atoms[a], s.atoms[b]),
                       f"({es[0]}, {s.atoms[a]}, {s.atoms[b]}) is consistent but "
                       f"{s.atoms[a]} != {s.atoms[b]}")
    return report


# -- algebraic predicates -------------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def associativity_failures(s: AtomStructure) -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(a, b, c, d)`` with ``d`` below exactly one of (a;b);c and a;(b;c)."""
    t = s.table
    for a, b, c in product(range(s.n), repeat=3):
        left = s.compose_mask(t[a][b], 1 << c)
        right = s.compose_mask(1 << a, t[b][c])
        diff = left ^ right
        for d in bits(diff):
            yield a, b, c, d


def is_associative(s: AtomStructure) -> PropertyResult:
    for w in associativity_failures(s):
        return PropertyResult(False, w)
    return PropertyResult(True)


def _semi_assoc_fails(s: AtomStructure, x: int) -> bool:
    one = s.full_mask
    left = s.compose_mask(1 << x, s.compose_mask(one, one))
    right = s.compose_mask(s.compose_mask(1 << x, one), one)
    return left != right


def is_semi_associative(s: AtomStructure) -> PropertyResult:
    """``x;(1;1) = (x;1);1`` for every atom (hence every element)."""
    for x in range(s.n):
        if _semi_assoc_fails(s, x):
            return PropertyResult(False, (x,))
    return PropertyResult(True)


def is_weakly_associative(s: AtomStructure) -> PropertyResult:
    """Semi-associativity restricted to subidentity atoms."""
    for x in sorted(s.identity):
        if _semi_assoc_fails(s, x):
            return PropertyResult(False, (x,))
    return PropertyResult(True)


def is_integral(s: AtomStructure) -> PropertyResult:
    t = s.table
    for a, b in product(range(s.n), repeat=2):
        if t[a][b] == 0:
            return PropertyResult(False, (a, b))
    return PropertyResult(True)


def identity_is_atom(s: AtomStructure) -> bool:
    return len(s.identity) == 1
