"""Built-in atom structures and known representations.

Keys: ``point``, ``ex1``, ``ex2``, ``ra2565``, ``ex4``, ``mckenzie``, ``rcc5``.
Converse atoms are spelled with a trailing ``^``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import AlgebraError, AtomStructure, Element
from .representations import Representation


@dataclass
class CatalogEntry:
    key: str
    structure: AtomStructure
    known_representations: list[tuple[str, Representation]] = field(default_factory=list)
    notes: str = ""

    def representations(self, kind: str) -> list[Representation]:
        return [r for k, r in self.known_representations if k == kind]


def _table(rows: list[str], cols: list[str], body: list[list[str]]) -> dict:
    """Parse a composition table written as ``'a+b'`` strings; ``'0'`` is empty, ``'1'`` is everything."""
    out = {}
    for r, line in zip(rows, body):
        for c, cell in zip(cols, line):
            if cell == "0":
                out[r, c] = []
            elif cell == "1":
                out[r, c] = list(cols)
            else:
                out[r, c] = cell.split("+")
    return out


def _point() -> AtomStructure:
    atoms = ["=", "<", ">"]
    body = [["=", "<", ">"],
            ["<", "<", "1"],
            [">", "1", ">"]]
    return AtomStructure.from_table(atoms, ["="], {"<": ">"}, _table(atoms, atoms, body), name="point")


def _ex1() -> AtomStructure:
    atoms = ["e", "e'", "a"]
    body = [["e", "0", "a"],
            ["0", "e'", "a"],
            ["a", "a", "1"]]
    return AtomStructure.from_table(atoms, ["e", "e'"], {}, _table(atoms, atoms, body), name="ex1")


def _ex2() -> AtomStructure:
    atoms = ["1'", "a", "a'", "x"]
    body = [["1'", "a", "a'", "x"],
            ["a", "1'+a", "0", "x"],
            ["a'", "0", "1'+a'", "x"],
            ["x", "x", "x", "1'+a+a'"]]
    return AtomStructure.from_table(atoms, ["1'"], {}, _table(atoms, atoms, body), name="ex2")


def _ra2565() -> AtomStructure:
    atoms = ["1'", "a", "b", "c"]
    body = [["1'", "a", "b", "c"],
            ["a", "1'", "c", "b"],
            ["b", "c", "1'", "a"],
            ["c", "b", "a", "1'"]]
    return AtomStructure.from_table(atoms, ["1'"], {}, _table(atoms, atoms, body), name="ra2565")


def _ex4() -> AtomStructure:
    atoms = ["e", "e'", "a", "a^"]
    body = [["e", "0", "a", "0"],
            ["0", "e'", "0", "a^"],
            ["0", "a", "a", "a+a^+e"],
            ["a^", "0", "a+a^+e'", "a^"]]
    return AtomStructure.from_table(atoms, ["e", "e'"], {"a": "a^"}, _table(atoms, atoms, body),
                                    name="ex4")


def _mckenzie() -> AtomStructure:
    atoms = ["1'", "a", "a^", "b"]
    body = [["1'", "a", "a^", "b"],
            ["a", "a", "1", "a+b"],
            ["a^", "1", "a^", "a^+b"],
            ["b", "a+b", "a^+b", "1'+a+a^"]]
    return AtomStructure.from_table(atoms, ["1'"], {"a": "a^"}, _table(atoms, atoms, body),
                                    name="mckenzie")


def _rcc5() -> AtomStructure:
    atoms = ["1'", "eps", "eps^", "pi", "delta"]
    body = [["1'", "eps", "eps^", "pi", "delta"],
            ["eps", "eps", "1", "eps+pi+delta", "delta"],
            ["eps^", "1'+eps+eps^+pi", "eps^", "eps^+pi", "eps^+pi+delta"],
            ["pi", "eps+pi", "eps^+pi+delta", "1", "eps^+pi+delta"],
            ["delta", "eps+pi+delta", "delta", "eps+pi+delta", "1"]]
    return AtomStructure.from_table(atoms, ["1'"], {"eps": "eps^"}, _table(atoms, atoms, body),
                                    name="rcc5")


# -- representations ---------------------------------------------------------------


def _order_rep(s: AtomStructure, points: list[str], less: set[tuple[str, str]],
               lt: str, gt: str, eq: str, incomparable: str | None = None) -> Representation:
    """Representation of a finite strict partial order: ``<``, ``>``, equality, incomparability."""
    def label(x, y):
        if x == y:
            return eq
        if (x, y) in less:
            return lt
        if (y, x) in less:
            return gt
        if incomparable is None:
            raise AlgebraError(f"{x} and {y} are incomparable")
        return incomparable
    return Representation(s, points, [[label(x, y) for y in points] for x in points])


def _transitive(pairs: set[tuple[str, str]]) -> set[tuple[str, str]]:
    closure = set(pairs)
    while True:
        extra = {(x, w) for x, y in closure for z, w in closure if y == z} - closure
        if not extra:
            return closure
        closure |= extra


def chain_representation(s: AtomStructure, size: int) -> Representation:
    """Point algebra on a finite chain ``0 < 1 < ... < size-1``."""
    points = [str(i) for i in range(size)]
    less = {(str(i), str(j)) for i in range(size) for j in range(i + 1, size)}
    return _order_rep(s, points, less, "<", ">", "=")


def rcc5_region_atom(x: frozenset | set, y: frozenset | set) -> str:
    """RCC5 atom between two non-empty regions given as finite sets."""
    x, y = frozenset(x), frozenset(y)
    if not x or not y:
        raise ValueError("regions must be non-empty")
    if x == y:
        return "1'"
    if not x & y:
        return "delta"
    if x < y:
        return "eps"
    if y < x:
        return "eps^"
    return "pi"


RCC5_REGIONS: dict[str, frozenset[int]] = {
    "A": frozenset({1, 6}),
    "B": frozenset({1, 2, 3, 5, 6}),
    "C": frozenset({1, 2, 6}),
    "D": frozenset({1, 2, 3, 5, 6, 7}),
    "E": frozenset({1}),
    "F": frozenset({1, 2, 3, 5}),
    "G": frozenset({2, 3}),
    "H": frozenset({1, 4, 6}),
    "I": frozenset({1, 3}),
    "J": frozenset({1, 2, 3, 4, 5}),
    "K": frozenset({4, 5, 6}),
}


def region_representation(s: AtomStructure, regions: dict[str, frozenset[int]]) -> Representation:
    names = list(regions)
    return Representation(s, names, [[rcc5_region_atom(regions[x], regions[y]) for y in names]
                                     for x in names])


SYLLOGISMS = {
    "A": ("Every S is P", ["1'", "eps"]),
    "I": ("Some S is P", ["1'", "eps", "eps^", "pi"]),
    "E": ("No S is P", ["delta"]),
    "O": ("Some S is not P", ["eps^", "pi", "delta"]),
}


def syllogism_element(form: str) -> Element:
    """RCC5 element interpreting a categorical proposition of form A, I, E or O."""
    try:
        _, atoms = SYLLOGISMS[form.upper()]
    except KeyError:
        raise KeyError(f"unknown categorical form {form!r}; expected one of A, I, E, O") from None
    return get("rcc5").structure.element(atoms)


def _build(key: str) -> CatalogEntry:
    if key == "point":
        s = _point()
        return CatalogEntry(key, s, [("qualitative", chain_representation(s, 4))],
                            "point algebra; four-element chain as qualitative representation")
    if key == "ex1":
        s = _ex1()
        pts = ["0", "1", "2"]
        phi = Representation(s, pts, [["e", "a", "a"], ["a", "e'", "a"], ["a", "a", "e'"]])
        theta = Representation(s, pts[:2], [["e", "a"], ["a", "e'"]])
        return CatalogEntry(key, s, [("qualitative", phi), ("feeble", theta)],
                            "three atoms e, e', a; not associative; 3-point qualitative and "
                            "2-point feeble representations")
    if key == "ex2":
        s = _ex2()
        pts = ["0", "1", "2", "0'", "1'", "2'"]

        def lab(x, y):
            if x == y:
                return "1'"
            if x.endswith("'") != y.endswith("'"):
                return "x"
            return "a'" if x.endswith("'") else "a"
        theta = Representation(s, pts, [[lab(x, y) for y in pts] for x in pts])
        return CatalogEntry(key, s, [("qualitative", theta)],
                            "identity atomic but not integral; 6-point qualitative representation")
    if key == "ra2565":
        s = _ra2565()
        pts = ["0", "1", "2", "3"]
        edges = {("1", "2"): "a", ("0", "3"): "a", ("0", "1"): "b", ("2", "3"): "b",
                 ("1", "3"): "c", ("0", "2"): "c"}

        def lab(x, y):
            if x == y:
                return "1'"
            return edges.get((x, y)) or edges[y, x]
        strong = Representation(s, pts, [[lab(x, y) for y in pts] for x in pts])
        return CatalogEntry(key, s, [("strong", strong), ("qualitative", strong.restrict(["1", "2", "3"]))],
                            "relation algebra 25_65; one-factorised K4 (strong) and its 3-point "
                            "restriction (qualitative)")
    if key == "ex4":
        s = _ex4()
        theta = Representation(s, ["0", "1"], [["e", "a"], ["a^", "e'"]])
        return CatalogEntry(key, s, [("feeble", theta)],
                            "feeble but not qualitatively representable")
    if key == "mckenzie":
        s = _mckenzie()
        n5 = ["0", "x", "y", "z", "1"]
        n5_less = _transitive({("0", "x"), ("x", "y"), ("y", "1"), ("0", "z"), ("z", "1")})
        pts8 = ["bot", "a1", "b1", "c1", "a2", "b2", "c2", "top"]
        less8 = _transitive({("bot", "a1"), ("a1", "b1"), ("b1", "c1"), ("c1", "top"),
                             ("bot", "a2"), ("a2", "b2"), ("b2", "c2"), ("c2", "top")})
        # A 6-point order found by exhaustive search over width-2 orders; unlike the two
        # above it satisfies condition (*) of representations.check_star.
        pts6 = ["0", "1", "2", "3", "4", "5"]
        less6 = _transitive({("1", "2"), ("2", "3"), ("2", "4"), ("4", "5"), ("0", "3")})
        return CatalogEntry(key, s, [
            ("qualitative", _order_rep(s, n5, n5_less, "a", "a^", "1'", "b")),
            ("qualitative", _order_rep(s, pts8, less8, "a", "a^", "1'", "b")),
            ("qualitative", _order_rep(s, pts6, less6, "a", "a^", "1'", "b")),
        ], "McKenzie's algebra: associative, no strong representation; pentagon N5, the "
           "8-point double chain and a 6-point order satisfying (*)")
    if key == "rcc5":
        s = _rcc5()
        return CatalogEntry(key, s, [("qualitative", region_representation(s, RCC5_REGIONS))],
                            "RCC5; eleven regions over subsets of {1..7}")
    raise KeyError(f"unknown catalog key {key!r}; known keys: {', '.join(KEYS)}")


KEYS = ("point", "ex1", "ex2", "ra2565", "ex4", "mckenzie", "rcc5")


@lru_cache(maxsize=None)
def get(key: str) -> CatalogEntry:
    return _build(key)


def entries() -> list[CatalogEntry]:
    return [get(k) for k in KEYS]

