"""Instance generators: graph problems encoded as representability questions.

* :func:`reduce_three_colouring` builds an atom structure that has a
  qualitative representation exactly when the graph is 3-colourable.
* :func:`reduce_monochromatic_triangle` builds one that has a feeble
  representation exactly when the edges can be 2-coloured without a
  monochromatic triangle.
* :func:`monk_algebra` builds the Ramsey-style family with no feeble
  representation.

Both graph reductions come with the forward witness construction
(colouring -> consistent atomic network) and the backward extraction
(representation -> colouring).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import AtomStructure
from .networks import Network
from .representations import Representation

STRUCTURE = "STRUCTURE"
TRIVIALLY_COLOURABLE = "TRIVIALLY_COLOURABLE"
KNOWN_NO = "KNOWN_NO"


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple
    edges: frozenset    # ordered pairs, symmetric and irreflexive

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u!r}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge {(u, v)!r} uses an unknown vertex")
            if (v, u) not in self.edges:
                raise ValueError(f"edge set is not symmetric at {(u, v)!r}")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[tuple]) -> "SimpleGraph":
        """From an undirected edge list; both orientations are added."""
        es = set()
        for u, v in edges:
            es.add((u, v))
            es.add((v, u))
        return cls(tuple(vertices), frozenset(es))

    def adjacent(self, u, v) -> bool:
        return (u, v) in self.edges

    def undirected_edges(self) -> list[tuple]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sorted({(u, v) if pos[u] < pos[v] else (v, u) for u, v in self.edges},
                      key=lambda e: (pos[e[0]], pos[e[1]]))

    def ordered_edges(self) -> list[tuple]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sorted(self.edges, key=lambda e: (pos[e[0]], pos[e[1]]))

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1)

    def with_isolated(self, names: Sequence) -> "SimpleGraph":
        return SimpleGraph(self.vertices + tuple(names), self.edges)


def _fresh(taken: set[str], stem: str) -> str:
    name = stem
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def _check_names(g: SimpleGraph) -> None:
    for v in g.vertices:
        text = str(v)
        if not text or any(ch.isspace() or ch in ",[]^" for ch in text):
            raise ValueError(f"vertex name {text!r} cannot be used inside atom names")


# -- small brute-force graph routines ------------------------------------------------------


def independence_number(g: SimpleGraph, cap: int | None = None) -> int:
    """Size of a largest independent set (stops early once ``cap`` is reached)."""
    vs = list(g.vertices)
    best = 0

    def grow(i: int, chosen: list) -> bool:
        nonlocal best
        best = max(best, len(chosen))
        if cap is not None and best >= cap:
            return True
        if len(chosen) + len(vs) - i <= best:
            return False
        for j in range(i, len(vs)):
            v = vs[j]
            if all(not g.adjacent(v, u) for u in chosen):
                chosen.append(v)
                if grow(j + 1, chosen):
                    return True
                chosen.pop()
        return False

    grow(0, [])
    return best


def has_one_edge_triangle(g: SimpleGraph) -> bool:
    for u, v in g.undirected_edges():
        for w in g.vertices:
            if w not in (u, v) and not g.adjacent(u, w) and not g.adjacent(v, w):
                return True
    return False


def find_vertex_colouring(g: SimpleGraph, colours: int = 3) -> dict | None:
    """A proper vertex colouring with ``colours`` colours, by backtracking."""
    vs = list(g.vertices)
    col: dict = {}

    def go(i: int) -> bool:
        if i == len(vs):
            return True
        v = vs[i]
        used = max(col.values(), default=-1)
        for c in range(min(colours, used + 2)):
            if all(col.get(u) != c for u in vs[:i] if g.adjacent(u, v)):
                col[v] = c
                if go(i + 1):
                    return True
                del col[v]
        return False

    return dict(col) if go(0) else None


def find_triangle_free_edge_colouring(g: SimpleGraph) -> dict | None:
    """Edges -> 'r'/'b' with no monochromatic triangle, by backtracking."""
    es = g.undirected_edges()
    col: dict = {}

    def go(i: int) -> bool:
        if i == len(es):
            return True
        u, v = es[i]
        for c in ("r", "b"):
            if any(col.get((u, w)) == c and col.get((v, w)) == c for w in g.vertices):
                continue
            col[u, v] = col[v, u] = c
            if go(i + 1):
                return True
            del col[u, v], col[v, u]
        return False

    return {e: col[e] for e in es} if go(0) else None


def _edge_colour(colouring: Mapping, u, v):
    for k in ((u, v), (v, u), frozenset((u, v))):
        if k in colouring:
            return colouring[k]
    raise KeyError(f"edge {(u, v)!r} has no colour")


# -- shared generation helpers --------------------------------------------------------------


@dataclass
class ReductionInstance:
    """Output of a reduction: a structure, or a marker when none is needed."""

    status: str
    graph: SimpleGraph
    structure: AtomStructure | None = None
    padded: SimpleGraph | None = None
    infinity: str | None = None
    families: list[tuple[str, np.ndarray]] = field(default_factory=list, repr=False)

    def family_of(self, triple) -> str | None:
        """Name of the first forbidden family whose closure contains ``triple``."""
        s = self.structure
        t = tuple(s._idx(x) for x in triple)
        for name, arr in self.families:
            if s.peircean_closure_array(arr)[t]:
                return name
        return None


def _generate(atoms, identity, converse, families: list[tuple[str, np.ndarray]], name: str):
    forbidden = np.zeros_like(families[0][1])
    for _, arr in families:
        forbidden |= arr
    s = AtomStructure.from_forbidden(atoms, identity, converse, forbidden, name=name)
    return s


def _typed_mismatch(types: list, rule) -> np.ndarray:
    """Boolean array over triples: all three atoms typed and ``rule`` rejects their types."""
    n = len(types)
    out = np.zeros((n, n, n), dtype=bool)
    typed = [i for i, t in enumerate(types) if t is not None]
    for i in typed:
        for j in typed:
            for k in typed:
                if rule(types[i], types[j], types[k]):
                    out[i, j, k] = True
    return out


def _identity_family(n: int, ident: int) -> np.ndarray:
    arr = np.zeros((n, n, n), dtype=bool)
    arr[ident] = ~np.eye(n, dtype=bool)
    return arr


# -- 3-colouring --------------------------------------------------------------------------------


def three_colouring_padding(g: SimpleGraph) -> int:
    """Fewest isolated vertices giving an independent 5-set and a one-edge triangle."""
    k = max(0, 5 - independence_number(g, cap=5))
    if k == 0 and not has_one_edge_triangle(g):
        k = 1
    return k


def reduce_three_colouring(g: SimpleGraph) -> ReductionInstance:
    """Atom structure qualitatively representable iff ``g`` is 3-colourable."""
    _check_names(g)
    if not g.edges:
        return ReductionInstance(TRIVIALLY_COLOURABLE, g)
    taken = {str(v) for v in g.vertices}
    pads = [_fresh(taken, f"pad{i}") for i in range(three_colouring_padding(g))]
    padded = g.with_isolated(pads)
    inf = _fresh(taken, "inf")
    V = [str(v) for v in padded.vertices]
    E_inf = [(str(u), str(v)) for u, v in padded.ordered_edges()]
    E_inf += [(inf, v) for v in V] + [(v, inf) for v in V]
    E_set = set(E_inf)

    s_atoms = [f"s[{u},{v}]" for u, v in E_inf]
    atoms = ["1'"] + s_atoms + ["g", "a", "b", "c", "y", "n", "y^", "n^"]
    idx = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    sidx = {(u, v): idx[f"s[{u},{v}]"] for u, v in E_inf}
    converse = {f"s[{u},{v}]": f"s[{v},{u}]" for u, v in E_inf}
    converse.update({"y": "y^", "n": "n^"})
    types: list = [None] * n
    for i in sidx.values():
        types[i] = ("G", "G")
    types[idx["g"]] = ("G", "G")
    for a in "abc":
        types[idx[a]] = ("C", "C")
    for a in ("y", "n"):
        types[idx[a]] = ("G", "C")
        types[idx[a + "^"]] = ("C", "G")
    GG = [i for i in range(n) if types[i] == ("G", "G")]
    CC = [idx[a] for a in "abc"]
    g_atom, y = idx["g"], idx["y"]

    fam: list[tuple[str, np.ndarray]] = []
    fam.append(("identity law", _identity_family(n, idx["1'"])))
    fam.append(("types must match", _typed_mismatch(
        types, lambda A, B, C: not (A[0] == C[0] and A[1] == B[0] and B[1] == C[1]))))
    arr = np.zeros((n, n, n), dtype=bool)
    for a in CC:
        for b in CC:
            arr[a, a, b] = True
    fam.append(("colour atoms form triangles (a,b,c) only", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for (u, v), i in sidx.items():
        for (v2, w), j in sidx.items():
            if v != v2:
                arr[i, j, :] = True
    fam.append(("graph node indices must match", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for (u, v), i in sidx.items():
        for (v2, w), j in sidx.items():
            if v == v2 and ((u, w) in E_set or u == w):
                arr[i, j, g_atom] = True
    fam.append(("gap only on non-edges", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for v in V:
        for a in GG:
            arr[sidx[inf, v], a, g_atom] = True
    fam.append(("infinity adjacent to every node", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for a in CC:
        arr[y, a, y] = True
    fam.append(("one colour per node", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for i in sidx.values():
        arr[i, y, y] = True
    fam.append(("adjacent nodes get different colours", arr))

    s = _generate(atoms, ["1'"], converse, fam, name="3col")
    return ReductionInstance(STRUCTURE, g, s, padded, inf, fam)


_TETRA = {(0, 1): "a", (2, 3): "a", (0, 2): "b", (1, 3): "b", (0, 3): "c", (1, 2): "c"}


def colouring_to_witness(inst: ReductionInstance | SimpleGraph, colouring: Mapping) -> Network:
    """Consistent atomic network from a proper 3-colouring of the original graph."""
    if isinstance(inst, SimpleGraph):
        inst = reduce_three_colouring(inst)
    if inst.status != STRUCTURE:
        raise ValueError(f"instance has status {inst.status}; no structure to witness")
    g, padded, inf, s = inst.graph, inst.padded, inst.infinity, inst.structure
    palette = []
    for v in g.vertices:
        if v not in colouring:
            raise ValueError(f"vertex {v!r} has no colour")
        if colouring[v] not in palette:
            palette.append(colouring[v])
    if len(palette) > 3:
        raise ValueError("colouring uses more than three colours")
    for u, v in g.edges:
        if colouring[u] == colouring[v]:
            raise ValueError(f"adjacent vertices {u!r} and {v!r} share a colour")
    rho = {str(v): palette.index(colouring[v]) for v in g.vertices}
    for v in padded.vertices[len(g.vertices):]:
        rho[str(v)] = 0
    rho[inf] = 3
    graph_nodes = [str(v) for v in padded.vertices] + [inf]
    colour_nodes = [f"colour{i}" for i in range(4)]
    nodes = graph_nodes + colour_nodes
    E = {(str(u), str(v)) for u, v in padded.edges}
    E |= {(inf, v) for v in graph_nodes[:-1]} | {(v, inf) for v in graph_nodes[:-1]}

    def label(x, y):
        if x == y:
            return "1'"
        if x in rho and y in rho:
            return f"s[{x},{y}]" if (x, y) in E else "g"
        if x in rho:
            return "y" if rho[x] == colour_nodes.index(y) else "n"
        if y in rho:
            return label(y, x) + "^"
        i, j = sorted((colour_nodes.index(x), colour_nodes.index(y)))
        return _TETRA[i, j]

    return Network(s, nodes, [[label(x, y) for y in nodes] for x in nodes])


def extract_colouring(inst: ReductionInstance, rep: Representation) -> dict:
    """Proper colouring of the original graph read off a representation.

    The node realising infinity is found through an ``s[inf,v]`` edge; each
    graph vertex is then located by its ``s[inf,v]`` edge and coloured by the
    unique node it reaches with ``y``.
    """
    if inst.status != STRUCTURE:
        raise ValueError(f"instance has status {inst.status}")
    s, inf = inst.structure, inst.infinity
    if rep.structure != s:
        raise ValueError("representation is not over this reduction's structure")
    pts = rep.base
    lab = {(x, z): rep.atom_at(x, z) for x in pts for z in pts}
    first = str(inst.padded.vertices[0])
    try:
        hub = next(x for x in pts for z in pts if lab[x, z] == f"s[{inf},{first}]")
    except StopIteration:
        raise ValueError("representation has no edge from the infinity node") from None
    colours = {}
    for v in inst.graph.vertices:
        want = f"s[{inf},{v}]"
        node = [z for z in pts if lab[hub, z] == want]
        if len(node) != 1:
            raise ValueError(f"vertex {v!r} is not realised exactly once")
        ys = [z for z in pts if lab[node[0], z] == "y"]
        if len(ys) != 1:
            raise ValueError(f"vertex {v!r} does not have exactly one y-edge")
        colours[v] = ys[0]
    names = {}
    for v in inst.graph.vertices:
        names.setdefault(colours[v], len(names))
    out = {v: names[colours[v]] for v in inst.graph.vertices}
    for u, v in inst.graph.edges:
        if out[u] == out[v]:
            raise ValueError("extracted colouring is not proper")
    return out


# -- monochromatic triangle ------------------------------------------------------------------------


def reduce_monochromatic_triangle(g: SimpleGraph) -> ReductionInstance:
    """Atom structure feebly representable iff ``g`` has a triangle-free 2-edge-colouring."""
    _check_names(g)
    n_v = len(g.vertices)
    if g.is_complete() and n_v >= 6:
        return ReductionInstance(KNOWN_NO, g)
    padded = g
    if g.is_complete():
        taken = {str(v) for v in g.vertices}
        padded = g.with_isolated([_fresh(taken, "pad0")])
    V = [str(v) for v in padded.vertices]
    E = [(str(u), str(v)) for u, v in padded.ordered_edges()]
    E_set = set(E)
    atoms = ["1'", "x"]
    atoms += [f"{c}[{u},{v}]" for c in "rb" for u, v in E]
    atoms += ["g"] + [f"p[{u}]" for u in V] + [f"q[{u}]" for u in V]
    atoms += [f"p[{u}]^" for u in V] + [f"q[{u}]^" for u in V]
    idx = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    converse = {f"{c}[{u},{v}]": f"{c}[{v},{u}]" for c in "rb" for u, v in E}
    converse.update({f"{p}[{u}]": f"{p}[{u}]^" for p in "pq" for u in V})
    types: list = [None] * n
    col = {}
    for c in "rb":
        for u, v in E:
            i = idx[f"{c}[{u},{v}]"]
            types[i] = ("G", "G")
            col[c, u, v] = i
    types[idx["g"]] = ("G", "G")
    for p in "pq":
        for u in V:
            types[idx[f"{p}[{u}]"]] = ("I", "G")
            types[idx[f"{p}[{u}]^"]] = ("G", "I")
    X = idx["x"]
    g_atom = idx["g"]
    P = {u: idx[f"p[{u}]"] for u in V}
    Q = {u: idx[f"q[{u}]"] for u in V}

    fam: list[tuple[str, np.ndarray]] = []
    fam.append(("identity law", _identity_family(n, idx["1'"])))
    arr = np.zeros((n, n, n), dtype=bool)
    arr[X, X, X] = True
    others = [i for i in range(n) if i != X]
    arr[np.ix_([X], others, others)] = True
    fam.append(("cross atom bipartite", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if types[i] is not None and types[j] is not None and types[i][1] != types[j][0]:
                arr[i, j, :] = True
    fam.append(("middle types must match", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for c in "rb":
        for u1, v in E:
            for u in V:
                for v1 in V:
                    if not (u == u1 and v == v1):
                        arr[P[u], col[c, u1, v], P[v1]] = True
                        arr[Q[u], col[c, u1, v], Q[v1]] = True
    fam.append(("auxiliary node indices must match", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for u in V:
        for v in V:
            if (u, v) in E_set or u == v:
                arr[P[u], g_atom, P[v]] = True
                arr[Q[u], g_atom, Q[v]] = True
    fam.append(("gap only on non-edges", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for u in V:
        for v in V:
            arr[P[u], :, Q[v]] = True
    fam.append(("p and q never share a source", arr))
    arr = np.zeros((n, n, n), dtype=bool)
    for c in "rb":
        for u, v in E:
            for v2, w in E:
                if v2 == v and (u, w) in E_set:
                    arr[col[c, u, v], col[c, v, w], col[c, u, w]] = True
    fam.append(("no monochromatic triangle", arr))

    s = _generate(atoms, ["1'"], converse, fam, name="mt")
    return ReductionInstance(STRUCTURE, g, s, padded, None, fam)


def mt_colouring_to_witness(inst: ReductionInstance | SimpleGraph, colouring: Mapping) -> Network:
    """Two copies of the graph with dual colourings, joined by ``x``."""
    if isinstance(inst, SimpleGraph):
        inst = reduce_monochromatic_triangle(inst)
    if inst.status != STRUCTURE:
        raise ValueError(f"instance has status {inst.status}; no structure to witness")
    g, padded, s = inst.graph, inst.padded, inst.structure
    rho = {}
    for u, v in g.undirected_edges():
        c = _edge_colour(colouring, u, v)
        if c not in ("r", "b"):
            raise ValueError(f"edge colour {c!r} is not 'r' or 'b'")
        rho[str(u), str(v)] = rho[str(v), str(u)] = c
    for u, v, w in combinations([str(x) for x in g.vertices], 3):
        cs = [rho.get(e) for e in ((u, v), (v, w), (u, w))]
        if None not in cs and len(set(cs)) == 1:
            raise ValueError(f"triangle {u},{v},{w} is monochromatic")
    taken = {str(v) for v in padded.vertices}
    inf = _fresh(taken, "inf")
    V = [str(v) for v in padded.vertices]
    left = V + [inf]
    right = [_fresh(taken, x + "'") for x in left]
    twin = dict(zip(left, right))
    side = {x: 0 for x in left} | {x: 1 for x in right}
    orig = {x: x for x in left} | {twin[x]: x for x in left}
    other = {"r": "b", "b": "r"}

    def label(x, y):
        if x == y:
            return "1'"
        if side[x] != side[y]:
            return "x"
        a, b = orig[x], orig[y]
        if a == inf:
            return f"{'pq'[side[x]]}[{b}]"
        if b == inf:
            return f"{'pq'[side[x]]}[{a}]^"
        if (a, b) in rho:
            c = rho[a, b] if side[x] == 0 else other[rho[a, b]]
            return f"{c}[{a},{b}]"
        return "g"

    nodes = left + right
    return Network(s, nodes, [[label(x, y) for y in nodes] for x in nodes])


def mt_extract_colouring(inst: ReductionInstance, rep: Representation) -> dict:
    """Triangle-free edge colouring of the original graph from a feeble representation."""
    if inst.status != STRUCTURE:
        raise ValueError(f"instance has status {inst.status}")
    s = inst.structure
    if rep.structure != s:
        raise ValueError("representation is not over this reduction's structure")
    pts = rep.base
    lab = {(x, z): rep.atom_at(x, z) for x in pts for z in pts}
    V = [str(v) for v in inst.padded.vertices]
    try:
        hub = next(x for x in pts for z in pts if lab[x, z] == f"p[{V[0]}]")
    except StopIteration:
        raise ValueError("representation does not witness the p atoms") from None
    where = {}
    for v in V:
        found = [z for z in pts if lab[hub, z] == f"p[{v}]"]
        if len(found) != 1:
            raise ValueError(f"vertex {v!r} is not realised exactly once")
        where[v] = found[0]
    out = {}
    for u, v in inst.graph.undirected_edges():
        atom = lab[where[str(u)], where[str(v)]]
        if atom not in (f"r[{u},{v}]", f"b[{u},{v}]"):
            raise ValueError(f"edge {(u, v)!r} carries {atom}")
        out[u, v] = atom[0]
    for a, b, c in combinations(inst.graph.vertices, 3):
        cs = [out.get((x, y), out.get((y, x))) for x, y in ((a, b), (b, c), (a, c))]
        if None not in cs and len(set(cs)) == 1:
            raise ValueError("extracted colouring has a monochromatic triangle")
    return out


# -- Monk algebras ------------------------------------------------------------------------------

RAMSEY_K = {2: 6, 3: 17}


def monk_algebra(n: int, k_override: int | None = None) -> AtomStructure:
    """Atoms ``1'``, ``a0_0 .. a0_{K-1}`` (K = k(k-1)/2) and ``a1 .. a{n-1}``, all self-converse.

    Forbidden: ``(1', x, y)`` for ``x != y`` and every triple of atoms with the
    same subscript.
    """
    if k_override is None:
        if n not in RAMSEY_K:
            raise ValueError(f"k({n}) is not built in; pass k_override")
        k = RAMSEY_K[n]
    else:
        k = k_override
    if n < 2 or k < 2:
        raise ValueError("need n >= 2 and k >= 2")
    K = k * (k - 1) // 2
    zero = [f"a0_{i}" for i in range(K)]
    rest = [f"a{i}" for i in range(1, n)]
    atoms = ["1'"] + zero + rest
    m = len(atoms)
    forbidden = _identity_family(m, 0)
    z = list(range(1, K + 1))
    forbidden[np.ix_(z, z, z)] = True
    for i in range(K + 1, m):
        forbidden[i, i, i] = True
    return AtomStructure.from_forbidden(atoms, ["1'"], {}, forbidden, name=f"monk{n}")


@dataclass
class MonkCertificate:
    holds: bool
    labellings_checked: int
    points_needed: int
    k: int
    counterexample: tuple | None = None


def monk_obstruction(n: int = 2, k_override: int | None = None, limit: int = 1 << 22) -> MonkCertificate:
    """Certify that ``monk_algebra(n)`` has no feeble representation.

    Witnessing every subscript-0 atom needs ``K`` distinct unordered edges and
    hence at least ``k`` points; the certificate then checks that every
    labelling of the edges of the complete graph on ``k`` points by subscripts
    ``0..n-1`` contains a same-subscript triangle.
    """
    k = RAMSEY_K.get(n) if k_override is None else k_override
    if k is None:
        raise ValueError(f"k({n}) is not built in; pass k_override")
    K = k * (k - 1) // 2
    points = 1
    while points * (points - 1) // 2 < K:
        points += 1
    edges = list(combinations(range(points), 2))
    if n ** len(edges) > limit:
        raise ValueError("too many labellings to enumerate")
    tris = [(edges.index((a, b)), edges.index((b, c)), edges.index((a, c)))
            for a, b, c in combinations(range(points), 3)]
    checked = 0
    for lab in product(range(n), repeat=len(edges)):
        checked += 1
        if not any(lab[i] == lab[j] == lab[l] for i, j, l in tris):
            return MonkCertificate(False, checked, points, k, lab)
    return MonkCertificate(True, checked, points, k)
