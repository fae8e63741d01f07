"""Search for qualitative and feeble representations, and network satisfaction.

Three procedures cooperate:

* an obstruction check that tries to realise each consistent triple on its
  own three-node network (possibly degenerate) and refutes representability
  when one cannot be realised at all;
* an exhaustive search over complete atomic labellings of a fixed base size,
  which finds minimal witnesses and certifies absence at small sizes;
* a lazy seeded construction for larger instances.  It keeps a list of
  *anchors* (a fixed triangle per consistent triple, or a fixed edge per atom,
  that must be realised) and grows a solution one anchor at a time.  When the
  cheap extension step fails it re-solves the whole anchor network with free
  cross edges.  That network is a sub-network of the certificate used for
  membership in NP, so its unsatisfiability is a sound refutation.

Every positive answer is re-checked by :mod:`qalg.representations` before it
is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable

from .algebra import AtomStructure
from .engine import BudgetExceeded, Composer, Matrix, Search, normalise, propagate
from .networks import Network
from .representations import Representation, verify_feeble, verify_qualitative

FOUND = "FOUND"
NONE_EXHAUSTIVE = "NONE_EXHAUSTIVE"
NONE_WITHIN_BUDGET = "NONE_WITHIN_BUDGET"
OBSTRUCTED = "OBSTRUCTED"

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN_WITHIN_BUDGET"

DEFAULT_CAP = 64
SMALL_BASE_LIMIT = 8
SMALL_BASE_NODES = 2_000


@dataclass
class SearchBudget:
    """Resource limits for a search.

    ``max_base=None`` means the default for the kind of representation:
    ``min(3|At|^3, cap)`` for qualitative and ``2|At|`` for feeble.
    """

    max_base: int | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.max_base is not None and self.max_base < 1:
            raise ValueError("max_base must be at least 1")

    def resolve(self, s: AtomStructure, kind: str) -> int:
        if self.max_base is not None:
            return self.max_base
        if kind == "feeble":
            return 2 * s.n
        return min(3 * s.n ** 3, self.cap)


def theoretical_bound(s: AtomStructure, kind: str) -> int:
    return 2 * s.n if kind == "feeble" else 3 * s.n ** 3


@dataclass
class SearchOutcome:
    status: str
    representation: Representation | None = None
    triple: tuple[str, str, str] | None = None
    nodes: int = 0
    seconds: float = 0.0
    detail: str = ""
    exhausted_up_to: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND


@dataclass
class NetOutcome:
    status: str
    representation: Representation | None = None
    embedding: dict | None = None
    nodes: int = 0
    seconds: float = 0.0
    detail: str = ""


@dataclass
class BaseSearch:
    representation: Representation | None
    exhausted: bool
    nodes: int = 0


class _Meter:
    """Shared node and time budget across many searches."""

    def __init__(self, node_limit: int | None, time_limit: float | None):
        self.node_limit = node_limit
        self.start = time.monotonic()
        self.deadline = None if time_limit is None else self.start + time_limit
        self.used = 0

    def search(self, s, comp, value_order=None, prune=None, cap: int | None = None) -> Search:
        limit = None if self.node_limit is None else max(self.node_limit - self.used, 0)
        if cap is not None:
            limit = cap if limit is None else min(limit, cap)
        remaining = None if self.deadline is None else max(self.deadline - time.monotonic(), 0.0)
        if remaining is not None and remaining <= 0:
            raise BudgetExceeded("time limit reached")
        return Search(s, comp, value_order=value_order, prune=prune, node_limit=limit,
                      time_limit=remaining)

    def charge(self, search: Search) -> None:
        self.used += search.nodes

    def expired(self) -> bool:
        if self.node_limit is not None and self.used >= self.node_limit:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    @property
    def seconds(self) -> float:
        return time.monotonic() - self.start


def _first_solution(meter: _Meter, s, comp, D, value_order=None, prune=None, cap=None):
    search = meter.search(s, comp, value_order=value_order, prune=prune, cap=cap)
    try:
        return next(search.solutions(D), None)
    finally:
        meter.charge(search)


# -- obstruction ---------------------------------------------------------------------


def _triangle_matrix(s: AtomStructure, t) -> Matrix:
    a, b, c = t
    full, ident = s.full_mask, s.identity_mask
    D = [[full] * 3 for _ in range(3)]
    for i in range(3):
        D[i][i] = ident
    D[0][1], D[1][2], D[0][2] = 1 << a, 1 << b, 1 << c
    D[1][0], D[2][1], D[2][0] = s.conv_masks[a], s.conv_masks[b], s.conv_masks[c]
    return D


def find_obstruction(s: AtomStructure, comp: Composer | None = None) -> tuple[int, int, int] | None:
    """Least consistent triple with no consistent (possibly degenerate) realisation.

    Off-diagonal labels may be subidentity atoms here, so configurations in
    which two of the three nodes coincide are covered.
    """
    comp = comp or Composer(s)
    for t in s.triples():
        D = _triangle_matrix(s, t)
        if normalise(comp, D) is not None or propagate(comp, D) is not None:
            return t
        if next(Search(s, comp).solutions(D, propagated=True), None) is None:
            return t
    return None


# -- fixed-size search ------------------------------------------------------------------


def _witnesses_all(s: AtomStructure, A, kind: str) -> bool:
    if kind == "feeble":
        return len({a for row in A for a in row}) == s.n
    n = len(A)
    seen = set()
    for i in range(n):
        Ai = A[i]
        for j in range(n):
            Aj = A[j]
            a = Ai[j]
            for k in range(n):
                seen.add((a, Aj[k], Ai[k]))
    return all(t in seen for t in s.triples())


def _atoms_of(D: Matrix) -> list[list[int]]:
    return [[m.bit_length() - 1 for m in row] for row in D]


def _coverage_prune(s: AtomStructure) -> Callable[[Matrix], bool]:
    full = s.full_mask

    def prune(D: Matrix) -> bool:
        seen = 0
        for row in D:
            for m in row:
                seen |= m
            if seen == full:
                return False
        return seen != full
    return prune


def search_base(s: AtomStructure, n: int, kind: str = "qualitative",
                node_limit: int | None = None, time_limit: float | None = None,
                _meter: _Meter | None = None, _comp: Composer | None = None) -> BaseSearch:
    """Exhaustively search representations on exactly ``n`` points.

    Only quotient-form labellings are explored (subidentity atoms on loops,
    never off the diagonal), which loses nothing.  Points are interchangeable,
    so loop atoms are enumerated in non-decreasing order.
    """
    if kind not in ("qualitative", "feeble"):
        raise ValueError(f"unknown representation kind {kind!r}")
    meter = _meter or _Meter(node_limit, time_limit)
    comp = _comp or Composer(s)
    before = meter.used
    non_id = s.full_mask & ~s.identity_mask
    prune = _coverage_prune(s)
    names = [str(i) for i in range(n)]
    try:
        for loops in combinations_with_replacement(sorted(s.identity), n):
            D = [[non_id] * n for _ in range(n)]
            for i, e in enumerate(loops):
                D[i][i] = 1 << e
            search = meter.search(s, comp, prune=prune)
            try:
                for sol in search.solutions(D):
                    A = _atoms_of(sol)
                    if _witnesses_all(s, A, kind):
                        return BaseSearch(Representation(s, names, A), True, meter.used - before + search.nodes)
            finally:
                meter.charge(search)
    except BudgetExceeded:
        return BaseSearch(None, False, meter.used - before)
    return BaseSearch(None, True, meter.used - before)


# -- lazy construction ----------------------------------------------------------------------


def _quotient_matrix(A: list[list[int]], identity: frozenset[int]):
    """Classes of an atomic raw matrix under the subidentity relation."""
    n = len(A)
    img = [-1] * n
    reps: list[int] = []
    for i in range(n):
        for p, r in enumerate(reps):
            if A[i][r] in identity:
                img[i] = p
                break
        else:
            img[i] = len(reps)
            reps.append(i)
    Q = [[A[r][q] for q in reps] for r in reps]
    return Q, img


class _Anchors:
    """Gadgets that must be realised: the seed network plus fixed triangles or edges."""

    def __init__(self, s: AtomStructure, seed: Matrix | None):
        self.s = s
        self.seed = seed
        self.gadgets: list[tuple] = []

    def gadget_matrix(self, target: tuple) -> Matrix:
        s = self.s
        if len(target) == 3:
            return _triangle_matrix(s, target)
        (a,) = target
        return [[s.identity_mask, 1 << a], [s.conv_masks[a], s.identity_mask]]

    def network(self) -> tuple[Matrix, list[tuple[int, int]]]:
        """Disjoint union of all anchors with every cross edge left free."""
        s = self.s
        blocks = ([self.seed] if self.seed is not None else []) + [self.gadget_matrix(g) for g in self.gadgets]
        size = sum(len(b) for b in blocks)
        D = [[s.full_mask] * size for _ in range(size)]
        spans = []
        off = 0
        for b in blocks:
            k = len(b)
            for i in range(k):
                for j in range(k):
                    D[off + i][off + j] = b[i][j]
            spans.append((off, off + k))
            off += k
        for i in range(size):
            D[i][i] &= s.identity_mask
        return D, spans


def _value_order(s: AtomStructure, hint: list[list[int]] | None):
    ident = sorted(s.identity)
    others = [a for a in range(s.n) if a not in s.identity]
    preferred = ident + others

    def order(i: int, j: int, mask: int) -> list[int]:
        out = []
        if hint is not None and i < len(hint) and j < len(hint):
            h = hint[i][j]
            if h >= 0 and mask >> h & 1:
                out.append(h)
        out.extend(a for a in preferred if mask >> a & 1 and a not in out)
        return out
    return order


class _Construction:
    """State of the lazy construction: current quotient ``Q`` and anchor images."""

    def __init__(self, s: AtomStructure, kind: str, meter: _Meter, comp: Composer,
                 seed: Matrix | None = None):
        self.s = s
        self.kind = kind
        self.meter = meter
        self.comp = comp
        self.anchors = _Anchors(s, seed)
        self.Q: list[list[int]] = []
        self.img: list[int] = []       # raw anchor node -> point of Q
        self.fallbacks = 0

    def targets(self) -> list[tuple]:
        if self.kind == "feeble":
            return [(a,) for a in range(self.s.n)]
        return self.s.triples()

    def missing(self) -> list[tuple]:
        Q = self.Q
        if self.kind == "feeble":
            seen = {a for row in Q for a in row}
            return [(a,) for a in range(self.s.n) if a not in seen]
        n = len(Q)
        seen = set()
        for i in range(n):
            Qi = Q[i]
            for j in range(n):
                Qj = Q[j]
                a = Qi[j]
                for k in range(n):
                    seen.add((a, Qj[k], Qi[k]))
        return [t for t in self.s.triples() if t not in seen]

    def start(self) -> bool:
        """Solve the seed network on its own; False if it has no atomic refinement."""
        seed = self.anchors.seed
        if seed is None:
            return True
        D = [row[:] for row in seed]
        sol = _first_solution(self.meter, self.s, self.comp, D, _value_order(self.s, None))
        if sol is None:
            return False
        self.Q, self.img = _quotient_matrix(_atoms_of(sol), self.s.identity)
        return True

    def _extend(self, target: tuple) -> bool:
        """Add a gadget for ``target`` keeping the current points and labels fixed."""
        s = self.s
        g = self.anchors.gadget_matrix(target)
        m, k = len(self.Q), len(g)
        D = [[s.full_mask] * (m + k) for _ in range(m + k)]
        for i in range(m):
            for j in range(m):
                D[i][j] = 1 << self.Q[i][j]
        for i in range(k):
            for j in range(k):
                D[m + i][m + j] = g[i][j]
        for i in range(m, m + k):
            D[i][i] &= s.identity_mask
        sol = _first_solution(self.meter, s, self.comp, D, _value_order(s, None), cap=5_000)
        if sol is None:
            return False
        Q, img = _quotient_matrix(_atoms_of(sol), s.identity)
        self.anchors.gadgets.append(target)
        self.img = [img[p] for p in self.img] + img[m:]
        self.Q = Q
        return True

    def _resolve(self, target: tuple) -> bool:
        """Re-solve the full anchor network with the new gadget; False means unsatisfiable."""
        s = self.s
        self.fallbacks += 1
        self.anchors.gadgets.append(target)
        D, _ = self.anchors.network()
        size = len(D)
        old = len(self.img)
        hint = [[-1] * size for _ in range(size)]
        for i in range(old):
            for j in range(old):
                hint[i][j] = self.Q[self.img[i]][self.img[j]]
        sol = _first_solution(self.meter, s, self.comp, D, _value_order(s, hint))
        if sol is None:
            return False
        self.Q, self.img = _quotient_matrix(_atoms_of(sol), s.identity)
        return True

    def run(self) -> bool | None:
        """True when every target is witnessed, False on a sound refutation."""
        while True:
            todo = self.missing()
            if not todo:
                return True
            if self.meter.expired():
                raise BudgetExceeded("budget exhausted during construction")
            t = todo[0]
            try:
                if self._extend(t):
                    continue
            except BudgetExceeded:
                if self.meter.expired():
                    raise
            if not self._resolve(t):
                return False


def _shrink(s: AtomStructure, r: Representation, kind: str) -> Representation:
    """Greedily drop points while the representation stays valid."""
    verify = verify_qualitative if kind == "qualitative" else verify_feeble
    points = list(r.base)
    for p in reversed(list(r.base)):
        if len(points) == 1:
            break
        trial = [q for q in points if q != p]
        if verify(s, r.restrict(trial)).ok:
            points = trial
    out = r.restrict(points)
    return out.renamed([str(i) for i in range(len(out))])


def _find(s: AtomStructure, kind: str, budget: SearchBudget | None) -> SearchOutcome:
    budget = budget or SearchBudget()
    max_base = budget.resolve(s, kind)
    bound = theoretical_bound(s, kind)
    meter = _Meter(budget.node_limit, budget.time_limit)
    comp = Composer(s)
    verify = verify_qualitative if kind == "qualitative" else verify_feeble

    def outcome(status, **kw):
        return SearchOutcome(status, nodes=meter.used, seconds=meter.seconds, **kw)

    if not s.identity:
        return outcome(NONE_EXHAUSTIVE, detail="no subidentity atom can label a loop")
    if kind == "qualitative":
        t = find_obstruction(s, comp)
        if t is not None:
            return outcome(OBSTRUCTED, triple=tuple(s.atoms[x] for x in t),
                           detail="consistent triple with no consistent realisation")

    exhausted = 0
    small = _Meter(SMALL_BASE_NODES if budget.node_limit is None else budget.node_limit,
                   budget.time_limit)
    for n in range(1, min(max_base, SMALL_BASE_LIMIT) + 1):
        res = search_base(s, n, kind, _meter=small, _comp=comp)
        if res.representation is not None:
            meter.used += small.used
            rep = res.representation
            if not verify(s, rep).ok:
                raise AssertionError("search produced an invalid representation")
            return outcome(FOUND, representation=rep, exhausted_up_to=exhausted)
        if not res.exhausted:
            break
        exhausted = n
    meter.used += small.used
    if exhausted >= max_base:
        if max_base >= bound:
            return outcome(NONE_EXHAUSTIVE, exhausted_up_to=exhausted,
                           detail=f"every base up to the bound {bound} searched")
        return outcome(NONE_WITHIN_BUDGET, exhausted_up_to=exhausted,
                       detail=f"no representation on at most {max_base} points")

    build = _Construction(s, kind, meter, comp)
    try:
        done = build.run()
    except BudgetExceeded as exc:
        return outcome(NONE_WITHIN_BUDGET, exhausted_up_to=exhausted, detail=str(exc))
    if not done:
        return outcome(NONE_EXHAUSTIVE, exhausted_up_to=exhausted,
                       detail="the anchored witness network has no consistent atomic labelling")
    rep = Representation(s, [str(i) for i in range(len(build.Q))], build.Q)
    if not verify(s, rep).ok:
        raise AssertionError("construction produced an invalid representation")
    rep = _shrink(s, rep, kind)
    if len(rep) > max_base:
        return outcome(NONE_WITHIN_BUDGET, exhausted_up_to=exhausted,
                       detail=f"smallest witness found has {len(rep)} points, above max_base")
    return outcome(FOUND, representation=rep, exhausted_up_to=exhausted)


def find_qualitative_rep(s: AtomStructure, budget: SearchBudget | None = None) -> SearchOutcome:
    return _find(s, "qualitative", budget)


def find_feeble_rep(s: AtomStructure, budget: SearchBudget | None = None) -> SearchOutcome:
    return _find(s, "feeble", budget)


def decide_qual_sat(s: AtomStructure, net: Network, budget: SearchBudget | None = None) -> NetOutcome:
    """Does ``net`` embed in some qualitative representation of ``s``?"""
    budget = budget or SearchBudget()
    meter = _Meter(budget.node_limit, budget.time_limit)
    comp = Composer(s)
    if net.structure is not s and net.structure != s:
        raise ValueError("network belongs to a different atom structure")

    def outcome(status, **kw):
        return NetOutcome(status, nodes=meter.used, seconds=meter.seconds, **kw)

    D = net.matrix()
    if any(m == 0 for row in D for m in row):
        return outcome(UNSAT, detail="a label is 0")
    if normalise(comp, D) is not None or propagate(comp, D) is not None:
        return outcome(UNSAT, detail="path consistency empties a label")
    t = find_obstruction(s, comp)
    if t is not None:
        return outcome(UNSAT, detail=f"triple ({', '.join(s.atoms[x] for x in t)}) has no realisation")
    build = _Construction(s, "qualitative", meter, comp, seed=D)
    try:
        if not build.start():
            return outcome(UNSAT, detail="network has no consistent atomic refinement")
        done = build.run()
    except BudgetExceeded as exc:
        return outcome(UNKNOWN, detail=str(exc))
    if not done:
        return outcome(UNSAT, detail="network plus witness triangles has no consistent atomic labelling")
    names = [f"p{i}" for i in range(len(build.Q))]
    rep = Representation(s, names, build.Q)
    embedding = {x: names[build.img[i]] for i, x in enumerate(net.nodes)}
    if not verify_qualitative(s, rep).ok or not embedding_holds(net, rep, embedding):
        raise AssertionError("satisfaction certificate failed re-verification")
    return outcome(SAT, representation=rep, embedding=embedding)


def embedding_holds(net: Network, rep: Representation, embedding: dict) -> bool:
    """Every edge label of ``net`` contains the atom its image pair carries."""
    s = net.structure
    for i, x in enumerate(net.nodes):
        for j, y in enumerate(net.nodes):
            a = s.index[rep.atom_at(embedding[x], embedding[y])]
            if not net.mask(i, j) >> a & 1:
                return False
    return True
