"""Path-consistency propagation and backtracking over label matrices.

A *domain matrix* ``D`` is a list of lists of atom bitmasks, ``D[i][j]`` being
the set of atoms still allowed on the ordered pair ``(i, j)``.  The engine keeps
``D[j][i]`` equal to the converse of ``D[i][j]`` and loops below the identity.
"""

from __future__ import annotations

import time
from collections import deque
from typing import Callable, Iterator

from .algebra import AtomStructure, bits, popcount

Matrix = list[list[int]]


class BudgetExceeded(Exception):
    """Search stopped by a node or time limit."""


class Composer:
    """Cached mask composition for one structure."""

    def __init__(self, s: AtomStructure):
        self.s = s
        self._cache: dict[tuple[int, int], int] = {}
        self._conv: dict[int, int] = {}

    def __call__(self, x: int, y: int) -> int:
        key = (x, y)
        r = self._cache.get(key)
        if r is None:
            r = self.s.compose_mask(x, y)
            if len(self._cache) < 2_000_000:
                self._cache[key] = r
        return r

    def conv(self, x: int) -> int:
        r = self._conv.get(x)
        if r is None:
            r = self._conv[x] = self.s.converse_mask(x)
        return r


def normalise(comp: Composer, D: Matrix) -> tuple[int, int] | None:
    """Apply the loop and converse constraints in place; return a zero pair if any."""
    s = comp.s
    n = len(D)
    for i in range(n):
        D[i][i] &= s.identity_mask
        for j in range(i, n):
            m = D[i][j] & comp.conv(D[j][i])
            if not m:
                return (i, j)
            D[i][j] = m
            D[j][i] = comp.conv(m)
        if not D[i][i]:
            return (i, i)
    return None


def propagate(comp: Composer, D: Matrix, pending=None) -> tuple[int, int, int] | None:
    """Refine ``D`` in place to its path-consistent fixpoint.

    Returns ``None`` on success or the node triple ``(x, y, z)`` whose
    composition emptied the label of ``(x, z)``.
    """
    n = len(D)
    if pending is None:
        pending = [(i, j) for i in range(n) for j in range(n)]
    queue = deque(pending)
    queued = set(pending)
    cv = comp.conv
    rng = range(n)
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        Di, Dj = D[i], D[j]
        dij = Di[j]
        for k in rng:
            # triangle (i, j, k): D[i][k] <= D[i][j] ; D[j][k]
            dik = Di[k]
            new = dik & comp(dij, Dj[k])
            if new != dik:
                if not new:
                    return (i, j, k)
                Di[k] = new
                D[k][i] = cv(new)
                if (i, k) not in queued:
                    queued.add((i, k))
                    queue.append((i, k))
            # triangle (k, i, j): D[k][j] <= D[k][i] ; D[i][j]
            Dk = D[k]
            dkj = Dk[j]
            new = dkj & comp(Dk[i], Di[j])
            if new != dkj:
                if not new:
                    return (k, i, j)
                Dk[j] = new
                Dj[k] = cv(new)
                if (k, j) not in queued:
                    queued.add((k, j))
                    queue.append((k, j))
            dij = Di[j]
    return None


def copy(D: Matrix) -> Matrix:
    return [row[:] for row in D]


class Search:
    """Backtracking with full path-consistency maintenance and fail-first branching.

    ``value_order(i, j, mask)`` lists the atoms to try on ``(i, j)``;
    ``prune(D)`` returns True to cut a subtree; ``pairs`` restricts the pairs
    branched on (all ``i <= j`` by default).
    """

    def __init__(self, s: AtomStructure, comp: Composer | None = None,
                 value_order: Callable[[int, int, int], list[int]] | None = None,
                 prune: Callable[[Matrix], bool] | None = None,
                 node_limit: int | None = None, time_limit: float | None = None):
        self.s = s
        self.comp = comp or Composer(s)
        self.value_order = value_order or (lambda i, j, m: list(bits(m)))
        self.prune = prune
        self.node_limit = node_limit
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise BudgetExceeded(f"node limit {self.node_limit} reached")
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time limit reached")

    def _choose(self, D: Matrix) -> tuple[int, int] | None:
        best = None
        best_size = 1 << 30
        n = len(D)
        for i in range(n):
            row = D[i]
            for j in range(i, n):
                m = row[j]
                if m & (m - 1):
                    size = popcount(m)
                    if size < best_size:
                        best, best_size = (i, j), size
                        if size == 2:
                            return best
        return best

    def solutions(self, D: Matrix, propagated: bool = False) -> Iterator[Matrix]:
        """Yield every atomic, path-consistent refinement of ``D``."""
        D = copy(D)
        if not propagated:
            if normalise(self.comp, D) is not None or propagate(self.comp, D) is not None:
                return
        if self.prune is not None and self.prune(D):
            return
        yield from self._solve(D)

    def _solve(self, D: Matrix) -> Iterator[Matrix]:
        self._tick()
        pick = self._choose(D)
        if pick is None:
            yield D
            return
        i, j = pick
        cv = self.comp.conv
        for a in self.value_order(i, j, D[i][j]):
            D2 = copy(D)
            D2[i][j] = 1 << a
            D2[j][i] = cv(1 << a)
            if propagate(self.comp, D2, [(i, j)]) is not None:
                continue
            if self.prune is not None and self.prune(D2):
                continue
            yield from self._solve(D2)
