"""Terms and equations, evaluated in complex algebras and in finite herds.

Syntax, loosest binding first::

    t ::= t + t          join
        | t . t          meet (also ``·``)
        | - t            complement (also ``−``)
        | t ; t          composition
        | t ^            converse, postfix (also ``˘``)
        | 0 | 1 | 1'     constants (``1′`` accepted)
        | name | ( t )

so ``a.b;c^`` reads as ``a.(b;(c^))`` and ``-x;y`` as ``-(x;y)``.

A herd is a boolean set algebra of relations on a finite base containing the
identity and closed under converse.  It is stored by its atoms (*blocks*), and
composition is *weak*: ``S;T`` is the union of the blocks that meet ``S o T``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .algebra import AlgebraError, AtomStructure, Element, bits
from .representations import Representation


class TermSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}")
        self.text = text
        self.pos = pos


# -- syntax tree --------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    name: str       # "0", "1" or "1'"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str         # "-" or "^"
    arg: "Term"


@dataclass(frozen=True)
class Binary:
    op: str         # "+", "." or ";"
    left: "Term"
    right: "Term"


Term = Union[Const, Var, Unary, Binary]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def variables(self) -> list[str]:
        return sorted(variables(self.lhs) | variables(self.rhs))

    def __len__(self) -> int:
        return length(self.lhs) + length(self.rhs)

    def __str__(self) -> str:
        return f"{show(self.lhs)} = {show(self.rhs)}"


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Unary):
        return variables(t.arg)
    return variables(t.left) | variables(t.right)


def length(t: Term) -> int:
    """Number of symbol occurrences: constants, variables and operators."""
    if isinstance(t, (Var, Const)):
        return 1
    if isinstance(t, Unary):
        return 1 + length(t.arg)
    return 1 + length(t.left) + length(t.right)


def show(t: Term) -> str:
    """Fully parenthesised rendering."""
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Unary):
        return f"(-{show(t.arg)})" if t.op == "-" else f"({show(t.arg)}^)"
    return f"({show(t.left)} {t.op} {show(t.right)})"


# -- parser ----------------------------------------------------------------------------

_ALIASES = {"·": ".", "−": "-", "˘": "^", "′": "'"}
_TOKEN = re.compile(r"\s*(?:(1')|([01])|([A-Za-z_][A-Za-z0-9_]*)|([-+.;^()=]))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    norm = "".join(_ALIASES.get(ch, ch) for ch in text)
    out = []
    pos = 0
    while True:
        while pos < len(norm) and norm[pos].isspace():
            pos += 1
        if pos == len(norm):
            break
        m = _TOKEN.match(norm, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1) or m.group(2):
            out.append(("const", m.group(1) or m.group(2), start))
        elif m.group(3):
            out.append(("var", m.group(3), start))
        else:
            out.append(("op", m.group(4), start))
        pos = m.end()
    out.append(("end", "", len(norm)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, value: str | None = None):
        kind, val, pos = self.toks[self.i]
        if value is not None and val != value:
            shown = repr(val) if kind != "end" else "end of input"
            raise TermSyntaxError(f"expected {value!r} but found {shown}", self.text, pos)
        self.i += 1
        return kind, val, pos

    def at(self, value: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val == value

    def sum(self) -> Term:
        t = self.prod()
        while self.at("+"):
            self.take()
            t = Binary("+", t, self.prod())
        return t

    def prod(self) -> Term:
        t = self.neg()
        while self.at("."):
            self.take()
            t = Binary(".", t, self.neg())
        return t

    def neg(self) -> Term:
        if self.at("-"):
            self.take()
            return Unary("-", self.neg())
        return self.comp()

    def comp(self) -> Term:
        t = self.post()
        while self.at(";"):
            self.take()
            t = Binary(";", t, self.post())
        return t

    def post(self) -> Term:
        t = self.primary()
        while self.at("^"):
            self.take()
            t = Unary("^", t)
        return t

    def primary(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "const":
            self.take()
            return Const(val)
        if kind == "var":
            self.take()
            return Var(val)
        if kind == "op" and val == "(":
            self.take()
            t = self.sum()
            self.take(")")
            return t
        if kind == "op" and val == "-":
            return self.neg()
        shown = repr(val) if kind != "end" else "end of input"
        raise TermSyntaxError(f"expected a term but found {shown}", self.text, pos)

    def finish(self) -> None:
        kind, val, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {val!r}", self.text, pos)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.sum()
    p.finish()
    return t


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    lhs = p.sum()
    p.take("=")
    rhs = p.sum()
    p.finish()
    return Equation(lhs, rhs)


# -- evaluation -------------------------------------------------------------------------


class _Ops:
    """Mask semantics shared by complex algebras and herds."""

    zero = 0

    def __init__(self, top: int, ident: int, conv, comp, env: Mapping[str, int]):
        self.top = top
        self.ident = ident
        self.conv = conv
        self.comp = comp
        self.env = env

    def run(self, t: Term) -> int:
        if isinstance(t, Var):
            try:
                return self.env[t.name]
            except KeyError:
                raise KeyError(f"variable {t.name!r} is not assigned") from None
        if isinstance(t, Const):
            return {"0": 0, "1": self.top, "1'": self.ident}[t.name]
        if isinstance(t, Unary):
            x = self.run(t.arg)
            return self.top & ~x if t.op == "-" else self.conv(x)
        x, y = self.run(t.left), self.run(t.right)
        if t.op == "+":
            return x | y
        if t.op == ".":
            return x & y
        return self.comp(x, y)


def _as_term(t: Term | str) -> Term:
    return parse_term(t) if isinstance(t, str) else t


def eval_in_complex(s: AtomStructure, assignment: Mapping[str, Element | Iterable[str] | str],
                    t: Term | str) -> Element:
    env = {}
    for k, v in assignment.items():
        if isinstance(v, Element):
            env[k] = v.mask
        else:
            env[k] = s.element(v).mask
    ops = _Ops(s.full_mask, s.identity_mask, s.converse_mask, s.compose_mask, env)
    return Element(s, ops.run(_as_term(t)))


Pair = tuple


@dataclass
class Herd:
    """A finite herd given by its blocks and a variable assignment.

    ``assignment`` maps variables to block masks (bit ``i`` is ``blocks[i]``).
    """

    base: tuple
    blocks: list[frozenset]
    assignment: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.base = tuple(self.base)
        self.block_of: dict[Pair, int] = {}
        for i, b in enumerate(self.blocks):
            for p in b:
                if p in self.block_of:
                    raise AlgebraError(f"pair {p} lies in two blocks")
                self.block_of[p] = i
        want = {(x, y) for x in self.base for y in self.base}
        if set(self.block_of) != want:
            raise AlgebraError("blocks must partition base x base")

    @property
    def top(self) -> int:
        return (1 << len(self.blocks)) - 1

    @cached_property
    def identity(self) -> int:
        ident = {(x, x) for x in self.base}
        return self.mask_of(ident)

    @cached_property
    def converse_of(self) -> tuple[int, ...]:
        out = []
        for b in self.blocks:
            cb = {(y, x) for x, y in b}
            i = self.block_of[next(iter(cb))] if cb else 0
            if self.blocks[i] != cb:
                raise AlgebraError("block set is not closed under converse")
            out.append(i)
        return tuple(out)

    @cached_property
    def block_compositions(self) -> tuple[tuple[int, ...], ...]:
        """``[i][j]`` is the mask of blocks meeting ``blocks[i] o blocks[j]``."""
        succ = [dict() for _ in self.blocks]      # block -> point -> successors
        for i, b in enumerate(self.blocks):
            for x, y in b:
                succ[i].setdefault(x, set()).add(y)
        out = []
        for i, b in enumerate(self.blocks):
            row = []
            for j in range(len(self.blocks)):
                m = 0
                sj = succ[j]
                for x, y in b:
                    for z in sj.get(y, ()):
                        m |= 1 << self.block_of[x, z]
                row.append(m)
            out.append(tuple(row))
        return tuple(out)

    def check(self) -> list[str]:
        """Herd conditions on the blocks; an empty list means all hold."""
        problems = []
        if any(not b for b in self.blocks):
            problems.append("empty block")
        try:
            self.converse_of
        except AlgebraError as exc:
            problems.append(str(exc))
        try:
            self.identity
        except AlgebraError:
            problems.append("identity is not a union of blocks")
        return problems

    def mask_of(self, pairs: Iterable[Pair]) -> int:
        pairs = set(pairs)
        m = 0
        for p in pairs:
            m |= 1 << self.block_of[p]
        covered = set().union(*(self.blocks[i] for i in bits(m)))
        if covered != pairs:
            raise AlgebraError("relation is not an element of the herd")
        return m

    def pairs_of(self, mask: int) -> frozenset:
        out = set()
        for i in bits(mask):
            out |= self.blocks[i]
        return frozenset(out)

    def converse(self, mask: int) -> int:
        cv = self.converse_of
        out = 0
        for i in bits(mask):
            out |= 1 << cv[i]
        return out

    def compose(self, x: int, y: int) -> int:
        t = self.block_compositions
        ys = list(bits(y))
        out = 0
        for i in bits(x):
            row = t[i]
            for j in ys:
                out |= row[j]
        return out

    def relation(self, name: str) -> frozenset:
        return self.pairs_of(self.assignment[name])


def build_herd(base: Sequence, assignment: Mapping[str, Iterable[Pair]]) -> Herd:
    """Herd generated by the assigned relations, their converses and the identity."""
    base = tuple(base)
    names = sorted(assignment)
    rels = [frozenset(assignment[v]) for v in names]
    points = set(base)
    for r in rels:
        for x, y in r:
            if x not in points or y not in points:
                raise AlgebraError(f"pair {(x, y)} is not over the base")
    classes: dict[tuple, list] = {}
    for x in base:
        for y in base:
            key = (x == y,) + tuple(((x, y) in r, (y, x) in r) for r in rels)
            classes.setdefault(key, []).append((x, y))
    blocks = [frozenset(c) for c in classes.values()]
    h = Herd(base, blocks)
    h.assignment = {v: h.mask_of(r) for v, r in zip(names, rels)}
    return h


def herd_from_representation(r: Representation, assignment: Mapping[str, Element] | None = None) -> Herd:
    """The herd whose blocks are the atom relations of a representation."""
    s = r.structure
    blocks = []
    by_atom = {}
    for a in range(s.n):
        rel = r.relation(s.atoms[a])
        if rel:
            by_atom[a] = len(blocks)
            blocks.append(frozenset(rel))
    h = Herd(r.base, blocks)
    env = {}
    for v, el in (assignment or {}).items():
        env[v] = sum(1 << by_atom[a] for a in bits(el.mask) if a in by_atom)
    h.assignment = env
    return h


def eval_in_herd(h: Herd, t: Term | str) -> frozenset:
    ops = _Ops(h.top, h.identity, h.converse, h.compose, h.assignment)
    return h.pairs_of(ops.run(_as_term(t)))


def _eval_mask(h: Herd, t: Term) -> int:
    return _Ops(h.top, h.identity, h.converse, h.compose, h.assignment).run(t)


def eval_pairs(h: Herd, t: Term | str) -> frozenset:
    """Independent pair-level evaluation, used to re-check counterexamples.

    Works directly on sets of pairs; weak composition is computed as the union
    of the blocks that meet the true relational composition.
    """
    t = _as_term(t)
    full = frozenset((x, y) for x in h.base for y in h.base)
    ident = frozenset((x, x) for x in h.base)

    def ev(u: Term) -> frozenset:
        if isinstance(u, Var):
            return h.relation(u.name)
        if isinstance(u, Const):
            return {"0": frozenset(), "1": full, "1'": ident}[u.name]
        if isinstance(u, Unary):
            x = ev(u.arg)
            return full - x if u.op == "-" else frozenset((b, a) for a, b in x)
        x, y = ev(u.left), ev(u.right)
        if u.op == "+":
            return x | y
        if u.op == ".":
            return x & y
        true = {(a, c) for a, b in x for b2, c in y if b == b2}
        return frozenset().union(*(blk for blk in h.blocks if blk & true))
    return ev(t)


# -- validity search ----------------------------------------------------------------------

EXHAUSTIVE_BITS = 18


@dataclass
class ValidityResult:
    status: str                      # "VALID_UP_TO" or "COUNTEREXAMPLE"
    bound: int                       # largest base size searched exhaustively
    sampled_up_to: int = 0
    herd: Herd | None = None
    lhs: frozenset | None = None
    rhs: frozenset | None = None
    assignments: int = 0
    full_bound: int = 0

    @property
    def valid(self) -> bool:
        return self.status == "VALID_UP_TO"

    @property
    def certified(self) -> bool:
        """True when the exhaustive bound reaches three times the equation length."""
        return self.valid and self.bound >= self.full_bound


def _differs(h: Herd, eq: Equation) -> bool:
    return _eval_mask(h, eq.lhs) != _eval_mask(h, eq.rhs)


def check_validity(eq: Equation | str, max_base: int = 3, seed: int = 0,
                   samples: int = 2000) -> ValidityResult:
    """Search herds on bases ``1..max_base`` for a counterexample.

    Bases with at most ``EXHAUSTIVE_BITS`` membership bits are enumerated
    completely, larger ones are sampled with a seeded generator.  Only herds
    generated by the assigned relations are visited.
    """
    if isinstance(eq, str):
        eq = parse_equation(eq)
    names = eq.variables()
    rng = random.Random(seed)
    exhaustive = 0
    sampled = 0
    count = 0
    for n in range(1, max_base + 1):
        base = tuple(range(n))
        pairs = [(x, y) for x in base for y in base]
        nbits = n * n * len(names)
        if nbits <= EXHAUSTIVE_BITS:
            choices = product(range(1 << (n * n)), repeat=len(names))
        else:
            choices = ([rng.getrandbits(n * n) for _ in names] for _ in range(samples))
        for masks in choices:
            count += 1
            assignment = {v: {pairs[i] for i in bits(m)} for v, m in zip(names, masks)}
            h = build_herd(base, assignment)
            if _differs(h, eq):
                lhs, rhs = eval_pairs(h, eq.lhs), eval_pairs(h, eq.rhs)
                if lhs == rhs:
                    raise AssertionError("counterexample failed independent re-evaluation")
                return ValidityResult("COUNTEREXAMPLE", exhaustive, sampled, h, lhs, rhs, count,
                                      3 * len(eq))
        if nbits <= EXHAUSTIVE_BITS and exhaustive == n - 1:
            exhaustive = n
        else:
            sampled = n
    return ValidityResult("VALID_UP_TO", exhaustive, sampled, assignments=count, full_bound=3 * len(eq))
