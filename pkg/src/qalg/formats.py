"""Line-oriented text formats for algebras, networks, representations and graphs.

Every file starts with the header ``qalg-format 1``.  After it come
``key: value`` lines and sections.  A section is a key with an empty value,
followed by body lines up to a line reading ``end``.  ``#`` starts a comment.

Example::

    qalg-format 1
    kind: network
    algebra: point
    nodes: a b c d
    edges:
      c a : <
      a b : < >
    end

A network or representation names its algebra with ``algebra:`` (a
catalog key or a path relative to the file) or carries it inline through
the ``atoms``/``identity``/``converse``/``table`` keys of an algebra file.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field

from . import catalog
from .algebra import AlgebraError, AtomStructure
from .networks import Network
from .reductions import SimpleGraph
from .representations import Representation, representation_from_labelling

HEADER = "qalg-format 1"
SECTIONS = {"table", "consistent_triples", "forbidden_triples", "edges", "matrix"}


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass
class _Token:
    text: str
    line: int
    column: int


@dataclass
class _Doc:
    source: str
    fields: dict[str, list[_Token]] = field(default_factory=dict)
    where: dict[str, int] = field(default_factory=dict)
    sections: dict[str, list[list[_Token]]] = field(default_factory=dict)

    def error(self, msg: str, tok: _Token | None = None, line: int = 0) -> FormatError:
        if tok is not None:
            return FormatError(msg, tok.line, tok.column, self.source)
        return FormatError(msg, line, 1, self.source)

    def words(self, key: str, required: bool = True) -> list[_Token]:
        if key not in self.fields:
            if required:
                raise FormatError(f"missing field '{key}'", 0, 0, self.source)
            return []
        return self.fields[key]

    def one(self, key: str, required: bool = True) -> _Token | None:
        ws = self.words(key, required)
        if not ws:
            if required:
                raise FormatError(f"field '{key}' is empty", self.where.get(key, 0), 1, self.source)
            return None
        if len(ws) != 1:
            raise self.error(f"field '{key}' takes a single value", ws[1])
        return ws[0]


def _split(text: str, lineno: int, offset: int = 0) -> list[_Token]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append(_Token(text[i:j], lineno, offset + i + 1))
        i = j
    return out


def _parse(text: str, source: str) -> _Doc:
    doc = _Doc(source)
    lines = text.splitlines()
    header_seen = False
    current = None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if not header_seen:
            if line.strip() != HEADER:
                raise FormatError(f"expected header '{HEADER}'", n, 1, source)
            header_seen = True
            continue
        if current is not None:
            if line.strip() == "end":
                current = None
                continue
            doc.sections[current].append(_split(line, n))
            continue
        col = len(line) - len(line.lstrip())
        if ":" not in line:
            raise FormatError("expected 'key: value'", n, col + 1, source)
        key, _, value = line.partition(":")
        key = key.strip()
        if not key or " " in key:
            raise FormatError(f"bad key {key!r}", n, col + 1, source)
        if key in doc.fields or key in doc.sections:
            raise FormatError(f"duplicate key '{key}'", n, col + 1, source)
        if key in SECTIONS and not value.strip():
            doc.sections[key] = []
            current = key
            continue
        doc.fields[key] = _split(value, n, len(key) + 1)
        doc.where[key] = n
    if not header_seen:
        raise FormatError(f"expected header '{HEADER}'", 1, 1, source)
    if current is not None:
        raise FormatError(f"section '{current}' is not closed by 'end'", len(lines), 1, source)
    return doc


def _atom(doc: _Doc, s: AtomStructure, tok: _Token) -> int:
    if tok.text not in s.index:
        raise doc.error(f"unknown atom '{tok.text}'", tok)
    return s.index[tok.text]


def _kind(doc: _Doc, want: str) -> None:
    tok = doc.one("kind")
    if tok.text != want:
        raise doc.error(f"expected kind '{want}', found '{tok.text}'", tok)


# -- algebras ---------------------------------------------------------------------------


def _structure_from_doc(doc: _Doc, inline: bool = False) -> AtomStructure:
    if not inline:
        _kind(doc, "algebra")
    atoms = [t.text for t in doc.words("atoms")]
    if not atoms:
        raise FormatError("no atoms listed", doc.where.get("atoms", 0), 1, doc.source)
    seen = set()
    for t in doc.words("atoms"):
        if t.text in seen:
            raise doc.error(f"duplicate atom '{t.text}'", t)
        seen.add(t.text)
    name_tok = doc.one("name", required=False)
    probe = AtomStructure(atoms, [], None, (), name="")
    identity = [_atom(doc, probe, t) for t in doc.words("identity")]
    conv = list(range(len(atoms)))
    cw = doc.words("converse", required=False)
    if len(cw) % 2:
        raise doc.error("converse needs pairs of atoms", cw[-1])
    for a, b in zip(cw[::2], cw[1::2]):
        ia, ib = _atom(doc, probe, a), _atom(doc, probe, b)
        conv[ia], conv[ib] = ib, ia
    given = [k for k in ("table", "consistent_triples", "forbidden_triples") if k in doc.sections]
    if len(given) != 1:
        raise FormatError("give exactly one of table, consistent_triples, forbidden_triples",
                          0, 0, doc.source)
    triples = []
    for row in doc.sections[given[0]]:
        if given[0] == "table":
            if len(row) < 3 or row[2].text != ":":
                raise doc.error("table rows read 'row col : atoms...'", row[0])
            r, c = _atom(doc, probe, row[0]), _atom(doc, probe, row[1])
            for t in row[3:]:
                triples.append((r, c, _atom(doc, probe, t)))
        else:
            if len(row) != 3:
                raise doc.error("triples have exactly three atoms", row[0])
            triples.append(tuple(_atom(doc, probe, t) for t in row))
    name = name_tok.text if name_tok else ""
    try:
        if given[0] == "forbidden_triples":
            return AtomStructure.from_forbidden(atoms, identity, conv, triples, name=name)
        return AtomStructure(atoms, identity, conv, triples, name=name)
    except AlgebraError as exc:
        raise FormatError(str(exc), 0, 0, doc.source) from None


def loads_structure(text: str, source: str = "<input>") -> AtomStructure:
    return _structure_from_doc(_parse(text, source))


def dumps_structure(s: AtomStructure) -> str:
    out = [HEADER, "kind: algebra"]
    if s.name:
        out.append(f"name: {s.name}")
    out += _structure_lines(s)
    return "\n".join(out) + "\n"


def _structure_lines(s: AtomStructure) -> list[str]:
    out = ["atoms: " + " ".join(s.atoms)]
    out.append("identity: " + " ".join(s.atoms[e] for e in sorted(s.identity)))
    pairs = [(a, c) for a, c in enumerate(s.conv) if a < c]
    if pairs:
        out.append("converse: " + "  ".join(f"{s.atoms[a]} {s.atoms[c]}" for a, c in pairs))
    out.append("table:")
    for a in range(s.n):
        for b in range(s.n):
            m = s.table[a][b]
            if m:
                out.append(f"  {s.atoms[a]} {s.atoms[b]} : " + " ".join(s.names(m)))
    out.append("end")
    return out


def resolve_algebra(ref: str, base_dir: str = ".") -> AtomStructure:
    """A catalog key or a path to an algebra file."""
    if ref in catalog.KEYS:
        return catalog.get(ref).structure
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    return load_structure(path)


def _doc_structure(doc: _Doc, structure: AtomStructure | None, base_dir: str) -> AtomStructure:
    if structure is not None:
        return structure
    if "atoms" in doc.fields:
        if "algebra" in doc.fields:
            raise FormatError("give either 'algebra' or an inline algebra, not both",
                              doc.where["algebra"], 1, doc.source)
        return _structure_from_doc(doc, inline=True)
    tok = doc.one("algebra", required=False)
    if tok is None:
        raise FormatError("no algebra given (field 'algebra')", 0, 0, doc.source)
    try:
        return resolve_algebra(tok.text, base_dir)
    except OSError as exc:
        raise doc.error(f"cannot read algebra: {exc.strerror}", tok) from None


# -- networks ---------------------------------------------------------------------------


def loads_network(text: str, structure: AtomStructure | None = None, source: str = "<input>",
                  base_dir: str = ".") -> Network:
    doc = _parse(text, source)
    _kind(doc, "network")
    s = _doc_structure(doc, structure, base_dir)
    nodes = [t.text for t in doc.words("nodes")]
    if len(set(nodes)) != len(nodes):
        raise FormatError("duplicate node name", doc.where["nodes"], 1, source)
    edges = {}
    for row in doc.sections.get("edges", []):
        if len(row) < 3 or row[2].text != ":":
            raise doc.error("edge rows read 'x y : atoms...'", row[0])
        for t in row[:2]:
            if t.text not in nodes:
                raise doc.error(f"unknown node '{t.text}'", t)
        key = (row[0].text, row[1].text)
        if key in edges:
            raise doc.error(f"edge {key[0]} {key[1]} given twice", row[0])
        edges[key] = sum(1 << _atom(doc, s, t) for t in row[3:])
    return Network.from_edges(s, nodes, edges)


def dumps_network(net: Network, algebra: str | None = None) -> str:
    s = net.structure
    out = [HEADER, "kind: network"]
    if algebra:
        out.append(f"algebra: {algebra}")
    else:
        out += _structure_lines(net.structure)
    out.append("nodes: " + " ".join(str(x) for x in net.nodes))
    out.append("edges:")
    for i, x in enumerate(net.nodes):
        for j, y in enumerate(net.nodes):
            out.append(f"  {x} {y} : " + " ".join(s.names(net.mask(i, j))))
    out.append("end")
    return "\n".join(out) + "\n"


# -- representations ------------------------------------------------------------------------


def loads_representation(text: str, structure: AtomStructure | None = None, source: str = "<input>",
                         base_dir: str = ".") -> Representation:
    doc = _parse(text, source)
    _kind(doc, "representation")
    s = _doc_structure(doc, structure, base_dir)
    base = [t.text for t in doc.words("base")]
    rows = doc.sections.get("matrix")
    if rows is None:
        raise FormatError("missing section 'matrix'", 0, 0, source)
    if len(rows) != len(base):
        raise FormatError(f"matrix has {len(rows)} rows for {len(base)} base points",
                          rows[-1][0].line if rows else 0, 1, source)
    matrix = []
    for row in rows:
        if len(row) != len(base):
            raise doc.error(f"row has {len(row)} entries, expected {len(base)}", row[0])
        matrix.append([s.atoms[_atom(doc, s, t)] for t in row])
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rep = representation_from_labelling(s, base, matrix)
        for w in caught:
            warnings.warn(f"{source}: {w.message}", stacklevel=2)
        return rep
    except AlgebraError as exc:
        raise FormatError(str(exc), 0, 0, source) from None


def dumps_representation(r: Representation, algebra: str | None = None) -> str:
    out = [HEADER, "kind: representation"]
    if algebra:
        out.append(f"algebra: {algebra}")
    else:
        out += _structure_lines(r.structure)
    out.append("base: " + " ".join(str(x) for x in r.base))
    out.append("matrix:")
    for row in r.matrix_names():
        out.append("  " + " ".join(row))
    out.append("end")
    return "\n".join(out) + "\n"


# -- graphs -----------------------------------------------------------------------------------


def loads_graph(text: str, source: str = "<input>") -> SimpleGraph:
    doc = _parse(text, source)
    _kind(doc, "graph")
    vertices = [t.text for t in doc.words("vertices")]
    edges = []
    for row in doc.sections.get("edges", []):
        if len(row) != 2:
            raise doc.error("graph edge rows read 'u v'", row[0])
        for t in row:
            if t.text not in vertices:
                raise doc.error(f"unknown vertex '{t.text}'", t)
        if row[0].text == row[1].text:
            raise doc.error("loops are not allowed", row[0])
        edges.append((row[0].text, row[1].text))
    try:
        return SimpleGraph.build(vertices, edges)
    except ValueError as exc:
        raise FormatError(str(exc), 0, 0, source) from None


def dumps_graph(g: SimpleGraph) -> str:
    out = [HEADER, "kind: graph", "vertices: " + " ".join(str(v) for v in g.vertices), "edges:"]
    out += [f"  {u} {v}" for u, v in g.undirected_edges()]
    out.append("end")
    return "\n".join(out) + "\n"


# -- file helpers -----------------------------------------------------------------------------


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_structure(path: str) -> AtomStructure:
    return loads_structure(_read(path), source=path)


def load_network(path: str, structure: AtomStructure | None = None) -> Network:
    return loads_network(_read(path), structure, source=path, base_dir=os.path.dirname(path) or ".")


def load_representation(path: str, structure: AtomStructure | None = None) -> Representation:
    return loads_representation(_read(path), structure, source=path,
                                base_dir=os.path.dirname(path) or ".")


def load_graph(path: str) -> SimpleGraph:
    return loads_graph(_read(path), source=path)
