"""Text formats: the ultragraph description language and matrix files.

Ultragraph documents, one statement per line (``#`` starts a comment)::

    vertices v0 v1
    tail v[n] for n >= 2
    edge e : v1 -> ~{ v0 v1 }
    family g[n] for n >= 1 : v[n+1] -> { v[n] }

Matrix files hold either dense rows of 0/1 tokens or a symbolic description::

    matrix index n >= 0
    row 0 : ~{ 0 }
    row [n+1] for n >= 1 : { [n] }
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DuplicateId, ParseError, RangeIsEmpty, SourceSpan, UndeclaredVertex, UltraError
from .model import Edge, Ultragraph
from .sets import TailUniverse, VertexSet
from .symbolic import EdgeFamily, MatrixRow, RowFamily, SymbolicMatrix, SymbolicUltragraph

_TOKEN = re.compile(r"\s*(?:(->|>=|~\{|[{}\[\]:+\-,])|([A-Za-z0-9_]+))")


@dataclass(frozen=True)
class Token:
    text: str
    span: SourceSpan


def tokenize_line(line: str, lineno: int) -> list[Token]:
    code = line.split("#", 1)[0]
    out, pos = [], 0
    while pos < len(code):
        if code[pos:].strip() == "":
            break
        m = _TOKEN.match(code, pos)
        if not m:
            col = pos + len(code[pos:]) - len(code[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {code[col - 1]!r}", SourceSpan(lineno, col))
        text = m.group(1) or m.group(2)
        out.append(Token(text, SourceSpan(lineno, m.start(m.lastindex) + 1)))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, toks: list[Token], lineno: int, line: str):
        self.toks, self.i, self.lineno, self.line = toks, 0, lineno, line

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def end_span(self) -> SourceSpan:
        return SourceSpan(self.lineno, len(self.line.split("#", 1)[0].rstrip()) + 1)

    def next(self, what: str = "token") -> Token:
        t = self.peek()
        if t is None:
            raise ParseError(f"expected {what}, found end of line", self.end_span())
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next(repr(text))
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.span)
        return t

    def word(self, what: str = "identifier") -> Token:
        t = self.next(what)
        if not re.fullmatch(r"[A-Za-z0-9_]+", t.text):
            raise ParseError(f"expected {what}, found {t.text!r}", t.span)
        return t

    def integer(self) -> tuple[int, SourceSpan]:
        t = self.next("integer")
        if not t.text.isdigit():
            raise ParseError(f"expected integer, found {t.text!r}", t.span)
        return int(t.text), t.span

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.text == text:
            self.i += 1
            return True
        return False

    def done(self):
        t = self.peek()
        if t is not None:
            raise ParseError(f"unexpected {t.text!r}", t.span)


# ---------------------------------------------------------------- document types
@dataclass(frozen=True)
class VertexRef:
    """``name``, ``name[k]`` (kind "index") or ``name[n+d]`` (kind "offset")."""

    name: str
    kind: str = "name"
    value: int = 0
    span: SourceSpan | None = field(default=None, compare=False)

    def render(self, var: str = "n") -> str:
        if self.kind == "name":
            return self.name
        if self.kind == "index":
            return f"{self.name}[{self.value}]"
        if self.value == 0:
            return f"{self.name}[{var}]"
        sign = "+" if self.value > 0 else "-"
        return f"{self.name}[{var}{sign}{abs(self.value)}]"


@dataclass(frozen=True)
class RangeSpec:
    cofinite: bool
    items: tuple[VertexRef, ...]
    span: SourceSpan | None = field(default=None, compare=False)

    def render(self, var: str = "n") -> str:
        body = " ".join(r.render(var) for r in self.items)
        return ("~{ " if self.cofinite else "{ ") + (body + " " if body else "") + "}"


@dataclass(frozen=True)
class TailDecl:
    prefix: str
    var: str
    start: int
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class EdgeDecl:
    id: str
    source: VertexRef
    range: RangeSpec
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FamilyDecl:
    id: str
    var: str
    start: int
    source: VertexRef
    range: RangeSpec
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class UltragraphDocument:
    vertices: tuple[str, ...]
    tail: TailDecl | None
    edges: tuple[EdgeDecl, ...]
    families: tuple[FamilyDecl, ...]
    vertex_spans: tuple[SourceSpan, ...] = field(default=(), compare=False)

    @property
    def is_symbolic(self) -> bool:
        return self.tail is not None


# ---------------------------------------------------------------- parsing
def _ref(c: _Cursor, var: str | None) -> VertexRef:
    t = c.word("vertex")
    if not c.accept("["):
        return VertexRef(t.text, "name", 0, t.span)
    inner = c.word("index or variable")
    if inner.text.isdigit():
        c.expect("]")
        return VertexRef(t.text, "index", int(inner.text), t.span)
    if var is None or inner.text != var:
        raise ParseError(f"unknown index variable {inner.text!r}", inner.span)
    off = 0
    if c.peek() is not None and c.peek().text in "+-":
        sign = -1 if c.next().text == "-" else 1
        k, _ = c.integer()
        off = sign * k
    c.expect("]")
    return VertexRef(t.text, "offset", off, t.span)


def _range(c: _Cursor, var: str | None) -> RangeSpec:
    t = c.next("range")
    if t.text not in ("{", "~{"):
        raise ParseError(f"expected '{{' or '~{{', found {t.text!r}", t.span)
    items = []
    while not c.accept("}"):
        if c.peek() is None:
            raise ParseError("unterminated range", c.end_span())
        c.accept(",")
        if c.accept("}"):
            break
        items.append(_ref(c, var))
    if t.text == "{" and not items:
        raise RangeIsEmpty("empty range", t.span)
    return RangeSpec(t.text == "~{", tuple(items), t.span)


def parse(text: str) -> UltragraphDocument:
    """Parse an ultragraph document; diagnostics carry line and column."""
    vertices: list[str] = []
    vspans: list[SourceSpan] = []
    tail: TailDecl | None = None
    edges: list[EdgeDecl] = []
    families: list[FamilyDecl] = []
    ids: dict[str, SourceSpan] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = tokenize_line(line, lineno)
        if not toks:
            continue
        c = _Cursor(toks, lineno, line)
        kw = c.word("statement")
        if kw.text == "vertices":
            while c.peek() is not None:
                t = c.word("vertex name")
                if t.text in vertices:
                    raise DuplicateId(f"vertex {t.text} declared twice", t.span)
                vertices.append(t.text)
                vspans.append(t.span)
        elif kw.text == "tail":
            if tail is not None:
                raise DuplicateId("second tail declaration", kw.span)
            prefix = c.word("tail prefix")
            c.expect("[")
            var = c.word("index variable")
            c.expect("]")
            c.expect("for")
            v2 = c.word("index variable")
            if v2.text != var.text:
                raise ParseError(f"expected variable {var.text!r}", v2.span)
            c.expect(">=")
            start, _ = c.integer()
            c.done()
            tail = TailDecl(prefix.text, var.text, start, kw.span)
        elif kw.text == "edge":
            eid = c.word("edge id")
            if eid.text in ids:
                raise DuplicateId(f"edge id {eid.text} used twice", eid.span)
            ids[eid.text] = eid.span
            c.expect(":")
            src = _ref(c, None)
            c.expect("->")
            rng = _range(c, None)
            c.done()
            edges.append(EdgeDecl(eid.text, src, rng, kw.span))
        elif kw.text == "family":
            fid = c.word("family id")
            if fid.text in ids:
                raise DuplicateId(f"family id {fid.text} used twice", fid.span)
            ids[fid.text] = fid.span
            c.expect("[")
            var = c.word("index variable")
            c.expect("]")
            c.expect("for")
            v2 = c.word("index variable")
            if v2.text != var.text:
                raise ParseError(f"expected variable {var.text!r}", v2.span)
            c.expect(">=")
            start, _ = c.integer()
            c.expect(":")
            src = _ref(c, var.text)
            c.expect("->")
            rng = _range(c, var.text)
            c.done()
            families.append(FamilyDecl(fid.text, var.text, start, src, rng, kw.span))
        else:
            raise ParseError(f"unknown statement {kw.text!r}", kw.span)
    doc = UltragraphDocument(tuple(vertices), tail, tuple(edges), tuple(families), tuple(vspans))
    _check_names(doc)
    return doc


def _check_names(doc: UltragraphDocument) -> None:
    declared = set(doc.vertices)
    tail = doc.tail
    exc = [v for v in doc.vertices]

    def known(r: VertexRef) -> bool:
        if r.kind == "name":
            if r.name in declared:
                return True
            if tail is not None and r.name.startswith(tail.prefix):
                rest = r.name[len(tail.prefix):]
                return rest.isdigit() and int(rest) >= tail.start and str(int(rest)) == rest
            return False
        if tail is None or r.name != tail.prefix:
            return False
        if r.kind == "index":
            return r.value >= tail.start or f"{tail.prefix}{r.value}" in declared
        return True

    for e in doc.edges:
        for r in (e.source, *e.range.items):
            if r.kind == "offset":
                raise ParseError("offsets are only allowed inside families", r.span)
            if not known(r):
                raise UndeclaredVertex(f"vertex {r.render()} is not declared", r.span)
    for f in doc.families:
        if tail is None:
            raise ParseError("families need a tail declaration", f.span)
        for r in (f.source, *f.range.items):
            if not known(r):
                raise UndeclaredVertex(f"vertex {r.render(f.var)} is not declared", r.span)
            if r.kind == "offset":
                for k in range(f.start + r.value, tail.start):
                    if f"{tail.prefix}{k}" not in declared:
                        raise UndeclaredVertex(
                            f"{r.render(f.var)} resolves to undeclared {tail.prefix}{k} for {f.var} = {k - r.value}",
                            r.span)
        if f.range.cofinite and any(r.kind == "offset" for r in f.range.items):
            raise ParseError("cofinite family ranges may only list fixed vertices", f.range.span)
    if tail is not None:
        for v, sp in zip(exc, doc.vertex_spans):
            rest = v[len(tail.prefix):]
            if v.startswith(tail.prefix) and rest.isdigit() and int(rest) >= tail.start:
                raise DuplicateId(f"{v} is already a tail vertex", sp)


# ---------------------------------------------------------------- building models
def build(doc: UltragraphDocument):
    """Construct the Ultragraph or SymbolicUltragraph described by a document."""
    try:
        if doc.tail is None:
            return _build_finite(doc)
        return _build_symbolic(doc)
    except UltraError as exc:
        if isinstance(exc, (ParseError, UndeclaredVertex, DuplicateId, RangeIsEmpty)):
            raise
        raise ParseError(str(exc)) from exc


def _build_finite(doc: UltragraphDocument) -> Ultragraph:
    allv = frozenset(doc.vertices)
    edges = []
    for e in doc.edges:
        names = {r.name for r in e.range.items}
        rng = (allv - names) if e.range.cofinite else names
        if not rng:
            raise RangeIsEmpty(f"edge {e.id} has empty range", e.range.span)
        edges.append(Edge(e.id, e.source.name, VertexSet.finite(rng)))
    return Ultragraph(doc.vertices, edges)


def _build_symbolic(doc: UltragraphDocument) -> SymbolicUltragraph:
    t = doc.tail
    u = TailUniverse.make(doc.vertices, t.prefix, t.start)

    def name_of(r: VertexRef) -> str:
        return r.name if r.kind == "name" else f"{t.prefix}{r.value}"

    def fixed(spec: RangeSpec) -> VertexSet:
        names = [name_of(r) for r in spec.items if r.kind != "offset"]
        return VertexSet.cofinite_of(names, u) if spec.cofinite else VertexSet.finite(names, u)

    edges = [Edge(e.id, name_of(e.source), fixed(e.range)) for e in doc.edges]
    fams = []
    for f in doc.families:
        offs = tuple(r.value for r in f.range.items if r.kind == "offset")
        if f.source.kind == "offset":
            fams.append(EdgeFamily(f.id, f.start, offs, fixed(f.range), source_offset=f.source.value))
        else:
            fams.append(EdgeFamily(f.id, f.start, offs, fixed(f.range), source_offset=None,
                                   fixed_source=name_of(f.source)))
    return SymbolicUltragraph(doc.vertices, t.prefix, t.start, edges, fams)


def render(doc: UltragraphDocument) -> str:
    lines = []
    if doc.vertices:
        lines.append("vertices " + " ".join(doc.vertices))
    if doc.tail is not None:
        t = doc.tail
        lines.append(f"tail {t.prefix}[{t.var}] for {t.var} >= {t.start}")
    for e in doc.edges:
        lines.append(f"edge {e.id} : {e.source.render()} -> {e.range.render()}")
    for f in doc.families:
        lines.append(f"family {f.id}[{f.var}] for {f.var} >= {f.start} : "
                     f"{f.source.render(f.var)} -> {f.range.render(f.var)}")
    return "\n".join(lines) + "\n"


def document_of(g) -> UltragraphDocument:
    """Document describing a finite ultragraph (edge ids must be plain words)."""
    if g.is_symbolic:
        raise TypeError("only finite ultragraphs can be converted")
    edges = tuple(
        EdgeDecl(e.id, VertexRef(e.source), RangeSpec(False, tuple(VertexRef(v) for v in e.range)))
        for e in g.edges
    )
    return UltragraphDocument(tuple(g.vertices), None, edges, ())


def parse_ultragraph(text: str):
    return build(parse(text))


# ---------------------------------------------------------------- matrices
def _col(c: _Cursor, var: str | None) -> tuple[str, int]:
    if c.accept("["):
        v = c.word("index variable")
        if var is None or v.text != var:
            raise ParseError(f"unknown index variable {v.text!r}", v.span)
        off = 0
        if c.peek() is not None and c.peek().text in "+-":
            sign = -1 if c.next().text == "-" else 1
            k, _ = c.integer()
            off = sign * k
        c.expect("]")
        return "offset", off
    k, _ = c.integer()
    return "index", k


def _cols(c: _Cursor, var: str | None) -> tuple[bool, list[tuple[str, int]], SourceSpan]:
    t = c.next("column set")
    if t.text not in ("{", "~{"):
        raise ParseError(f"expected '{{' or '~{{', found {t.text!r}", t.span)
    items = []
    while not c.accept("}"):
        if c.peek() is None:
            raise ParseError("unterminated column set", c.end_span())
        if c.accept(","):
            continue
        items.append(_col(c, var))
    return t.text == "~{", items, t.span


def parse_matrix(text: str):
    """Dense 0/1 rows, or a symbolic matrix introduced by a ``matrix`` line."""
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), 1) if ln.split("#", 1)[0].strip()]
    if not lines:
        raise ParseError("empty matrix", SourceSpan(1, 1))
    first = lines[0][1].split("#", 1)[0].split()
    if first[0] != "matrix":
        rows = []
        for i, ln in lines:
            toks = tokenize_line(ln, i)
            row = []
            for t in toks:
                if t.text == ",":
                    continue
                if t.text not in ("0", "1"):
                    raise ParseError(f"matrix entries must be 0 or 1, found {t.text!r}", t.span)
                row.append(int(t.text))
            rows.append(row)
        n = len(rows)
        for (i, _), row in zip(lines, rows):
            if len(row) != n:
                raise ParseError(f"row has {len(row)} entries, expected {n}", SourceSpan(i, 1))
        return rows
    start = None
    rows, fams = [], []
    for i, ln in lines:
        c = _Cursor(tokenize_line(ln, i), i, ln)
        kw = c.word("statement")
        if kw.text == "matrix":
            c.expect("index")
            c.word("index variable")
            c.expect(">=")
            start, _ = c.integer()
            c.done()
        elif kw.text == "row":
            if start is None:
                raise ParseError("rows must follow the matrix line", kw.span)
            if c.accept("["):
                var = c.word("index variable").text
                off = 0
                if c.peek() is not None and c.peek().text in "+-":
                    sign = -1 if c.next().text == "-" else 1
                    k, _ = c.integer()
                    off = sign * k
                c.expect("]")
                c.expect("for")
                c.expect(var)
                c.expect(">=")
                m, _ = c.integer()
                c.expect(":")
                cof, items, sp = _cols(c, var)
                c.done()
                if cof and any(k == "offset" for k, _ in items):
                    raise ParseError("cofinite family rows may only list fixed columns", sp)
                if not items and not cof:
                    raise RangeIsEmpty("empty row family", sp)
                fams.append(RowFamily(m, off, tuple(v for k, v in items if k == "offset"),
                                      frozenset(v for k, v in items if k == "index"), cof))
            else:
                idx, _ = c.integer()
                c.expect(":")
                cof, items, sp = _cols(c, None)
                c.done()
                rows.append(MatrixRow(idx, cof, frozenset(v for _, v in items)))
        else:
            raise ParseError(f"unknown statement {kw.text!r}", kw.span)
    try:
        return SymbolicMatrix(start, tuple(rows), tuple(fams))
    except UltraError as exc:
        raise ParseError(str(exc)) from exc


def render_matrix(a) -> str:
    if not isinstance(a, SymbolicMatrix):
        return "\n".join(" ".join(str(x) for x in row) for row in a) + "\n"

    def cols(cof: bool, items: list[str]) -> str:
        return ("~{ " if cof else "{ ") + (" ".join(items) + " " if items else "") + "}"

    def off(d: int) -> str:
        return "[n]" if d == 0 else f"[n{'+' if d > 0 else '-'}{abs(d)}]"

    out = [f"matrix index n >= {a.index_start}"]
    for r in a.rows:
        out.append(f"row {r.index} : {cols(r.cofinite, [str(j) for j in sorted(r.cols)])}")
    for f in a.families:
        items = [off(d) for d in f.col_offsets] + [str(j) for j in sorted(f.fixed)]
        out.append(f"row {off(f.row_offset)} for n >= {f.start} : {cols(f.fixed_cofinite, items)}")
    return "\n".join(out) + "\n"


def looks_like_matrix(text: str) -> bool:
    for ln in text.splitlines():
        code = ln.split("#", 1)[0].strip()
        if code:
            return code.split()[0] == "matrix" or set(code.replace(",", " ").split()) <= {"0", "1"}
    return False
