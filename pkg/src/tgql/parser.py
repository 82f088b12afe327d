"""TEG-QL: recursive-descent parser, AST, canonical renderer, bindings.

Shape of the language:

    SELECT select-list FROM path {, path} [WHERE condition]
        [SNAPSHOT instant | IN [a-b]]

A path alternates node steps and edge steps.  A node step is a label,
optionally ``as Alias``, optionally (in SELECT only) a projection list
``(Attr, ...)`` or ``(*)``.  An edge step is ``-Label->`` or ``<-Label-``
with optional hop bounds ``[n..m]``.  Keywords are case-insensitive;
identifiers are not.  Strings are single-quoted with '' as the escape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .temporal import NOW, Interval, MalformedInterval, _NowType


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected

    def __str__(self) -> str:
        return f"{self.message} at line {self.line}:{self.column}"


class DuplicateAlias(ValueError):
    """One alias declared for two differently labeled steps."""


# ---------------------------------------------------------------------------
# tokens

_KEYWORDS = {"select", "from", "where", "and", "or", "as", "snapshot", "in"}

_TWO_CHAR = {"->": "ARROW", "<-": "LARROW", "<=": "LE", ">=": "GE", "<>": "NE", "..": "DOTDOT"}
_ONE_CHAR = {
    "-": "DASH", ",": "COMMA", ".": "DOT", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACKET", "]": "RBRACKET", "*": "STAR", "=": "EQ", "<": "LT", ">": "GT",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch == "'":
            j = i + 1
            buf: list[str] = []
            while True:
                if j >= n:
                    raise QuerySyntaxError("unterminated string", start_line, start_col)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        buf.append("'")
                        j += 2
                        continue
                    break
                if text[j] == "\n":
                    raise QuerySyntaxError("unterminated string", start_line, start_col)
                buf.append(text[j])
                j += 1
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word.upper() if word.lower() in _KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        pair = text[i : i + 2]
        if pair in _TWO_CHAR:
            tokens.append(Token(_TWO_CHAR[pair], pair, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(_ONE_CHAR[ch], ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Projection:
    names: tuple[str, ...] | None = None  # None means (*)


@dataclass(frozen=True)
class NodeStep:
    label: str
    alias: str | None = None
    projection: Projection | None = None

    @property
    def ref_name(self) -> str:
        return self.alias if self.alias is not None else self.label


@dataclass(frozen=True)
class EdgeStep:
    label: str
    forward: bool = True
    bounds: tuple[int, int] | None = None


@dataclass(frozen=True)
class PathPattern:
    steps: tuple[NodeStep, ...]
    edges: tuple[EdgeStep, ...] = ()

    def __post_init__(self) -> None:
        if len(self.steps) != len(self.edges) + 1:
            raise ValueError("a path needs one more node step than edge steps")


@dataclass(frozen=True)
class Comparison:
    subject: str
    attribute: str
    op: str  # = <> < <= > >=
    literal: int | str


@dataclass(frozen=True)
class And:
    terms: tuple["Condition", ...]


@dataclass(frozen=True)
class Or:
    terms: tuple["Condition", ...]


Condition = Union[Comparison, And, Or]


@dataclass(frozen=True)
class Snapshot:
    at: int | _NowType


@dataclass(frozen=True)
class InRange:
    window: Interval


@dataclass(frozen=True)
class QueryAst:
    select: tuple[PathPattern, ...] | None  # None means SELECT *
    paths: tuple[PathPattern, ...]
    where: Condition | None = None
    temporal: Snapshot | InRange | None = None


# ---------------------------------------------------------------------------
# parser

_COMPARE_OPS = {"EQ": "=", "NE": "<>", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def check(self, kind: str) -> bool:
        return self.peek().kind == kind

    def match(self, kind: str) -> Token | None:
        if self.check(kind):
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            got = tok.text or "end of query"
            raise QuerySyntaxError(f"expected {what}, got {got!r}", tok.line, tok.column, (kind,))
        return self.advance()

    # -- grammar ------------------------------------------------------------

    def query(self) -> QueryAst:
        self.expect("SELECT", "SELECT")
        select: tuple[PathPattern, ...] | None
        if self.match("STAR"):
            if self.check("COMMA"):
                tok = self.peek()
                raise QuerySyntaxError("SELECT * cannot be combined with other items", tok.line, tok.column)
            select = None
        else:
            select = self.path_list(allow_projection=True)
        self.expect("FROM", "FROM")
        paths = self.path_list(allow_projection=False)
        where = None
        if self.match("WHERE"):
            where = self.or_expr()
        temporal = self.temporal_modifier()
        tok = self.peek()
        if tok.kind != "EOF":
            raise QuerySyntaxError(f"unexpected {tok.text!r} after query", tok.line, tok.column)
        return QueryAst(select, paths, where, temporal)

    def path_list(self, allow_projection: bool) -> tuple[PathPattern, ...]:
        paths = [self.path(allow_projection)]
        while self.match("COMMA"):
            paths.append(self.path(allow_projection))
        return tuple(paths)

    def path(self, allow_projection: bool) -> PathPattern:
        steps = [self.node_step(allow_projection)]
        edges: list[EdgeStep] = []
        while self.check("DASH") or self.check("LARROW"):
            edges.append(self.edge_step())
            steps.append(self.node_step(allow_projection))
        return PathPattern(tuple(steps), tuple(edges))

    def node_step(self, allow_projection: bool) -> NodeStep:
        label = self.expect("IDENT", "a node label").text
        alias = None
        if self.match("AS"):
            alias = self.expect("IDENT", "an alias name").text
        projection = None
        if self.check("LPAREN"):
            tok = self.peek()
            if not allow_projection:
                raise QuerySyntaxError(
                    "attribute projection is only allowed in the SELECT list", tok.line, tok.column
                )
            self.advance()
            if self.match("STAR"):
                projection = Projection(None)
            else:
                names = [self.expect("IDENT", "an attribute name").text]
                while self.match("COMMA"):
                    names.append(self.expect("IDENT", "an attribute name").text)
                projection = Projection(tuple(names))
            self.expect("RPAREN", "')'")
        return NodeStep(label, alias, projection)

    def edge_step(self) -> EdgeStep:
        if self.match("DASH"):
            label = self.expect("IDENT", "an edge label").text
            bounds = self.hop_bounds()
            self.expect("ARROW", "'->'")
            return EdgeStep(label, forward=True, bounds=bounds)
        self.expect("LARROW", "'-' or '<-'")
        label = self.expect("IDENT", "an edge label").text
        bounds = self.hop_bounds()
        self.expect("DASH", "'-'")
        return EdgeStep(label, forward=False, bounds=bounds)

    def hop_bounds(self) -> tuple[int, int] | None:
        if not self.check("LBRACKET"):
            return None
        tok = self.advance()
        lo = int(self.expect("INT", "a hop count").text)
        self.expect("DOTDOT", "'..'")
        hi = int(self.expect("INT", "a hop count").text)
        self.expect("RBRACKET", "']'")
        if not 1 <= lo <= hi:
            raise QuerySyntaxError(f"hop bounds must satisfy 1 <= min <= max, got [{lo}..{hi}]", tok.line, tok.column)
        return (lo, hi)

    def or_expr(self) -> Condition:
        terms = [self.and_expr()]
        while self.match("OR"):
            terms.append(self.and_expr())
        if len(terms) == 1:
            return terms[0]
        # OR is associative; splice nested ORs so the tree has one normal form
        flat: list[Condition] = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, Or) else (t,))
        return Or(tuple(flat))

    def and_expr(self) -> Condition:
        terms = [self.primary_condition()]
        while self.match("AND"):
            terms.append(self.primary_condition())
        if len(terms) == 1:
            return terms[0]
        flat: list[Condition] = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, And) else (t,))
        return And(tuple(flat))

    def primary_condition(self) -> Condition:
        if self.match("LPAREN"):
            inner = self.or_expr()
            self.expect("RPAREN", "')'")
            return inner
        subject = self.expect("IDENT", "an alias or label").text
        self.expect("DOT", "'.'")
        attribute = self.expect("IDENT", "an attribute name").text
        op_tok = self.peek()
        if op_tok.kind not in _COMPARE_OPS:
            raise QuerySyntaxError(
                f"expected a comparison operator, got {op_tok.text or 'end of query'!r}",
                op_tok.line, op_tok.column, tuple(_COMPARE_OPS),
            )
        self.advance()
        literal = self.literal()
        return Comparison(subject, attribute, _COMPARE_OPS[op_tok.kind], literal)

    def literal(self) -> int | str:
        tok = self.peek()
        if tok.kind == "STRING":
            self.advance()
            return tok.text
        if tok.kind == "INT":
            self.advance()
            return int(tok.text)
        if tok.kind == "DASH" and self.peek(1).kind == "INT":
            self.advance()
            return -int(self.advance().text)
        raise QuerySyntaxError(
            f"expected a literal, got {tok.text or 'end of query'!r}", tok.line, tok.column, ("INT", "STRING")
        )

    def temporal_modifier(self) -> Snapshot | InRange | None:
        if self.match("SNAPSHOT"):
            tok = self.peek()
            if tok.kind == "IDENT" and tok.text.lower() == "now":
                self.advance()
                return Snapshot(NOW)
            if tok.kind == "INT":
                self.advance()
                return Snapshot(int(tok.text))
            if tok.kind == "DASH" and self.peek(1).kind == "INT":
                self.advance()
                return Snapshot(-int(self.advance().text))
            raise QuerySyntaxError(
                f"expected an instant or Now, got {tok.text or 'end of query'!r}", tok.line, tok.column
            )
        if self.match("IN"):
            tok = self.expect("LBRACKET", "'['")
            lo = self.signed_int()
            self.expect("DASH", "'-'")
            hi = self.signed_int()
            self.expect("RBRACKET", "']'")
            try:
                window = Interval(lo, hi)
            except MalformedInterval:
                raise QuerySyntaxError(f"empty window [{lo}-{hi}]", tok.line, tok.column) from None
            return InRange(window)
        return None

    def signed_int(self) -> int:
        if self.check("DASH") and self.peek(1).kind == "INT":
            self.advance()
            return -int(self.advance().text)
        return int(self.expect("INT", "an instant").text)


def parse(text: str) -> QueryAst:
    """Parse one TEG-QL query."""
    return _Parser(text).query()


# ---------------------------------------------------------------------------
# canonical rendering


def _render_literal(lit: int | str) -> str:
    if isinstance(lit, int):
        return str(lit)
    return "'" + lit.replace("'", "''") + "'"


def _render_condition(cond: Condition, parent: str = "") -> str:
    if isinstance(cond, Comparison):
        return f"{cond.subject}.{cond.attribute} {cond.op} {_render_literal(cond.literal)}"
    if isinstance(cond, And):
        return " AND ".join(_render_condition(t, "and") for t in cond.terms)
    body = " OR ".join(_render_condition(t, "or") for t in cond.terms)
    if parent == "and":
        return f"({body})"
    return body


def _render_step(step: NodeStep) -> str:
    out = step.label
    if step.alias is not None:
        out += f" as {step.alias}"
    if step.projection is not None:
        names = step.projection.names
        out += "(*)" if names is None else "(" + ", ".join(names) + ")"
    return out


def _render_path(path: PathPattern) -> str:
    parts = [_render_step(path.steps[0])]
    for e, s in zip(path.edges, path.steps[1:]):
        b = f"[{e.bounds[0]}..{e.bounds[1]}]" if e.bounds else ""
        parts.append(f"-{e.label}{b}->" if e.forward else f"<-{e.label}{b}-")
        parts.append(_render_step(s))
    return "".join(parts)


def render(ast: QueryAst) -> str:
    """One-line canonical text; parse(render(ast)) reproduces ast."""
    select = "*" if ast.select is None else ", ".join(_render_path(p) for p in ast.select)
    out = f"SELECT {select} FROM " + ", ".join(_render_path(p) for p in ast.paths)
    if ast.where is not None:
        out += " WHERE " + _render_condition(ast.where)
    if isinstance(ast.temporal, Snapshot):
        out += f" SNAPSHOT {ast.temporal.at}"
    elif isinstance(ast.temporal, InRange):
        w = ast.temporal.window
        out += f" IN [{w.start}-{w.end}]"
    return out


# ---------------------------------------------------------------------------
# name bindings


@dataclass(frozen=True)
class StepRef:
    path: int
    step: int
    label: str
    explicit: bool


@dataclass
class BindingTable:
    """Names declared by FROM steps.  Ambiguity is recorded, not rejected;
    the query engine decides what a reference may mean."""

    entries: dict[str, tuple[StepRef, ...]] = field(default_factory=dict)

    def lookup(self, name: str) -> tuple[StepRef, ...]:
        return self.entries.get(name, ())

    def names(self) -> Iterator[str]:
        return iter(self.entries)


def resolve_bindings(ast: QueryAst) -> BindingTable:
    """Collect alias and label bindings from the FROM clause.

    An explicit alias declared twice means one shared variable (a join)
    when both steps carry the same label, and DuplicateAlias otherwise.
    Unaliased steps bind implicitly under their label; implicit bindings
    never unify.
    """
    table: dict[str, list[StepRef]] = {}
    for p, path in enumerate(ast.paths):
        for s, step in enumerate(path.steps):
            ref = StepRef(p, s, step.label, step.alias is not None)
            table.setdefault(step.ref_name, []).append(ref)
    for name, refs in table.items():
        explicit = [r for r in refs if r.explicit]
        labels = {r.label for r in explicit}
        if len(labels) > 1:
            raise DuplicateAlias(
                f"alias {name!r} declared for different labels: {', '.join(sorted(labels))}"
            )
    return BindingTable({name: tuple(refs) for name, refs in table.items()})
