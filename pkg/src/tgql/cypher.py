"""Translation to Cypher over the four-label property-graph encoding.

Every node of the attribute graph becomes a Cypher node labeled OBJECT,
EDGE, ATTRIBUTE or VALUE whose ``title`` property holds the name (and,
for VALUE nodes, whose ``value`` property holds the typed value).  A
query path becomes one MATCH per FROM path; attribute access expands to
one extra MATCH per distinct (owner variable, attribute) pair with fresh
xN/yN variables.  Temporal modifiers have no Cypher counterpart in this
encoding and are returned as a structured residual for the caller to
apply.  Variable-length steps are not translatable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import _resolve_name
from .parser import (
    And,
    Comparison,
    Condition,
    InRange,
    Or,
    QueryAst,
    Snapshot,
    StepRef,
    parse,
    resolve_bindings,
)
from .temporal import NOW


class UnsupportedQuery(ValueError):
    """The query has no faithful Cypher form (variable-length steps)."""


@dataclass(frozen=True)
class TranspileOutput:
    cypher: str
    residual: dict | None
    variable_map: dict[str, str]


def _quote(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _literal(value: int | str) -> str:
    return str(value) if isinstance(value, int) else _quote(value)


class _Vars:
    def __init__(self) -> None:
        self.used: set[str] = set()
        self.pair_counter = 0

    def fresh(self, base: str) -> str:
        if base not in self.used:
            self.used.add(base)
            return base
        k = 2
        while f"{base}{k}" in self.used:
            k += 1
        self.used.add(f"{base}{k}")
        return f"{base}{k}"

    def fresh_pair(self) -> tuple[str, str]:
        while True:
            self.pair_counter += 1
            x, y = f"x{self.pair_counter}", f"y{self.pair_counter}"
            if x not in self.used and y not in self.used:
                self.used.update((x, y))
                return x, y


def transpile(query: QueryAst | str, catalog: dict[str, list[str]] | None = None) -> TranspileOutput:
    """Cypher text plus temporal residual and name-to-variable map."""
    ast = parse(query) if isinstance(query, str) else query
    for path in ast.paths + (ast.select or ()):
        for estep in path.edges:
            if estep.bounds is not None:
                raise UnsupportedQuery(
                    f"variable-length step -{estep.label}[{estep.bounds[0]}..{estep.bounds[1]}]-> "
                    "has no Cypher form in this encoding"
                )
    table = resolve_bindings(ast)
    vars_ = _Vars()

    step_var: dict[tuple[int, int], str] = {}
    alias_var: dict[str, str] = {}
    edge_var: dict[tuple[int, int], str] = {}
    return_order: list[str] = []

    for p, path in enumerate(ast.paths):
        for s, step in enumerate(path.steps):
            if step.alias is not None:
                var = alias_var.get(step.alias)
                if var is None:
                    var = vars_.fresh(step.alias)
                    alias_var[step.alias] = var
            else:
                var = vars_.fresh(step.label)
            step_var[(p, s)] = var
            if var not in return_order:
                return_order.append(var)
            if s < len(path.edges):
                evar = vars_.fresh(path.edges[s].label)
                edge_var[(p, s)] = evar
                return_order.append(evar)

    def var_for(refs: tuple[StepRef, ...]) -> str:
        return step_var[(refs[0].path, refs[0].step)]

    lines: list[str] = []
    for p, path in enumerate(ast.paths):
        segments: list[str] = []
        arrows: list[str] = []
        for s, step in enumerate(path.steps):
            segments.append(f"({step_var[(p, s)]}:OBJECT {{title: {_quote(step.label)}}})")
            if s < len(path.edges):
                estep = path.edges[s]
                arrow = "-->" if estep.forward else "<--"
                segments.append(f"({edge_var[(p, s)]}:EDGE {{title: {_quote(estep.label)}}})")
                arrows.extend((arrow, arrow))
        lines.append("MATCH " + segments[0] + (arrows[0] if arrows else ""))
        for i, seg in enumerate(segments[1:], start=1):
            tail = arrows[i] if i < len(arrows) else ""
            lines.append("  " + seg + tail)

    attr_pair: dict[tuple[str, str | None], tuple[str, str]] = {}

    def expand_attribute(owner_var: str, owner_label: str, attr: str | None) -> tuple[str, str]:
        key = (owner_var, attr)
        if key in attr_pair:
            return attr_pair[key]
        x, y = vars_.fresh_pair()
        attr_pair[key] = (x, y)
        if attr is not None:
            matcher = f"({x}:ATTRIBUTE {{title: {_quote(attr)}}})"
        else:
            matcher = f"({x}:ATTRIBUTE)"
        lines.append(f"MATCH ({owner_var}:OBJECT {{title: {_quote(owner_label)}}})-->")
        lines.append(f"  {matcher}-->")
        lines.append(f"  ({y}:VALUE)")
        return_order.extend((x, y))
        return x, y

    if ast.select is not None:
        for spath in ast.select:
            for sstep in spath.steps:
                if sstep.projection is None:
                    continue
                refs = _resolve_name(table, sstep.ref_name)
                owner = var_for(refs)
                label = refs[0].label
                names = sstep.projection.names
                if names is None:
                    known = (catalog or {}).get(label)
                    if known:
                        for a in known:
                            expand_attribute(owner, label, a)
                    else:
                        expand_attribute(owner, label, None)
                else:
                    for a in names:
                        expand_attribute(owner, label, a)

    def condition_text(cond: Condition, parent: str = "") -> str:
        if isinstance(cond, Comparison):
            refs = _resolve_name(table, cond.subject)
            _, y = expand_attribute(var_for(refs), refs[0].label, cond.attribute)
            return f"{y}.value {cond.op} {_literal(cond.literal)}"
        if isinstance(cond, And):
            return " AND ".join(condition_text(t, "and") for t in cond.terms)
        assert isinstance(cond, Or)
        body = " OR ".join(condition_text(t, "or") for t in cond.terms)
        return f"({body})" if parent == "and" else body

    where_line = None
    if ast.where is not None:
        where_line = "WHERE " + condition_text(ast.where)
    if where_line is not None:
        lines.append(where_line)
    lines.append("RETURN " + ", ".join(return_order))

    residual: dict | None = None
    if isinstance(ast.temporal, Snapshot):
        at = ast.temporal.at
        residual = {"snapshot": "Now" if at is NOW else at}
    elif isinstance(ast.temporal, InRange):
        w = ast.temporal.window
        residual = {"in": [w.start, w.end]}

    variable_map: dict[str, str] = {}
    for name in table.names():
        refs = table.lookup(name)
        if len(refs) == 1 or all(r.explicit for r in refs):
            variable_map[name] = var_for(refs)
    return TranspileOutput("\n".join(lines), residual, variable_map)
