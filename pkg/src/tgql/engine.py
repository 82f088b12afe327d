"""Query evaluation: pattern matching, filters, result construction.

Matching is homomorphic (two steps may bind one node) and follows the
stored edge direction strictly: ``A-E->B`` requires stored edges A to E
and E to B; ``A<-E-B`` requires B to E and E to A.  Rows that survive
the temporal modifier (every matched node must pass) and the WHERE
condition (existential over a node's value history) are projected into
an induced subgraph of the source graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import NodeKind, TemporalGraph
from .parser import (
    And,
    BindingTable,
    Comparison,
    Condition,
    EdgeStep,
    InRange,
    Or,
    PathPattern,
    QueryAst,
    Snapshot,
    StepRef,
    parse,
    resolve_bindings,
)
from .temporal import NOW, contains_instant, intersects


class SemanticError(ValueError):
    """The query references names the graph or FROM clause cannot supply."""


class AmbiguousReference(SemanticError):
    """A name matches several distinct pattern steps."""


@dataclass(frozen=True)
class BindingRow:
    """One match of a single path: object ids per node step, plus the
    physical ids (edge nodes and intermediate objects) per edge step."""

    steps: tuple[int, ...]
    traversals: tuple[tuple[int, ...], ...]

    def sequence(self) -> tuple[int, ...]:
        out = [self.steps[0]]
        for trav, nxt in zip(self.traversals, self.steps[1:]):
            out.extend(trav)
            out.append(nxt)
        return tuple(out)


# ---------------------------------------------------------------------------
# path matching


def _single_hops(g: TemporalGraph, cur: int, estep: EdgeStep, to_label: str) -> Iterator[tuple[int, int]]:
    """(edge node, next object) pairs one stored hop away from cur."""
    if estep.forward:
        edge_nodes = g.out_neighbors(cur, NodeKind.EDGE)
    else:
        edge_nodes = g.in_neighbors(cur, NodeKind.EDGE)
    for e in edge_nodes:
        if g.node(e).name != estep.label:
            continue
        nxts = g.out_neighbors(e, NodeKind.OBJECT) if estep.forward else g.in_neighbors(e, NodeKind.OBJECT)
        for nxt in nxts:
            if g.node(nxt).name == to_label:
                yield e, nxt


def _expansions(
    g: TemporalGraph, start: int, estep: EdgeStep, to_label: str
) -> list[tuple[tuple[int, ...], int]]:
    """All traversals from start across the edge step.

    Unbounded steps are one hop.  With bounds [n..m] every walk of n to m
    hops counts, all hops in the step's direction, every visited object
    (including intermediates) labeled to_label and pairwise distinct.
    """
    if estep.bounds is None:
        return [((e,), nxt) for e, nxt in _single_hops(g, start, estep, to_label)]
    lo, hi = estep.bounds
    found: list[tuple[tuple[int, ...], int]] = []

    def walk(node: int, trav: tuple[int, ...], depth: int, seen: frozenset[int]) -> None:
        if depth >= lo:
            found.append((trav, node))
        if depth == hi:
            return
        for e, nxt in _single_hops(g, node, estep, to_label):
            if nxt in seen:
                continue
            prefix = trav + (node,) if depth > 0 else trav
            walk(nxt, prefix + (e,), depth + 1, seen | {nxt})

    walk(start, (), 0, frozenset((start,)))
    return found


def match_path(g: TemporalGraph, path: PathPattern) -> list[BindingRow]:
    """Every binding of the path, ordered by the flattened id sequence."""
    rows: list[BindingRow] = []
    starts = sorted(n.id for n in g.nodes_of_kind(NodeKind.OBJECT) if n.name == path.steps[0].label)

    def bind(idx: int, steps: list[int], travs: list[tuple[int, ...]], env: dict[str, int]) -> None:
        if idx == len(path.steps):
            rows.append(BindingRow(tuple(steps), tuple(travs)))
            return
        step = path.steps[idx]
        if idx == 0:
            candidates: Sequence[tuple[tuple[int, ...] | None, int]] = [(None, s) for s in starts]
        else:
            candidates = _expansions(g, steps[-1], path.edges[idx - 1], step.label)
        for trav, nid in candidates:
            if step.alias is not None:
                bound = env.get(step.alias)
                if bound is not None and bound != nid:
                    continue
                env2 = dict(env)
                env2[step.alias] = nid
            else:
                env2 = env
            bind(
                idx + 1,
                steps + [nid],
                travs + ([trav] if trav is not None else []),
                env2,
            )

    bind(0, [], [], {})
    rows.sort(key=BindingRow.sequence)
    return rows


# ---------------------------------------------------------------------------
# semantic resolution


def _resolve_name(table: BindingTable, name: str) -> tuple[StepRef, ...]:
    refs = table.lookup(name)
    if not refs:
        raise SemanticError(f"unknown alias or label {name!r}")
    if len(refs) > 1 and not all(r.explicit for r in refs):
        raise AmbiguousReference(f"{name!r} matches {len(refs)} pattern steps; give them aliases")
    return refs


def _comparisons(cond: Condition | None) -> Iterator[Comparison]:
    if cond is None:
        return
    if isinstance(cond, Comparison):
        yield cond
        return
    for term in cond.terms:
        yield from _comparisons(term)


def _check_attribute(catalog: dict[str, list[str]], label: str, attribute: str) -> None:
    known = catalog.get(label)
    if known is not None and attribute not in known:
        raise SemanticError(f"label {label!r} has no attribute {attribute!r}")


@dataclass(frozen=True)
class _SelectStep:
    ref: StepRef
    projection: tuple[str, ...] | None  # None: no projection; (): star
    edge_from: tuple[int, int] | None  # (path, edge index) walked to reach this step


def _plan_select(
    ast: QueryAst, table: BindingTable, catalog: dict[str, list[str]]
) -> list[list[_SelectStep]] | None:
    if ast.select is None:
        return None
    plan: list[list[_SelectStep]] = []
    for spath in ast.select:
        steps: list[_SelectStep] = []
        prev_refs: tuple[StepRef, ...] | None = None
        for k, sstep in enumerate(spath.steps):
            refs = _resolve_name(table, sstep.ref_name)
            if sstep.alias is not None and sstep.label != refs[0].label:
                raise SemanticError(
                    f"alias {sstep.alias!r} is bound to label {refs[0].label!r}, not {sstep.label!r}"
                )
            projection: tuple[str, ...] | None = None
            if sstep.projection is not None:
                if sstep.projection.names is None:
                    projection = ()
                else:
                    for a in sstep.projection.names:
                        _check_attribute(catalog, refs[0].label, a)
                    projection = sstep.projection.names
            edge_from: tuple[int, int] | None = None
            if k > 0:
                want = spath.edges[k - 1]
                assert prev_refs is not None
                for prev in sorted(prev_refs, key=lambda r: (r.path, r.step)):
                    for cur in refs:
                        if cur.path == prev.path and cur.step == prev.step + 1:
                            if ast.paths[prev.path].edges[prev.step] == want:
                                edge_from = (prev.path, prev.step)
                                break
                    if edge_from is not None:
                        break
                if edge_from is None:
                    raise SemanticError(
                        f"{spath.steps[k - 1].ref_name}"
                        f"{'-' if want.forward else '<-'}{want.label}"
                        f"{'->' if want.forward else '-'}{sstep.ref_name}"
                        " does not re-walk a FROM step"
                    )
            steps.append(_SelectStep(refs[0], projection, edge_from))
            prev_refs = refs
        plan.append(steps)
    return plan


# ---------------------------------------------------------------------------
# evaluation


def _compare(value: int | str, op: str, literal: int | str) -> bool:
    if isinstance(value, bool) or isinstance(literal, bool):
        return False
    if isinstance(value, int) != isinstance(literal, int):
        return False
    if op == "=":
        return value == literal
    if op == "<>":
        return value != literal
    if op == "<":
        return value < literal
    if op == "<=":
        return value <= literal
    if op == ">":
        return value > literal
    return value >= literal


def execute(
    g: TemporalGraph, query: QueryAst | str, now_value: int | None = None
) -> tuple[TemporalGraph, int]:
    """Evaluate a query; return the result graph and surviving row count."""
    ast = parse(query) if isinstance(query, str) else query
    now = g.default_now() if now_value is None else now_value
    table = resolve_bindings(ast)
    catalog = g.attribute_catalog()

    for cmp in _comparisons(ast.where):
        refs = _resolve_name(table, cmp.subject)
        _check_attribute(catalog, refs[0].label, cmp.attribute)
    select_plan = _plan_select(ast, table, catalog)

    def node_passes(nid: int) -> bool:
        el = g.node(nid).element
        if isinstance(ast.temporal, Snapshot):
            at = ast.temporal.at
            t = now if at is NOW else at
            return contains_instant(el, t, now)
        if isinstance(ast.temporal, InRange):
            return intersects(el, ast.temporal.window, now)
        return True

    history_cache: dict[tuple[int, str], list[tuple[int | str, int]]] = {}

    def value_history(nid: int, attribute: str) -> list[tuple[int | str, int]]:
        key = (nid, attribute)
        cached = history_cache.get(key)
        if cached is not None:
            return cached
        pairs: list[tuple[int | str, int]] = []
        for a in g.neighbors(nid, NodeKind.ATTRIBUTE):
            if g.node(a).name != attribute:
                continue
            for v in g.neighbors(a, NodeKind.VALUE):
                if node_passes(v):
                    pairs.append((g.node(v).typed_value, v))
        history_cache[key] = pairs
        return pairs

    # names whose bindings must agree across steps (shared explicit aliases)
    unified = [
        refs for refs in (table.lookup(n) for n in table.names())
        if len(refs) > 1 and all(r.explicit for r in refs)
    ]

    def comparison_holds(cond: Comparison, nid: int) -> bool:
        return any(_compare(v, cond.op, cond.literal) for v, _ in value_history(nid, cond.attribute))

    def holds(cond: Condition, combo: tuple[BindingRow, ...]) -> bool:
        if isinstance(cond, Comparison):
            ref = _resolve_name(table, cond.subject)[0]
            return comparison_holds(cond, combo[ref.path].steps[ref.step])
        if isinstance(cond, And):
            return all(holds(t, combo) for t in cond.terms)
        assert isinstance(cond, Or)
        return any(holds(t, combo) for t in cond.terms)

    per_path = [match_path(g, p) for p in ast.paths]

    # the temporal test is per node, so a failing row can be dropped
    # before the cross-path product
    if ast.temporal is not None:
        per_path = [
            [row for row in rows if all(node_passes(nid) for nid in row.sequence())]
            for rows in per_path
        ]

    def home_path(cond: Condition) -> int | None:
        """The single FROM path this condition reads, if there is one."""
        paths = set()
        for cmp in _comparisons(cond):
            for ref in _resolve_name(table, cmp.subject):
                paths.add(ref.path)
        return paths.pop() if len(paths) == 1 else None

    conjuncts: list[Condition] = []
    if isinstance(ast.where, And):
        conjuncts = list(ast.where.terms)
    elif ast.where is not None:
        conjuncts = [ast.where]
    global_conjuncts: list[Condition] = []
    for cond in conjuncts:
        p = home_path(cond)
        if p is None:
            global_conjuncts.append(cond)
            continue
        # path-local: filter that path's rows up front
        def local_holds(row: BindingRow, cond: Condition = cond, p: int = p) -> bool:
            if isinstance(cond, Comparison):
                refs = _resolve_name(table, cond.subject)
                ref = next(r for r in refs if r.path == p)
                return comparison_holds(cond, row.steps[ref.step])
            if isinstance(cond, And):
                return all(local_holds(row, t, p) for t in cond.terms)
            assert isinstance(cond, Or)
            return any(local_holds(row, t, p) for t in cond.terms)

        per_path[p] = [row for row in per_path[p] if local_holds(row)]

    surviving: list[tuple[BindingRow, ...]] = []
    for combo in itertools.product(*per_path):
        ok = True
        for refs in unified:
            ids = {combo[r.path].steps[r.step] for r in refs}
            if len(ids) > 1:
                ok = False
                break
        if not ok:
            continue
        if not all(holds(cond, combo) for cond in global_conjuncts):
            continue
        surviving.append(combo)

    include: set[int] = set()

    def include_attributes(nid: int, names: tuple[str, ...]) -> None:
        for a in g.neighbors(nid, NodeKind.ATTRIBUTE):
            anode = g.node(a)
            if names and anode.name not in names:
                continue
            if not node_passes(a):
                continue
            values = [v for v in g.neighbors(a, NodeKind.VALUE) if node_passes(v)]
            include.add(a)
            include.update(values)

    for combo in surviving:
        if select_plan is None:
            for row in combo:
                include.update(row.sequence())
            for row in combo:
                for nid in row.sequence():
                    if g.node(nid).kind in (NodeKind.OBJECT, NodeKind.EDGE):
                        include_attributes(nid, ())
        else:
            for steps in select_plan:
                for sel in steps:
                    nid = combo[sel.ref.path].steps[sel.ref.step]
                    include.add(nid)
                    if sel.projection is not None:
                        include_attributes(nid, sel.projection)
                    if sel.edge_from is not None:
                        p, j = sel.edge_from
                        include.update(combo[p].traversals[j])

    result = _induced(g, include)
    return result, len(surviving)


def evaluate(g: TemporalGraph, query: QueryAst | str, now_value: int | None = None) -> TemporalGraph:
    """Result graph only; see execute() for the row count."""
    return execute(g, query, now_value)[0]


def snapshot(g: TemporalGraph, t: int, now_value: int | None = None) -> TemporalGraph:
    """Induced subgraph of everything that exists at instant t."""
    now = g.default_now() if now_value is None else now_value
    keep = {n.id for n in g.nodes if contains_instant(n.element, t, now)}
    return _induced(g, keep)


def equivalent_multi_path_check(
    g: TemporalGraph,
    q1: QueryAst | str,
    q2: QueryAst | str,
    now_value: int | None = None,
) -> bool:
    """Do two phrasings produce the same result graph on g?"""
    r1 = evaluate(g, q1, now_value)
    r2 = evaluate(g, q2, now_value)
    return (
        {n.id for n in r1.nodes} == {n.id for n in r2.nodes}
        and {(e.src, e.dst) for e in r1.edges} == {(e.src, e.dst) for e in r2.edges}
    )


def _induced(g: TemporalGraph, ids: set[int]) -> TemporalGraph:
    nodes = sorted((n for n in g.nodes if n.id in ids), key=lambda n: n.id)
    edges = sorted(
        (e for e in g.edges if e.src in ids and e.dst in ids), key=lambda e: (e.src, e.dst)
    )
    return TemporalGraph(g.name, nodes, edges, g.granularity)
