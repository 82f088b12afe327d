"""Graph documents on disk and the synthetic workload generator.

The on-disk form is a single JSON object (extension ``.tgraph.json``)
with schema_version "1".  Saving is canonical: nodes sorted by id, edges
by (from, to), two-space indent, sorted keys, trailing newline.  Loading
normalizes every temporal element and validates the graph; permissive
mode keeps constraint violations as warnings instead of failing, which
is how a graph is read for repair (coalescing) or inspection.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Union

from .model import (
    ConstraintViolation,
    Node,
    NodeKind,
    StructuralError,
    StructuralEdge,
    TemporalGraph,
    validate,
)
from .temporal import (
    NOW,
    Interval,
    MalformedInterval,
    TemporalElement,
    format_element,
    intersect_elements,
    normalize,
    parse_element,
)

SCHEMA_VERSION = "1"
FILE_EXTENSION = ".tgraph.json"


class ParseError(ValueError):
    """Document cannot be turned into a graph at all."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.message} (line {self.line}, column {self.column})"
        return self.message


class ValidationFailed(ValueError):
    """Document parsed but the graph breaks integrity constraints."""

    def __init__(self, violations: list[ConstraintViolation]):
        super().__init__(f"{len(violations)} constraint violations")
        self.violations = violations


class InfeasibleCounts(ValueError):
    """Requested workload shape cannot exist."""


# ---------------------------------------------------------------------------
# document form


def document_dict(g: TemporalGraph) -> dict:
    """Canonical plain-dict form of a graph (what save() serializes)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "name": g.name,
        "granularity": g.granularity,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind.value,
                "name": n.name,
                "intervals": format_element(n.element),
            }
            for n in sorted(g.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"from": e.src, "to": e.dst}
            for e in sorted(g.edges, key=lambda e: (e.src, e.dst))
        ],
    }


def save(g: TemporalGraph) -> bytes:
    return (json.dumps(document_dict(g), indent=2, sort_keys=True) + "\n").encode("utf-8")


def save_file(g: TemporalGraph, path: Union[str, Path]) -> None:
    Path(path).write_bytes(save(g))


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParseError(message)


def graph_from_document(doc: object, permissive: bool = False) -> TemporalGraph:
    _require(isinstance(doc, dict), "document must be a JSON object")
    assert isinstance(doc, dict)
    version = doc.get("schema_version")
    _require(version == SCHEMA_VERSION, f"unsupported schema_version {version!r}")
    name = doc.get("name")
    _require(isinstance(name, str) and name != "", "name must be a non-empty string")
    granularity = doc.get("granularity", "year")
    _require(isinstance(granularity, str) and granularity != "", "granularity must be a non-empty string")
    raw_nodes = doc.get("nodes")
    raw_edges = doc.get("edges", [])
    _require(isinstance(raw_nodes, list), "nodes must be a list")
    _require(isinstance(raw_edges, list), "edges must be a list")

    nodes: list[Node] = []
    for idx, rn in enumerate(raw_nodes):
        where = f"nodes[{idx}]"
        _require(isinstance(rn, dict), f"{where} must be an object")
        node_id = rn.get("id")
        _require(isinstance(node_id, int) and not isinstance(node_id, bool) and node_id >= 0,
                 f"{where}.id must be a non-negative integer")
        kind_text = rn.get("kind")
        try:
            kind = NodeKind(kind_text)
        except ValueError:
            raise ParseError(f"{where}.kind must be one of object, edge, attribute, value; got {kind_text!r}") from None
        label = rn.get("name")
        _require(isinstance(label, str) and label != "", f"{where}.name must be a non-empty string")
        intervals = rn.get("intervals")
        _require(isinstance(intervals, str), f"{where}.intervals must be a string")
        try:
            element = parse_element(intervals)
        except MalformedInterval as exc:
            raise ParseError(f"{where}.intervals: {exc}") from None
        nodes.append(Node(node_id, kind, label, element))

    edges: list[StructuralEdge] = []
    for idx, re_ in enumerate(raw_edges):
        where = f"edges[{idx}]"
        _require(isinstance(re_, dict), f"{where} must be an object")
        src, dst = re_.get("from"), re_.get("to")
        for field, v in (("from", src), ("to", dst)):
            _require(isinstance(v, int) and not isinstance(v, bool), f"{where}.{field} must be an integer")
        if src == dst:
            raise ParseError(f"{where} is a self-loop on node {src}")
        edges.append(StructuralEdge(src, dst))

    g = TemporalGraph(name, nodes, edges, granularity)
    try:
        violations = validate(g)
    except StructuralError as exc:
        raise ParseError(str(exc)) from None
    if violations:
        if not permissive:
            raise ValidationFailed(violations)
        g.warnings = tuple(violations)
    return g


def load(source: Union[str, bytes, Path], permissive: bool = False) -> TemporalGraph:
    """Read a graph from a path, or from raw JSON text/bytes."""
    if isinstance(source, Path):
        data = source.read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.encode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return graph_from_document(doc, permissive=permissive)


def load_file(path: Union[str, Path], permissive: bool = False) -> TemporalGraph:
    return load(Path(path), permissive=permissive)


# ---------------------------------------------------------------------------
# workload generation

_FIRST = [
    "John", "Mary", "Alice", "Robert", "Carol", "David", "Elena", "Frank",
    "Grace", "Henry", "Irene", "Jorge", "Karen", "Luis", "Marta", "Nora",
    "Oscar", "Paula", "Ruth", "Victor",
]
_LAST = [
    "Smith", "Brown", "Garcia", "Jones", "Lopez", "Miller", "Davis",
    "Martinez", "Wilson", "Anderson", "Taylor", "Thomas", "Moore", "Jackson",
    "Martin", "Lee", "Perez", "White", "Harris", "Clark",
]
_STREETS = [
    "Street Av.", "Ocean Dr.", "Maple St.", "Hill Rd.", "Lake Av.",
    "Park Blvd.", "River St.", "Sunset Av.", "Cedar Ln.", "Castle St.",
]
_BUILDING_TYPES = ["apartment", "house", "loft", "duplex"]


class _Builder:
    def __init__(self, name: str):
        self.name = name
        self.nodes: list[Node] = []
        self.edges: list[StructuralEdge] = []

    def add(self, kind: NodeKind, name: str, element: TemporalElement) -> int:
        node_id = len(self.nodes)
        self.nodes.append(Node(node_id, kind, name, element))
        return node_id

    def link(self, src: int, dst: int) -> None:
        self.edges.append(StructuralEdge(src, dst))

    def graph(self) -> TemporalGraph:
        return TemporalGraph(self.name, self.nodes, self.edges)


def _geometric(rng: random.Random, cont: float) -> int:
    n = 0
    while rng.random() < cont:
        n += 1
    return n


def _lifetime(rng: random.Random, horizon: Interval, cont: float) -> TemporalElement:
    """Uniform start, geometric length; running past the horizon becomes Now."""
    start = rng.randint(horizon.start, horizon.end)  # type: ignore[arg-type]
    end = start + _geometric(rng, cont)
    if end >= horizon.end:  # type: ignore[operator]
        return TemporalElement((Interval(start, NOW),))
    return TemporalElement((Interval(start, end),))


def _span_inside(rng: random.Random, window: TemporalElement, horizon: Interval, cont: float) -> TemporalElement:
    """A single interval drawn inside one interval of a nonempty window."""
    iv = rng.choice(window.intervals)
    hi = horizon.end if iv.end is NOW else iv.end
    start = rng.randint(iv.start, hi)  # type: ignore[arg-type]
    end = start + _geometric(rng, cont)
    if end >= hi:  # type: ignore[operator]
        return TemporalElement((Interval(start, iv.end),))
    return TemporalElement((Interval(start, end),))


def generate_workload(
    seed: int,
    persons: int = 1000,
    buildings: int = 100,
    friendships: int = 2500,
    lived_in: int = 500,
    horizon: Interval = Interval(1980, 2016),
    name: str = "workload",
) -> TemporalGraph:
    """Deterministic synthetic town: people, buildings, Friend and LivedIn ties.

    Same arguments, same graph, byte for byte.  Raises InfeasibleCounts
    when the requested shape cannot exist (more friendships than pairs,
    more residences than person-building pairs, or when overlap sampling
    cannot place the requested relationships).
    """
    if horizon.end is NOW:
        raise InfeasibleCounts("the sampling horizon needs a fixed end")
    for label, count in (("persons", persons), ("buildings", buildings),
                         ("friendships", friendships), ("lived_in", lived_in)):
        if count < 0:
            raise InfeasibleCounts(f"{label} must be non-negative")
    if friendships > persons * (persons - 1) // 2:
        raise InfeasibleCounts(f"{friendships} friendships need more than {persons} persons")
    if lived_in > persons * buildings:
        raise InfeasibleCounts(f"{lived_in} residences exceed persons x buildings")

    rng = random.Random(seed)
    b = _Builder(name)

    person_ids: list[int] = []
    for i in range(persons):
        life = _lifetime(rng, horizon, cont=0.96)
        pid = b.add(NodeKind.OBJECT, "Person", life)
        person_ids.append(pid)
        attr = b.add(NodeKind.ATTRIBUTE, "Name", life)
        b.link(pid, attr)
        full_name = "John Smith" if i == 0 else f"{rng.choice(_FIRST)} {rng.choice(_LAST)}"
        lone = life.intervals[0]
        span = (horizon.end if lone.end is NOW else lone.end) - lone.start  # type: ignore[operator]
        if i > 0 and span >= 2 and rng.random() < 0.1:
            # a rename partway through life: two values, disjoint periods
            cut = rng.randint(lone.start, lone.start + span - 2)
            second = f"{full_name.split()[0]} {rng.choice(_LAST)}"
            while second == full_name:
                second = f"{full_name.split()[0]} {rng.choice(_LAST)}"
            v1 = b.add(NodeKind.VALUE, full_name, TemporalElement((Interval(lone.start, cut),)))
            v2 = b.add(NodeKind.VALUE, second, TemporalElement((Interval(cut + 1, lone.end),)))
            b.link(attr, v1)
            b.link(attr, v2)
        else:
            v = b.add(NodeKind.VALUE, full_name, life)
            b.link(attr, v)

    building_ids: list[int] = []
    for _ in range(buildings):
        life = _lifetime(rng, horizon, cont=0.975)
        bid = b.add(NodeKind.OBJECT, "Building", life)
        building_ids.append(bid)
        street = f"{rng.randint(1, 99)} {rng.choice(_STREETS)}"
        for attr_name, value in (
            ("Street", street),
            ("Type", rng.choice(_BUILDING_TYPES)),
            ("Bedrooms", str(rng.randint(1, 5))),
        ):
            attr = b.add(NodeKind.ATTRIBUTE, attr_name, life)
            v = b.add(NodeKind.VALUE, value, life)
            b.link(bid, attr)
            b.link(attr, v)

    def relate(label: str, count: int, left: list[int], right: list[int], same_pool: bool) -> None:
        placed: set[tuple[int, int]] = set()
        attempts = 0
        limit = 200 + 100 * count
        while len(placed) < count:
            attempts += 1
            if attempts > limit:
                raise InfeasibleCounts(
                    f"could not place {count} {label} relationships; lifespans overlap too rarely"
                )
            x = rng.choice(left)
            y = rng.choice(right)
            if x == y:
                continue
            key = (min(x, y), max(x, y)) if same_pool else (x, y)
            if key in placed:
                continue
            window = intersect_elements(b.nodes[x].element, b.nodes[y].element)
            if window.is_empty():
                continue
            placed.add(key)
            el = _span_inside(rng, window, horizon, cont=0.8)
            edge_node = b.add(NodeKind.EDGE, label, el)
            b.link(x, edge_node)
            b.link(edge_node, y)

    relate("Friend", friendships, person_ids, person_ids, same_pool=True)
    relate("LivedIn", lived_in, person_ids, building_ids, same_pool=False)

    return b.graph()
