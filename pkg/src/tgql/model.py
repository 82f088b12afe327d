"""Attribute-graph model: four node kinds wired by structural edges.

Objects and relationship (edge) nodes carry attribute nodes; attribute
nodes carry value nodes.  Every node has a temporal element bounding when
it exists.  Structural edges store the drawing direction (object to edge
node to object, owner to attribute to value) but connectivity checks are
undirected; query evaluation is what cares about the stored direction.
"""

from __future__ import annotations

import enum
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .temporal import (
    TemporalElement,
    contains_instant,
    intersect_elements,
    normalize,
    subset_of,
    union_elements,
)


class UnknownNode(KeyError):
    """Raised when a node id does not exist in the graph."""


class UnknownAttribute(KeyError):
    """Raised when an owner has no attribute node with the given name."""


class StructuralError(ValueError):
    """A defect that prevents constraint checking altogether."""


class DanglingEdge(StructuralError):
    """Structural edge endpoint references a missing node id."""


class EmptyObjectElement(StructuralError):
    """An object node with an empty temporal element never exists."""


class NodeKind(enum.Enum):
    OBJECT = "object"
    EDGE = "edge"
    ATTRIBUTE = "attribute"
    VALUE = "value"


_INT_RE = re.compile(r"-?\d+")


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    name: str
    element: TemporalElement

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"node id must be non-negative, got {self.id}")
        if not self.name:
            raise ValueError(f"node {self.id} has an empty name")

    @property
    def typed_value(self) -> int | str:
        """Value nodes holding an integer literal compare numerically."""
        if _INT_RE.fullmatch(self.name):
            return int(self.name)
        return self.name


@dataclass(frozen=True)
class StructuralEdge:
    src: int
    dst: int

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError(f"self-loop on node {self.src}")

    @property
    def pair(self) -> frozenset[int]:
        return frozenset((self.src, self.dst))


@dataclass(frozen=True)
class ConstraintViolation:
    constraint: int
    offending: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        ids = " ".join(str(i) for i in self.offending)
        return f"C{self.constraint:02d} {ids} {self.message}"


class TemporalGraph:
    """Immutable-by-convention container for nodes and structural edges.

    Duplicate ids and dangling edges are representable so that validate()
    can report them; every other operation assumes a valid graph.
    """

    def __init__(
        self,
        name: str,
        nodes: Iterable[Node] = (),
        edges: Iterable[StructuralEdge] = (),
        granularity: str = "year",
    ) -> None:
        self.name = name
        self.granularity = granularity
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.edges: tuple[StructuralEdge, ...] = tuple(edges)
        self.warnings: tuple[ConstraintViolation, ...] = ()
        self._by_id: dict[int, Node] = {n.id: n for n in self.nodes}
        self._out: dict[int, list[int]] = defaultdict(list)
        self._in: dict[int, list[int]] = defaultdict(list)
        for e in self.edges:
            if e.src in self._by_id and e.dst in self._by_id:
                self._out[e.src].append(e.dst)
                self._in[e.dst].append(e.src)
        for adj in (self._out, self._in):
            for ids in adj.values():
                ids.sort()

    # -- basic access -------------------------------------------------------

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._by_id

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def nodes_of_kind(self, kind: NodeKind) -> Iterator[Node]:
        return (n for n in self.nodes if n.kind is kind)

    def neighbors(self, node_id: int, kind: NodeKind | None = None) -> list[int]:
        """Adjacent node ids regardless of direction, ascending, deduplicated."""
        if node_id not in self._by_id:
            raise UnknownNode(node_id)
        seen = sorted(set(self._out[node_id]) | set(self._in[node_id]))
        if kind is None:
            return seen
        return [i for i in seen if self._by_id[i].kind is kind]

    def out_neighbors(self, node_id: int, kind: NodeKind | None = None) -> list[int]:
        ids = self._out.get(node_id, [])
        if kind is None:
            return list(ids)
        return [i for i in ids if self._by_id[i].kind is kind]

    def in_neighbors(self, node_id: int, kind: NodeKind | None = None) -> list[int]:
        ids = self._in.get(node_id, [])
        if kind is None:
            return list(ids)
        return [i for i in ids if self._by_id[i].kind is kind]

    # -- derived facts ------------------------------------------------------

    def default_now(self) -> int:
        """One past the latest fixed instant anywhere in the graph, else 0."""
        latest: int | None = None
        for n in self.nodes:
            for t in n.element.fixed_instants():
                latest = t if latest is None else max(latest, t)
        return 0 if latest is None else latest + 1

    def instant_range(self) -> tuple[int, int, bool] | None:
        """(min fixed instant, max fixed instant, any element open at Now)."""
        lo: int | None = None
        hi: int | None = None
        open_end = False
        for n in self.nodes:
            open_end = open_end or n.element.has_now()
            for t in n.element.fixed_instants():
                lo = t if lo is None else min(lo, t)
                hi = t if hi is None else max(hi, t)
        if lo is None:
            return None
        return lo, hi, open_end  # type: ignore[return-value]

    def attribute_nodes(self, owner_id: int, name: str | None = None) -> list[Node]:
        attrs = [self.node(i) for i in self.neighbors(owner_id, NodeKind.ATTRIBUTE)]
        if name is not None:
            attrs = [a for a in attrs if a.name == name]
        return attrs

    def value_nodes(self, attribute_id: int) -> list[Node]:
        return [self.node(i) for i in self.neighbors(attribute_id, NodeKind.VALUE)]

    def attribute_value_at(
        self,
        owner_id: int,
        attribute: str,
        t: int | None = None,
        now_value: int | None = None,
    ) -> list[tuple[int | str, TemporalElement]]:
        """Value history of an attribute, optionally restricted to instant t."""
        owner = self.node(owner_id)
        if owner.kind not in (NodeKind.OBJECT, NodeKind.EDGE):
            raise UnknownAttribute(f"node {owner_id} is a {owner.kind.value} node, not an owner")
        attrs = self.attribute_nodes(owner_id, attribute)
        if not attrs:
            raise UnknownAttribute(f"node {owner_id} has no attribute {attribute!r}")
        now = self.default_now() if now_value is None else now_value
        out: list[tuple[int | str, TemporalElement]] = []
        for a in attrs:
            for v in self.value_nodes(a.id):
                if t is None or contains_instant(v.element, t, now):
                    out.append((v.typed_value, v.element))
        return out

    def attribute_catalog(self) -> dict[str, list[str]]:
        """Sorted attribute names per object/edge label present in the graph."""
        cat: dict[str, set[str]] = {}
        for n in self.nodes:
            if n.kind in (NodeKind.OBJECT, NodeKind.EDGE):
                names = cat.setdefault(n.name, set())
                for a in self.attribute_nodes(n.id):
                    names.add(a.name)
        return {label: sorted(names) for label, names in cat.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.name == other.name
            and self.granularity == other.granularity
            and sorted(self.nodes, key=lambda n: (n.id, n.kind.value, n.name)) == sorted(other.nodes, key=lambda n: (n.id, n.kind.value, n.name))
            and sorted((e.src, e.dst) for e in self.edges) == sorted((e.src, e.dst) for e in other.edges)
        )

    def __repr__(self) -> str:
        return f"TemporalGraph({self.name!r}, nodes={len(self.nodes)}, edges={len(self.edges)})"


# ---------------------------------------------------------------------------
# integrity constraints

_ID_CONSTRAINT = {
    NodeKind.OBJECT: 1,
    NodeKind.EDGE: 2,
    NodeKind.ATTRIBUTE: 3,
    NodeKind.VALUE: 4,
}

_TYPING_CONSTRAINT = {
    NodeKind.OBJECT: 6,
    NodeKind.EDGE: 7,
    NodeKind.ATTRIBUTE: 8,
    NodeKind.VALUE: 9,
}

_ALLOWED_PARTNERS = {
    NodeKind.OBJECT: {NodeKind.EDGE, NodeKind.ATTRIBUTE},
    NodeKind.EDGE: {NodeKind.OBJECT, NodeKind.ATTRIBUTE},
    NodeKind.ATTRIBUTE: {NodeKind.OBJECT, NodeKind.EDGE, NodeKind.VALUE},
    NodeKind.VALUE: {NodeKind.ATTRIBUTE},
}


def validate(g: TemporalGraph) -> list[ConstraintViolation]:
    """Check the seventeen integrity constraints; return sorted violations.

    Dangling edges and empty-element object nodes raise StructuralError:
    they break the preconditions of every other check.  Duplicated ids
    short-circuit (only C1-C4 are reported) because node identity is
    ambiguous downstream.
    """
    for e in g.edges:
        for end in (e.src, e.dst):
            if end not in g:
                raise DanglingEdge(f"edge {e.src}->{e.dst} references missing node {end}")
    violations: list[ConstraintViolation] = []

    counts: dict[int, list[Node]] = defaultdict(list)
    for n in g.nodes:
        counts[n.id].append(n)
    for node_id, owners in sorted(counts.items()):
        if len(owners) > 1:
            c = min(_ID_CONSTRAINT[n.kind] for n in owners)
            kinds = ", ".join(sorted({n.kind.value for n in owners}))
            violations.append(
                ConstraintViolation(c, (node_id,), f"id {node_id} used by {len(owners)} nodes ({kinds})")
            )
    if violations:
        return _sorted(violations)

    for n in g.nodes_of_kind(NodeKind.OBJECT):
        if n.element.is_empty():
            raise EmptyObjectElement(f"object node {n.id} ({n.name}) has an empty temporal element")

    # connection typing (C6-C9), one report per edge side that breaks its rule
    for e in g.edges:
        a, b = g.node(e.src), g.node(e.dst)
        for this, other in ((a, b), (b, a)):
            if other.kind not in _ALLOWED_PARTNERS[this.kind]:
                violations.append(
                    ConstraintViolation(
                        _TYPING_CONSTRAINT[this.kind],
                        (this.id, other.id),
                        f"{this.kind.value} node {this.id} connected to {other.kind.value} node {other.id}",
                    )
                )

    # cardinality (C10-C12), counting distinct neighbors of the required kind
    edge_endpoints: dict[int, list[int]] = {}
    for n in g.nodes_of_kind(NodeKind.EDGE):
        objs = g.neighbors(n.id, NodeKind.OBJECT)
        edge_endpoints[n.id] = objs
        if len(objs) != 2:
            violations.append(
                ConstraintViolation(10, (n.id, *objs), f"edge node {n.id} joins {len(objs)} objects, needs exactly 2")
            )
    attr_owner: dict[int, list[int]] = {}
    for n in g.nodes_of_kind(NodeKind.ATTRIBUTE):
        owners = [
            i
            for i in g.neighbors(n.id)
            if g.node(i).kind in (NodeKind.OBJECT, NodeKind.EDGE)
        ]
        attr_owner[n.id] = owners
        if len(owners) != 1:
            violations.append(
                ConstraintViolation(11, (n.id, *owners), f"attribute node {n.id} has {len(owners)} owners, needs exactly 1")
            )
    value_attr: dict[int, list[int]] = {}
    for n in g.nodes_of_kind(NodeKind.VALUE):
        attrs = g.neighbors(n.id, NodeKind.ATTRIBUTE)
        value_attr[n.id] = attrs
        if len(attrs) != 1:
            violations.append(
                ConstraintViolation(12, (n.id, *attrs), f"value node {n.id} belongs to {len(attrs)} attributes, needs exactly 1")
            )

    # C13: at most one structural edge per unordered node pair
    pair_counts = Counter(e.pair for e in g.edges)
    for pair, count in sorted(pair_counts.items(), key=lambda kv: sorted(kv[0])):
        if count > 1:
            ids = tuple(sorted(pair))
            violations.append(ConstraintViolation(13, ids, f"{count} parallel edges between nodes {ids[0]} and {ids[1]}"))

    # element containment (C14-C16), skipped where cardinality already failed
    for n in g.nodes_of_kind(NodeKind.EDGE):
        objs = edge_endpoints[n.id]
        if len(objs) != 2:
            continue
        if n.element.is_empty():
            violations.append(ConstraintViolation(14, (n.id,), f"edge node {n.id} has an empty temporal element"))
            continue
        window = intersect_elements(g.node(objs[0]).element, g.node(objs[1]).element)
        if not subset_of(n.element, window):
            violations.append(
                ConstraintViolation(14, (n.id, *objs), f"edge node {n.id} exists outside its endpoints' common lifespan")
            )
    for n in g.nodes_of_kind(NodeKind.ATTRIBUTE):
        owners = attr_owner[n.id]
        if len(owners) != 1:
            continue
        if n.element.is_empty():
            violations.append(ConstraintViolation(15, (n.id,), f"attribute node {n.id} has an empty temporal element"))
            continue
        if not subset_of(n.element, g.node(owners[0]).element):
            violations.append(
                ConstraintViolation(15, (n.id, owners[0]), f"attribute node {n.id} exists outside its owner's lifespan")
            )
    for n in g.nodes_of_kind(NodeKind.VALUE):
        attrs = value_attr[n.id]
        if len(attrs) != 1:
            continue
        if n.element.is_empty():
            violations.append(ConstraintViolation(16, (n.id,), f"value node {n.id} has an empty temporal element"))
            continue
        if not subset_of(n.element, g.node(attrs[0]).element):
            violations.append(
                ConstraintViolation(16, (n.id, attrs[0]), f"value node {n.id} exists outside its attribute's lifespan")
            )

    # C5 equal values under one attribute must be one node; C17 value
    # elements under one attribute must be pairwise disjoint
    for a in g.nodes_of_kind(NodeKind.ATTRIBUTE):
        children = [g.node(i) for i in g.neighbors(a.id, NodeKind.VALUE)]
        by_value: dict[int | str, list[Node]] = defaultdict(list)
        for v in children:
            by_value[v.typed_value].append(v)
        for val, group in sorted(by_value.items(), key=lambda kv: str(kv[0])):
            if len(group) > 1:
                ids = tuple(v.id for v in group)
                violations.append(
                    ConstraintViolation(5, (a.id, *ids), f"attribute {a.id} holds value {val!r} in {len(group)} separate nodes")
                )
        for v1, v2 in _pairs(children):
            if not intersect_elements(v1.element, v2.element).is_empty():
                violations.append(
                    ConstraintViolation(
                        17, (a.id, v1.id, v2.id), f"values {v1.id} and {v2.id} of attribute {a.id} overlap in time"
                    )
                )

    return _sorted(violations)


def _pairs(nodes: Sequence[Node]) -> Iterator[tuple[Node, Node]]:
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            yield nodes[i], nodes[j]


def _sorted(violations: list[ConstraintViolation]) -> list[ConstraintViolation]:
    return sorted(violations, key=lambda v: (v.constraint, v.offending))


# ---------------------------------------------------------------------------
# coalescing


def coalesce_values(g: TemporalGraph) -> TemporalGraph:
    """Merge equal values under one attribute into a single value node.

    The survivor is the lowest id of each group; its temporal element is
    the normalized union of the group's elements.  Assumes constraints
    1-4 and 6-13 hold (identities and shape), which is what the loader's
    permissive mode guarantees before coalescing.
    """
    dropped: set[int] = set()
    replaced: dict[int, Node] = {}
    for a in sorted(g.nodes_of_kind(NodeKind.ATTRIBUTE), key=lambda n: n.id):
        children = [g.node(i) for i in g.neighbors(a.id, NodeKind.VALUE)]
        by_value: dict[int | str, list[Node]] = defaultdict(list)
        for v in children:
            by_value[v.typed_value].append(v)
        for group in by_value.values():
            if len(group) < 2:
                continue
            group.sort(key=lambda n: n.id)
            survivor = group[0]
            merged = survivor.element
            for other in group[1:]:
                merged = union_elements(merged, other.element)
                dropped.add(other.id)
            replaced[survivor.id] = Node(survivor.id, survivor.kind, survivor.name, merged)
    if not dropped and not replaced:
        return g
    nodes = [replaced.get(n.id, n) for n in g.nodes if n.id not in dropped]
    edges = [e for e in g.edges if e.src not in dropped and e.dst not in dropped]
    return TemporalGraph(g.name, nodes, edges, g.granularity)
