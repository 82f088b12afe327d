"""Shared builders and crafted graphs for the test suite."""

from __future__ import annotations

import random

from tgql.model import Node, NodeKind, StructuralEdge, TemporalGraph
from tgql.parser import (
    And,
    Comparison,
    EdgeStep,
    InRange,
    NodeStep,
    Or,
    PathPattern,
    Projection,
    QueryAst,
    Snapshot,
)
from tgql.temporal import NOW, Interval, parse_element


def make_graph(nodes, edges, name: str = "g", granularity: str = "year") -> TemporalGraph:
    """nodes: (id, kind, name, element-text) tuples; edges: (src, dst) pairs."""
    return TemporalGraph(
        name,
        [Node(i, NodeKind(kind), label, parse_element(el)) for i, kind, label, el in nodes],
        [StructuralEdge(a, b) for a, b in edges],
        granularity,
    )


def constraint_cases() -> list[tuple[int, TemporalGraph, TemporalGraph, str]]:
    """(constraint number, violating graph, corrected twin, description)."""
    cases: list[tuple[int, TemporalGraph, TemporalGraph, str]] = []

    cases.append((
        1,
        make_graph([(0, "object", "A", "[[1-2]]"), (0, "object", "B", "[[1-2]]")], []),
        make_graph([(0, "object", "A", "[[1-2]]"), (1, "object", "B", "[[1-2]]")], []),
        "duplicate object id",
    ))
    two_edges_good = make_graph(
        [
            (0, "object", "A", "[[1-10]]"),
            (1, "object", "B", "[[1-10]]"),
            (2, "edge", "E", "[[2-3]]"),
            (3, "edge", "F", "[[2-3]]"),
        ],
        [(0, 2), (2, 1), (0, 3), (3, 1)],
    )
    cases.append((
        2,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "object", "B", "[[1-10]]"),
                (2, "edge", "E", "[[2-3]]"),
                (2, "edge", "F", "[[2-3]]"),
            ],
            [(0, 2), (2, 1)],
        ),
        two_edges_good,
        "duplicate edge-node id",
    ))
    cases.append((
        3,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (1, "attribute", "Age", "[[1-5]]"),
            ],
            [(0, 1)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (2, "attribute", "Age", "[[1-5]]"),
            ],
            [(0, 1), (0, 2)],
        ),
        "duplicate attribute id",
    ))
    cases.append((
        4,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-2]]"),
                (2, "value", "y", "[[4-5]]"),
            ],
            [(0, 1), (1, 2)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-2]]"),
                (3, "value", "y", "[[4-5]]"),
            ],
            [(0, 1), (1, 2), (1, 3)],
        ),
        "duplicate value id",
    ))
    cases.append((
        5,
        make_graph(
            [
                (0, "object", "Building", "[[1980-Now]]"),
                (1, "attribute", "Street", "[[1980-Now]]"),
                (2, "value", "25 Street Av.", "[[1990-1995]]"),
                (3, "value", "25 Street Av.", "[[2001-Now]]"),
            ],
            [(0, 1), (1, 2), (1, 3)],
        ),
        make_graph(
            [
                (0, "object", "Building", "[[1980-Now]]"),
                (1, "attribute", "Street", "[[1980-Now]]"),
                (2, "value", "25 Street Av.", "[[1990-1995],[2001-Now]]"),
            ],
            [(0, 1), (1, 2)],
        ),
        "equal values split across two nodes",
    ))
    cases.append((
        6,
        make_graph([(0, "object", "A", "[[1-2]]"), (1, "object", "B", "[[1-2]]")], [(0, 1)]),
        make_graph([(0, "object", "A", "[[1-2]]"), (1, "object", "B", "[[1-2]]")], []),
        "object wired straight to object",
    ))
    cases.append((
        7,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "object", "B", "[[1-10]]"),
                (2, "object", "C", "[[1-10]]"),
                (3, "object", "D", "[[1-10]]"),
                (4, "edge", "E", "[[2-3]]"),
                (5, "edge", "F", "[[2-3]]"),
            ],
            [(0, 4), (4, 1), (2, 5), (5, 3), (4, 5)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "object", "B", "[[1-10]]"),
                (2, "object", "C", "[[1-10]]"),
                (3, "object", "D", "[[1-10]]"),
                (4, "edge", "E", "[[2-3]]"),
                (5, "edge", "F", "[[2-3]]"),
            ],
            [(0, 4), (4, 1), (2, 5), (5, 3)],
        ),
        "edge node wired to edge node",
    ))
    cases.append((
        8,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (2, "attribute", "Age", "[[1-5]]"),
            ],
            [(0, 1), (0, 2), (1, 2)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (2, "attribute", "Age", "[[1-5]]"),
            ],
            [(0, 1), (0, 2)],
        ),
        "attribute wired to attribute",
    ))
    cases.append((
        9,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-2]]"),
                (3, "value", "y", "[[4-5]]"),
            ],
            [(0, 1), (1, 2), (1, 3), (2, 3)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-2]]"),
                (3, "value", "y", "[[4-5]]"),
            ],
            [(0, 1), (1, 2), (1, 3)],
        ),
        "value wired to value",
    ))
    cases.append((
        10,
        make_graph(
            [(0, "object", "A", "[[1-10]]"), (1, "edge", "E", "[[2-3]]")],
            [(0, 1)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "edge", "E", "[[2-3]]"),
                (2, "object", "B", "[[1-10]]"),
            ],
            [(0, 1), (1, 2)],
        ),
        "edge node with a single endpoint",
    ))
    cases.append((
        11,
        make_graph([(0, "attribute", "Name", "[[1-5]]")], []),
        make_graph(
            [(0, "attribute", "Name", "[[1-5]]"), (1, "object", "A", "[[1-10]]")],
            [(1, 0)],
        ),
        "attribute with no owner",
    ))
    cases.append((
        12,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "attribute", "Age", "[[1-10]]"),
                (3, "value", "x", "[[2-3]]"),
            ],
            [(0, 1), (0, 2), (1, 3), (2, 3)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "attribute", "Age", "[[1-10]]"),
                (3, "value", "x", "[[2-3]]"),
            ],
            [(0, 1), (0, 2), (1, 3)],
        ),
        "value shared by two attributes",
    ))
    cases.append((
        13,
        make_graph(
            [(0, "object", "A", "[[1-10]]"), (1, "attribute", "Name", "[[1-5]]")],
            [(0, 1), (1, 0)],
        ),
        make_graph(
            [(0, "object", "A", "[[1-10]]"), (1, "attribute", "Name", "[[1-5]]")],
            [(0, 1)],
        ),
        "parallel structural edges",
    ))
    cases.append((
        14,
        make_graph(
            [
                (0, "object", "A", "[[1-5]]"),
                (1, "object", "B", "[[4-10]]"),
                (2, "edge", "E", "[[4-6]]"),
            ],
            [(0, 2), (2, 1)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-5]]"),
                (1, "object", "B", "[[4-10]]"),
                (2, "edge", "E", "[[4-5]]"),
            ],
            [(0, 2), (2, 1)],
        ),
        "edge node outliving an endpoint",
    ))
    cases.append((
        15,
        make_graph(
            [(0, "object", "A", "[[1-5]]"), (1, "attribute", "Name", "[[4-6]]")],
            [(0, 1)],
        ),
        make_graph(
            [(0, "object", "A", "[[1-5]]"), (1, "attribute", "Name", "[[4-5]]")],
            [(0, 1)],
        ),
        "attribute outliving its owner",
    ))
    cases.append((
        16,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (2, "value", "x", "[[4-6]]"),
            ],
            [(0, 1), (1, 2)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-5]]"),
                (2, "value", "x", "[[4-5]]"),
            ],
            [(0, 1), (1, 2)],
        ),
        "value outliving its attribute",
    ))
    cases.append((
        17,
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-5]]"),
                (3, "value", "y", "[[5-9]]"),
            ],
            [(0, 1), (1, 2), (1, 3)],
        ),
        make_graph(
            [
                (0, "object", "A", "[[1-10]]"),
                (1, "attribute", "Name", "[[1-10]]"),
                (2, "value", "x", "[[1-5]]"),
                (3, "value", "y", "[[6-9]]"),
            ],
            [(0, 1), (1, 2), (1, 3)],
        ),
        "overlapping values of one attribute",
    ))
    return cases


# Query corpus: the documented example queries over the town schema.
CORPUS = [
    "SELECT Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building(Street) FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-Friend->P2 FROM Person-Friend->Person as P2 WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' SNAPSHOT 1990",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' IN [1986-1989]",
    "SELECT * FROM Person-Friend[1..3]->Person as P2 WHERE Person.Name = 'John Smith'",
    "SELECT Person(Age, Gender) FROM Person-Friend->Person as P2",
    "SELECT * FROM Person-Friend->Person as P2 WHERE Person.Age = 12 AND Person.Gender = 'Male'",
    "SELECT P2, Building FROM Person-Friend->Person as P2, P2-LivedIn->Building WHERE Person.Name = 'John Smith'",
]

# Evaluated against randomly generated towns; avoids Age/Gender, which the
# generator does not produce.
EVAL_CORPUS = [
    "SELECT Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building(Street) FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-Friend->P2 FROM Person-Friend->Person as P2 WHERE Person.Name = 'John Smith'",
    "SELECT * FROM Person as P1-LivedIn->Building, Person as P2-Friend->Person as P3 WHERE P1.Name = 'John Smith' AND P2.Name = 'John Smith'",
    "SELECT * FROM Person as P2<-Friend-Person-LivedIn->Building",
    "SELECT * FROM Person-Friend[1..3]->Person as P2 WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' SNAPSHOT 1990",
    "SELECT * FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' IN [1986-1989]",
    "SELECT Building(*) FROM Person-LivedIn->Building WHERE Building.Bedrooms >= 3",
    "SELECT Person(Name) FROM Person-Friend->Person as P2 SNAPSHOT 1995",
    "SELECT Building FROM Building<-LivedIn-Person WHERE Building.Type = 'apartment' IN [1990-1995]",
]

_LABELS = ["Person", "Building", "Friend", "LivedIn", "City", "Owner", "Pet"]
_ATTRS = ["Name", "Age", "Gender", "Street", "Type", "Bedrooms"]
_STR_LITERALS = ["John Smith", "Male", "it's", "a''b", "", " ", "25 Street Av."]


def random_ast(rng: random.Random) -> QueryAst:
    """A structurally well-formed query in the parser's normal form."""

    def node_step(allow_projection: bool) -> NodeStep:
        alias = f"A{rng.randint(1, 9)}" if rng.random() < 0.3 else None
        projection = None
        if allow_projection and rng.random() < 0.3:
            if rng.random() < 0.3:
                projection = Projection(None)
            else:
                projection = Projection(tuple(rng.sample(_ATTRS, rng.randint(1, 3))))
        return NodeStep(rng.choice(_LABELS), alias, projection)

    def edge_step() -> EdgeStep:
        bounds = None
        if rng.random() < 0.25:
            lo = rng.randint(1, 3)
            bounds = (lo, rng.randint(lo, 4))
        return EdgeStep(rng.choice(_LABELS), rng.random() < 0.7, bounds)

    def path(allow_projection: bool) -> PathPattern:
        n = rng.randint(1, 3)
        return PathPattern(
            tuple(node_step(allow_projection) for _ in range(n)),
            tuple(edge_step() for _ in range(n - 1)),
        )

    def comparison() -> Comparison:
        literal = rng.choice(_STR_LITERALS) if rng.random() < 0.5 else rng.choice([12, -3, 0, 1990])
        return Comparison(
            rng.choice(_LABELS + ["A1", "A2"]),
            rng.choice(_ATTRS),
            rng.choice(["=", "<>", "<", "<=", ">", ">="]),
            literal,
        )

    def and_node(depth: int):
        terms = tuple(
            or_node(depth - 1) if depth > 0 and rng.random() < 0.3 else comparison()
            for _ in range(rng.randint(2, 3))
        )
        return And(terms)

    def or_node(depth: int):
        terms = tuple(
            and_node(depth - 1) if depth > 0 and rng.random() < 0.3 else comparison()
            for _ in range(rng.randint(2, 3))
        )
        return Or(terms)

    paths = tuple(path(False) for _ in range(rng.randint(1, 3)))
    select = None if rng.random() < 0.3 else tuple(path(True) for _ in range(rng.randint(1, 2)))
    roll = rng.random()
    if roll < 0.4:
        where = None
    elif roll < 0.6:
        where = comparison()
    elif roll < 0.8:
        where = and_node(1)
    else:
        where = or_node(1)
    roll = rng.random()
    if roll < 0.4:
        temporal = None
    elif roll < 0.6:
        temporal = Snapshot(NOW if rng.random() < 0.3 else rng.randint(1900, 2050))
    else:
        lo = rng.randint(1900, 2050)
        temporal = InRange(Interval(lo, rng.randint(lo, 2060)))
    return QueryAst(select, paths, where, temporal)


def base_graph() -> TemporalGraph:
    """Small valid graph with the shapes queries care about."""
    return make_graph(
        [
            (0, "object", "Person", "[[1980-Now]]"),
            (1, "object", "Person", "[[1985-2010]]"),
            (2, "object", "Building", "[[1970-Now]]"),
            (3, "edge", "Friend", "[[1990-1995]]"),
            (4, "edge", "LivedIn", "[[1986-1989]]"),
            (5, "attribute", "Name", "[[1980-Now]]"),
            (6, "value", "John Smith", "[[1980-Now]]"),
            (7, "attribute", "Street", "[[1970-Now]]"),
            (8, "value", "25 Street Av.", "[[1970-1990]]"),
            (9, "value", "9 Ocean Dr.", "[[1991-Now]]"),
            (10, "attribute", "Name", "[[1985-2010]]"),
            (11, "value", "Ann Miller", "[[1985-2010]]"),
            (12, "attribute", "Type", "[[1970-Now]]"),
            (13, "value", "apartment", "[[1970-Now]]"),
            (14, "attribute", "Bedrooms", "[[1970-Now]]"),
            (15, "value", "3", "[[1970-Now]]"),
        ],
        [
            (0, 3), (3, 1),
            (0, 4), (4, 2),
            (0, 5), (5, 6),
            (2, 7), (7, 8), (7, 9),
            (1, 10), (10, 11),
            (2, 12), (12, 13),
            (2, 14), (14, 15),
        ],
        name="town",
    )
