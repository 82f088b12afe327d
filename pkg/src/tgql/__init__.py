"""In-memory temporal graphs: storage, integrity checking, querying and
Cypher translation.

The HTTP layer lives in ``tgql.service`` (``create_app``) and the command
line interface in ``tgql.cli``; both are imported on demand so that using
the library alone stays dependency-light.
"""

from __future__ import annotations

from .cypher import TranspileOutput, UnsupportedQuery, transpile
from .engine import AmbiguousReference, SemanticError, evaluate, execute, snapshot
from .model import (
    ConstraintViolation,
    Node,
    NodeKind,
    StructuralEdge,
    TemporalGraph,
    coalesce_values,
    validate,
)
from .parser import DuplicateAlias, QueryAst, QuerySyntaxError, parse, render
from .storage import (
    InfeasibleCounts,
    ParseError,
    ValidationFailed,
    generate_workload,
    load,
    load_file,
    save,
    save_file,
)
from .temporal import (
    NOW,
    Interval,
    MalformedInterval,
    TemporalElement,
    format_element,
    format_interval,
    parse_element,
    parse_interval,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousReference",
    "ConstraintViolation",
    "DuplicateAlias",
    "InfeasibleCounts",
    "Interval",
    "MalformedInterval",
    "NOW",
    "Node",
    "NodeKind",
    "ParseError",
    "QueryAst",
    "QuerySyntaxError",
    "SemanticError",
    "StructuralEdge",
    "TemporalElement",
    "TemporalGraph",
    "TranspileOutput",
    "UnsupportedQuery",
    "ValidationFailed",
    "coalesce_values",
    "evaluate",
    "execute",
    "format_element",
    "format_interval",
    "generate_workload",
    "load",
    "load_file",
    "parse",
    "parse_element",
    "parse_interval",
    "render",
    "save",
    "save_file",
    "snapshot",
    "transpile",
    "validate",
]
