"""Command line interface.

Subcommands: validate, query, transpile, generate and serve.  Results go
to stdout; diagnostics go to stderr.  Exit codes: 0 success, 1 integrity
violations, 2 malformed input (document, query text or counts), 3 a query
that parses but does not resolve against the graph, 4 a query outside the
Cypher-translatable subset.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cypher import UnsupportedQuery, transpile
from .engine import SemanticError, execute
from .model import NodeKind, TemporalGraph, coalesce_values, validate
from .parser import DuplicateAlias, QuerySyntaxError
from .storage import (
    InfeasibleCounts,
    ParseError,
    ValidationFailed,
    generate_workload,
    load_file,
    save,
    save_file,
)
from .temporal import MalformedInterval, format_element, parse_interval

_DOT_SHAPES = {
    NodeKind.OBJECT: "ellipse",
    NodeKind.EDGE: "diamond",
    NodeKind.ATTRIBUTE: "box",
    NodeKind.VALUE: "plaintext",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def render_dot(g: TemporalGraph) -> str:
    """Graphviz rendering with one shape per node kind."""
    lines = [f'digraph "{_dot_escape(g.name)}" {{']
    for node in g.nodes:
        label = _dot_escape(f"{node.name}\n{format_element(node.element)}")
        label = label.replace("\n", "\\n")
        lines.append(f'  n{node.id} [label="{label}", shape={_DOT_SHAPES[node.kind]}];')
    for edge in g.edges:
        lines.append(f"  n{edge.src} -> n{edge.dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_table(g: TemporalGraph) -> str:
    """Tab-separated fact listing: one row per value, owners without
    attributes get a bare row carrying their own element."""
    rows = ["node\tattribute\tvalue\tintervals"]
    for node in g.nodes:
        if node.kind not in (NodeKind.OBJECT, NodeKind.EDGE):
            continue
        owner = f"{node.name}#{node.id}"
        attrs = g.attribute_nodes(node.id)
        if not attrs:
            rows.append(f"{owner}\t\t\t{format_element(node.element)}")
            continue
        for attr in attrs:
            for value in g.value_nodes(attr.id):
                rows.append(
                    f"{owner}\t{attr.name}\t{value.name}\t{format_element(value.element)}"
                )
    return "\n".join(rows) + "\n"


def _print_violations(violations, stream) -> None:
    for v in violations:
        print(v, file=stream)


def cmd_validate(args: argparse.Namespace) -> int:
    g = load_file(args.file, permissive=True)
    if g.warnings:
        _print_violations(g.warnings, sys.stdout)
        return 1
    print("ok")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    if args.coalesce:
        g = load_file(args.file, permissive=True)
        g = coalesce_values(g)
        violations = validate(g)
        if violations:
            _print_violations(violations, sys.stderr)
            return 1
    else:
        g = load_file(args.file)
    result, _rows = execute(g, args.query, now_value=args.now)
    if args.format == "json":
        sys.stdout.write(save(result).decode("utf-8"))
    elif args.format == "dot":
        sys.stdout.write(render_dot(result))
    else:
        sys.stdout.write(render_table(result))
    return 0


def cmd_transpile(args: argparse.Namespace) -> int:
    out = transpile(args.query)
    print(out.cypher)
    if out.residual is not None:
        print(json.dumps(out.residual))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    horizon = parse_interval(args.horizon)
    g = generate_workload(
        args.seed,
        persons=args.persons,
        buildings=args.buildings,
        friendships=args.friendships,
        lived_in=args.lived_in,
        horizon=horizon,
    )
    if args.output is not None:
        save_file(g, args.output)
    else:
        sys.stdout.write(save(g).decode("utf-8"))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    initial = [load_file(path) for path in args.files]
    app = create_app(initial)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgql", description="Temporal graph storage, querying and translation."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph document against all constraints")
    p.add_argument("file", type=Path, help="graph document (.tgraph.json)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a query against a graph document")
    p.add_argument("file", type=Path, help="graph document (.tgraph.json)")
    p.add_argument("-q", "--query", required=True, help="query text")
    p.add_argument(
        "--format", choices=("json", "dot", "table"), default="json",
        help="output format (default: json)",
    )
    p.add_argument("--now", type=int, default=None, help="instant to use for Now")
    p.add_argument(
        "--coalesce", action="store_true",
        help="merge duplicate values before validating and querying",
    )
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("transpile", help="translate a query to Cypher")
    p.add_argument("-q", "--query", required=True, help="query text")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("generate", help="produce a synthetic town graph")
    p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    p.add_argument("--persons", type=int, default=1000)
    p.add_argument("--buildings", type=int, default=100)
    p.add_argument("--friendships", type=int, default=2500)
    p.add_argument("--lived-in", type=int, default=500)
    p.add_argument(
        "--horizon", default="[1980-2016]",
        help="interval the generated history must start inside",
    )
    p.add_argument("-o", "--output", type=Path, default=None, help="output file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("files", nargs="*", type=Path, help="graph documents to preload")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailed as exc:
        _print_violations(exc.violations, sys.stderr)
        return 1
    except (ParseError, QuerySyntaxError, InfeasibleCounts, MalformedInterval) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SemanticError, DuplicateAlias) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnsupportedQuery as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
