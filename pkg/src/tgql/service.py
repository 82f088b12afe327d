"""HTTP service over a registry of in-memory graphs.

Graphs are posted as documents and addressed by the id the service hands
back.  Queries run against a stored graph; the snapshot endpoint slices a
graph (or a query result) at one instant, which is what an interactive
timeline needs when scrubbing.
"""

from __future__ import annotations

import dataclasses
import threading
import time

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .engine import SemanticError, execute, snapshot
from .model import TemporalGraph
from .parser import DuplicateAlias, QuerySyntaxError, Snapshot, parse
from .storage import ParseError, ValidationFailed, document_dict, graph_from_document


class QueryRequest(BaseModel):
    query: str
    now: int | None = None


class _Registry:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._graphs: dict[str, TemporalGraph] = {}
        self._next = 0

    def add(self, g: TemporalGraph) -> str:
        with self._lock:
            self._next += 1
            gid = str(self._next)
            self._graphs[gid] = g
            return gid

    def get(self, gid: str) -> TemporalGraph | None:
        with self._lock:
            return self._graphs.get(gid)

    def items(self) -> list[tuple[str, TemporalGraph]]:
        with self._lock:
            return sorted(self._graphs.items(), key=lambda kv: int(kv[0]))


def _not_found(gid: str) -> JSONResponse:
    return JSONResponse(status_code=404, content={"error": "not_found", "message": f"no graph {gid!r}"})


def create_app(initial: list[TemporalGraph] | None = None) -> FastAPI:
    """Application with an optional set of preloaded graphs."""
    app = FastAPI(title="tgql", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = _Registry()
    for g in initial or []:
        registry.add(g)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/graphs", status_code=201)
    def add_graph(document: dict):
        try:
            g = graph_from_document(document)
        except ParseError as exc:
            return JSONResponse(
                status_code=400, content={"error": "document", "message": str(exc)}
            )
        except ValidationFailed as exc:
            return JSONResponse(
                status_code=400,
                content={
                    "error": "constraints",
                    "violations": [str(v) for v in exc.violations],
                },
            )
        return {"graph_id": registry.add(g)}

    @app.get("/graphs")
    def list_graphs() -> dict:
        return {
            "graphs": [
                {
                    "id": gid,
                    "name": g.name,
                    "nodes": len(g.nodes),
                    "edges": len(g.edges),
                }
                for gid, g in registry.items()
            ]
        }

    @app.get("/graphs/{gid}")
    def get_graph(gid: str):
        g = registry.get(gid)
        if g is None:
            return _not_found(gid)
        return document_dict(g)

    @app.post("/graphs/{gid}/query")
    def run_query(gid: str, request: QueryRequest):
        g = registry.get(gid)
        if g is None:
            return _not_found(gid)
        started = time.perf_counter()
        try:
            result, rows = execute(g, request.query, now_value=request.now)
        except QuerySyntaxError as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "syntax",
                    "message": exc.message,
                    "line": exc.line,
                    "column": exc.column,
                },
            )
        except (SemanticError, DuplicateAlias) as exc:
            return JSONResponse(
                status_code=422, content={"error": "semantic", "message": str(exc)}
            )
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "result": document_dict(result),
            "stats": {"rows": rows, "elapsed_ms": round(elapsed_ms, 3)},
        }

    @app.get("/graphs/{gid}/snapshot")
    def get_snapshot(gid: str, t: str, q: str | None = None):
        g = registry.get(gid)
        if g is None:
            return _not_found(gid)
        if t == "Now":
            instant = g.default_now()
        else:
            try:
                instant = int(t)
            except ValueError:
                return JSONResponse(
                    status_code=422,
                    content={
                        "error": "instant",
                        "message": f"t must be an integer or 'Now', got {t!r}",
                    },
                )
        if q is None:
            return document_dict(snapshot(g, instant))
        try:
            ast = dataclasses.replace(parse(q), temporal=Snapshot(instant))
            result, _rows = execute(g, ast)
        except QuerySyntaxError as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "syntax",
                    "message": exc.message,
                    "line": exc.line,
                    "column": exc.column,
                },
            )
        except (SemanticError, DuplicateAlias) as exc:
            return JSONResponse(
                status_code=422, content={"error": "semantic", "message": str(exc)}
            )
        return document_dict(result)

    @app.get("/graphs/{gid}/range")
    def get_range(gid: str):
        g = registry.get(gid)
        if g is None:
            return _not_found(gid)
        span = g.instant_range()
        if span is None:
            return Response(status_code=204)
        lo, hi, has_now = span
        return {"min_instant": lo, "max_instant": hi, "has_now": has_now}

    return app
