"""Tests for the HTTP service."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from tgql.engine import snapshot
from tgql.service import create_app
from tgql.storage import document_dict
from support import base_graph, constraint_cases, make_graph


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def town_client():
    return TestClient(create_app([base_graph()]))


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_post_graph_assigns_sequential_ids(client):
    doc = document_dict(base_graph())
    assert client.post("/graphs", json=doc).json() == {"graph_id": "1"}
    assert client.post("/graphs", json=doc).json() == {"graph_id": "2"}


def test_post_graph_rejects_malformed_document(client):
    response = client.post("/graphs", json={"nodes": []})
    assert response.status_code == 400
    assert response.json()["error"] == "document"


def test_post_graph_rejects_constraint_violations(client):
    bad = next(case[1] for case in constraint_cases() if case[0] == 5)
    response = client.post("/graphs", json=document_dict(bad))
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "constraints"
    assert body["violations"][0].startswith("C05 ")


def test_list_graphs(town_client):
    body = town_client.get("/graphs").json()
    assert body == {
        "graphs": [{"id": "1", "name": "town", "nodes": 16, "edges": 15}]
    }


def test_get_graph_roundtrip(town_client):
    response = town_client.get("/graphs/1")
    assert response.status_code == 200
    assert response.json() == document_dict(base_graph())


def test_get_graph_unknown_id(town_client):
    response = town_client.get("/graphs/99")
    assert response.status_code == 404
    assert response.json()["error"] == "not_found"


def test_query_returns_result_and_stats(town_client):
    response = town_client.post(
        "/graphs/1/query",
        json={"query": "SELECT * FROM Person as P WHERE P.Name = 'John Smith'"},
    )
    assert response.status_code == 200
    body = response.json()
    assert [n["id"] for n in body["result"]["nodes"]] == [0, 5, 6]
    assert body["stats"]["rows"] == 1
    assert body["stats"]["elapsed_ms"] >= 0


def test_query_now_override(town_client):
    query = "SELECT * FROM Person as P SNAPSHOT Now"
    with_override = town_client.post(
        "/graphs/1/query", json={"query": query, "now": 2009}
    ).json()
    names = {n["name"] for n in with_override["result"]["nodes"]}
    assert "Ann Miller" in names
    default = town_client.post("/graphs/1/query", json={"query": query}).json()
    names = {n["name"] for n in default["result"]["nodes"]}
    assert "Ann Miller" not in names


def test_query_syntax_error(town_client):
    response = town_client.post("/graphs/1/query", json={"query": "SELECT FROM"})
    assert response.status_code == 422
    body = response.json()
    assert body["error"] == "syntax"
    assert isinstance(body["line"], int) and isinstance(body["column"], int)


def test_query_semantic_error(town_client):
    response = town_client.post(
        "/graphs/1/query",
        json={"query": "SELECT * FROM Person as P WHERE P.Salary = 1"},
    )
    assert response.status_code == 422
    assert response.json()["error"] == "semantic"


def test_query_unknown_graph(town_client):
    response = town_client.post("/graphs/7/query", json={"query": "SELECT * FROM Person"})
    assert response.status_code == 404


def test_snapshot_at_instant(town_client):
    response = town_client.get("/graphs/1/snapshot", params={"t": "1988"})
    assert response.status_code == 200
    ids = [n["id"] for n in response.json()["nodes"]]
    assert ids == [0, 1, 2, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15]


def test_snapshot_at_now(town_client):
    g = base_graph()
    response = town_client.get("/graphs/1/snapshot", params={"t": "Now"})
    assert response.json() == document_dict(snapshot(g, g.default_now()))


def test_snapshot_rejects_bad_instant(town_client):
    response = town_client.get("/graphs/1/snapshot", params={"t": "abc"})
    assert response.status_code == 422
    assert response.json()["error"] == "instant"


def test_snapshot_replaces_query_modifier(town_client):
    query = "SELECT * FROM Person as P WHERE P.Name = 'John Smith' SNAPSHOT 1900"
    response = town_client.get("/graphs/1/snapshot", params={"t": "1988", "q": query})
    assert response.status_code == 200
    assert [n["id"] for n in response.json()["nodes"]] == [0, 5, 6]


def test_snapshot_query_syntax_error(town_client):
    response = town_client.get("/graphs/1/snapshot", params={"t": "1988", "q": "SELECT"})
    assert response.status_code == 422
    assert response.json()["error"] == "syntax"


def test_range(town_client):
    response = town_client.get("/graphs/1/range")
    assert response.status_code == 200
    assert response.json() == {
        "min_instant": 1970,
        "max_instant": 2010,
        "has_now": True,
    }


def test_range_of_empty_graph(client):
    doc = document_dict(make_graph([], [], name="empty"))
    gid = client.post("/graphs", json=doc).json()["graph_id"]
    assert client.get(f"/graphs/{gid}/range").status_code == 204


def test_cors_header_present(town_client):
    response = town_client.get("/health", headers={"Origin": "http://localhost:5173"})
    assert response.headers["access-control-allow-origin"] == "*"
