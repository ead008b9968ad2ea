"""Tests for the HTTP service routes."""

import pytest
from fastapi.testclient import TestClient

from curveopt import __version__
from curveopt.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_healthz(self, client):
        resp = client.get("/healthz")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "version": __version__}


class TestCurveRoute:
    def test_maps_coordinate(self, client):
        resp = client.post("/curve", json={"dim": 1, "depth": 4, "x": 0.5})
        assert resp.status_code == 200
        body = resp.json()
        assert body["cell"] == 8
        assert body["point"] == [0.53125]

    def test_default_spec_is_two_dim_depth_twelve(self, client):
        body = client.post("/curve", json={"x": 0.0}).json()
        assert body["dim"] == 2 and body["depth"] == 12
        assert body["cell"] == 0

    def test_rejects_out_of_range_coordinate(self, client):
        assert client.post("/curve", json={"x": 1.5}).status_code == 422

    def test_rejects_oversized_depth(self, client):
        resp = client.post("/curve", json={"x": 0.5, "dim": 3, "depth": 30})
        assert resp.status_code == 400
        assert "bit budget" in resp.json()["detail"]


class TestSolveRoute:
    def test_runs_and_scores(self, client):
        resp = client.post("/solve", json={"seed": 1, "method": "ialt", "oracle_resolution": 300})
        assert resp.status_code == 200
        body = resp.json()
        assert body["variant"] == "IALT"
        assert body["seed"] == 1
        assert body["success"] is True
        assert body["trials"] >= 6
        assert len(body["best_point"]) == 2
        assert set(body) == {
            "variant", "seed", "r", "xi", "epsilon", "p", "depth", "trials",
            "iterations", "best_value", "best_point", "success",
            "wall_millis", "escapes_clamped",
        }

    def test_unknown_method_is_shape_error(self, client):
        assert client.post("/solve", json={"seed": 1, "method": "nope"}).status_code == 422

    def test_sequential_width_conflict_is_domain_error(self, client):
        resp = client.post("/solve", json={"seed": 1, "method": "ia", "p": 2})
        assert resp.status_code == 400
        assert "sequential" in resp.json()["detail"]


class TestBenchRoute:
    def test_small_sweep(self, client):
        resp = client.post(
            "/bench",
            json={"seeds": "1,2", "methods": ["ialt", "plt"], "p": [1, 2],
                  "oracle_resolution": 200},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["seeds"] == [1, 2]
        methods = {(row["method"], row["p"]) for row in body["rows"]}
        assert methods == {("IALT", 1), ("PLT", 1), ("PLT", 2)}
        plt1 = next(r for r in body["rows"] if r["method"] == "PLT" and r["p"] == 1)
        ialt = next(r for r in body["rows"] if r["method"] == "IALT")
        assert plt1["total_trials"] == ialt["total_trials"]

    def test_bad_seed_spec_is_domain_error(self, client):
        resp = client.post("/bench", json={"seeds": "9..1", "methods": ["ialt"], "p": [1]})
        assert resp.status_code == 400
