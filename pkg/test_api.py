"""
Tests for the FastAPI surface.
"""

from fastapi.testclient import TestClient

from main import app

client = TestClient(app)


def test_root_lists_endpoints():
    response = client.get("/")
    assert response.status_code == 200
    assert "POST /simulate" in response.json()["endpoints"]


def test_simulate():
    response = client.post("/simulate", json={"policy": "greedy", "p": 0.3, "T": 500, "base_seed": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["success"]
    assert body["data"]["seeds"] == [4]
    assert body["data"]["aggregate"]["replications"] == 1


def test_simulate_rejects_bad_probability():
    response = client.post("/simulate", json={"policy": "greedy", "p": 2.0, "T": 100})
    assert response.status_code == 400


def test_simulate_rejects_unknown_policy():
    response = client.post("/simulate", json={"policy": "fifo", "p": 0.2})
    assert response.status_code == 422


def test_walk():
    response = client.post("/walk", json={"M": 50, "K": 20, "rho": 0.06, "beta": 0.2, "steps": 20000})
    assert response.status_code == 200
    assert abs(response.json()["data"]["expected_value_bound"] - 170.0) < 1e-9


def test_walk_rejects_unbalanced_parameters():
    response = client.post("/walk", json={"M": 10, "K": 5, "rho": 0.3, "beta": 0.2, "steps": 1000})
    assert response.status_code == 400


def test_verify_lemmas():
    response = client.post("/verify-lemmas", json={"lemmas": ["dfs-path"], "trials": 30})
    assert response.status_code == 200
    body = response.json()
    assert body["success"]
    assert body["data"]["results"][0]["lemma"] == "dfs-path"
