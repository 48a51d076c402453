import pytest
from fastapi.testclient import TestClient

import hypwalk
from hypwalk.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": hypwalk.__version__}


def test_verify_geometry_endpoint(client):
    r = client.post("/verify/geometry", json={"samples": 10, "seed": 3,
                                              "fields": ["C"], "dims": [2]})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["version"] == hypwalk.__version__
    assert body["config"]["samples"] == 10
    names = {c["check"] for c in body["checks"]}
    assert "projection-identity[C^2]" in names
    assert all({"check", "statement", "passed"} <= set(c) for c in body["checks"])


def test_curvature_endpoint(client):
    r = client.post("/verify/curvature", json={"samples": 4, "seed": 3})
    assert r.status_code == 200
    assert r.json()["passed"] is True


def test_bisector_cloud_endpoint(client):
    r = client.post("/clouds/bisector", json={"field": "C", "dim": 2, "samples": 8})
    assert r.status_code == 200
    body = r.json()
    # field tag, k, then 2 (k+1) d lift components, then the leaf coordinate
    assert len(body["columns"]) == 2 + 2 * 3 * 2 + 1
    assert len(body["rows"]) == 8
    assert body["rows"][0][0] == "C"


def test_walk_green_endpoint(client):
    r = client.post("/walk/green", json={"pairs": [["e", "a"], ["e", "e"]], "horizon": 60})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert rows[0][3] == pytest.approx(0.4999959823278744, abs=1e-12)
    assert rows[1][3] == pytest.approx(1.4999959823278748, abs=1e-12)


def test_cusp_defect_endpoint(client):
    r = client.post("/experiments/cusp-defect", json={"orbit_length": 4})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    worst = next(c for c in body["checks"] if c["check"] == "cusp-defect-negativity")
    assert worst["value"] == pytest.approx(-0.4, abs=1e-9)


def test_separate_endpoint(client):
    r = client.post("/experiments/separate", json={"pairs": 5, "orbit_length": 6})
    assert r.status_code == 200
    assert r.json()["passed"] is True


def test_ls_check_endpoint(client):
    r = client.post("/ls/check", json={"density_samples": 5000, "balance_trials": 600,
                                       "recurrence_trials": 60, "seed": 4})
    assert r.status_code == 200
    assert r.json()["passed"] is True


def test_ls_run_endpoint_small(client):
    r = client.post("/ls/run", json={"runs": 1200, "seed": 9})
    assert r.status_code == 200
    body = r.json()
    assert body["truncation_mass"] < 0.01
    assert body["support_size"] > 10
    assert sum(row["p"] for row in body["measure_rows"]) == pytest.approx(
        1.0 - body["truncation_mass"], abs=1e-9)


def test_determinism_across_posts(client):
    payload = {"runs": 400, "seed": 31}
    a = client.post("/ls/run", json=payload).json()
    b = client.post("/ls/run", json=payload).json()
    assert a == b


def test_validation_errors(client):
    assert client.post("/walk/green", json={"horizon": -2}).status_code == 400
    assert client.post("/verify/geometry", json={"bogus": 1}).status_code == 422
    assert client.post("/experiments/cusp-defect", json={"cusp": "zero"}).status_code == 400
    assert client.post("/ls/run", json={"runs": 0}).status_code == 400


def test_invalid_radii_reported_not_crashed(client):
    r = client.post("/ls/check", json={"r_factor": 0.6, "v_factor": 0.7,
                                       "density_samples": 10, "balance_trials": 10,
                                       "recurrence_trials": 5})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is False
    assert "separation" in body["checks"][0]["detail"]["error"]
