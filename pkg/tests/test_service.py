"""HTTP API: envelopes, status codes, parity with the CLI, write serialization."""

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from defectdep.service import create_app
from defectdep.store import ModelStore

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture()
def client(tmp_path):
    return TestClient(create_app(str(tmp_path / "empty-store")))


@pytest.fixture()
def loaded_client(tmp_path, exchange_xml, defect_records):
    client = TestClient(create_app(str(tmp_path / "loaded-store")))
    r = client.post(
        "/api/models?version=v1",
        content=exchange_xml,
        headers={"content-type": "application/xml"},
    )
    assert r.status_code == 201, r.text
    for record in defect_records:
        assert client.post("/api/defects", json=record).status_code == 201
    return client


def envelope_data(response, status_code=200):
    assert response.status_code == status_code, response.text
    body = response.json()
    assert body["ok"] is True
    assert "error" not in body
    return body["data"]


def envelope_error(response, status_code):
    assert response.status_code == status_code, response.text
    body = response.json()
    assert body["ok"] is False
    assert "data" not in body
    return body["error"]


def test_health(client):
    assert envelope_data(client.get("/api/health")) == {"status": "ok"}


def test_model_counts_fixture(loaded_client):
    data = envelope_data(loaded_client.get("/api/models/v1/counts"))
    assert data == {"actors": 7, "dependees": 8, "dependers": 8}


def test_stock_fixture_counts(client, stock_xml):
    client.post("/api/models?version=s1", content=stock_xml,
                headers={"content-type": "application/xml"})
    data = envelope_data(client.get("/api/models/s1/counts"))
    assert data == {"actors": 2, "dependees": 2, "dependers": 2}


def test_versions_listed(loaded_client, exchange_v2_xml):
    loaded_client.post("/api/models?version=v2", content=exchange_v2_xml,
                       headers={"content-type": "application/xml"})
    data = envelope_data(loaded_client.get("/api/versions"))
    assert [v["version"] for v in data["versions"]] == ["v1", "v2"]


def test_error_statuses(client, loaded_client, exchange_xml, defect_records):
    assert envelope_error(client.post("/api/models"), 400)["code"] == "usage"
    assert envelope_error(client.post("/api/models?version=x", content=b""), 400)
    assert (
        envelope_error(
            client.post("/api/models?version=x", content=b"<istarml version='1.0'><bad>"),
            422,
        )["code"]
        == "invalid-model"
    )
    assert envelope_error(client.get("/api/models/v404/counts"), 404)["code"] == "not-found"
    dup = loaded_client.post("/api/models?version=v1", content=exchange_xml,
                             headers={"content-type": "application/xml"})
    assert envelope_error(dup, 409)["code"] == "duplicate-version"
    dup_defect = loaded_client.post("/api/defects", json=defect_records[0])
    assert envelope_error(dup_defect, 409)["code"] == "duplicate-defect"
    bad_severity = loaded_client.post(
        "/api/defects", json={"defect_id": "X", "severity": "apocalyptic"}
    )
    assert envelope_error(bad_severity, 422)["code"] == "unknown-severity-level"
    assert envelope_error(client.post("/api/recompute?version=v9"), 404)["code"] in (
        "unknown-version",
        "not-found",
    )
    empty_rank = client.post("/api/rank", json={})
    assert envelope_error(empty_rank, 404)["code"] == "not-found"


def test_defect_listing_filter(loaded_client):
    data = envelope_data(loaded_client.get("/api/defects?status=open"))
    assert {d["defect_id"] for d in data["defects"]} == {"DEF-01", "DEF-02", "DEF-03"}
    data = envelope_data(loaded_client.get("/api/defects?status=closed"))
    assert data["defects"] == []


def test_metric_endpoint(loaded_client):
    data = envelope_data(loaded_client.get("/api/defects/DEF-02/metric?version=v1"))
    assert (data["a"], data["b"], data["D"], data["D_percent"]) == (24, 112, "0.2143", "21.43%")


def test_get_endpoints_have_no_side_effects(tmp_path, exchange_xml, defect_records):
    root = tmp_path / "store"
    client = TestClient(create_app(str(root)))
    client.post("/api/models?version=v1", content=exchange_xml,
                headers={"content-type": "application/xml"})
    for record in defect_records:
        client.post("/api/defects", json=record)
    store = ModelStore(root)
    before = store.digest()
    for url in (
        "/api/health",
        "/api/versions",
        "/api/models/v1/counts",
        "/api/defects",
        "/api/defects/DEF-01/metric?version=v1",
        "/api/config/priority",
    ):
        assert client.get(url).status_code == 200
    assert store.digest() == before


def test_rank_parity_with_cli(loaded_client, tmp_path):
    api_rows = envelope_data(loaded_client.post("/api/rank", json={}))["rows"]

    from click.testing import CliRunner
    from defectdep.cli import main

    runner = CliRunner()
    root = tmp_path / "cli-store"
    runner.invoke(main, ["--store", str(root), "ingest-model",
                         str(FIXTURES / "stock-exchange.istarml"), "--version", "v1"],
                  catch_exceptions=False)
    for path in sorted((FIXTURES / "defects").glob("*.json")):
        runner.invoke(main, ["--store", str(root), "ingest-defect", "--file", str(path)],
                      catch_exceptions=False)
    cli = runner.invoke(main, ["--store", str(root), "rank", "--format", "records"],
                        catch_exceptions=False)
    cli_rows = [json.loads(line) for line in cli.output.splitlines()]
    assert api_rows == cli_rows


def test_rank_with_override_does_not_change_stored_config(loaded_client):
    before = envelope_data(loaded_client.get("/api/config/priority"))
    rows = envelope_data(
        loaded_client.post(
            "/api/rank", json={"config": {"factor_weights": {"severity": "0.07"}}}
        )
    )["rows"]
    assert [r["defect_id"] for r in rows] == ["DEF-02", "DEF-03", "DEF-01"]
    assert envelope_data(loaded_client.get("/api/config/priority")) == before


def test_config_commit_roundtrip(loaded_client):
    payload = {"weight_D": "0.6", "factor_weights": {"severity": "0.4",
                                                     "customer_criticality": "0"}}
    saved = envelope_data(loaded_client.put("/api/config/priority", json=payload))
    assert saved["weight_D"] == "3/5"
    fetched = envelope_data(loaded_client.get("/api/config/priority"))
    assert fetched == saved


def test_invalid_config_rejected(loaded_client):
    bad = {"weight_D": "0", "factor_weights": {"severity": "0", "customer_criticality": "0"}}
    assert envelope_error(loaded_client.put("/api/config/priority", json=bad), 422)[
        "code"
    ] == "empty-config"


def test_recompute_endpoint(loaded_client, exchange_v2_xml):
    loaded_client.post("/api/models?version=v2", content=exchange_v2_xml,
                       headers={"content-type": "application/xml"})
    data = envelope_data(loaded_client.post("/api/recompute?version=v2"))
    assert [e["defect_id"] for e in data["entries"]] == ["DEF-01", "DEF-02", "DEF-03"]
    assert all(e["result"]["product_version"] == "v2" for e in data["entries"])


def test_concurrent_model_posts_never_corrupt_store(tmp_path, exchange_xml):
    root = tmp_path / "store"
    client = TestClient(create_app(str(root)))

    def upload(i):
        return client.post(
            f"/api/models?version=c{i:02}",
            content=exchange_xml,
            headers={"content-type": "application/xml"},
        ).status_code

    with ThreadPoolExecutor(max_workers=8) as pool:
        statuses = list(pool.map(upload, range(20)))
    assert statuses == [201] * 20
    store = ModelStore(root)
    versions = [e.version for e in store.list_versions()]
    assert sorted(versions) == [f"c{i:02}" for i in range(20)]
    assert len(set(versions)) == 20
    for version in versions:
        assert store.get_model(version).actor_ids()  # every document intact


def test_concurrent_duplicate_posts_single_winner(tmp_path, exchange_xml):
    client = TestClient(create_app(str(tmp_path / "store")))

    def upload(_):
        return client.post(
            "/api/models?version=same",
            content=exchange_xml,
            headers={"content-type": "application/xml"},
        ).status_code

    with ThreadPoolExecutor(max_workers=8) as pool:
        statuses = list(pool.map(upload, range(12)))
    assert statuses.count(201) == 1
    assert statuses.count(409) == 11
