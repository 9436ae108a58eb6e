import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from shotmdp import PolicyAdjustment, model_to_json, season_whatif, toy_model
from shotmdp.cli import main
from shotmdp.config import RunConfig
from shotmdp.render import season_report_payload
from shotmdp.server import create_app, load_store, store_from_models

FIXTURE = Path(__file__).resolve().parents[1] / "data" / "statsbomb_open_sample" / "events"


@pytest.fixture(scope="module")
def client():
    store = store_from_models([toy_model()])
    return TestClient(create_app(store))


def data_of(response):
    body = response.json()
    assert body["api_version"] == "1"
    return body["data"]


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert data_of(response)["status"] == "ok"


def test_teams_listing_carries_grid_metadata(client):
    teams = data_of(client.get("/teams"))
    assert [t["team_id"] for t in teams] == ["toy"]
    assert teams[0]["grid"] == {
        "pitch_length": 105.0, "pitch_width": 68.0, "columns": 2, "rows": 1,
    }


def test_empty_store_lists_no_teams():
    client = TestClient(create_app(store_from_models([])))
    assert data_of(client.get("/teams")) == []


def test_heatmap_matches_engine_values(client):
    response = client.get("/teams/toy/heatmap", params={"analysis": "shoot_vs_move", "k": 1})
    payload = data_of(response)
    cells = {c["zone"]: c for c in payload["cells"]}
    assert cells[1]["probability"] == 0.225
    assert cells[1]["direct_xg"] == 0.1
    assert cells[1]["delta"] == 0.125
    assert payload["k"] == 1


def test_heatmap_supports_deeper_k(client):
    payload = data_of(client.get("/teams/toy/heatmap", params={"analysis": "shoot_vs_move", "k": 3}))
    cells = {c["zone"]: c for c in payload["cells"]}
    # three forced moves from zone 1: 0.75 * 0.8 * 0.75 * 0.3
    assert cells[1]["probability"] == pytest.approx(0.75 * 0.8 * 0.75 * 0.3, abs=1e-9)


def test_unknown_team_is_404(client):
    assert client.get("/teams/nobody/heatmap", params={"analysis": "better_shot"}).status_code == 404
    assert client.post("/teams/nobody/whatif", json={"zones": [1], "x": 0.1}).status_code == 404


def test_unknown_analysis_is_400(client):
    assert client.get("/teams/toy/heatmap", params={"analysis": "nonsense"}).status_code == 400


def test_non_positive_k_is_400(client):
    response = client.get("/teams/toy/heatmap", params={"analysis": "shoot_vs_move", "k": 0})
    assert response.status_code == 400


def test_whatif_zero_change(client):
    response = client.post("/teams/toy/whatif", json={"zones": [1], "x": 0.0})
    assert data_of(response)["delta_goals"] == 0.0


def test_whatif_matches_library_path(client):
    response = client.post("/teams/toy/whatif", json={"zones": [1], "x": 0.5, "quality_adjust": True})
    expected = season_report_payload(season_whatif(toy_model(), PolicyAdjustment.of({1}, 0.5)))
    assert data_of(response) == expected


def test_whatif_is_stateless(client):
    first = client.post("/teams/toy/whatif", json={"zones": [1, 2], "x": 0.2}).content
    second = client.post("/teams/toy/whatif", json={"zones": [1, 2], "x": 0.2}).content
    assert first == second


def test_whatif_validates_inputs(client):
    assert client.post("/teams/toy/whatif", json={"zones": [99], "x": 0.1}).status_code == 400
    assert client.post("/teams/toy/whatif", json={"zones": [1], "x": -1.0}).status_code == 400
    assert client.post("/teams/toy/whatif", json={"zones": [1], "x": 11.0}).status_code == 400
    assert client.post("/teams/toy/whatif", json={"zones": "nope", "x": 0.1}).status_code == 400


def test_api_equals_cli_whatif_artifacts(tmp_path):
    out = tmp_path / "out"
    assert main(["ingest", "--input", str(FIXTURE), "--input-format", "statsbomb_open",
                 "--out", str(out)]) == 0
    assert main(["build", "--out", str(out)]) == 0
    assert main(["whatif", "--out", str(out), "--mode", "uniform", "--sweep", "0.2"]) == 0
    cli_payload = json.loads((out / "whatif" / "uniform_sweep.json").read_text())
    store = load_store(out / "models", RunConfig())
    client = TestClient(create_app(store))
    for report in cli_payload["reports"]:
        team = report["team_id"]
        response = client.post(
            f"/teams/{team}/whatif",
            json={"zones": cli_payload["zones"][team], "x": 0.2, "quality_adjust": True},
        )
        api_report = data_of(response)
        assert api_report == report


def test_api_heatmap_equals_cli_analysis(tmp_path):
    out = tmp_path / "out"
    models = out / "models"
    models.mkdir(parents=True)
    (models / "toy.json").write_text(model_to_json(toy_model()), encoding="utf-8")
    assert main(["analyze", "--out", str(out), "--analysis", "better_shot", "--format", "json"]) == 0
    cli_payload = json.loads((out / "analysis" / "toy" / "better_shot.json").read_text())
    client = TestClient(create_app(load_store(models)))
    api_payload = data_of(client.get("/teams/toy/heatmap", params={"analysis": "better_shot"}))
    assert api_payload["cells"] == cli_payload["cells"]
