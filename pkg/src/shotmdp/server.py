"""Read-only HTTP/JSON facade over fitted models.

Responses use a versioned envelope ``{"api_version": "1", "data": ...}``.
The store is an immutable snapshot loaded at startup; every request
computes on it without mutation, so identical requests return identical
bodies and concurrent requests cannot interfere. Heatmap and what-if
numbers come from the same evaluation and serialization paths as the
CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import render
from .chain import expected_goals, expected_shots, fundamental_matrix, induced_chain, InducedChain
from .cli import run_analysis
from .config import RunConfig
from .model import TeamModel, model_from_json
from .whatif import PolicyAdjustment, season_whatif

API_VERSION = "1"

# API analysis names; shoot_vs_move takes an optional move depth k.
_API_ANALYSES = {
    "shoot_vs_move": "shoot_vs_move_k1",
    "flank_first": "flank_first",
    "better_shot": "better_shot",
    "direct_shot": "direct_shot",
}


@dataclass(frozen=True)
class StoreEntry:
    model: TeamModel
    chain: InducedChain
    visits: np.ndarray
    baseline_shots: np.ndarray
    baseline_goals: float


@dataclass(frozen=True)
class ModelStore:
    config: RunConfig
    entries: dict[str, StoreEntry]

    def team_ids(self) -> list[str]:
        return sorted(self.entries)

    def get(self, team_id: str) -> StoreEntry:
        entry = self.entries.get(team_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown team {team_id!r}")
        return entry


def _make_entry(model: TeamModel) -> StoreEntry:
    chain = induced_chain(model)
    n_matrix = fundamental_matrix(chain)
    shots = expected_shots(chain, n_matrix, model.start_counts)
    return StoreEntry(
        model=model,
        chain=chain,
        visits=model.start_counts @ n_matrix,
        baseline_shots=shots,
        baseline_goals=expected_goals(shots, chain.goal_prob),
    )


def load_store(models_dir: str | Path, config: RunConfig | None = None) -> ModelStore:
    """Load every model artifact in a directory into an immutable snapshot."""
    directory = Path(models_dir)
    entries = {}
    for path in sorted(directory.glob("*.json")):
        model = model_from_json(path.read_text(encoding="utf-8"))
        entries[model.team_id] = _make_entry(model)
    return ModelStore(config=config or RunConfig(), entries=entries)


def store_from_models(models: list[TeamModel], config: RunConfig | None = None) -> ModelStore:
    return ModelStore(
        config=config or RunConfig(),
        entries={m.team_id: _make_entry(m) for m in models},
    )


class WhatIfRequest(BaseModel):
    zones: list[int] = Field(default_factory=list)
    x: float
    quality_adjust: bool = True


def _envelope(data) -> dict:
    return {"api_version": API_VERSION, "data": data}


def create_app(store: ModelStore, *, static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="shotmdp", version=API_VERSION)

    @app.exception_handler(RequestValidationError)
    async def bad_request(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/health")
    def health() -> dict:
        return _envelope({"status": "ok", "teams": len(store.entries)})

    @app.get("/teams")
    def teams() -> dict:
        data = [
            {
                "team_id": team_id,
                "grid": render.grid_meta(store.entries[team_id].model.spec),
                "possessions": int(store.entries[team_id].model.start_counts.sum()),
                "baseline_goals": render.round9(store.entries[team_id].baseline_goals),
            }
            for team_id in store.team_ids()
        ]
        return _envelope(data)

    @app.get("/teams/{team_id}/heatmap")
    def heatmap(team_id: str, analysis: str, k: int | None = None, region: str = "all") -> dict:
        entry = store.get(team_id)
        cli_name = _API_ANALYSES.get(analysis, analysis)
        try:
            results, depth = run_analysis(entry.model, cli_name, store.config, region=region, k=k)
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        payload = render.heatmap_payload(
            entry.model.spec, results, team_id=team_id, analysis=analysis, k=depth,
        )
        return _envelope(payload)

    @app.post("/teams/{team_id}/whatif")
    def whatif(team_id: str, request: WhatIfRequest) -> dict:
        entry = store.get(team_id)
        if not -1.0 < request.x <= 10.0:
            raise HTTPException(status_code=400, detail=f"x {request.x} outside (-1, 10]")
        n = entry.model.spec.n_states
        bad = [z for z in request.zones if not 0 <= z < n]
        if bad:
            raise HTTPException(status_code=400, detail=f"invalid zones {bad}")
        report = season_whatif(
            entry.model,
            PolicyAdjustment.of(frozenset(request.zones), request.x),
            quality_adjust=request.quality_adjust,
        )
        return _envelope(render.season_report_payload(report))

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
