"""HTTP service wrapping the core package.

Every CLI capability is exposed as a POST endpoint with a pydantic
request/response model, so long-running jobs (optimisation, plane
sweeps) can be driven by multiple clients.  Run with

    uvicorn causalgame.service:app
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .game import (
    joint_distribution,
    strategy_pair_from_dict,
    strategy_pair_to_dict,
    success_probability,
)
from .optimize import QUANTUM_BOUND, OptimizerConfig, maximize_success
from .processes import (
    WernerParams,
    geometric_distance_werner,
    is_causally_separable_werner,
    make_causal_channel,
    make_noise,
    make_ocb,
    make_werner,
    process_from_dict,
    process_to_dict,
    validate_process,
)
from .scan import werner_scan

app = FastAPI(
    title="causalgame",
    description="Process matrices with indefinite causal order and the bipartite causal game.",
    version="0.1.0",
)


class PauliTerm(BaseModel):
    labels: list[str] = Field(min_length=4, max_length=4)
    coeff: float


class ProcessDocument(BaseModel):
    dims: list[int] = Field(min_length=4, max_length=4)
    pauli_terms: list[PauliTerm] | None = None
    dense: list[tuple[float, float]] | None = None


class StrategyDocument(BaseModel):
    alice: dict
    bob: dict


class ValidityForbiddenTerm(BaseModel):
    legs: list[str]
    coeff: float


class ValidityDocument(BaseModel):
    valid: bool
    psd: bool
    trace_ok: bool
    forbidden_terms: list[ValidityForbiddenTerm]


class MakeRequest(BaseModel):
    preset: Literal["ocb", "noise", "werner", "causal-a-to-b", "causal-b-to-a"]
    eta1: float | None = None
    eta2: float | None = None


class MakeResponse(BaseModel):
    process: ProcessDocument
    report: ValidityDocument


class PlayRequest(BaseModel):
    process: ProcessDocument
    strategy: StrategyDocument


class DistributionEntry(BaseModel):
    x: int
    y: int
    a: int
    b: int
    bprime: int
    p: float


class PlayResponse(BaseModel):
    success_probability: float
    distribution: list[DistributionEntry]


class OptimizeRequest(BaseModel):
    process: ProcessDocument
    restarts: int = Field(default=64, ge=1)
    seed: int = 42
    max_iterations: int = Field(default=2000, ge=1)
    tol: float = Field(default=1e-10, gt=0)


class OptimizeResponse(BaseModel):
    best_value: float
    branch: str
    bound: float
    violated: bool
    strategy: StrategyDocument
    restart_trace: list[float]


class DistanceRequest(BaseModel):
    eta1: float
    eta2: float


class DistanceResponse(BaseModel):
    eta1: float
    eta2: float
    distance: float
    separable: bool


class ScanRequest(BaseModel):
    grid: int = Field(default=201, ge=2, le=401)


class ScanRowDocument(BaseModel):
    eta1: float
    eta2: float
    psd: bool
    separable: bool | None = None
    distance: float | None = None
    p_succ_paper_strategies: float | None = None


class ScanResponse(BaseModel):
    rows: list[ScanRowDocument]


def _load_process(doc: ProcessDocument):
    try:
        return process_from_dict(doc.model_dump(exclude_none=True))
    except (ValueError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=f"bad process document: {exc}") from exc


def _load_strategy(doc: StrategyDocument):
    try:
        return strategy_pair_from_dict(doc.model_dump())
    except (ValueError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=f"bad strategy document: {exc}") from exc


def _require_valid(w):
    report = validate_process(w)
    if not report.valid:
        raise HTTPException(status_code=422, detail={"invalid_process": report.to_dict()})
    return report


@app.get("/")
def health() -> dict:
    return {"status": "ok", "quantum_bound": float(QUANTUM_BOUND)}


@app.post("/processes/make", response_model=MakeResponse)
def processes_make(req: MakeRequest) -> MakeResponse:
    if req.preset == "ocb":
        w = make_ocb()
    elif req.preset == "noise":
        w = make_noise()
    elif req.preset == "werner":
        if req.eta1 is None or req.eta2 is None:
            raise HTTPException(status_code=422, detail="werner preset requires eta1 and eta2")
        w = make_werner(WernerParams(eta1=req.eta1, eta2=req.eta2))
    elif req.preset == "causal-a-to-b":
        w = make_causal_channel("a-to-b", +1)
    else:
        w = make_causal_channel("b-to-a", +1)
    return MakeResponse(
        process=ProcessDocument(**process_to_dict(w)),
        report=ValidityDocument(**validate_process(w).to_dict()),
    )


@app.post("/processes/validate", response_model=ValidityDocument)
def processes_validate(doc: ProcessDocument) -> ValidityDocument:
    w = _load_process(doc)
    return ValidityDocument(**validate_process(w).to_dict())


@app.post("/game/play", response_model=PlayResponse)
def game_play(req: PlayRequest) -> PlayResponse:
    w = _load_process(req.process)
    _require_valid(w)
    pair = _load_strategy(req.strategy)
    dist = joint_distribution(w, pair)
    entries = [
        DistributionEntry(x=x, y=y, a=a, b=b, bprime=bp, p=float(dist[x, y, a, b, bp]))
        for x in range(2)
        for y in range(2)
        for a in range(2)
        for b in range(2)
        for bp in range(2)
    ]
    return PlayResponse(
        success_probability=success_probability(w, pair), distribution=entries
    )


@app.post("/optimize", response_model=OptimizeResponse)
def optimize(req: OptimizeRequest) -> OptimizeResponse:
    w = _load_process(req.process)
    _require_valid(w)
    cfg = OptimizerConfig(
        restarts=req.restarts, max_iterations=req.max_iterations, tol=req.tol, seed=req.seed
    )
    result = maximize_success(w, cfg)
    return OptimizeResponse(
        best_value=result.best_value,
        branch=result.branch,
        bound=float(QUANTUM_BOUND),
        violated=bool(result.best_value > QUANTUM_BOUND + 1e-6),
        strategy=StrategyDocument(**strategy_pair_to_dict(result.best_pair)),
        restart_trace=result.restart_trace,
    )


@app.post("/werner/distance", response_model=DistanceResponse)
def werner_distance(req: DistanceRequest) -> DistanceResponse:
    params = WernerParams(eta1=req.eta1, eta2=req.eta2)
    try:
        dist = geometric_distance_werner(params)
        separable = is_causally_separable_werner(params)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return DistanceResponse(eta1=req.eta1, eta2=req.eta2, distance=dist, separable=separable)


@app.post("/werner/scan", response_model=ScanResponse)
def werner_scan_endpoint(req: ScanRequest) -> ScanResponse:
    rows = werner_scan(req.grid)
    return ScanResponse(
        rows=[
            ScanRowDocument(
                eta1=row.eta1,
                eta2=row.eta2,
                psd=row.psd,
                separable=row.separable,
                distance=row.distance,
                p_succ_paper_strategies=row.p_succ,
            )
            for row in rows
        ]
    )
