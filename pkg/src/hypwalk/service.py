"""FastAPI service exposing the verification suites and experiments.

Every endpoint is a POST taking the corresponding request model and
returning the full report; computations are synchronous (they are finite,
seeded runs).  The CLI talks to this service over HTTP or calls the same
command functions in process.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

import hypwalk
from hypwalk import runs
from hypwalk.schemas import (
    BisectorCloudRequest,
    CloudResponse,
    CombinedReport,
    CurvatureRequest,
    CuspDefectRequest,
    GeometryRequest,
    GreenTableResponse,
    LSCheckRequest,
    LSRunRequest,
    LSRunResponse,
    Report,
    ReportRequest,
    SeparateRequest,
    WalkGreenRequest,
)

app = FastAPI(
    title="hypwalk",
    version=hypwalk.__version__,
    description="Hyperbolic-space geometry suites and orbit random-walk experiments",
)


def _guarded(fn, req):
    try:
        return fn(req)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.get("/health")
def health():
    return {"status": "ok", "version": hypwalk.__version__}


@app.post("/verify/geometry", response_model=Report)
def verify_geometry(req: GeometryRequest):
    return _guarded(runs.cmd_verify_geometry, req)


@app.post("/verify/curvature", response_model=Report)
def verify_curvature(req: CurvatureRequest):
    return _guarded(runs.cmd_roots_check, req)


@app.post("/clouds/bisector", response_model=CloudResponse)
def bisector_cloud(req: BisectorCloudRequest):
    return _guarded(runs.cmd_bisector_cloud, req)


@app.post("/walk/green", response_model=GreenTableResponse)
def walk_green(req: WalkGreenRequest):
    return _guarded(runs.cmd_walk_green, req)


@app.post("/experiments/cusp-defect", response_model=Report)
def cusp_defect(req: CuspDefectRequest):
    return _guarded(runs.cmd_cusp_defect, req)


@app.post("/experiments/separate", response_model=Report)
def separate(req: SeparateRequest):
    return _guarded(runs.cmd_separate, req)


@app.post("/ls/check", response_model=Report)
def ls_check(req: LSCheckRequest):
    return _guarded(runs.cmd_ls_check, req)


@app.post("/ls/run", response_model=LSRunResponse)
def ls_run(req: LSRunRequest):
    return _guarded(runs.cmd_ls_run, req)


@app.post("/report", response_model=CombinedReport)
def report(req: ReportRequest):
    return _guarded(runs.cmd_report, req)
