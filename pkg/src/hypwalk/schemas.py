"""Request and response models of the verification service.

Every request carries the full configuration of a run (fields, sizes,
seeds, tolerances) and is validated before any computation; unknown keys
are rejected.  Responses embed the request, the random seed, the package
version and one result record per check so reports are self-describing.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CheckResult(StrictModel):
    check: str
    statement: str
    tolerance: float | None = None
    value: float | None = None
    passed: bool
    detail: dict = Field(default_factory=dict)


# -- requests ---------------------------------------------------------------


class GeometryRequest(StrictModel):
    fields: list[str] = ["R", "C", "H"]
    dims: list[int] = [1, 2, 3]
    samples: int = 200
    seed: int = 7
    tol: float = 1e-9


class CurvatureRequest(StrictModel):
    fields: list[str] = ["R", "C", "H"]
    dims: list[int] = [1, 2, 3]
    samples: int = 100
    seed: int = 7
    tol: float = 1e-8


class BisectorCloudRequest(StrictModel):
    field: str = "C"
    dim: int = 2
    samples: int = 500
    seed: int = 7
    spread: float = 2.0


class WalkGreenRequest(StrictModel):
    measure: list[dict] | None = None  # JSON rows {"word": ..., "p": ...}; None = uniform
    pairs: list[list[str]] = [["e", "a"], ["a", "a"], ["e", "e"]]
    horizon: int = 60


class CuspDefectRequest(StrictModel):
    group: str = "gamma2"
    measure: list[dict] | None = None
    orbit_length: int = 6
    cusp: str = "inf"


class SeparateRequest(StrictModel):
    group: str = "gamma2"
    pairs: int = 100
    orbit_length: int = 8
    seed: int = 7
    tol: float = 1e-3


class LSCheckRequest(StrictModel):
    group: str = "gamma2"
    r_factor: float = 0.2
    v_factor: float = 0.5
    density_samples: int = 100000
    balance_trials: int = 4000
    recurrence_trials: int = 1000
    budget: int = 4000
    seed: int = 7


class LSRunRequest(StrictModel):
    group: str = "gamma2"
    r_factor: float = 0.2
    v_factor: float = 0.5
    runs: int = 100000
    budget: int = 4000
    seed: int = 7
    arcs: list[list[float]] = [[-1.0, 1.0], [0.0, 3.0], [-4.0, -0.5], [0.2, 0.8], [-10.0, 10.0]]


class ReportRequest(StrictModel):
    seed: int = 7
    scale: float = 0.05  # fraction of the full sample sizes for the combined run


# -- responses ---------------------------------------------------------------


class Report(StrictModel):
    command: str
    version: str
    seed: int | None
    config: dict
    checks: list[CheckResult]
    passed: bool


class CloudResponse(StrictModel):
    command: str
    version: str
    config: dict
    columns: list[str]
    rows: list[list]


class GreenTableResponse(StrictModel):
    command: str
    version: str
    config: dict
    columns: list[str]
    rows: list[list]


class MeasureRow(StrictModel):
    word: str
    p: float
    stderr: float


class LSRunResponse(StrictModel):
    command: str
    version: str
    seed: int
    config: dict
    harnack: float
    separation: float
    truncation_mass: float
    acceptance_rate: float
    mean_steps: float
    first_moment: float
    entropy: float
    measure_head: list[MeasureRow]
    measure_rows: list[MeasureRow]
    support_size: int
    checks: list[CheckResult]
    passed: bool


class CombinedReport(StrictModel):
    command: str
    version: str
    seed: int
    config: dict
    sections: dict[str, Report]
    passed: bool
