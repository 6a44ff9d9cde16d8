"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, model_validator


class GraphIn(BaseModel):
    """One graph, from exactly one source: edge pairs, edge text, or graph6."""

    n: int | None = None
    edges: list[tuple[int, int]] | None = None
    edge_text: str | None = None
    graph6: str | None = None

    @model_validator(mode="after")
    def _one_source(self):
        sources = [self.edges is not None, self.edge_text is not None, self.graph6 is not None]
        if sum(sources) != 1:
            raise ValueError("provide exactly one of edges, edge_text, graph6")
        return self


class MetricIn(BaseModel):
    """A raw square matrix, either inline or as CSV text."""

    matrix: list[list[float]] | None = None
    csv_text: str | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.matrix is None) == (self.csv_text is None):
            raise ValueError("provide exactly one of matrix, csv_text")
        return self


class CheckOut(BaseModel):
    name: str
    passed: bool
    value: float
    bound: float
    margin: float
    note: str = ""


class RationalOut(BaseModel):
    num: int | None
    den: int | None
    approx: float


class SpectrumRequest(BaseModel):
    graph: GraphIn | None = None
    metric: MetricIn | None = None
    tolerance: float = Field(default=1e-9, gt=0)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.graph is None) == (self.metric is None):
            raise ValueError("provide exactly one of graph, metric")
        return self


class SpectrumResponse(BaseModel):
    n: int
    eigenvalues: list[float]
    spectral_gap: float
    residual: float
    tolerance: float
    checks: list[CheckOut]


class CutOut(BaseModel):
    vertices: list[int]
    cross: float
    vol_s: float
    vol_comp: float


class CheegerRequest(BaseModel):
    graph: GraphIn
    max_n: int = 24
    tolerance: float = Field(default=1e-9, gt=0)


class CheegerResponse(BaseModel):
    n: int
    h: RationalOut
    cut: CutOut
    ties: int
    spectral_gap: float
    tolerance: float
    checks: list[CheckOut]
    equality: bool


class ClassificationOut(BaseModel):
    kind: str
    small_part: list[int] | None = None
    large_part: list[int] | None = None
    edges_in_large: int | None = None
    edge_cap: int | None = None
    edge_cap_variant: int | None = None
    match: str | None = None


class CertificateSpotOut(BaseModel):
    trials: int
    seed: int
    balanced_form_min: float
    weight_scheme_ok: bool
    weight_pair_floor: float
    rearrangement_residual_max: float


class VerifyAllRequest(BaseModel):
    graph: GraphIn
    skip_cheeger: bool = False
    cheeger_cap: int = 24
    tolerance: float = Field(default=1e-9, gt=0)
    seed: int = 0
    certificate_trials: int = Field(default=20, ge=0)


class VerifyAllResponse(BaseModel):
    n: int
    spectral_gap: float
    h: RationalOut | None
    ties: int | None
    cut: CutOut | None
    equality: bool | None
    classification: ClassificationOut | None
    checks: list[CheckOut]
    certificate: CertificateSpotOut | None
    tolerance: float
    exit_code: int


class CayleyRequest(BaseModel):
    group: str
    connection: list[list[int]] | None = None
    dvector: list[float] | None = None
    tolerance: float = Field(default=1e-9, gt=0)
    crosscheck_dense: bool = False

    @model_validator(mode="after")
    def _one_source(self):
        if (self.connection is None) == (self.dvector is None):
            raise ValueError("provide exactly one of connection, dvector")
        return self


class CayleyResponse(BaseModel):
    group: str
    order: int
    odd_order: bool
    eigenvalues: list[float]
    spectral_gap: float
    residual: float
    tolerance: float
    checks: list[CheckOut]
    dense_max_deviation: float | None = None
    exit_code: int


class CertifyRequest(BaseModel):
    seed: int = 0
    metric_trials: int = Field(default=200, ge=1)
    max_n: int = Field(default=10, ge=3)
    dvector_trials: int = Field(default=200, ge=1)
    angle_trials: int = Field(default=20, ge=1)
    cyclic_max: int = Field(default=12, ge=3)


class CertifyResponse(BaseModel):
    seed: int
    rng: str
    trials: dict[str, int]
    checks: dict[str, dict[str, Any]]
    ok: bool


class ScanRequest(BaseModel):
    family: str
    seed: int = 0
    count: int = Field(default=1, ge=1)
    n: str | None = None
    k: str | None = None
    p: float | None = None
    a: int | None = None
    b: int | None = None
    extra: int = 0
    path_len: int | None = None
    group: str | None = None
    set_size: int | None = None
    cheeger_cap: int = 24
    tolerance: float = Field(default=1e-9, gt=0)
    contrast: bool | None = None
    workers: int | None = None


class ScanResponse(BaseModel):
    records: list[dict[str, Any]]
    summary: dict[str, Any]
    exit_code: int
