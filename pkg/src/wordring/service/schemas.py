"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class TourRequest(BaseModel):
    embeddings: str = Field(description="path to a word-per-line embedding text file")
    output: str = Field(description="path to write the tour file")
    max_vocab: int | None = None
    candidates: int = 8
    budget: int | None = Field(default=None, description="max improving moves")
    time_limit: float | None = Field(default=None, description="seconds")
    threads: int = 1


class TourResponse(BaseModel):
    n: int
    d: int
    cost: float
    seconds: float
    moves: int
    budget_exhausted: bool
    output: str


class BoundRequest(BaseModel):
    embeddings: str
    tour: str
    iterations: int = 50
    max_vocab: int | None = None


class BoundResponse(BaseModel):
    n: int
    tour_cost: float
    lower_bound: float
    ratio: float
    iterations: int
    converged: bool


class LoadTourRequest(BaseModel):
    path: str
    name: str | None = Field(default=None, description="registry key; defaults to the file stem")


class LoadTourResponse(BaseModel):
    name: str
    n: int


class TourListResponse(BaseModel):
    tours: dict[str, int]  # name -> vocabulary size


class NeighborsResponse(BaseModel):
    tour: str
    center: str
    radius: int
    words: list[str]


class ClassifyRequest(BaseModel):
    embeddings: str
    train: str
    test: str
    methods: list[str] = ["bow"]
    tour: str | None = None
    seed: int = 0
    width: int = 10
    max_vocab: int | None = None
    k: int | None = Field(default=None, description="pin k instead of cross-validating")
    variance: float | None = Field(default=None, description="pin variance instead of cross-validating")
    threads: int = 1


class ClassifyRow(BaseModel):
    method: str
    k: int
    variance: float
    width: int
    cv_error_pct: float | None
    test_error_pct: float
    mean_comparison_ns: float
    train_docs: int
    test_docs: int
    oov_dropped: int


class ClassifyResponse(BaseModel):
    rows: list[ClassifyRow]


class ExportRequest(BaseModel):
    embeddings: str
    output: str
    max_vocab: int | None = None


class ExportResponse(BaseModel):
    n: int
    d: int
    output: str
