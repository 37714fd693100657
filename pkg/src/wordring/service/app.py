"""FastAPI service wrapping the core package.

Batch endpoints (/tour, /bound, /classify, /export) run the same workflows
as the CLI. Tour files can also be loaded once into an in-memory registry
(POST /tours) and then queried repeatedly for word neighborhoods, which is
the long-running use case a one-dimensional embedding is built for.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import workflows
from ..errors import WordringError
from ..io import read_tour_words
from . import schemas


def create_app() -> FastAPI:
    app = FastAPI(title="wordring", description="cyclic 1D word embedding service")
    loaded_tours: dict[str, list[str]] = {}

    @app.exception_handler(WordringError)
    async def domain_error(request: Request, exc: WordringError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def missing_file(request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse()

    @app.post("/tour", response_model=schemas.TourResponse)
    def compute_tour(req: schemas.TourRequest) -> schemas.TourResponse:
        run = workflows.run_tour(
            req.embeddings,
            req.output,
            max_vocab=req.max_vocab,
            candidates=req.candidates,
            max_moves=req.budget,
            time_limit=req.time_limit,
            threads=req.threads,
        )
        return schemas.TourResponse(**run.__dict__)

    @app.post("/bound", response_model=schemas.BoundResponse)
    def compute_bound(req: schemas.BoundRequest) -> schemas.BoundResponse:
        run = workflows.run_bound(
            req.embeddings, req.tour, iterations=req.iterations, max_vocab=req.max_vocab
        )
        return schemas.BoundResponse(**run.__dict__)

    @app.post("/tours", response_model=schemas.LoadTourResponse)
    def load_tour(req: schemas.LoadTourRequest) -> schemas.LoadTourResponse:
        name = req.name or os.path.splitext(os.path.basename(req.path))[0]
        words = read_tour_words(req.path)
        if not words:
            raise HTTPException(status_code=400, detail=f"tour file {req.path!r} is empty")
        loaded_tours[name] = words
        return schemas.LoadTourResponse(name=name, n=len(words))

    @app.get("/tours", response_model=schemas.TourListResponse)
    def list_tours() -> schemas.TourListResponse:
        return schemas.TourListResponse(tours={k: len(v) for k, v in loaded_tours.items()})

    @app.get("/tours/{name}/neighbors", response_model=schemas.NeighborsResponse)
    def neighbors(name: str, word: str, radius: int = 5) -> schemas.NeighborsResponse:
        words = loaded_tours.get(name)
        if words is None:
            raise HTTPException(status_code=404, detail=f"no loaded tour named {name!r}")
        window = workflows.neighbors_window(words, word, radius)
        return schemas.NeighborsResponse(tour=name, center=word, radius=radius, words=window)

    @app.post("/classify", response_model=schemas.ClassifyResponse)
    def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
        rows = workflows.run_classify(
            req.embeddings,
            req.train,
            req.test,
            methods=req.methods,
            tour_path=req.tour,
            seed=req.seed,
            width=req.width,
            max_vocab=req.max_vocab,
            k=req.k,
            variance=req.variance,
            threads=req.threads,
        )
        return schemas.ClassifyResponse(rows=[schemas.ClassifyRow(**r.__dict__) for r in rows])

    @app.post("/export", response_model=schemas.ExportResponse)
    def export(req: schemas.ExportRequest) -> schemas.ExportResponse:
        run = workflows.run_export(req.embeddings, req.output, max_vocab=req.max_vocab)
        return schemas.ExportResponse(**run.__dict__)

    return app


app = create_app()
