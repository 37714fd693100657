"""End-to-end workflows shared by the CLI and the HTTP service.

Each function loads its inputs from files, runs the corresponding pipeline,
and returns a plain result object the callers render (text, CSV, or JSON).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import baselines, docsim, tsp
from . import io as wio
from .bound import held_karp_ascent
from .errors import ValidationError, VocabularyError
from .types import Tour

METHODS = ("bow", "blurred:tour", "blurred:randproj", "blurred:pca1", "blurred:pca4")


@dataclass
class TourRun:
    n: int
    d: int
    cost: float
    seconds: float
    moves: int
    budget_exhausted: bool
    output: str


def run_tour(
    embeddings_path: str,
    output_path: str,
    max_vocab: int | None = None,
    candidates: int = 8,
    max_moves: int | None = None,
    time_limit: float | None = None,
    threads: int = 1,
) -> TourRun:
    """Load embeddings, build the candidate graph, greedy-seed, locally optimize, write the tour."""
    emb = wio.load_embeddings(embeddings_path, max_vocab)
    t0 = time.monotonic()
    graph = tsp.build_candidates(emb, candidates, threads=threads)
    seed_tour = tsp.greedy_tour(emb, start=0)
    result = tsp.local_search(emb, seed_tour, graph, max_moves=max_moves, time_limit=time_limit)
    seconds = time.monotonic() - t0
    wio.write_tour(result.tour, emb, output_path)
    return TourRun(
        n=emb.n,
        d=emb.d,
        cost=result.cost,
        seconds=seconds,
        moves=result.moves,
        budget_exhausted=result.budget_exhausted,
        output=str(output_path),
    )


@dataclass
class BoundRun:
    n: int
    tour_cost: float
    lower_bound: float
    ratio: float
    iterations: int
    converged: bool


def run_bound(
    embeddings_path: str,
    tour_path: str,
    iterations: int = 50,
    max_vocab: int | None = None,
) -> BoundRun:
    """Certify a tour: cost, one-tree lower bound, and their ratio."""
    emb = wio.load_embeddings(embeddings_path, max_vocab)
    tour = wio.read_tour(tour_path, emb)
    cost = tsp.tour_cost(emb, tour)
    ascent = held_karp_ascent(emb, iterations, upper_bound=cost)
    if ascent.bound > 0:
        ratio = cost / ascent.bound
    else:
        ratio = 1.0 if cost == 0 else float("inf")
    return BoundRun(
        n=emb.n,
        tour_cost=cost,
        lower_bound=ascent.bound,
        ratio=ratio,
        iterations=ascent.iterations_run,
        converged=ascent.converged,
    )


def neighbors_window(words: list[str], word: str, radius: int) -> list[str]:
    """The 2*radius+1 words centered on `word` along a cyclic word sequence."""
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    try:
        center = words.index(word)
    except ValueError:
        raise VocabularyError(f"unknown word {word!r}") from None
    n = len(words)
    return [words[(center + off) % n] for off in range(-radius, radius + 1)]


def run_neighbors(tour_path: str, word: str, radius: int = 5) -> list[str]:
    """Look up a word's tour neighborhood straight from a tour file."""
    return neighbors_window(wio.read_tour_words(tour_path), word, radius)


@dataclass
class ClassifyRun:
    method: str
    k: int
    variance: float
    width: int
    cv_error_pct: float | None  # None when hyperparameters were given, not cross-validated
    test_error_pct: float
    mean_comparison_ns: float
    train_docs: int
    test_docs: int
    oov_dropped: int


def _ordering_for(method: str, emb, tour_path: str | None, seed: int) -> tuple[Tour, bool]:
    """Resolve a method name to (ordering, uses_blur)."""
    if method == "bow":
        return Tour(np.arange(emb.n)), False
    if method == "blurred:tour":
        if tour_path is None:
            raise ValidationError("method blurred:tour requires a tour file")
        return wio.read_tour(tour_path, emb), True
    if method == "blurred:randproj":
        return baselines.rand_proj_order(emb, seed), True
    if method == "blurred:pca1":
        return baselines.pca_order(emb, 1), True
    if method == "blurred:pca4":
        return baselines.pca_order(emb, 4), True
    raise ValidationError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def run_classify(
    embeddings_path: str,
    train_path: str,
    test_path: str,
    methods: list[str],
    tour_path: str | None = None,
    seed: int = 0,
    width: int = docsim.DEFAULT_WIDTH,
    max_vocab: int | None = None,
    k: int | None = None,
    variance: float | None = None,
    threads: int = 1,
) -> list[ClassifyRun]:
    """Cross-validate on the training corpus, evaluate on the test corpus.

    One result row per method; hyperparameters (k, variance) are re-selected
    per method since each ordering changes the geometry. Passing both `k`
    and `variance` skips cross-validation and pins them for every method.
    """
    if (k is None) != (variance is None):
        raise ValidationError("give both k and variance to pin hyperparameters, or neither")
    emb = wio.load_embeddings(embeddings_path, max_vocab)
    train = docsim.load_corpus(train_path, emb)
    test = docsim.load_corpus(test_path, emb)
    rows: list[ClassifyRun] = []
    for method in methods:
        ordering, uses_blur = _ordering_for(method, emb, tour_path, seed)
        width_eff = width if uses_blur else 0
        if k is None:
            cv = docsim.cross_validate(train.documents, ordering, width=width_eff, seed=seed)
            k_sel, var_sel, cv_error = cv.k, cv.variance, 100.0 * cv.error
        else:
            k_sel, var_sel, cv_error = k, variance, None
        result = docsim.evaluate(
            train.documents, test.documents, ordering, width_eff, k_sel, var_sel,
            threads=threads,
        )
        rows.append(
            ClassifyRun(
                method=method,
                k=k_sel,
                variance=var_sel,
                width=width_eff,
                cv_error_pct=cv_error,
                test_error_pct=100.0 * result.error,
                mean_comparison_ns=result.mean_comparison_ns,
                train_docs=len(train.documents),
                test_docs=len(test.documents),
                oov_dropped=train.oov_dropped + test.oov_dropped,
            )
        )
    return rows


@dataclass
class ExportRun:
    n: int
    d: int
    output: str


def run_export(embeddings_path: str, output_path: str, max_vocab: int | None = None) -> ExportRun:
    emb = wio.load_embeddings(embeddings_path, max_vocab)
    wio.export_tsplib(emb, output_path)
    return ExportRun(n=emb.n, d=emb.d, output=str(output_path))
