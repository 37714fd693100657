"""Cyclic one-dimensional word embeddings.

Orders a vocabulary along a near-optimal traveling-salesman tour of its
high-dimensional embedding vectors, certifies tour quality with a one-tree
lower bound, and evaluates orderings via blurred bag-of-words document
classification.
"""

from .baselines import pca_order, pca_scores, rand_proj_order
from .bound import held_karp_ascent, min_one_tree
from .docsim import (
    BlurredBow,
    Document,
    blurred_bow,
    bow,
    cross_validate,
    knn_classify,
    l1_distance,
)
from .errors import WordringError
from .io import export_tsplib, load_embeddings, read_tour, write_tour
from .tsp import (
    CandidateGraph,
    brute_force_tour,
    build_candidates,
    greedy_tour,
    local_search,
    tour_cost,
)
from .types import EmbeddingMatrix, Tour

__version__ = "0.1.0"

__all__ = [
    "BlurredBow",
    "CandidateGraph",
    "Document",
    "EmbeddingMatrix",
    "Tour",
    "WordringError",
    "blurred_bow",
    "bow",
    "brute_force_tour",
    "build_candidates",
    "cross_validate",
    "export_tsplib",
    "greedy_tour",
    "held_karp_ascent",
    "knn_classify",
    "l1_distance",
    "load_embeddings",
    "local_search",
    "min_one_tree",
    "pca_order",
    "pca_scores",
    "rand_proj_order",
    "read_tour",
    "tour_cost",
    "write_tour",
]
