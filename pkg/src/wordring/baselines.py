"""Comparison orderings: random linear projection and PCA components.

Both return canonicalized cyclic tours so downstream code (neighbor
lookups, blurred bag-of-words) is agnostic to where an ordering came from.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateComponentError, ValidationError
from .types import EmbeddingMatrix, Tour

POWER_ITERATION_TOL = 1e-9
POWER_ITERATION_CAP = 10_000
_EIGENVALUE_FLOOR = 1e-12


def rand_proj_order(emb: EmbeddingMatrix, seed: int) -> Tour:
    """Order words by their projection onto a random Gaussian direction.

    Ascending projection value; ties keep smaller word index first.
    Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal(emb.d)
    scores = emb.vectors @ direction
    order = np.argsort(scores, kind="stable")
    return Tour(order)


def _power_iteration(cov: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    d = cov.shape[0]
    v = rng.standard_normal(d)
    norm = np.linalg.norm(v)
    v = v / norm
    for _ in range(POWER_ITERATION_CAP):
        w = cov @ v
        wn = float(np.linalg.norm(w))
        if wn <= _EIGENVALUE_FLOOR:
            return v, 0.0
        w = w / wn
        if float(w @ v) < 0.0:  # eigenvector sign is arbitrary; keep it steady
            w = -w
        delta = float(np.linalg.norm(w - v))
        v = w
        if delta <= POWER_ITERATION_TOL:
            break
    eigenvalue = float(v @ (cov @ v))
    return v, eigenvalue


def pca_scores(emb: EmbeddingMatrix, component: int) -> np.ndarray:
    """Per-word scores on the j-th principal axis (j is 1-based), sign-fixed.

    Axes come from power iteration with Hotelling deflation on the sample
    covariance of mean-centered rows. The axis sign is chosen so the word
    with the largest absolute score has a positive score.
    """
    if component < 1:
        raise ValidationError("component must be >= 1")
    if component > emb.d:
        raise ValidationError(f"component {component} exceeds dimension {emb.d}")
    if emb.n <= component:
        raise ValidationError(f"need more than {component} rows for component {component}")
    centered = emb.vectors - emb.vectors.mean(axis=0)
    cov = (centered.T @ centered) / (emb.n - 1)
    rng = np.random.default_rng(0x5EED)
    axis = None
    for j in range(component):
        axis, eigenvalue = _power_iteration(cov, rng)
        if eigenvalue <= _EIGENVALUE_FLOOR:
            raise DegenerateComponentError(
                f"principal component {j + 1} is undefined (eigenvalue {eigenvalue:.3e})"
            )
        cov = cov - eigenvalue * np.outer(axis, axis)
    scores = centered @ axis
    top = int(np.argmax(np.abs(scores)))
    if scores[top] < 0.0:
        scores = -scores
    return scores


def pca_order(emb: EmbeddingMatrix, component: int) -> Tour:
    """Order words ascending by their j-th principal-axis score.

    Score ties keep the smaller word index first.
    """
    order = np.argsort(pca_scores(emb, component), kind="stable")
    return Tour(order)
