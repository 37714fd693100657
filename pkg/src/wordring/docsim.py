"""Blurred bag-of-words document vectors over a word ordering.

Each token contributes a truncated Gaussian bump of mass around its tour
position (cyclic offsets -w..w), the document vector is L1-normalized, and
documents are compared with the L1 distance. With w = 0 this degrades
exactly to the plain normalized bag of words. Classification is k-nearest
neighbors with 5-fold cross-validated hyperparameters.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterMismatchError, ParseError, ValidationError
from .types import EmbeddingMatrix, Tour

logger = logging.getLogger(__name__)

K_GRID: tuple[int, ...] = tuple(range(1, 20))
VARIANCE_GRID: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
DEFAULT_WIDTH = 10

# Dense vectors are used for bulk classification when the vocabulary is at
# most this large; above it the sparse per-pair path keeps memory bounded.
_DENSE_LIMIT = 8192


@dataclass(frozen=True)
class Document:
    """A bag of word indices (multiset) with a class label and stable id."""

    id: str
    label: str
    tokens: tuple[int, ...]

    def __post_init__(self):
        if len(self.tokens) < 1:
            raise ValidationError(f"document {self.id!r} has no tokens")


@dataclass
class Corpus:
    documents: list[Document]
    oov_dropped: int = 0
    skipped_empty: int = 0

    @property
    def labels(self) -> list[str]:
        return [d.label for d in self.documents]


def load_corpus(path, emb: EmbeddingMatrix) -> Corpus:
    """Read a `label TAB space-separated-tokens` file against a vocabulary.

    Tokens outside the vocabulary are dropped (count recorded); documents
    left empty by that are skipped, not errors.
    """
    index = emb.word_index
    documents: list[Document] = []
    oov = 0
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParseError("expected 'label<TAB>tokens'", lineno)
            label, _, rest = line.partition("\t")
            if not label:
                raise ParseError("empty label", lineno)
            token_ids = []
            for tok in rest.split():
                idx = index.get(tok)
                if idx is None:
                    oov += 1
                else:
                    token_ids.append(idx)
            if not token_ids:
                skipped += 1
                continue
            documents.append(Document(id=f"line{lineno}", label=label, tokens=tuple(token_ids)))
    total_tokens = oov + sum(len(d.tokens) for d in documents)
    if oov and total_tokens:
        logger.info("dropped %d/%d out-of-vocabulary tokens (%.1f%%)",
                    oov, total_tokens, 100.0 * oov / total_tokens)
    return Corpus(documents=documents, oov_dropped=oov, skipped_empty=skipped)


@dataclass
class BlurredBow:
    """L1-normalized sparse mass over tour positions."""

    mass: dict[int, float]
    n_positions: int
    width: int
    variance: float


def _kernel(width: int, variance: float) -> np.ndarray:
    if variance <= 0.0:
        raise ValidationError("variance must be positive")
    if width < 0:
        raise ValidationError("width must be >= 0")
    offsets = np.arange(-width, width + 1, dtype=np.float64)
    return np.exp(-(offsets**2) / (2.0 * variance))


def blurred_bow(doc: Document, tour: Tour, width: int = DEFAULT_WIDTH,
                variance: float = 1.0) -> BlurredBow:
    """Spread each token's mass over cyclic tour offsets -width..width.

    Gaussian bump exp(-delta^2 / (2 variance)), truncated at +-width, summed
    over the token multiset and L1-normalized once at the end. O(width *
    tokens) regardless of vocabulary size.
    """
    kernel = _kernel(width, variance)
    n = tour.n
    positions = tour.positions
    mass: dict[int, float] = {}
    # sorted items give a canonical accumulation order, so documents with
    # equal token multisets produce bit-identical vectors
    for token, count in sorted(Counter(doc.tokens).items()):
        if not 0 <= token < n:
            raise ValidationError(f"token index {token} outside tour of size {n}")
        p = int(positions[token])
        for off in range(-width, width + 1):
            slot = (p + off) % n
            mass[slot] = mass.get(slot, 0.0) + count * float(kernel[off + width])
    total = sum(mass.values())
    return BlurredBow(
        mass={p: v / total for p, v in mass.items()},
        n_positions=n,
        width=width,
        variance=variance,
    )


def bow(doc: Document, tour: Tour) -> BlurredBow:
    """Plain normalized bag of words: the width-0 special case."""
    return blurred_bow(doc, tour, width=0, variance=1.0)


def l1_distance(a: BlurredBow, b: BlurredBow) -> float:
    """Sum of |a - b| over the union of supports."""
    if (a.n_positions, a.width, a.variance) != (b.n_positions, b.width, b.variance):
        raise ParameterMismatchError(
            f"incompatible vectors: (n={a.n_positions}, w={a.width}, var={a.variance}) "
            f"vs (n={b.n_positions}, w={b.width}, var={b.variance})"
        )
    bm = b.mass
    total = 0.0
    for p, v in a.mass.items():
        total += abs(v - bm.get(p, 0.0))
    am = a.mass
    for p, v in bm.items():
        if p not in am:
            total += v
    return total


def _majority_label(ranked_labels: Sequence[str]) -> str:
    # Among tied vote counts the nearest member's label wins.
    counts = Counter(ranked_labels)
    top = max(counts.values())
    for lab in ranked_labels:
        if counts[lab] == top:
            return lab
    raise AssertionError("unreachable")


def knn_classify(vectors: Sequence[BlurredBow], labels: Sequence[str],
                 query: BlurredBow, k: int) -> str:
    """Majority label among the k nearest training vectors by L1 distance.

    Distance ties prefer the smaller training index; vote ties go to the
    label of the nearest member among the tied labels.
    """
    if len(vectors) == 0:
        raise ValidationError("empty training set")
    if len(vectors) != len(labels):
        raise ValidationError("vectors and labels differ in length")
    if not 1 <= k <= len(vectors):
        raise ValidationError(f"k={k} out of range for {len(vectors)} training vectors")
    ranked = sorted(range(len(vectors)), key=lambda i: (l1_distance(query, vectors[i]), i))
    return _majority_label([labels[i] for i in ranked[:k]])


# ---------------------------------------------------------------------------
# Bulk classification. Small vocabularies use dense rows so distance blocks
# vectorize; ranking semantics are identical to knn_classify.


def _dense_rows(docs: Sequence[Document], tour: Tour, width: int, variance: float) -> np.ndarray:
    kernel = _kernel(width, variance)
    n = tour.n
    positions = tour.positions
    offsets = np.arange(-width, width + 1)
    rows = np.zeros((len(docs), n), dtype=np.float64)
    for r, doc in enumerate(docs):
        row = rows[r]
        for token, count in sorted(Counter(doc.tokens).items()):
            slots = (positions[token] + offsets) % n
            np.add.at(row, slots, count * kernel)
        row /= row.sum()
    return rows


class _VectorSet:
    """Blurred vectors for a document list, dense or sparse by vocabulary size."""

    def __init__(self, docs: Sequence[Document], tour: Tour, width: int, variance: float):
        self.dense = tour.n <= _DENSE_LIMIT
        if self.dense:
            self.rows = _dense_rows(docs, tour, width, variance)
        else:
            self.sparse = [blurred_bow(d, tour, width, variance) for d in docs]

    def __len__(self) -> int:
        return self.rows.shape[0] if self.dense else len(self.sparse)

    def distances(self, train_idx: np.ndarray, query: int) -> np.ndarray:
        """L1 distances from one query vector to the selected training vectors."""
        if self.dense:
            return np.abs(self.rows[train_idx] - self.rows[query]).sum(axis=1)
        q = self.sparse[query]
        return np.array([l1_distance(q, self.sparse[i]) for i in train_idx])


def _rank(dists: np.ndarray) -> np.ndarray:
    # Stable sort: equal distances keep ascending training-index order.
    return np.argsort(dists, kind="stable")


@dataclass
class CVResult:
    k: int
    variance: float
    error: float


def assign_folds(n_docs: int, n_folds: int, seed: int) -> np.ndarray:
    """Seeded round-robin fold assignment over a shuffled document order."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_docs)
    folds = np.empty(n_docs, dtype=np.int64)
    folds[perm] = np.arange(n_docs) % n_folds
    return folds


def cross_validate(
    docs: Sequence[Document],
    tour: Tour,
    width: int = DEFAULT_WIDTH,
    seed: int = 0,
    n_folds: int = 5,
    k_grid: Sequence[int] = K_GRID,
    variance_grid: Sequence[float] = VARIANCE_GRID,
) -> CVResult:
    """Grid-search (k, variance) by seeded n-fold cross-validation.

    Minimizes mean fold error; ties prefer smaller variance, then smaller k.
    The caller retrains on the full set with the returned pair.
    """
    if len(docs) < 5:
        raise ValidationError(f"cross-validation needs at least 5 documents, got {len(docs)}")
    labels = [d.label for d in docs]
    if len(set(labels)) < 2:
        raise ValidationError("cross-validation needs at least 2 classes")
    if width == 0:
        variance_grid = variance_grid[:1]  # kernel is a point mass; variance is inert
    folds = assign_folds(len(docs), n_folds, seed)
    max_k = max(k_grid)

    best: CVResult | None = None
    for variance in variance_grid:
        vectors = _VectorSet(docs, tour, width, variance)
        fold_error_sum = {k: 0.0 for k in k_grid}
        folds_used = 0
        for f in range(n_folds):
            train_idx = np.nonzero(folds != f)[0]
            test_idx = np.nonzero(folds == f)[0]
            if len(train_idx) == 0 or len(test_idx) == 0:
                continue
            folds_used += 1
            train_labels = [labels[i] for i in train_idx]
            wrong = {k: 0 for k in k_grid}
            for q in test_idx:
                ranked = _rank(vectors.distances(train_idx, int(q)))[:max_k]
                ranked_labels = [train_labels[i] for i in ranked]
                for k in k_grid:
                    k_eff = min(k, len(train_idx))
                    if _majority_label(ranked_labels[:k_eff]) != labels[q]:
                        wrong[k] += 1
            for k in k_grid:
                fold_error_sum[k] += wrong[k] / len(test_idx)
        for k in k_grid:
            err = fold_error_sum[k] / folds_used
            if best is None or err < best.error:
                best = CVResult(k=k, variance=variance, error=err)
    assert best is not None
    return best


@dataclass
class EvalResult:
    error: float
    predictions: list[str]
    k: int
    variance: float
    width: int
    mean_comparison_ns: float
    comparisons: int


def evaluate(
    train_docs: Sequence[Document],
    test_docs: Sequence[Document],
    tour: Tour,
    width: int,
    k: int,
    variance: float,
    min_timed_comparisons: int = 10_000,
    threads: int = 1,
) -> EvalResult:
    """Classify the test set against the full training set and time it.

    Test documents are independent, so prediction may fan out over a thread
    pool; results are collected by index and identical for any `threads`.
    The reported mean nanoseconds per document comparison comes from a
    dedicated single-threaded measurement loop on a monotonic clock over at
    least `min_timed_comparisons` distance evaluations.
    """
    if not train_docs or not test_docs:
        raise ValidationError("need non-empty train and test sets")
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    all_docs = list(train_docs) + list(test_docs)
    vectors = _VectorSet(all_docs, tour, width, variance)
    n_train = len(train_docs)
    train_idx = np.arange(n_train)
    train_labels = [d.label for d in train_docs]
    k_eff = min(k, n_train)

    def predict(t: int) -> str:
        ranked = _rank(vectors.distances(train_idx, n_train + t))[:k_eff]
        return _majority_label([train_labels[i] for i in ranked])

    if threads == 1:
        predictions = [predict(t) for t in range(len(test_docs))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            predictions = list(pool.map(predict, range(len(test_docs))))

    per_pass = n_train * len(test_docs)
    passes = max(1, -(-min_timed_comparisons // per_pass))
    start = time.perf_counter_ns()
    for _ in range(passes):
        for t in range(len(test_docs)):
            vectors.distances(train_idx, n_train + t)
    elapsed = time.perf_counter_ns() - start
    comparisons = per_pass * passes

    wrong = sum(1 for d, p in zip(test_docs, predictions) if d.label != p)
    return EvalResult(
        error=wrong / len(test_docs),
        predictions=predictions,
        k=k,
        variance=variance,
        width=width,
        mean_comparison_ns=elapsed / comparisons,
        comparisons=comparisons,
    )
