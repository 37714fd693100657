"""Core domain types: an embedding matrix and a cyclic word tour."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import ValidationError


class EmbeddingMatrix:
    """Dense word embeddings: n vocabulary words, one d-dimensional row each.

    Vectors are stored as float64. The vocabulary must consist of distinct,
    non-empty, whitespace-free strings and n must be at least 2.
    """

    def __init__(self, vocab: list[str], vectors: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2:
            raise ValidationError("vectors must be a 2-d array")
        if len(vocab) != vectors.shape[0]:
            raise ValidationError(
                f"vocab has {len(vocab)} words but vectors has {vectors.shape[0]} rows"
            )
        if vectors.shape[0] < 2:
            raise ValidationError("need at least 2 words")
        if vectors.shape[1] < 1:
            raise ValidationError("need at least 1 dimension")
        if not np.all(np.isfinite(vectors)):
            raise ValidationError("vectors contain NaN or Inf")
        seen = set()
        for w in vocab:
            if not w or w != w.strip() or any(c.isspace() for c in w):
                raise ValidationError(f"invalid word {w!r}: empty or contains whitespace")
            if w in seen:
                raise ValidationError(f"duplicate word {w!r}")
            seen.add(w)
        self.vocab: list[str] = list(vocab)
        self.vectors: np.ndarray = vectors

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @cached_property
    def word_index(self) -> dict[str, int]:
        """Word -> row index lookup."""
        return {w: i for i, w in enumerate(self.vocab)}

    def __repr__(self) -> str:
        return f"EmbeddingMatrix(n={self.n}, d={self.d})"


def canonical_order(order: np.ndarray) -> np.ndarray:
    """Rotate/reflect a cyclic permutation into canonical form.

    Canonical form starts at index 0 and, for n >= 3, has order[1] < order[-1].
    This pins down one representative of each cyclic equivalence class so tours
    can be compared and serialized reproducibly.
    """
    order = np.asarray(order, dtype=np.int64)
    n = order.shape[0]
    start = int(np.nonzero(order == 0)[0][0])
    order = np.roll(order, -start)
    if n >= 3 and order[1] > order[-1]:
        order = np.concatenate([order[:1], order[:0:-1]])
    return order


class Tour:
    """A permutation of {0, ..., n-1} interpreted as a cycle.

    Always held in canonical form (see :func:`canonical_order`), so two Tour
    objects describe the same cycle iff their order arrays are equal.
    """

    def __init__(self, order: np.ndarray, _canonical: bool = False):
        order = np.asarray(order, dtype=np.int64)
        if order.ndim != 1 or order.shape[0] < 2:
            raise ValidationError("tour needs at least 2 indices")
        n = order.shape[0]
        counts = np.bincount(order, minlength=n) if order.min() >= 0 else None
        if counts is None or counts.shape[0] != n or not np.all(counts == 1):
            raise ValidationError("order is not a permutation of 0..n-1")
        self.order: np.ndarray = order if _canonical else canonical_order(order)
        self.order.setflags(write=False)

    @property
    def n(self) -> int:
        return self.order.shape[0]

    @cached_property
    def positions(self) -> np.ndarray:
        """positions[word_index] = position of that word along the cycle."""
        pos = np.empty(self.n, dtype=np.int64)
        pos[self.order] = np.arange(self.n)
        pos.setflags(write=False)
        return pos

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tour):
            return NotImplemented
        return bool(np.array_equal(self.order, other.order))

    def __hash__(self) -> int:
        return hash(self.order.tobytes())

    def __repr__(self) -> str:
        head = ", ".join(str(i) for i in self.order[:6])
        tail = "..." if self.n > 6 else ""
        return f"Tour([{head}{tail}], n={self.n})"
