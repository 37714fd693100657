"""File formats: embedding text files, tour files, and TSPLIB export.

Embeddings use the common text convention of one word per line followed by
its coordinates, all space-separated. Tour files are plain word-per-line
text; the file *is* the embedding, no scores are stored. TSPLIB output uses
explicit integral edge weights, floor(1000 * L2), so external solvers can
consume the same instance.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ParseError, ValidationError, VocabularyError
from .types import EmbeddingMatrix, Tour


def load_embeddings(path: str | os.PathLike, max_vocab: int | None = None) -> EmbeddingMatrix:
    """Load a word-per-line embedding text file.

    Each line is ``word v1 v2 ... vd``. The dimension d is inferred from the
    first line and every line must match it. Reading stops after `max_vocab`
    words (None = no limit).

    Raises ParseError for malformed lines (with the 1-based line number),
    VocabularyError for duplicate words, ValidationError if fewer than two
    words remain.
    """
    if max_vocab is not None and max_vocab < 1:
        raise ValidationError("max_vocab must be positive")
    vocab: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    d: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                raise ParseError("empty line", lineno)
            if len(fields) < 2:
                raise ParseError("expected a word and at least one coordinate", lineno)
            if d is None:
                d = len(fields) - 1
            elif len(fields) - 1 != d:
                raise ParseError(
                    f"expected {d} coordinates, found {len(fields) - 1}", lineno
                )
            word = fields[0]
            if word in seen:
                raise VocabularyError(f"duplicate word {word!r} at line {lineno}")
            try:
                vec = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError:
                raise ParseError("non-numeric coordinate", lineno) from None
            if not np.all(np.isfinite(vec)):
                raise ParseError("coordinate is NaN or infinite", lineno)
            seen.add(word)
            vocab.append(word)
            rows.append(vec)
            if max_vocab is not None and len(vocab) >= max_vocab:
                break
    if len(vocab) < 2:
        raise ValidationError(f"need at least 2 words, file provided {len(vocab)}")
    return EmbeddingMatrix(vocab, np.vstack(rows))


def write_tour(tour: Tour, emb: EmbeddingMatrix, path: str | os.PathLike) -> None:
    """Write a tour as word-per-line text, starting from canonical form."""
    if tour.n != emb.n:
        raise ValidationError(f"tour has {tour.n} nodes but embedding has {emb.n} words")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for idx in tour.order:
            fh.write(emb.vocab[int(idx)])
            fh.write("\n")


def read_tour_words(path: str | os.PathLike) -> list[str]:
    """Read the raw word sequence of a tour file (no embedding needed)."""
    with open(path, encoding="utf-8") as fh:
        words = [line.rstrip("\n") for line in fh if line.strip()]
    return words


def read_tour(path: str | os.PathLike, emb: EmbeddingMatrix) -> Tour:
    """Read a tour file back against its embedding's vocabulary.

    Every vocabulary word must appear exactly once; unknown, duplicate and
    missing words are reported by name.
    """
    words = read_tour_words(path)
    index = emb.word_index
    order = np.empty(len(words), dtype=np.int64)
    seen: set[str] = set()
    for i, w in enumerate(words):
        if w not in index:
            raise VocabularyError(f"unknown word {w!r} in tour file")
        if w in seen:
            raise VocabularyError(f"duplicate word {w!r} in tour file")
        seen.add(w)
        order[i] = index[w]
    if len(words) != emb.n:
        missing = next(w for w in emb.vocab if w not in seen)
        raise VocabularyError(f"tour file is missing word {missing!r}")
    return Tour(order)


def export_tsplib(emb: EmbeddingMatrix, path: str | os.PathLike, name: str | None = None) -> None:
    """Write a symmetric TSPLIB instance with explicit integral weights.

    Edge weights are floor(1000 * L2 distance), encoded as an upper-row
    triangle. Output bytes are deterministic for identical input.
    """
    n = emb.n
    if n < 3:
        raise ValidationError("TSPLIB export needs at least 3 points")
    if name is None:
        name = os.path.splitext(os.path.basename(os.fspath(path)))[0] or "instance"
    X = emb.vectors
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"NAME: {name}\n")
        fh.write("TYPE: TSP\n")
        fh.write(f"COMMENT: {n} words, weight = floor(1000 * euclidean distance)\n")
        fh.write(f"DIMENSION: {n}\n")
        fh.write("EDGE_WEIGHT_TYPE: EXPLICIT\n")
        fh.write("EDGE_WEIGHT_FORMAT: UPPER_ROW\n")
        fh.write("EDGE_WEIGHT_SECTION\n")
        for i in range(n - 1):
            row = np.linalg.norm(X[i + 1 :] - X[i], axis=1)
            weights = np.floor(1000.0 * row).astype(np.int64)
            fh.write(" ".join(str(int(wgt)) for wgt in weights))
            fh.write("\n")
        fh.write("EOF\n")
