"""Synthetic fixtures shared across tests: circle embeddings and clustered corpora."""

from __future__ import annotations

import numpy as np

from wordring.docsim import Document
from wordring.types import EmbeddingMatrix, Tour


def circle_embedding(seed: int, n: int = 200, radius: float = 1.0,
                     noise_frac: float = 0.01) -> tuple[EmbeddingMatrix, Tour]:
    """n points on a circle with small radial noise, node ids shuffled.

    Returns the embedding and the ground-truth cyclic order. The radial
    noise sigma is `noise_frac` times the inter-point spacing.
    """
    rng = np.random.default_rng(seed)
    spacing = 2 * np.pi * radius / n
    perm = rng.permutation(n)            # angular slot -> node id
    slot_of = np.argsort(perm)           # node id -> angular slot
    angles = 2 * np.pi * slot_of / n
    radial = radius + rng.normal(0.0, noise_frac * spacing, size=n)
    X = np.stack([radial * np.cos(angles), radial * np.sin(angles)], axis=1)
    vocab = [f"w{i}" for i in range(n)]
    return EmbeddingMatrix(vocab, X), Tour(perm)


def clustered_corpus(
    seed: int,
    n_vocab: int = 500,
    n_classes: int = 4,
    n_docs: int = 400,
    doc_len: int = 3,
    spread: float = 50.0,
    n_train: int = 300,
    extra_dims: int = 14,
) -> tuple[EmbeddingMatrix, list[Document], list[Document], Tour]:
    """A corpus whose class vocabularies cluster along a hidden cyclic layout.

    Words sit on a circle (radius 10, shuffled ids, small noise in extra
    dimensions); each class owns one arc and documents sample word slots
    around their class center with the given spread. Small `doc_len` plus
    large `spread` makes exact word overlap rare, so classification has to
    exploit the 1D neighborhood structure.
    """
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_vocab)
    slot_of = np.argsort(perm)
    angles = 2 * np.pi * np.arange(n_vocab) / n_vocab
    X = np.zeros((n_vocab, 2 + extra_dims))
    X[:, 0] = 10.0 * np.cos(angles[slot_of])
    X[:, 1] = 10.0 * np.sin(angles[slot_of])
    if extra_dims:
        X[:, 2:] = rng.normal(0.0, 0.01, size=(n_vocab, extra_dims))
    emb = EmbeddingMatrix([f"w{i}" for i in range(n_vocab)], X)

    arc = n_vocab // n_classes
    docs: list[Document] = []
    for i in range(n_docs):
        c = i % n_classes
        center = c * arc + arc // 2
        slots = (center + np.rint(rng.normal(0.0, spread, size=doc_len)).astype(int)) % n_vocab
        docs.append(
            Document(id=f"d{i}", label=f"C{c}", tokens=tuple(int(perm[s]) for s in slots))
        )
    order = rng.permutation(n_docs)
    train = [docs[i] for i in order[:n_train]]
    test = [docs[i] for i in order[n_train:]]
    return emb, train, test, Tour(perm)


def separable_corpus(seed: int, **kw) -> tuple[EmbeddingMatrix, list[Document], list[Document], Tour]:
    """Easy variant: long documents, tight class arcs, zero-error regime."""
    kw.setdefault("doc_len", 8)
    kw.setdefault("spread", 15.0)
    return clustered_corpus(seed, **kw)


def write_embeddings(path, emb: EmbeddingMatrix) -> None:
    # repr gives shortest round-trip floats, so reloading reproduces the matrix
    with open(path, "w", encoding="utf-8") as fh:
        for word, row in zip(emb.vocab, emb.vectors):
            fh.write(word + " " + " ".join(repr(float(v)) for v in row) + "\n")


def write_corpus(path, docs: list[Document], emb: EmbeddingMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(doc.label + "\t" + " ".join(emb.vocab[t] for t in doc.tokens) + "\n")
