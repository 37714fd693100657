import numpy as np
import pytest

from wordring.types import EmbeddingMatrix


@pytest.fixture
def square() -> EmbeddingMatrix:
    """Unit square corners in visiting order 0,1,2,3 around the perimeter."""
    return EmbeddingMatrix(
        ["a", "b", "c", "d"],
        np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
    )


@pytest.fixture
def triangle() -> EmbeddingMatrix:
    """Equilateral triangle with side 1."""
    return EmbeddingMatrix(
        ["a", "b", "c"],
        np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]]),
    )


def random_embedding(seed: int, n: int, d: int) -> EmbeddingMatrix:
    rng = np.random.default_rng(seed)
    return EmbeddingMatrix([f"w{i}" for i in range(n)], rng.uniform(0.0, 1.0, size=(n, d)))
