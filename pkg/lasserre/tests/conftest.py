# lasserre/tests/conftest.py

"""Fixtures compartilhadas: instâncias pequenas com ótimo conhecido."""

from itertools import combinations

import numpy as np
import pytest

from app.schemas import ProblemSpec


def arestas(pares, peso: float = 1.0):
    return [(u, v, peso) for (u, v) in pares]


def completo(n: int):
    return arestas(combinations(range(n), 2))


def ciclo(n: int):
    return arestas((i, (i + 1) % n) for i in range(n))


def spec_de(kind: str, n: int, edges, **params) -> ProblemSpec:
    return ProblemSpec(kind=kind, n=n, edges=edges, params=params)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def aresta_max_cut():
    return spec_de("max-cut", 2, [(0, 1, 1.0)])


@pytest.fixture
def triangulo_max_cut():
    return spec_de("max-cut", 3, ciclo(3))


@pytest.fixture
def k4_bissecao():
    return spec_de("min-bisection", 4, completo(4))


@pytest.fixture
def dois_triangulos():
    """Dois triângulos ligados pela ponte (2, 3)."""
    pares = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    return spec_de("sparsest-cut", 6, arestas(pares))
