# lasserre/app/services/embed.py

"""
Embeddings e quantidades espectrais

- Fatoração M = Vᵀ V (vetores x_S(α)) a partir da matriz de momentos
- Espectro do Laplaciano normalizado do grafo da instância
- Erro de projeção de colunas (usado na seleção de sementes)
"""

import logging
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from config import RANK_TOL
from app.models.embedding import Embedding, SpectralReport
from app.models.moments import MomentMatrix
from app.utils.enums import ColumnNormalization

logger = logging.getLogger(__name__)


# ============================================================================
# FATORAÇÃO
# ============================================================================

def factorize(M: MomentMatrix, drop_tol: float = 1e-12) -> Embedding:
    """
    Fatoração por autodecomposição com autovalores negativos zerados.

    A largura do fator é o número de autovalores acima de
    drop_tol·max(1, λ_max); a Gram reconstrói a projeção PSD de M.
    """
    w, Q = np.linalg.eigh((M.entries + M.entries.T) / 2)
    w = np.clip(w, 0.0, None)
    manter = w > drop_tol * max(1.0, float(w[-1]) if w.size else 1.0)
    V = np.sqrt(w[manter])[:, None] * Q[:, manter].T
    return Embedding(vectors=V, index=M.index, n=M.n, k=M.k)


# ============================================================================
# ESPECTRO
# ============================================================================

def instance_graph(edges: Sequence[tuple[int, int, float]], n: int) -> nx.Graph:
    """Grafo ponderado simples; arestas repetidas somam os pesos."""
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for u, v, w in edges:
        if G.has_edge(u, v):
            G[u][v]["weight"] += float(w)
        else:
            G.add_edge(int(u), int(v), weight=float(w))
    return G


def laplacian_spectrum(edges: Sequence[tuple[int, int, float]], n: int) -> SpectralReport:
    """
    Espectro completo de D^{-1/2} L D^{-1/2}, em ordem crescente.

    Vértices de grau 0 ficam com linha/coluna nula (contribuem autovalor 0).

    Exemplo:
        laplacian_spectrum([(0, 1, 1.0)], 2).eigenvalues
        # → [0, 2]
    """
    G = instance_graph(edges, n)
    L = nx.normalized_laplacian_matrix(G, nodelist=list(range(n)), weight="weight").toarray()
    valores = np.sort(np.linalg.eigvalsh((L + L.T) / 2))
    return SpectralReport(eigenvalues=valores)


def weighted_degrees(edges: Sequence[tuple[int, int, float]], n: int) -> np.ndarray:
    d = np.zeros(n)
    for u, v, w in edges:
        d[u] += w
        d[v] += w
    return d


# ============================================================================
# ERROS DE PROJEÇÃO
# ============================================================================

def span_basis(columns: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Base ortonormal do span das colunas (SVD com tolerância de posto)."""
    if columns.shape[1] == 0:
        return np.zeros((columns.shape[0], 0))
    U, s, _ = np.linalg.svd(columns, full_matrices=False)
    return U[:, s > rank_tol * max(1.0, float(s[0]) if s.size else 1.0)]


def projection_error(vectors: np.ndarray, seeds: Sequence[int], rank_tol: float = RANK_TOL) -> float:
    """
    Σ sobre as colunas não-semente da distância² ao span das colunas semente.

    Exemplo:
        projection_error(np.eye(4), [0])
        # → 3.0
    """
    seeds = list(seeds)
    if len(set(seeds)) != len(seeds):
        raise ValueError("Sementes repetidas")
    resto = [c for c in range(vectors.shape[1]) if c not in set(seeds)]
    if not resto:
        return 0.0
    Q = span_basis(vectors[:, seeds], rank_tol)
    R = vectors[:, resto] - Q @ (Q.T @ vectors[:, resto])
    return float(np.sum(R * R))


def best_rank_r_error(vectors: np.ndarray, r: int) -> float:
    """Erro de Frobenius² da melhor aproximação de posto r: Σ_{i > r} σ_i²."""
    if r < 0:
        raise ValueError("r deve ser ≥ 0")
    s = np.linalg.svd(vectors, compute_uv=False)
    return float(np.sum(s[r:] ** 2))


def seed_columns(
    emb: Embedding,
    normalization: ColumnNormalization = ColumnNormalization.RAW,
    degrees: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, list[list[int]]]:
    """
    Colunas de grau 1 usadas na seleção, agrupadas por variável.

    Com DEGREE, as k colunas da variável i são escaladas por √d_i (erro
    ponderado pelo grau).
    """
    V = emb.degree_one_block().copy()
    if normalization is ColumnNormalization.DEGREE:
        if degrees is None:
            raise ValueError("Normalização por grau exige os graus")
        V = V * np.repeat(np.sqrt(np.asarray(degrees, dtype=float)), emb.k)[None, :]
    return V, emb.groups()
