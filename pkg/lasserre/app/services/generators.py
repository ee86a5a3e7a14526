# lasserre/app/services/generators.py

"""
Geração de instâncias (subcomando `gen`)

Famílias de grafos via networkx, com semente explícita; parâmetros
específicos do tipo (permutações, tabelas, matriz QIP, empacotamento)
sorteados de um gerador numpy com a mesma semente.
"""

import logging
from typing import Optional

import networkx as nx
import numpy as np

from config import GEN_MAX_N
from app.schemas import PackingConstraint, ProblemParams, ProblemSpec
from app.services.problems import normalized
from app.utils.enums import GraphFamily, ProblemKind
from app.utils.errors import CapacityError, IncompatibleFamilyError, MalformedSpecError

logger = logging.getLogger(__name__)


# ============================================================================
# FAMÍLIAS DE GRAFOS
# ============================================================================

def build_graph(
    family: GraphFamily,
    n: int,
    seed: int,
    degree: int = 3,
    p: float = 0.5,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    p_in: float = 0.8,
    p_out: float = 0.1,
) -> nx.Graph:
    """
    Grafo da família pedida, com vértices 0..n−1.

    grid usa rows × cols (n é ignorado se ambos forem dados).
    """
    if family is GraphFamily.RING:
        if n < 3:
            raise MalformedSpecError("ring exige n ≥ 3")
        return nx.cycle_graph(n)

    if family is GraphFamily.GRID:
        rows = rows or int(np.floor(np.sqrt(n)))
        cols = cols or max(1, n // rows)
        G = nx.grid_2d_graph(rows, cols)
        return nx.convert_node_labels_to_integers(G, ordering="sorted")

    if family is GraphFamily.RANDOM_REGULAR:
        if degree >= n or (n * degree) % 2:
            raise MalformedSpecError(f"random-regular exige d < n e n·d par (n={n}, d={degree})")
        return nx.random_regular_graph(degree, n, seed=seed)

    if family is GraphFamily.GNP:
        if not 0.0 <= p <= 1.0:
            raise MalformedSpecError(f"p = {p} fora de [0, 1]")
        return nx.gnp_random_graph(n, p, seed=seed)

    if family is GraphFamily.PLANTED_BISECTION:
        if n < 2:
            raise MalformedSpecError("planted-bisection exige n ≥ 2")
        return nx.random_partition_graph([n // 2, n - n // 2], p_in, p_out, seed=seed)

    raise MalformedSpecError(f"Família desconhecida: {family}")


# ============================================================================
# PARÂMETROS POR TIPO
# ============================================================================

def _params_for(
    kind: ProblemKind,
    G: nx.Graph,
    edges: list[tuple[int, int, float]],
    rng: np.random.Generator,
    alphabet: int,
    colors: int,
) -> tuple[ProblemParams, Optional[int]]:
    n = G.number_of_nodes()

    if kind is ProblemKind.UNIQUE_GAMES:
        perms = [[int(x) for x in rng.permutation(alphabet)] for _ in edges]
        return ProblemParams(alphabet=alphabet, permutations=perms), alphabet

    if kind is ProblemKind.TWO_CSP:
        tabelas = [[round(float(x), 3) for x in rng.random(alphabet * alphabet)] for _ in edges]
        return ProblemParams(alphabet=alphabet, csp_tables=tabelas), alphabet

    if kind is ProblemKind.QIP:
        # Laplaciano ponderado: simétrico e PSD
        L = nx.laplacian_matrix(G, nodelist=list(range(n)), weight="weight").toarray()
        return ProblemParams(qip_matrix=[[float(x) for x in linha] for linha in L]), None

    if kind is ProblemKind.CAPACITY_CUT_PACKING:
        coeffs = [float(x) for x in rng.integers(1, 4, size=n)]
        pacote = PackingConstraint(coeffs=coeffs, budget=float(np.floor(0.6 * sum(coeffs))))
        return ProblemParams(packing=[pacote]), None

    if kind is ProblemKind.PARTIAL_3_COLORING:
        return ProblemParams(colors=colors), None

    return ProblemParams(), None


# ============================================================================
# GERAÇÃO
# ============================================================================

def generate(
    kind: ProblemKind,
    family: GraphFamily,
    n: int,
    seed: int,
    degree: int = 3,
    p: float = 0.5,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    p_in: float = 0.8,
    p_out: float = 0.1,
    alphabet: int = 3,
    colors: int = 3,
    max_n: int = GEN_MAX_N,
) -> ProblemSpec:
    """
    Gera uma instância canônica (mesma semente → mesmos bytes).

    Raises:
        IncompatibleFamilyError: planted-bisection com tipo que não é de corte
        CapacityError: n acima do limite do gerador

    Exemplo:
        generate(ProblemKind.MAX_CUT, GraphFamily.RING, 5, seed=0)
        # → C5, ótimo 4
    """
    if family is GraphFamily.PLANTED_BISECTION and not kind.is_cut_type:
        raise IncompatibleFamilyError(
            f"planted-bisection só combina com tipos de corte (recebido {kind.value})"
        )
    tamanho = rows * cols if family is GraphFamily.GRID and rows and cols else n
    if tamanho > max_n:
        raise CapacityError(f"n = {tamanho} excede o limite do gerador {max_n}")
    if tamanho < 1:
        raise MalformedSpecError("n deve ser ≥ 1")

    G = build_graph(family, n, seed, degree=degree, p=p, rows=rows, cols=cols, p_in=p_in, p_out=p_out)
    edges = [(int(min(u, v)), int(max(u, v)), 1.0) for u, v in G.edges()]
    rng = np.random.default_rng(seed)
    params, k_hint = _params_for(kind, G, edges, rng, alphabet, colors)

    if family is GraphFamily.PLANTED_BISECTION:
        lado_b = set(G.graph["partition"][1])
        params = params.model_copy(update={"planted_side": [int(v in lado_b) for v in range(G.number_of_nodes())]})

    spec = ProblemSpec(kind=kind, n=G.number_of_nodes(), k_hint=k_hint, edges=edges, params=params)
    logger.info(
        f"✅ Instância gerada: {kind.value} em {family.value}, n={spec.n}, arestas={len(edges)}"
    )
    return normalized(spec)
