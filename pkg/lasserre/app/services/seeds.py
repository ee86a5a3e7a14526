# lasserre/app/services/seeds.py

"""
Seleção do conjunto de sementes por seleção de colunas

Uma semente é uma variável: contribui todas as suas k colunas do bloco
de grau 1. Estratégias:
- greedy-colsel: pivotamento pelo resíduo, em granularidade de grupo
- volume-sample: sorteio sequencial proporcional ao resíduo
- exhaustive-best: mínimo exato (linha de base para testes)
- random: controle uniforme
"""

import logging
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from config import DEGENERATE_TOL, EXHAUSTIVE_CAP, RANK_TOL
from app.models.rounding import SeedSet
from app.services.embed import projection_error, span_basis
from app.utils.enums import SeedStrategy
from app.utils.errors import CapacityError

logger = logging.getLogger(__name__)

PADDED_SUFFIX = "-padded"


# ============================================================================
# AUXILIARES
# ============================================================================

def _columns_of(groups: Sequence[Sequence[int]], variables: Sequence[int]) -> list[int]:
    cols: list[int] = []
    for v in variables:
        cols.extend(groups[v])
    return cols


def _check_count(groups: Sequence[Sequence[int]], m: int):
    if not 0 <= m <= len(groups):
        raise ValueError(f"Número de sementes {m} fora de [0, {len(groups)}]")


def score_of(V: np.ndarray, groups: Sequence[Sequence[int]], variables: Sequence[int]) -> float:
    """Erro de projeção das colunas das variáveis escolhidas."""
    return projection_error(V, _columns_of(groups, variables))


def _residual(V: np.ndarray, cols: list[int]) -> np.ndarray:
    Q = span_basis(V[:, cols], RANK_TOL)
    return V - Q @ (Q.T @ V)


# ============================================================================
# ESTRATÉGIAS
# ============================================================================

def select_greedy(V: np.ndarray, groups: Sequence[Sequence[int]], m: int) -> SeedSet:
    """
    m rodadas gulosas: a cada rodada escolhe a variável cujas colunas mais
    reduzem o erro residual total. Empates → menor índice.

    Exemplo:
        select_greedy(np.eye(4), [[0], [1], [2], [3]], 2).variables
        # → [0, 1]
    """
    _check_count(groups, m)
    escolhidas: list[int] = []
    R = V.copy()

    for _ in range(m):
        melhor: Optional[int] = None
        melhor_ganho = 0.0
        for v in range(len(groups)):
            if v in escolhidas:
                continue
            B = span_basis(R[:, list(groups[v])], RANK_TOL)
            ganho = float(np.sum((B.T @ R) ** 2))
            if melhor is None or ganho > melhor_ganho + 1e-12 * max(1.0, abs(melhor_ganho)):
                melhor, melhor_ganho = v, ganho
        escolhidas.append(melhor)
        R = _residual(V, _columns_of(groups, escolhidas))

    score = score_of(V, groups, escolhidas)
    logger.debug(f"Sementes gulosas {escolhidas}: erro {score:.6e}")
    return SeedSet(variables=escolhidas, strategy=SeedStrategy.GREEDY.value, score=score)


def select_volume(
    V: np.ndarray,
    groups: Sequence[Sequence[int]],
    m: int,
    rng: np.random.Generator,
) -> SeedSet:
    """
    m sorteios sequenciais: cada variável é sorteada com probabilidade
    proporcional à norma² residual das suas colunas; depois ortogonaliza.

    Se todos os resíduos caem abaixo de 1e-14 antes de completar m sorteios,
    completa com as variáveis livres de menor índice e marca a tag com
    "-padded".
    """
    _check_count(groups, m)
    escolhidas: list[int] = []
    R = V.copy()
    preenchida = False

    while len(escolhidas) < m:
        livres = [v for v in range(len(groups)) if v not in escolhidas]
        pesos = np.array([float(np.sum(R[:, list(groups[v])] ** 2)) for v in livres])
        total = float(pesos.sum())
        if total < DEGENERATE_TOL:
            logger.warning(
                f"⚠️  Distribuição degenerada após {len(escolhidas)} sorteios; "
                f"completando com as variáveis de menor índice"
            )
            escolhidas.extend(livres[:m - len(escolhidas)])
            preenchida = True
            break
        v = livres[int(rng.choice(len(livres), p=pesos / total))]
        escolhidas.append(v)
        R = _residual(V, _columns_of(groups, escolhidas))

    tag = SeedStrategy.VOLUME.value + (PADDED_SUFFIX if preenchida else "")
    return SeedSet(variables=escolhidas, strategy=tag, score=score_of(V, groups, escolhidas))


def select_exhaustive(
    V: np.ndarray,
    groups: Sequence[Sequence[int]],
    m: int,
    cap: int = EXHAUSTIVE_CAP,
) -> SeedSet:
    """
    Minimizador exato do erro sobre todos os m-subconjuntos.
    Empates → menor subconjunto em ordem lexicográfica.

    Raises:
        CapacityError: se C(n, m) > cap
    """
    _check_count(groups, m)
    total = comb(len(groups), m)
    if total > cap:
        raise CapacityError(f"C({len(groups)}, {m}) = {total} subconjuntos excede o limite {cap}")

    melhor: Optional[tuple[int, ...]] = None
    melhor_score = np.inf
    for subconjunto in combinations(range(len(groups)), m):
        s = score_of(V, groups, subconjunto)
        if s < melhor_score - 1e-12 * max(1.0, abs(s)):
            melhor, melhor_score = subconjunto, s

    escolhidas = list(melhor or ())
    return SeedSet(
        variables=escolhidas,
        strategy=SeedStrategy.EXHAUSTIVE.value,
        score=score_of(V, groups, escolhidas),
    )


def select_random(
    V: np.ndarray,
    groups: Sequence[Sequence[int]],
    m: int,
    rng: np.random.Generator,
) -> SeedSet:
    """m-subconjunto uniforme sem reposição; o erro é calculado depois."""
    _check_count(groups, m)
    escolhidas = [int(v) for v in rng.choice(len(groups), size=m, replace=False)]
    return SeedSet(
        variables=escolhidas,
        strategy=SeedStrategy.RANDOM.value,
        score=score_of(V, groups, escolhidas),
    )


def select_seeds(
    strategy: SeedStrategy,
    V: np.ndarray,
    groups: Sequence[Sequence[int]],
    m: int,
    rng: np.random.Generator,
) -> SeedSet:
    """Despacho por estratégia (a CLI chama por aqui)."""
    if strategy is SeedStrategy.GREEDY:
        return select_greedy(V, groups, m)
    if strategy is SeedStrategy.VOLUME:
        return select_volume(V, groups, m, rng)
    if strategy is SeedStrategy.EXHAUSTIVE:
        return select_exhaustive(V, groups, m)
    return select_random(V, groups, m, rng)
