# lasserre/app/services/rounding.py

"""
Arredondamento por propagação

1. sorteia a atribuição das sementes a partir das marginais condicionais
   (uma semente por vez, condicionando após cada sorteio)
2. lê as marginais das variáveis restantes na matriz condicionada
3. arredonda: independente (cada variável sorteada da sua marginal) ou
   por limiar (um único θ para todas as variáveis, k = 2)
"""

import logging

import numpy as np

from config import P_MIN, TOL_CONSISTENCY
from app.models.instance import LabelingInstance
from app.models.moments import MomentMatrix
from app.models.rounding import ConditionalTable, SeedSet
from app.services.relaxation import condition, marginal
from app.utils.errors import LevelBudgetError, ScopeError

logger = logging.getLogger(__name__)


# ============================================================================
# PROPAGAÇÃO
# ============================================================================

def sample_seed_assignment(
    M: MomentMatrix,
    seeds: SeedSet,
    rng: np.random.Generator,
    p_min: float = P_MIN,
    tol_consistency: float = TOL_CONSISTENCY,
) -> tuple[dict[int, int], MomentMatrix]:
    """
    Sorteia os rótulos das sementes em sequência e condiciona em cada um.

    Rótulos com probabilidade abaixo de p_min nunca são sorteados, então o
    condicionamento não encontra ramos de probabilidade quase nula.

    Raises:
        LevelBudgetError: se r < |sementes| + 1

    Exemplo:
        atrib, Mc = sample_seed_assignment(M, SeedSet([0], "greedy-colsel", 0.0), rng)
        # → atrib = {0: 1}, Mc de nível r − 1
    """
    if M.r < seeds.size + 1:
        raise LevelBudgetError(
            f"Nível {M.r} insuficiente para {seeds.size} sementes (exige r ≥ |sementes| + 1)"
        )

    atribuicao: dict[int, int] = {}
    atual = M
    for v in seeds.variables:
        p = marginal(atual, v, tol_consistency)
        p = np.where(p >= p_min, p, 0.0)
        rotulo = int(rng.choice(atual.k, p=p / p.sum()))
        atribuicao[v] = rotulo
        atual = condition(atual, v, rotulo, p_min)
    return atribuicao, atual


def conditional_table(
    M: MomentMatrix,
    seed_assignment: dict[int, int],
    tol_consistency: float = TOL_CONSISTENCY,
) -> ConditionalTable:
    """Marginais renormalizadas de todas as variáveis fora das sementes."""
    marginais = {}
    for v in range(M.n):
        if v in seed_assignment:
            continue
        p = marginal(M, v, tol_consistency)
        marginais[v] = p / p.sum()
    return ConditionalTable(
        n=M.n,
        k=M.k,
        seed_assignment=dict(seed_assignment),
        marginals=marginais,
        source_level=M.r,
    )


# ============================================================================
# MODOS DE ARREDONDAMENTO
# ============================================================================

def _with_seeds(cond: ConditionalTable) -> list[int]:
    atribuicao = [0] * cond.n
    for v, a in cond.seed_assignment.items():
        atribuicao[v] = a
    return atribuicao


def round_independent(cond: ConditionalTable, rng: np.random.Generator) -> list[int]:
    """Cada variável livre sorteada independentemente da sua marginal."""
    atribuicao = _with_seeds(cond)
    livres = cond.free_variables()
    sorteios = rng.random(len(livres))
    for v, u in zip(livres, sorteios):
        acumulada = np.cumsum(cond.marginals[v])
        atribuicao[v] = int(min(np.searchsorted(acumulada, u, side="right"), cond.k - 1))
    return atribuicao


def round_threshold(cond: ConditionalTable, theta: float, side_label: int = 1) -> list[int]:
    """
    Limiar compartilhado: i recebe side_label sse marginal_i[side_label] ≥ θ.

    Exemplo:
        marginais (0.9, 0.1) e (0.2, 0.8), θ = 0.5, side_label = 0
        # → [0, 1]
    """
    if cond.k != 2:
        raise ValueError(f"Arredondamento por limiar exige k = 2 (recebido k = {cond.k})")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"θ = {theta} fora de [0, 1]")
    outro = 1 - side_label
    atribuicao = _with_seeds(cond)
    for v in cond.free_variables():
        atribuicao[v] = side_label if cond.marginals[v][side_label] >= theta else outro
    return atribuicao


def threshold_candidates(cond: ConditionalTable, side_label: int = 1) -> list[float]:
    """Valores distintos das marginais (pontos de quebra) mais {0, 0.5, 1}."""
    valores = {0.0, 0.5, 1.0}
    valores.update(float(m[side_label]) for m in cond.marginals.values())
    return sorted(v for v in valores if 0.0 <= v <= 1.0)


# ============================================================================
# ESPERANÇA
# ============================================================================

def expected_value_independent(cond: ConditionalTable, inst: LabelingInstance) -> float:
    """
    Esperança exata do objetivo sob o produto das marginais
    (sementes como massas pontuais).
    """
    P = cond.probability_matrix()
    k = inst.k
    total = 0.0
    for t in inst.terms:
        tabela = np.asarray(t.table, dtype=float)
        if len(t.scope) == 0:
            valor = tabela[0]
        elif len(t.scope) == 1:
            valor = P[t.scope[0]] @ tabela
        elif len(t.scope) == 2:
            valor = P[t.scope[0]] @ tabela.reshape(k, k) @ P[t.scope[1]]
        else:
            raise ScopeError(f"Escopo {t.scope} maior que 2")
        total += t.weight * float(valor)
    return total


def seed_assignment_frequencies(
    M: MomentMatrix,
    seeds: SeedSet,
    trials: int,
    rng: np.random.Generator,
    p_min: float = P_MIN,
) -> dict[tuple[int, ...], float]:
    """Frequência empírica de cada atribuição das sementes (diagnóstico)."""
    contagem: dict[tuple[int, ...], int] = {}
    for _ in range(trials):
        atrib, _ = sample_seed_assignment(M, seeds, rng, p_min)
        chave = tuple(atrib[v] for v in seeds.variables)
        contagem[chave] = contagem.get(chave, 0) + 1
    return {k: c / trials for k, c in sorted(contagem.items())}

