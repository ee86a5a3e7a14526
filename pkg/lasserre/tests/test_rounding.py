# lasserre/tests/test_rounding.py

import numpy as np
import pytest

from app.models.rounding import ConditionalTable, SeedSet
from app.services import problems
from app.services.generators import generate
from app.services.relaxation import moments_from_distribution
from app.services.rounding import (
    conditional_table,
    expected_value_independent,
    round_independent,
    round_threshold,
    sample_seed_assignment,
    seed_assignment_frequencies,
    threshold_candidates,
)
from app.utils.enums import GraphFamily, ProblemKind
from app.utils.errors import LevelBudgetError


def tabela(marginais: dict, n: int, k: int = 2, sementes=None) -> ConditionalTable:
    return ConditionalTable(
        n=n, k=k,
        seed_assignment=sementes or {},
        marginals={v: np.asarray(m, dtype=float) for v, m in marginais.items()},
        source_level=1,
    )


# ============================================================================
# LIMIAR
# ============================================================================

def test_limiar_exemplo_classico():
    cond = tabela({0: [0.9, 0.1], 1: [0.2, 0.8]}, 2)
    assert round_threshold(cond, 0.5, side_label=0) == [0, 1]
    assert round_threshold(cond, 0.5) == [0, 1]


def test_limiar_mantem_sementes():
    cond = tabela({1: [0.3, 0.7], 2: [0.6, 0.4]}, 3, sementes={0: 1})
    assert round_threshold(cond, 0.5) == [1, 1, 0]
    assert round_threshold(cond, 0.0) == [1, 1, 1]


def test_limiar_exige_binario_e_theta_valido():
    with pytest.raises(ValueError):
        round_threshold(tabela({0: [0.2, 0.3, 0.5]}, 1, k=3), 0.5)
    with pytest.raises(ValueError):
        round_threshold(tabela({0: [0.5, 0.5]}, 1), 1.5)


def test_candidatos_de_limiar():
    cond = tabela({0: [0.75, 0.25], 1: [0.5, 0.5]}, 2)
    assert threshold_candidates(cond) == [0.0, 0.25, 0.5, 1.0]


# ============================================================================
# INDEPENDENTE
# ============================================================================

def test_independente_respeita_massas_pontuais(rng):
    cond = tabela({1: [0.0, 1.0], 2: [1.0, 0.0]}, 3, sementes={0: 1})
    for _ in range(50):
        assert round_independent(cond, rng) == [1, 1, 0]


def test_esperanca_exata_da_aresta(aresta_max_cut):
    inst = problems.encode(aresta_max_cut)
    cond = tabela({0: [0.5, 0.5], 1: [0.5, 0.5]}, 2)
    assert expected_value_independent(cond, inst) == pytest.approx(0.5)


def test_esperanca_bate_com_monte_carlo(triangulo_max_cut, rng):
    inst = problems.encode(triangulo_max_cut)
    cond = tabela({0: [0.2, 0.8], 1: [0.6, 0.4], 2: [0.5, 0.5]}, 3)
    esperado = expected_value_independent(cond, inst)
    amostras = [inst.objective(round_independent(cond, rng)) for _ in range(10000)]
    assert np.mean(amostras) == pytest.approx(esperado, abs=0.05)


@pytest.mark.slow
def test_esperanca_bate_com_monte_carlo_em_2csp_aleatorios():
    rng = np.random.default_rng(7)
    fora_de_3 = 0
    for semente in range(50):
        n = int(rng.integers(3, 6))
        spec = generate(ProblemKind.TWO_CSP, GraphFamily.GNP, n, semente, p=0.6, alphabet=int(rng.integers(2, 4)))
        inst = problems.encode(spec)
        cond = tabela({v: rng.dirichlet(np.ones(spec.k)) for v in range(n)}, n, k=spec.k)
        esperado = expected_value_independent(cond, inst)

        X = np.array([round_independent(cond, rng) for _ in range(10000)])
        valores, _ = problems.batch_evaluate(spec, X)
        erro_padrao = valores.std(ddof=1) / np.sqrt(len(valores))
        desvio = abs(float(valores.mean()) - esperado)
        fora_de_3 += desvio > 3 * erro_padrao + 1e-12
        assert desvio <= 4.5 * erro_padrao + 1e-12
    # 50 instâncias a 3 erros-padrão: no máximo um ou dois escapes
    assert fora_de_3 <= 2


# ============================================================================
# PROPAGAÇÃO
# ============================================================================

def test_sorteio_das_sementes_segue_as_marginais(rng):
    M = moments_from_distribution(2, 2, 2, [[0, 1], [1, 0]], [0.25, 0.75])
    freq = seed_assignment_frequencies(M, SeedSet([0], "greedy-colsel", 0.0), 4000, rng)
    assert freq[(1,)] == pytest.approx(0.75, abs=0.03)
    assert freq[(0,)] == pytest.approx(0.25, abs=0.03)


def test_propagacao_fixa_a_outra_ponta(rng):
    M = moments_from_distribution(2, 2, 2, [[0, 1], [1, 0]], [0.5, 0.5])
    atrib, Mc = sample_seed_assignment(M, SeedSet([0], "greedy-colsel", 0.0), rng)
    cond = conditional_table(Mc, atrib)
    assert cond.free_variables() == [1]
    np.testing.assert_allclose(cond.marginals[1][atrib[0]], 0.0, atol=1e-12)
    x = round_independent(cond, rng)
    assert x[0] != x[1]


def test_rotulo_abaixo_de_p_min_nunca_sai(rng):
    M = moments_from_distribution(2, 2, 2, [[0, 1], [1, 0]], [1e-10, 1.0 - 1e-10])
    for _ in range(200):
        atrib, _ = sample_seed_assignment(M, SeedSet([0], "greedy-colsel", 0.0), rng)
        assert atrib == {0: 1}


def test_sementes_demais_para_o_nivel(rng):
    M = moments_from_distribution(3, 2, 2, [[0, 1, 0]], [1.0])
    with pytest.raises(LevelBudgetError):
        sample_seed_assignment(M, SeedSet([0, 1], "greedy-colsel", 0.0), rng)
