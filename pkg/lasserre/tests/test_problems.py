# lasserre/tests/test_problems.py

import numpy as np
import pytest
from pydantic import ValidationError

from app.schemas import PipelineConfig
from app.services import problems
from app.services.embed import laplacian_spectrum
from app.services.pipeline import run_pipeline
from app.services.relaxation import build_sdp
from app.services.sdpsolve import solve
from app.utils.enums import SeedStrategy, Sense
from app.utils.errors import CapacityError, MalformedSpecError
from conftest import arestas, ciclo, completo, spec_de


# ============================================================================
# ÓTIMOS CONHECIDOS
# ============================================================================

def test_bissecao_de_k4(k4_bissecao):
    assert problems.oracle(k4_bissecao).opt_value == 4.0


def test_max_cut_de_c5():
    assert problems.oracle(spec_de("max-cut", 5, ciclo(5))).opt_value == 4.0


def test_max_cut_do_triangulo(triangulo_max_cut):
    res = problems.oracle(triangulo_max_cut)
    assert res.opt_value == 2.0
    assert res.witness == [0, 0, 1]
    assert res.enumerated == 8


def test_conjunto_independente_de_c5():
    assert problems.oracle(spec_de("independent-set", 5, ciclo(5))).opt_value == 2.0


def test_corte_esparso_dos_dois_triangulos(dois_triangulos):
    res = problems.oracle(dois_triangulos)
    assert res.opt_value == pytest.approx(1 / 9)
    assert res.witness == [0, 0, 0, 1, 1, 1]


def test_qip_com_identidade():
    spec = spec_de("qip", 3, [], qip_matrix=np.eye(3).tolist())
    assert problems.oracle(spec).opt_value == 3.0
    assert problems.evaluate(spec, [1, 0, 1]).value == 3.0


def test_unique_games_com_identidades():
    spec = spec_de(
        "unique-games", 3, [(0, 1, 1.0), (1, 2, 2.0)],
        alphabet=3, permutations=[[0, 1, 2], [0, 1, 2]],
    )
    assert spec.k == 3
    assert problems.oracle(spec).opt_value == 3.0


def test_coloracao_parcial_do_triangulo_com_duas_cores():
    spec = spec_de("partial-3-coloring", 3, ciclo(3), colors=2)
    assert spec.k == 3
    assert problems.oracle(spec).opt_value == 2.0


# ============================================================================
# AVALIAÇÃO
# ============================================================================

def test_avaliacao_da_bissecao(k4_bissecao):
    res = problems.evaluate(k4_bissecao, [0, 0, 1, 1])
    assert res.value == 4.0 and res.feasible and res.violations == []
    res = problems.evaluate(k4_bissecao, [1, 1, 1, 0])
    assert not res.feasible
    assert res.violations


def test_corte_esparso_com_lado_vazio(dois_triangulos):
    res = problems.evaluate(dois_triangulos, [0] * 6)
    assert res.value == float("inf")
    assert not res.feasible


def test_avaliacao_rejeita_atribuicao_mal_formada(triangulo_max_cut):
    with pytest.raises(ValueError):
        problems.evaluate(triangulo_max_cut, [0, 1])
    with pytest.raises(ValueError):
        problems.evaluate(triangulo_max_cut, [0, 1, 2])


def _especificacoes():
    qip = np.array([[2.0, -1.0, 0.0, -1.0], [-1.0, 2.0, -1.0, 0.0], [0.0, -1.0, 2.0, -1.0], [-1.0, 0.0, -1.0, 2.0]])
    return [
        spec_de("max-cut", 4, completo(4)),
        spec_de("min-bisection", 4, ciclo(4)),
        spec_de("qip", 4, [], qip_matrix=qip.tolist()),
        spec_de("independent-set", 4, ciclo(4), vertex_weights=[1.0, 2.0, 1.5, 0.5]),
        spec_de("partial-3-coloring", 4, ciclo(4)),
        spec_de("capacity-cut-packing", 4, ciclo(4), packing=[{"coeffs": [1, 2, 1, 2], "budget": 3}]),
        spec_de("unique-games", 3, ciclo(3), alphabet=3, permutations=[[1, 2, 0], [0, 2, 1], [2, 1, 0]]),
        spec_de("two-csp", 3, ciclo(3), alphabet=2, csp_tables=[[0.1, 0.9, 0.4, 0.3]] * 3),
    ]


@pytest.mark.parametrize("spec", _especificacoes(), ids=lambda s: s.kind.value)
def test_codificacao_concorda_com_avaliacao(spec, rng):
    inst = problems.encode(spec)
    assert inst.sense is spec.sense
    for _ in range(30):
        x = [int(a) for a in rng.integers(0, spec.k, size=spec.n)]
        res = problems.evaluate(spec, x)
        if inst.global_constraints:
            assert inst.feasible(x) == res.feasible
        if res.feasible:
            assert inst.feasible(x)
            assert inst.objective(x) == pytest.approx(res.value)


def test_penalidade_nao_altera_o_otimo():
    for spec in (
        spec_de("independent-set", 5, ciclo(5)),
        spec_de("partial-3-coloring", 4, completo(4), colors=2),
    ):
        valor, _ = problems.labeling_optimum(problems.encode(spec))
        assert valor == pytest.approx(problems.oracle(spec).opt_value)


def test_modo_estrito_usa_eventos_proibidos():
    spec = spec_de("independent-set", 5, ciclo(5), strict=True)
    inst = problems.encode(spec)
    assert len(inst.forbidden) == 5
    assert all(len(t.scope) == 1 for t in inst.terms)
    valor, testemunha = problems.labeling_optimum(inst)
    assert valor == 2.0
    assert problems.evaluate(spec, testemunha).feasible


def test_bissecao_com_folga_vira_duas_desigualdades():
    spec = spec_de("min-bisection", 4, ciclo(4), bisection_slack=1)
    inst = problems.encode(spec)
    assert [g.relation.value for g in inst.global_constraints] == ["le", "le"]
    assert problems.evaluate(spec, [1, 0, 0, 0]).feasible
    assert not problems.evaluate(spec, [0, 0, 0, 0]).feasible


# ============================================================================
# FORMA CANÔNICA E VALIDAÇÃO
# ============================================================================

def test_aresta_invertida_inverte_permutacao():
    a = spec_de("unique-games", 2, [(1, 0, 1.0)], alphabet=3, permutations=[[1, 2, 0]])
    b = spec_de("unique-games", 2, [(0, 1, 1.0)], alphabet=3, permutations=[[2, 0, 1]])
    assert problems.instance_hash(a) == problems.instance_hash(b)


def test_aresta_invertida_transpoe_tabela():
    a = spec_de("two-csp", 2, [(1, 0, 1.0)], alphabet=2, csp_tables=[[0.1, 0.2, 0.3, 0.4]])
    for x in ([0, 0], [0, 1], [1, 0], [1, 1]):
        assert problems.evaluate(a, x).value == problems.evaluate(problems.normalized(a), x).value
    assert problems.evaluate(a, [0, 1]).value == pytest.approx(0.3)


def test_hash_independe_da_ordem_das_arestas():
    a = spec_de("max-cut", 3, [(0, 1, 1.0), (1, 2, 1.0)])
    b = spec_de("max-cut", 3, [(2, 1, 1.0), (1, 0, 1.0)])
    assert problems.instance_hash(a) == problems.instance_hash(b)


def test_especificacao_mal_formada():
    with pytest.raises(ValidationError):
        spec_de("max-cut", 2, [(0, 0, 1.0)])
    with pytest.raises(ValidationError):
        spec_de("unique-games", 2, [(0, 1, 1.0)], alphabet=3)
    with pytest.raises(ValidationError):
        spec_de("qip", 2, [], qip_matrix=[[1.0, 2.0], [2.0, 1.0]])


# ============================================================================
# REPARO
# ============================================================================

def test_reparo_da_bissecao(k4_bissecao):
    x = problems.repair(k4_bissecao, [1, 1, 1, 0])
    res = problems.evaluate(k4_bissecao, x)
    assert res.feasible and res.value == 4.0


def test_reparo_do_conjunto_independente():
    spec = spec_de("independent-set", 2, [(0, 1, 1.0)])
    assert problems.repair(spec, [1, 1]) == [0, 1]


def test_reparo_da_coloracao():
    spec = spec_de("partial-3-coloring", 3, ciclo(3))
    x = problems.repair(spec, [1, 1, 2])
    assert x == [0, 1, 2]
    assert problems.evaluate(spec, x).feasible


def test_reparo_do_corte_esparso(dois_triangulos):
    x = problems.repair(dois_triangulos, [1] * 6)
    assert sum(x) == 5
    assert problems.evaluate(dois_triangulos, x).feasible


def test_reparo_do_empacotamento():
    spec = spec_de(
        "capacity-cut-packing", 3, arestas([(0, 1), (1, 2)]),
        packing=[{"coeffs": [1, 1, 1], "budget": 1}], min_side=1,
    )
    x = problems.repair(spec, [1, 1, 1])
    assert x == [0, 0, 1]
    assert problems.evaluate(spec, x).feasible


def test_reparo_e_identidade_sem_restricoes(triangulo_max_cut):
    assert problems.repair(triangulo_max_cut, [1, 1, 1]) == [1, 1, 1]


def test_reparo_preserva_viaveis(k4_bissecao):
    assert problems.repair(k4_bissecao, [0, 1, 0, 1]) == [0, 1, 0, 1]


# ============================================================================
# ORÁCULO E FATOR PREVISTO
# ============================================================================

def test_oraculo_acima_do_limite(k4_bissecao):
    with pytest.raises(CapacityError):
        problems.oracle(k4_bissecao, cap=10)


def test_oraculo_sem_atribuicao_viavel():
    with pytest.raises(MalformedSpecError):
        problems.oracle(spec_de("sparsest-cut", 1, []))


def test_fator_previsto_de_k4(k4_bissecao):
    espectro = laplacian_spectrum(completo(4), 4)
    lam, fator = problems.predicted_factor(k4_bissecao, 1, espectro)
    assert lam == pytest.approx(4 / 3)
    assert fator == pytest.approx(2.5)


def test_fator_previsto_ausente_ou_infinito():
    espectro = laplacian_spectrum(completo(4), 4)
    conjunto = spec_de("independent-set", 4, completo(4))
    assert problems.predicted_factor(conjunto, 1, espectro)[1] is None
    assert problems.predicted_factor(spec_de("max-cut", 4, completo(4)), 4, espectro) == (None, None)
    desconexo = laplacian_spectrum([(0, 1, 1.0), (2, 3, 1.0)], 4)
    assert problems.predicted_factor(spec_de("max-cut", 4, []), 1, desconexo)[1] == float("inf")


# ============================================================================
# SANDUÍCHE: relaxação vs ótimo inteiro
# ============================================================================

# 2I + triângulo frustrado: PSD, autovalores (0, 3, 3)
FRUSTRADA = [[2.0, 1.0, -1.0], [1.0, 2.0, 1.0], [-1.0, 1.0, 2.0]]


@pytest.mark.parametrize(
    "spec",
    [
        spec_de("max-cut", 5, ciclo(5)),
        spec_de("min-bisection", 4, completo(4)),
        spec_de("independent-set", 4, ciclo(4)),
        spec_de("capacity-cut-packing", 5, ciclo(5), packing=[{"coeffs": [1, 2, 1, 2, 1], "budget": 4}]),
        spec_de("qip", 3, [], qip_matrix=FRUSTRADA, qip_sense="minimize"),
    ],
    ids=lambda s: f"{s.kind.value}-{s.sense.value}",
)
def test_relaxacao_limita_o_otimo(spec):
    inst = problems.encode(spec)
    sol = solve(build_sdp(inst, 1))
    opt = problems.oracle(spec).opt_value
    if spec.sense is Sense.MAXIMIZE:
        assert sol.objective_value >= opt - 1e-4
    else:
        assert sol.objective_value <= opt + 1e-4


def test_relaxacao_do_corte_esparso_limita_a_codificacao(dois_triangulos):
    inst = problems.encode(dois_triangulos)
    sol = solve(build_sdp(inst, 1))
    valor, _ = problems.labeling_optimum(inst)
    assert valor == pytest.approx(1.0)
    assert sol.objective_value <= valor + 1e-4


@pytest.mark.parametrize(
    "spec",
    [
        spec_de("min-bisection", 6, ciclo(6) + arestas([(0, 3)])),
        spec_de("sparsest-cut", 6, arestas([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])),
        spec_de("capacity-cut-packing", 5, ciclo(5), packing=[{"coeffs": [1, 2, 1, 2, 1], "budget": 4}]),
        spec_de("qip", 3, [], qip_matrix=FRUSTRADA, qip_sense="minimize"),
    ],
    ids=lambda s: s.kind.value,
)
def test_arredondado_nunca_passa_do_otimo_em_minimizacao(spec):
    rec = run_pipeline(spec, SeedStrategy.GREEDY, PipelineConfig(r=1, trials=20))
    assert rec.error is None
    assert rec.sdp_value is not None
    for modo in rec.modes:
        assert modo.best_post_repair is not None
        assert modo.best_post_repair >= rec.oracle_opt - 1e-9
