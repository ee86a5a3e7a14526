# lasserre/tests/test_sdpsolve.py

import numpy as np
import pytest
import scipy.sparse as sp

from app.models.moments import SdpProblem, SdpSolution
from app.services import problems
from app.services.relaxation import build_sdp
from app.services.sdpsolve import check_certificate, project_psd, solve
from app.utils.enums import Sense


def _sdp(C, linhas, rhs, sense=Sense.MINIMIZE):
    """Um bloco; `linhas` em coordenadas svec."""
    return SdpProblem(
        block_dims=[len(C)],
        objective=[sp.csr_matrix(np.asarray(C, dtype=float))],
        constraints=sp.csr_matrix(np.asarray(linhas, dtype=float)),
        rhs=np.asarray(rhs, dtype=float),
        sense=sense,
    )


@pytest.fixture
def triangulo_sdp(triangulo_max_cut):
    return build_sdp(problems.encode(triangulo_max_cut), 1)


# ============================================================================
# CASOS TRIVIAIS
# ============================================================================

def test_bloco_1x1_fixado():
    sol = solve(_sdp([[1.0]], [[1.0]], [1.0]))
    assert sol.converged
    assert sol.objective_value == pytest.approx(1.0, abs=1e-6)


def test_traco_com_diagonal_fixada():
    # svec de 2×2: (0,0), (0,1), (1,1)
    sol = solve(_sdp(np.eye(2), [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], [1.0, 1.0]))
    assert sol.converged
    assert sol.objective_value == pytest.approx(2.0, abs=1e-5)
    assert np.linalg.eigvalsh(sol.X[0]).min() >= -1e-6


def test_sem_fixacao_na_linha_0():
    with pytest.raises(ValueError):
        solve(_sdp(np.eye(2), [[0.0, 0.0, 1.0]], [1.0]))


# ============================================================================
# PROPRIEDADES
# ============================================================================

def test_escalar_o_objetivo_escala_o_valor(triangulo_sdp):
    base = solve(triangulo_sdp).objective_value
    triplo = SdpProblem(
        block_dims=triangulo_sdp.block_dims,
        objective=[3.0 * C for C in triangulo_sdp.objective],
        constraints=triangulo_sdp.constraints,
        rhs=triangulo_sdp.rhs,
        sense=triangulo_sdp.sense,
    )
    assert solve(triplo).objective_value == pytest.approx(3.0 * base, rel=1e-3)


def test_mesma_entrada_mesmos_bits(triangulo_sdp):
    a, b = solve(triangulo_sdp), solve(triangulo_sdp)
    assert a.objective_value == b.objective_value
    assert a.iterations == b.iterations
    for Xa, Xb in zip(a.X, b.X):
        assert np.array_equal(Xa, Xb)


def test_projecao_psd_zera_autovalores_negativos():
    X = np.diag([2.0, -1.0])
    np.testing.assert_allclose(project_psd(X), np.diag([2.0, 0.0]), atol=1e-12)


# ============================================================================
# CERTIFICADO
# ============================================================================

def _adulterada(sol: SdpSolution, blocos) -> SdpSolution:
    """Mesmos números guardados, matrizes trocadas."""
    return SdpSolution(
        X=blocos,
        objective_value=sol.objective_value,
        primal_residual=sol.primal_residual,
        psd_residual=sol.psd_residual,
        iterations=sol.iterations,
        converged=sol.converged,
    )


def test_certificado_confere(triangulo_sdp):
    sol = solve(triangulo_sdp)
    assert check_certificate(triangulo_sdp, sol).ok


def test_certificado_acusa_entrada_restrita_alterada(triangulo_sdp):
    sol = solve(triangulo_sdp)
    X = sol.main_block.copy()
    # (0, 1) representa y_{0→0}: amarrada ao elemento (1, 1)
    X[0, 1] += 0.1
    X[1, 0] += 0.1
    relatorio = check_certificate(triangulo_sdp, _adulterada(sol, [X]))
    assert "primal_residual" in relatorio.kinds()


def test_certificado_acusa_autovalor_negativo(triangulo_sdp):
    sol = solve(triangulo_sdp)
    X = sol.main_block.copy()
    w, V = np.linalg.eigh(X)
    v = V[:, 0]
    X = X - (w[0] + 1.0) * np.outer(v, v)
    relatorio = check_certificate(triangulo_sdp, _adulterada(sol, [X]))
    assert "psd_residual" in relatorio.kinds()


def test_certificado_com_blocos_errados(triangulo_sdp):
    sol = solve(triangulo_sdp)
    with pytest.raises(ValueError):
        check_certificate(triangulo_sdp, _adulterada(sol, [np.eye(2)]))
