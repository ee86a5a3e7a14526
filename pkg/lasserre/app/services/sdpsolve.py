# lasserre/app/services/sdpsolve.py

"""
Solver de SDP denso por ADMM (splitting de operadores)

Alterna:
- projeção no conjunto afim {x : A x = b} (equações normais fatoradas uma vez)
- projeção no cone PSD por autodecomposição, bloco a bloco

Variáveis duais ficam internas; a convergência é decidida pelos resíduos
primais e pelo resíduo de ponto fixo do ADMM.
"""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from config import (
    ADAPT_EVERY,
    CHECK_EVERY,
    EPS_PRIMAL,
    EPS_PSD,
    MAX_ITERS,
    RELAXATION,
    RHO,
    SOLVER_DIM_CAP,
)
from app.models.moments import SdpProblem, SdpSolution, smat, svec
from app.schemas import ValidationReport, Violation
from app.utils.errors import CapacityError

logger = logging.getLogger(__name__)


# ============================================================================
# PROJEÇÕES
# ============================================================================

class AffineProjector:
    """Π(v) = v − Aᵀ (A Aᵀ)⁻¹ (A v − b), com A Aᵀ fatorada uma única vez."""

    def __init__(self, A: sp.csr_matrix, b: np.ndarray):
        self.A = A.tocsr()
        self.At = self.A.T.tocsr()
        self.b = b
        K = (self.A @ self.At).tocsc()
        try:
            self.lu = splu(K)
        except RuntimeError:
            logger.warning("⚠️  A Aᵀ singular: restrições redundantes, regularizando com 1e-10")
            self.lu = splu((K + 1e-10 * sp.identity(K.shape[0], format="csc")).tocsc())

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return v - self.At @ self.lu.solve(self.A @ v - self.b)


def project_psd(X: np.ndarray) -> np.ndarray:
    """Projeção de Frobenius no cone PSD (autovalores negativos zerados)."""
    w, Q = np.linalg.eigh((X + X.T) / 2)
    w = np.clip(w, 0.0, None)
    P = (Q * w) @ Q.T
    return (P + P.T) / 2


def _project_blocks(v: np.ndarray, grandes: list[tuple[int, int, int]]) -> np.ndarray:
    """Folgas 1×1 viram a parte positiva; `grandes` = (início, fim, lado) dos demais blocos."""
    out = np.maximum(v, 0.0)
    for ini, fim, d in grandes:
        out[ini:fim] = svec(project_psd(smat(v[ini:fim], d)))
    return out


def psd_residual(blocks: list[np.ndarray]) -> float:
    """−λ_min sobre todos os blocos, com piso em 0."""
    pior = 0.0
    for B in blocks:
        lam = float(np.linalg.eigvalsh((B + B.T) / 2)[0])
        pior = max(pior, -lam)
    return pior


def _has_pin(p: SdpProblem) -> bool:
    """Linha 0 deve ser exatamente X[0, 0] = 1."""
    linha = p.constraints.getrow(0)
    return list(linha.indices) == [0] and linha.data[0] != 0 and p.rhs[0] / linha.data[0] == 1.0


def primal_residual(p: SdpProblem, blocks: list[np.ndarray]) -> float:
    """max_i |⟨A_i, X⟩ − b_i|"""
    return float(np.max(np.abs(p.constraints @ p.vectorize(blocks) - p.rhs)))


# ============================================================================
# SOLVE
# ============================================================================

def solve(
    p: SdpProblem,
    eps_primal: float = EPS_PRIMAL,
    eps_psd: float = EPS_PSD,
    max_iters: int = MAX_ITERS,
    rho: float = RHO,
    relaxation: float = RELAXATION,
    adapt_every: int = ADAPT_EVERY,
    dim_cap: int = SOLVER_DIM_CAP,
) -> SdpSolution:
    """
    Resolve o SDP por ADMM com sobre-relaxação e balanceamento de resíduos.

    Args:
        p: problema em forma padrão (linha 0 = fixação)
        eps_primal, eps_psd: tolerâncias dos resíduos
        max_iters: limite de iterações (ao estourar, converged=False)

    Returns:
        SdpSolution com o melhor iterado (menor resíduo primal) se não
        convergiu, ou o iterado convergido.

    Exemplo:
        sol = solve(build_sdp(inst, r=2))
        # → sol.converged, sol.objective_value
    """
    if max(p.block_dims) > dim_cap:
        raise CapacityError(f"Bloco de lado {max(p.block_dims)} excede o limite do solver {dim_cap}")
    if p.num_constraints == 0 or not _has_pin(p):
        raise ValueError("O problema precisa da restrição de fixação X[0,0] = 1 na linha 0")

    offsets = p.offsets
    N = offsets[-1]
    c = p.sense.sign * p.c_vector()
    escala_c = 1.0 + float(np.max(np.abs(c))) if c.size else 1.0
    proj_afim = AffineProjector(p.constraints, p.rhs)
    grandes = [(offsets[b], offsets[b + 1], d) for b, d in enumerate(p.block_dims) if d > 1]

    z = np.zeros(N)
    u = np.zeros(N)
    melhor_z, melhor_prim = z.copy(), np.inf
    convergiu = False
    it = 0

    for it in range(1, max_iters + 1):
        x = proj_afim(z - u - c / rho)
        xh = relaxation * x + (1.0 - relaxation) * z
        z_novo = _project_blocks(xh + u, grandes)
        u = u + xh - z_novo
        dz = z_novo - z
        z = z_novo

        if it % CHECK_EVERY == 0 or it == max_iters:
            prim = float(np.max(np.abs(p.constraints @ z - p.rhs)))
            dual = rho * float(np.max(np.abs(dz)))
            if prim < melhor_prim:
                melhor_prim, melhor_z = prim, z.copy()
            if prim <= eps_primal and dual <= eps_primal * escala_c:
                convergiu = True
                melhor_z = z.copy()
                break

        if it % adapt_every == 0:
            r_norm = float(np.linalg.norm(x - z))
            s_norm = rho * float(np.linalg.norm(dz))
            if r_norm > 10.0 * s_norm:
                rho *= 2.0
                u /= 2.0
            elif s_norm > 10.0 * r_norm:
                rho /= 2.0
                u *= 2.0

    blocks = p.unvectorize(melhor_z)
    prim = primal_residual(p, blocks)
    psd = psd_residual(blocks)
    convergiu = convergiu and prim <= eps_primal and psd <= eps_psd
    valor = p.objective_value(blocks)

    if convergiu:
        logger.info(f"✅ SDP convergiu em {it} iterações: valor={valor:.8f}, resíduo={prim:.2e}")
    else:
        logger.warning(f"⚠️  SDP não convergiu ({it} iterações): resíduo primal={prim:.2e}, psd={psd:.2e}")

    return SdpSolution(
        X=blocks,
        objective_value=valor,
        primal_residual=prim,
        psd_residual=psd,
        iterations=it,
        converged=convergiu,
        rho=rho,
    )


# ============================================================================
# CERTIFICADO
# ============================================================================

def check_certificate(p: SdpProblem, s: SdpSolution, tol: float = 1e-9) -> ValidationReport:
    """
    Recalcula objetivo, resíduo primal e λ_min a partir de X e compara
    com os valores guardados na solução.
    """
    if [B.shape for B in s.X] != [(d, d) for d in p.block_dims]:
        raise ValueError("Blocos da solução não batem com o problema")

    violacoes = []
    valor = p.objective_value(s.X)
    if abs(valor - s.objective_value) > tol * max(1.0, abs(valor)):
        violacoes.append(Violation(
            kind="objective", magnitude=abs(valor - s.objective_value),
            detail=f"guardado {s.objective_value!r}, recalculado {valor!r}",
        ))
    prim = primal_residual(p, s.X)
    if abs(prim - s.primal_residual) > tol:
        violacoes.append(Violation(
            kind="primal_residual", magnitude=abs(prim - s.primal_residual),
            detail=f"guardado {s.primal_residual:.3e}, recalculado {prim:.3e}",
        ))
    psd = psd_residual(s.X)
    if abs(psd - s.psd_residual) > tol:
        violacoes.append(Violation(
            kind="psd_residual", magnitude=abs(psd - s.psd_residual),
            detail=f"guardado {s.psd_residual:.3e}, recalculado {psd:.3e}",
        ))
    return ValidationReport(violations=violacoes)

