import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from config import (
    EPS_PRIMAL,
    EPS_PSD,
    FORMAT_VERSION,
    MAX_ITERS,
    P_MIN,
    TOL_CONSISTENCY,
    TOL_PSD,
)
from app.utils.enums import (
    ColumnNormalization,
    ProblemKind,
    RoundingMode,
    SeedStrategy,
    Sense,
)


# ============================================
# VALIDAÇÃO (momentos e certificados)
# ============================================

class Violation(BaseModel):
    """Uma classe de invariante violada, com a magnitude do pior caso."""
    kind: str
    magnitude: float
    detail: str = ""


class ValidationReport(BaseModel):
    """Relatório de validação: vazio significa válido."""
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


# ============================================
# PROBLEMA (arquivo de instância)
# ============================================

class PackingConstraint(BaseModel):
    """Σ_i coeffs[i]·[i no lado escolhido] ≤ budget"""
    coeffs: list[float]
    budget: float

    @field_validator("coeffs", mode="after")
    @classmethod
    def validar_nao_negativos(cls, v):
        if any(c < 0 or not math.isfinite(c) for c in v):
            raise ValueError("Coeficientes de empacotamento devem ser finitos e ≥ 0")
        return v


class ProblemParams(BaseModel):
    """
    Parâmetros específicos de cada tipo (todos opcionais).

    Listas "por aresta" (permutations, csp_tables) seguem a ordem de `edges`.
    """
    bisection_slack: int = Field(0, ge=0)
    alphabet: Optional[int] = Field(None, ge=2)
    permutations: Optional[list[list[int]]] = None
    qip_matrix: Optional[list[list[float]]] = None
    qip_sense: Sense = Sense.MAXIMIZE
    packing: list[PackingConstraint] = Field(default_factory=list)
    min_side: Optional[float] = None
    normalization: Optional[float] = None
    csp_tables: Optional[list[list[float]]] = None
    vertex_weights: Optional[list[float]] = None
    colors: int = Field(3, ge=1)
    penalty: Optional[float] = Field(None, ge=0)
    strict: bool = False
    planted_side: Optional[list[int]] = None


class ProblemSpec(BaseModel):
    """
    Instância de problema em formato canônico (o arquivo gerado por `gen`).

    Exemplo:
        ProblemSpec(kind="max-cut", n=2, edges=[(0, 1, 1.0)])
    """
    format_version: int = FORMAT_VERSION
    kind: ProblemKind
    n: int = Field(..., ge=1)
    k_hint: Optional[int] = None
    edges: list[tuple[int, int, float]] = Field(default_factory=list)
    params: ProblemParams = Field(default_factory=ProblemParams)

    @property
    def k(self) -> int:
        if self.kind in (ProblemKind.UNIQUE_GAMES, ProblemKind.TWO_CSP):
            return self.params.alphabet or self.k_hint or 2
        if self.kind is ProblemKind.PARTIAL_3_COLORING:
            return self.params.colors + 1
        return 2

    @property
    def sense(self) -> Sense:
        """Sentido nativo do problema."""
        if self.kind is ProblemKind.QIP:
            return self.params.qip_sense
        if self.kind in (
            ProblemKind.MIN_BISECTION,
            ProblemKind.SPARSEST_CUT,
            ProblemKind.CAPACITY_CUT_PACKING,
        ):
            return Sense.MINIMIZE
        return Sense.MAXIMIZE

    @model_validator(mode="after")
    def validar_bem_formado(self):
        n, k, p = self.n, self.k, self.params

        for (u, v, w) in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"Aresta inválida ({u}, {v}) para n={n}")
            if w < 0 or not math.isfinite(w):
                raise ValueError(f"Peso da aresta ({u}, {v}) deve ser finito e ≥ 0")

        if self.kind is ProblemKind.UNIQUE_GAMES:
            if p.permutations is None or len(p.permutations) != len(self.edges):
                raise ValueError("unique-games exige uma permutação por aresta")
            for perm in p.permutations:
                if sorted(perm) != list(range(k)):
                    raise ValueError(f"Permutação {perm} não é bijeção em [{k}]")

        if self.kind is ProblemKind.TWO_CSP:
            if p.csp_tables is None or len(p.csp_tables) != len(self.edges):
                raise ValueError("two-csp exige uma tabela por aresta")
            if any(len(t) != k * k for t in p.csp_tables):
                raise ValueError(f"Tabelas de two-csp devem ter {k * k} entradas")

        if self.kind is ProblemKind.QIP:
            if p.qip_matrix is None:
                raise ValueError("qip exige qip_matrix")
            A = np.asarray(p.qip_matrix, dtype=float)
            if A.shape != (n, n) or not np.allclose(A, A.T, atol=0.0):
                raise ValueError("qip_matrix deve ser n × n simétrica")
            if np.linalg.eigvalsh(A)[0] < -1e-8:
                raise ValueError("qip_matrix deve ser PSD")

        if self.kind is ProblemKind.CAPACITY_CUT_PACKING:
            for c in p.packing:
                if len(c.coeffs) != n:
                    raise ValueError(f"Restrição de empacotamento deve ter {n} coeficientes")

        if p.vertex_weights is not None:
            if len(p.vertex_weights) != n or any(w < 0 for w in p.vertex_weights):
                raise ValueError(f"vertex_weights deve ter {n} pesos ≥ 0")

        return self


# ============================================
# ORÁCULO E AVALIAÇÃO
# ============================================

class OracleResult(BaseModel):
    """Ótimo exato por enumeração."""
    opt_value: float
    witness: list[int]
    enumerated: int
    instance_hash: Optional[str] = None


class EvaluationResult(BaseModel):
    """Valor nativo, viabilidade e violações de uma atribuição."""
    value: float
    feasible: bool
    violations: list[str] = Field(default_factory=list)


# ============================================
# CONFIGURAÇÃO DO PIPELINE
# ============================================

class PipelineConfig(BaseModel):
    """
    Configuração de uma execução (entra no hash de configuração).

    `threads` fica fora do hash: o resultado não depende dele.
    """
    r: int = Field(..., ge=1)
    modes: list[RoundingMode] = Field(default_factory=lambda: [RoundingMode.INDEPENDENT, RoundingMode.THRESHOLD])
    trials: int = Field(1, ge=1)
    master_seed: int = Field(0, ge=0)
    seed_count: Optional[int] = Field(None, ge=0)
    normalization: ColumnNormalization = ColumnNormalization.RAW
    eps_primal: float = EPS_PRIMAL
    eps_psd: float = EPS_PSD
    max_iters: int = MAX_ITERS
    tol_psd: float = TOL_PSD
    tol_consistency: float = TOL_CONSISTENCY
    p_min: float = P_MIN
    with_oracle: bool = True
    threads: int = Field(1, ge=1)

    def hash_payload(self, strategy: SeedStrategy) -> dict:
        dados = self.model_dump(mode="json", exclude={"threads"})
        dados["strategy"] = strategy.value
        return dados


# ============================================
# REGISTRO DE EXECUÇÃO
# ============================================

class ModeSummary(BaseModel):
    """Resumo de um modo de arredondamento ao longo das tentativas."""
    mode: RoundingMode
    best_pre_repair: Optional[float] = None
    mean_pre_repair: Optional[float] = None
    best_post_repair: Optional[float] = None
    mean_post_repair: Optional[float] = None
    feasible_pre_repair: int = 0
    feasible_post_repair: int = 0
    repaired_trials: int = 0
    best_assignment: Optional[list[int]] = None
    best_trial: Optional[int] = None
    best_theta: Optional[float] = None
    expected_value_mean: Optional[float] = None
    error: Optional[str] = None


class RunRecord(BaseModel):
    """Uma execução do pipeline (uma estratégia de sementes)."""
    format_version: int = FORMAT_VERSION
    instance_id: str
    instance_hash: str
    config_hash: str
    kind: ProblemKind
    n: int
    k: int
    r: int
    strategy: str
    seeds: list[int] = Field(default_factory=list)
    seed_score: Optional[float] = None
    sdp_value: Optional[float] = None
    converged: bool = False
    primal_residual: Optional[float] = None
    psd_residual: Optional[float] = None
    iterations: Optional[int] = None
    lambdas: list[float] = Field(default_factory=list)
    lambda_r_plus_1: Optional[float] = None
    predicted_factor: Optional[float] = None
    predicted_note: Optional[str] = None
    modes: list[ModeSummary] = Field(default_factory=list)
    oracle_opt: Optional[float] = None
    trials: int
    master_seed: int
    error: Optional[str] = None
    error_code: Optional[int] = None


class ReportRow(BaseModel):
    """Linha do relatório agregado; a ordem dos campos é a ordem das colunas."""
    instance_hash: str
    instance_id: str
    kind: str
    n: int
    k: int
    r: int
    strategy: str
    mode: str
    sdp_value: Optional[float] = None
    best_rounded: Optional[float] = None
    oracle_opt: Optional[float] = None
    ratio_rounded_opt: Optional[float] = None
    ratio_rounded_sdp: Optional[float] = None
    lambda_r_plus_1: Optional[float] = None
    predicted_factor: Optional[float] = None
