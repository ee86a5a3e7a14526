# lasserre/app/services/pipeline.py

"""
Service do pipeline

Orquestra uma execução completa:
resolver → escolher sementes → (por tentativa) sortear sementes,
condicionar e arredondar → avaliar/reparar → agregar num RunRecord.

A relaxação é resolvida uma vez e reaproveitada por todas as estratégias
de sementes; cada tentativa tem seu próprio gerador derivado de
(semente mestre, índice da tentativa), e os resultados são juntados em
ordem de índice, então o registro não depende do número de threads.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config import PREDICTED_FACTOR_NOTE
from app.models.instance import LabelingInstance
from app.models.moments import MomentMatrix, SdpProblem, SdpSolution
from app.models.rounding import ConditionalTable, RoundingResult, SeedSet
from app.schemas import ModeSummary, OracleResult, PipelineConfig, ProblemSpec, RunRecord
from app.services import problems
from app.services.embed import factorize, laplacian_spectrum, seed_columns, weighted_degrees
from app.services.relaxation import build_sdp, moment_matrix, validate_moments
from app.services.rounding import (
    conditional_table,
    expected_value_independent,
    round_independent,
    round_threshold,
    sample_seed_assignment,
    threshold_candidates,
)
from app.services.sdpsolve import solve
from app.services.seeds import select_seeds
from app.utils.enums import RoundingMode, SeedStrategy
from app.utils.errors import CapacityError, HierarchyError
from app.utils.serialization import canonical_hash

logger = logging.getLogger(__name__)

SELECTION_STREAM = 1
TRIAL_STREAM = 0
THRESHOLD_SIDE = 1


# ============================================================================
# GERADORES DETERMINÍSTICOS
# ============================================================================

def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, TRIAL_STREAM, trial_index]))


def selection_rng(master_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, SELECTION_STREAM]))


# ============================================================================
# RELAXAÇÃO
# ============================================================================

@dataclass(eq=False)
class SolvedRelaxation:
    instance: LabelingInstance
    problem: SdpProblem
    solution: SdpSolution
    moments: MomentMatrix
    seconds: float = 0.0


def solve_relaxation(spec: ProblemSpec, config: PipelineConfig) -> SolvedRelaxation:
    """Codifica, monta o SDP de nível r e resolve (uma vez por instância)."""
    inicio = time.perf_counter()
    inst = problems.encode(spec, config.r)
    p = build_sdp(inst, config.r)
    sol = solve(p, eps_primal=config.eps_primal, eps_psd=config.eps_psd, max_iters=config.max_iters)
    M = moment_matrix(p.structure, sol.main_block)
    return SolvedRelaxation(
        instance=inst, problem=p, solution=sol, moments=M,
        seconds=time.perf_counter() - inicio,
    )


# ============================================================================
# TENTATIVAS
# ============================================================================

@dataclass
class _ModeOutcome:
    pre: RoundingResult
    post: RoundingResult
    repaired: bool


@dataclass
class _TrialOutcome:
    modes: dict[RoundingMode, _ModeOutcome] = field(default_factory=dict)
    expected_value: Optional[float] = None


def _result(spec: ProblemSpec, x: list[int], mode: RoundingMode, t: int, theta=None) -> RoundingResult:
    av = problems.evaluate(spec, x)
    return RoundingResult(
        assignment=x, objective=av.value, feasible=av.feasible, mode=mode,
        trial_index=t, threshold_used=theta, violations=av.violations,
    )


def _pick(spec: ProblemSpec, atual: Optional[RoundingResult], novo: RoundingResult) -> RoundingResult:
    """Prefere viável; entre viáveis, o melhor no sentido nativo (empate → o primeiro)."""
    if atual is None:
        return novo
    if novo.feasible and not atual.feasible:
        return novo
    if novo.feasible == atual.feasible and spec.sense.better(novo.objective, atual.objective):
        return novo
    return atual


def _round_mode(
    spec: ProblemSpec,
    cond: ConditionalTable,
    mode: RoundingMode,
    rng: np.random.Generator,
    t: int,
) -> _ModeOutcome:
    if mode is RoundingMode.INDEPENDENT:
        x = round_independent(cond, rng)
        xr = problems.repair(spec, x)
        return _ModeOutcome(
            pre=_result(spec, x, mode, t),
            post=_result(spec, xr, mode, t),
            repaired=xr != x,
        )

    # limiar: varre os pontos de quebra e fica com o melhor viável
    melhor_pre, melhor_post, reparou = None, None, False
    for theta in threshold_candidates(cond, THRESHOLD_SIDE):
        x = round_threshold(cond, theta, THRESHOLD_SIDE)
        xr = problems.repair(spec, x)
        pre = _result(spec, x, mode, t, theta)
        post = _result(spec, xr, mode, t, theta)
        melhor_pre = _pick(spec, melhor_pre, pre)
        escolhido = _pick(spec, melhor_post, post)
        if escolhido is post:
            reparou = xr != x
        melhor_post = escolhido
    return _ModeOutcome(pre=melhor_pre, post=melhor_post, repaired=reparou)


def run_trial(
    spec: ProblemSpec,
    inst: LabelingInstance,
    M: MomentMatrix,
    seeds: SeedSet,
    modes: list[RoundingMode],
    config: PipelineConfig,
    trial_index: int,
) -> _TrialOutcome:
    """Uma tentativa: sorteia as sementes, condiciona e arredonda em cada modo."""
    rng = trial_rng(config.master_seed, trial_index)
    atribuicao, Mc = sample_seed_assignment(M, seeds, rng, config.p_min, config.tol_consistency)
    cond = conditional_table(Mc, atribuicao, config.tol_consistency)

    saida = _TrialOutcome()
    for mode in modes:
        saida.modes[mode] = _round_mode(spec, cond, mode, rng, trial_index)
    if RoundingMode.INDEPENDENT in modes:
        saida.expected_value = expected_value_independent(cond, inst)
    return saida


# ============================================================================
# AGREGAÇÃO
# ============================================================================

def _summarize(spec: ProblemSpec, mode: RoundingMode, outcomes: list[_TrialOutcome]) -> ModeSummary:
    resultados = [o.modes[mode] for o in outcomes]
    pre = [r.pre.objective for r in resultados if r.pre.feasible]
    post_viaveis = [r.post for r in resultados if r.post.feasible]

    melhor = None
    for r in post_viaveis:
        if melhor is None or spec.sense.better(r.objective, melhor.objective):
            melhor = r

    escolher = min if spec.sense.sign > 0 else max
    resumo = ModeSummary(
        mode=mode,
        best_pre_repair=escolher(pre) if pre else None,
        mean_pre_repair=float(np.mean(pre)) if pre else None,
        best_post_repair=melhor.objective if melhor else None,
        mean_post_repair=float(np.mean([r.objective for r in post_viaveis])) if post_viaveis else None,
        feasible_pre_repair=len(pre),
        feasible_post_repair=len(post_viaveis),
        repaired_trials=sum(1 for r in resultados if r.repaired),
        best_assignment=melhor.assignment if melhor else None,
        best_trial=melhor.trial_index if melhor else None,
        best_theta=melhor.threshold_used if melhor else None,
    )
    if mode is RoundingMode.INDEPENDENT:
        esperados = [o.expected_value for o in outcomes if o.expected_value is not None]
        resumo.expected_value_mean = float(np.mean(esperados)) if esperados else None
    return resumo


# ============================================================================
# PIPELINE
# ============================================================================

def config_hash(config: PipelineConfig, strategy: SeedStrategy) -> str:
    return canonical_hash(config.hash_payload(strategy))


def run_pipeline(
    spec: ProblemSpec,
    strategy: SeedStrategy,
    config: PipelineConfig,
    solved: Optional[SolvedRelaxation] = None,
    oracle_result: Optional[OracleResult] = None,
    instance_id: Optional[str] = None,
    timings: Optional[dict] = None,
) -> RunRecord:
    """
    Executa o pipeline completo para uma estratégia de sementes.

    Falhas de qualquer fase viram um registro parcial com `error` e
    `error_code` em vez de abortar o lote.

    Args:
        solved: relaxação já resolvida (reaproveitada entre estratégias)
        oracle_result: ótimo já calculado (senão calcula se with_oracle)
        timings: se dado, recebe os tempos por fase (segundos)

    Exemplo:
        rec = run_pipeline(aresta_max_cut, SeedStrategy.GREEDY, PipelineConfig(r=2, trials=10))
        # → rec.modes[0].best_post_repair == 1.0
    """
    spec = problems.normalized(spec)
    h = problems.instance_hash(spec)
    tempos = timings if timings is not None else {}
    record = RunRecord(
        instance_id=instance_id or h[:12],
        instance_hash=h,
        config_hash=config_hash(config, strategy),
        kind=spec.kind,
        n=spec.n,
        k=spec.k,
        r=config.r,
        strategy=strategy.value,
        trials=config.trials,
        master_seed=config.master_seed,
        predicted_note=PREDICTED_FACTOR_NOTE,
    )

    try:
        # ========== PASSO 1: Espectro e fator previsto ==========
        espectro = laplacian_spectrum(problems.graph_edges(spec), spec.n)
        record.lambdas = espectro.lambdas(min(spec.n, config.r + 2))
        record.lambda_r_plus_1, record.predicted_factor = problems.predicted_factor(spec, config.r, espectro)

        # ========== PASSO 2: Relaxação ==========
        if solved is None:
            solved = solve_relaxation(spec, config)
        tempos["solve"] = solved.seconds
        sol = solved.solution
        record.sdp_value = sol.objective_value
        record.converged = sol.converged
        record.primal_residual = sol.primal_residual
        record.psd_residual = sol.psd_residual
        record.iterations = sol.iterations

        relatorio = validate_moments(solved.moments, config.tol_psd, config.tol_consistency)
        if not relatorio.ok:
            logger.warning(f"⚠️  Momentos fora da tolerância: {sorted(relatorio.kinds())}")

        # ========== PASSO 3: Sementes ==========
        inicio = time.perf_counter()
        emb = factorize(solved.moments)
        graus = weighted_degrees(problems.graph_edges(spec), spec.n)
        V, grupos = seed_columns(emb, config.normalization, graus)
        m = config.seed_count if config.seed_count is not None else max(0, config.r - 1)
        seeds = select_seeds(strategy, V, grupos, min(m, spec.n), selection_rng(config.master_seed))
        record.strategy = seeds.strategy
        record.seeds = seeds.variables
        record.seed_score = seeds.score
        tempos["select"] = time.perf_counter() - inicio

        # ========== PASSO 4: Tentativas (ordem de índice) ==========
        inicio = time.perf_counter()
        modos = list(config.modes)
        erros_modo = {}
        if RoundingMode.THRESHOLD in modos and spec.k != 2:
            erros_modo[RoundingMode.THRESHOLD] = f"threshold exige k = 2 (k = {spec.k})"
            modos.remove(RoundingMode.THRESHOLD)

        def tentativa(t: int) -> _TrialOutcome:
            return run_trial(spec, solved.instance, solved.moments, seeds, modos, config, t)

        if config.threads > 1:
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                resultados = list(pool.map(tentativa, range(config.trials)))
        else:
            resultados = [tentativa(t) for t in range(config.trials)]
        tempos["round"] = time.perf_counter() - inicio

        for mode in config.modes:
            if mode in erros_modo:
                record.modes.append(ModeSummary(mode=mode, error=erros_modo[mode]))
            else:
                record.modes.append(_summarize(spec, mode, resultados))

        # ========== PASSO 5: Oráculo ==========
        if oracle_result is None and config.with_oracle:
            inicio = time.perf_counter()
            try:
                oracle_result = problems.oracle(spec)
            except CapacityError as e:
                logger.warning(f"⚠️  Oráculo indisponível: {e}")
            tempos["oracle"] = time.perf_counter() - inicio
        if oracle_result is not None:
            record.oracle_opt = oracle_result.opt_value

    except HierarchyError as e:
        logger.error(f"❌ Pipeline interrompido ({type(e).__name__}): {e}")
        record.error = f"{type(e).__name__}: {e}"
        record.error_code = e.exit_code

    if record.error is None:
        logger.info(
            f"✅ {spec.kind.value} n={spec.n} r={config.r} {record.strategy}: "
            f"sdp={record.sdp_value:.6f}, sementes={record.seeds}"
        )
    return record
