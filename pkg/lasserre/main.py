# ============================================================================
# main.py - CLI PRINCIPAL
# ============================================================================
# Subcomandos: gen, run, oracle, report, validate.
# Flags globais têm variável de ambiente com prefixo LASSERRE_; a flag vence.
# Códigos de saída: 0 sucesso, 2 uso, 3 não-convergência, 4 capacidade.
# ============================================================================

import functools
import glob
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np
from pydantic import ValidationError

from config import (
    APP_NAME,
    APP_VERSION,
    DEFAULT_SEED,
    EPS_PRIMAL,
    LOG_LEVEL,
    MAX_ITERS,
    OUT_DIR,
    THREADS,
    TOL_CONSISTENCY,
    TOL_PSD,
)
from app.crud.base import read_model, write_canonical
from app.crud.stores import instance_store, oracle_store, record_store
from app.models.moments import SdpSolution
from app.schemas import PipelineConfig, ProblemSpec, RunRecord, ValidationReport
from app.services import problems, report
from app.services.generators import generate
from app.services.pipeline import run_pipeline, solve_relaxation
from app.services.relaxation import build_sdp, moment_matrix, validate_moments
from app.services.sdpsolve import check_certificate
from app.utils.enums import ColumnNormalization, GraphFamily, ProblemKind, RoundingMode, SeedStrategy
from app.utils.errors import CapacityError, ConvergenceError, HierarchyError, MalformedSpecError
from app.utils.logs import configurar_logging
from app.utils.serialization import canonical_dumps

logger = logging.getLogger(__name__)


# ============================================================================
# CONTEXTO E ERROS
# ============================================================================

@dataclass
class Contexto:
    seed: int
    threads: int
    tol_psd: float
    tol_primal: float
    max_iters: int
    out_dir: Path


def trata_erros(func):
    """Converte exceções do projeto no código de saída correspondente."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except HierarchyError as e:
            logger.error(f"❌ {type(e).__name__}: {e}")
            click.echo(f"Erro: {e}", err=True)
            sys.exit(e.exit_code)
    return wrapper


def carregar_instancia(caminho: str) -> ProblemSpec:
    try:
        return read_model(Path(caminho), ProblemSpec)
    except (ValidationError, json.JSONDecodeError) as e:
        raise MalformedSpecError(f"Instância inválida em {caminho}: {e}") from e


# ============================================================================
# GRUPO
# ============================================================================

@click.group(help=f"{APP_NAME} {APP_VERSION}")
@click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, envvar="LASSERRE_SEED", show_default=True,
              help="Semente mestre")
@click.option("--threads", type=click.IntRange(min=1), default=THREADS, envvar="LASSERRE_THREADS", show_default=True)
@click.option("--tol-psd", type=float, default=TOL_PSD, envvar="LASSERRE_TOL_PSD", show_default=True)
@click.option("--tol-primal", type=float, default=EPS_PRIMAL, envvar="LASSERRE_TOL_PRIMAL", show_default=True)
@click.option("--max-iters", type=click.IntRange(min=1), default=MAX_ITERS, envvar="LASSERRE_MAX_ITERS",
              show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=OUT_DIR, envvar="LASSERRE_OUT_DIR",
              show_default=True)
@click.option("--log-level", default=LOG_LEVEL, envvar="LASSERRE_LOG_LEVEL", show_default=True)
@click.version_option(APP_VERSION)
@click.pass_context
def cli(ctx, seed, threads, tol_psd, tol_primal, max_iters, out_dir, log_level):
    configurar_logging(log_level)
    ctx.obj = Contexto(
        seed=seed,
        threads=threads,
        tol_psd=tol_psd,
        tol_primal=tol_primal,
        max_iters=max_iters,
        out_dir=Path(out_dir),
    )


# ============================================================================
# gen
# ============================================================================

@cli.command()
@click.option("--kind", type=click.Choice(ProblemKind.values()), required=True)
@click.option("--family", type=click.Choice(GraphFamily.values()), required=True)
@click.option("--n", "n", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--degree", type=click.IntRange(min=1), default=3, show_default=True, help="random-regular")
@click.option("--p", "p", type=click.FloatRange(0.0, 1.0), default=0.5, show_default=True, help="gnp")
@click.option("--rows", type=click.IntRange(min=1), default=None, help="grid")
@click.option("--cols", type=click.IntRange(min=1), default=None, help="grid")
@click.option("--p-in", type=click.FloatRange(0.0, 1.0), default=0.8, show_default=True, help="planted-bisection")
@click.option("--p-out", type=click.FloatRange(0.0, 1.0), default=0.1, show_default=True, help="planted-bisection")
@click.option("--alphabet", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--colors", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Arquivo de saída (padrão: <out-dir>/instances/...)")
@click.pass_obj
@trata_erros
def gen(ctx: Contexto, kind, family, n, degree, p, rows, cols, p_in, p_out, alphabet, colors, output):
    """Gera um arquivo de instância canônico."""
    spec = generate(
        ProblemKind.from_value(kind), GraphFamily.from_value(family), n, ctx.seed,
        degree=degree, p=p, rows=rows, cols=cols, p_in=p_in, p_out=p_out,
        alphabet=alphabet, colors=colors,
    )
    if output:
        destino = write_canonical(Path(output), spec)
    else:
        destino = instance_store.criar(ctx.out_dir, f"{kind}-{family}-n{spec.n}-s{ctx.seed}", spec)
    click.echo(str(destino))


# ============================================================================
# run
# ============================================================================

def _salvar_solucao(ctx: Contexto, spec: ProblemSpec, r: int, sol: SdpSolution) -> Path:
    destino = ctx.out_dir / "solutions" / f"{problems.instance_hash(spec)[:16]}-r{r}.npz"
    destino.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "r": r,
        "objective_value": sol.objective_value,
        "primal_residual": sol.primal_residual,
        "psd_residual": sol.psd_residual,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "rho": sol.rho,
    }
    blocos = {f"X{b}": B for b, B in enumerate(sol.X)}
    np.savez(destino, meta=np.array(canonical_dumps(meta)), spec=np.array(canonical_dumps(spec)), **blocos)
    return destino


@cli.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--r", "r", type=click.IntRange(min=1), required=True, help="Nível da hierarquia")
@click.option("--strategy", "strategies", multiple=True, type=click.Choice(SeedStrategy.values()),
              default=(SeedStrategy.GREEDY.value,), show_default=True)
@click.option("--mode", "modes", multiple=True, type=click.Choice(RoundingMode.values()),
              default=tuple(RoundingMode.values()), show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed-count", type=click.IntRange(min=0), default=None, help="Padrão: r − 1")
@click.option("--normalization", type=click.Choice(ColumnNormalization.values()), default="raw", show_default=True)
@click.option("--no-oracle", is_flag=True, help="Não roda a enumeração exaustiva")
@click.option("--save-solution", is_flag=True, help="Guarda a solução do SDP (.npz) para `validate`")
@click.pass_obj
@trata_erros
def run(ctx: Contexto, instance, r, strategies, modes, trials, seed_count, normalization, no_oracle, save_solution):
    """Executa o pipeline e grava um RunRecord por estratégia."""
    spec = carregar_instancia(instance)
    config = PipelineConfig(
        r=r,
        modes=[RoundingMode.from_value(m) for m in modes],
        trials=trials,
        master_seed=ctx.seed,
        seed_count=seed_count,
        normalization=ColumnNormalization.from_value(normalization),
        eps_primal=ctx.tol_primal,
        max_iters=ctx.max_iters,
        tol_psd=ctx.tol_psd,
        tol_consistency=TOL_CONSISTENCY,
        with_oracle=not no_oracle,
        threads=ctx.threads,
    )

    # ========== PASSO 1: Relaxação (uma vez para todas as estratégias) ==========
    try:
        solved = solve_relaxation(spec, config)
    except HierarchyError as e:
        logger.error(f"❌ Relaxação falhou: {e}")
        solved = None
    if solved is not None and save_solution:
        click.echo(str(_salvar_solucao(ctx, spec, r, solved.solution)))

    # ========== PASSO 2: Oráculo (uma vez) ==========
    resultado_oraculo = None
    if config.with_oracle:
        try:
            resultado_oraculo = problems.oracle(spec)
        except CapacityError as e:
            logger.warning(f"⚠️  Oráculo indisponível: {e}")

    # ========== PASSO 3: Uma execução por estratégia ==========
    codigo = 0
    for nome in dict.fromkeys(strategies):
        tempos: dict = {}
        rec = run_pipeline(
            spec, SeedStrategy.from_value(nome), config,
            solved=solved, oracle_result=resultado_oraculo,
            instance_id=Path(instance).stem, timings=tempos,
        )
        caminho = record_store.salvar(ctx.out_dir, rec)
        record_store.salvar_tempos(ctx.out_dir, rec, tempos)
        click.echo(str(caminho))
        if rec.error_code and not codigo:
            codigo = rec.error_code
        elif not rec.converged and not codigo:
            codigo = ConvergenceError.exit_code

    if codigo:
        sys.exit(codigo)


# ============================================================================
# oracle
# ============================================================================

@cli.command("oracle")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@trata_erros
def oracle_cmd(ctx: Contexto, instance):
    """Ótimo exato por enumeração; grava valor e testemunha."""
    spec = carregar_instancia(instance)
    resultado = problems.oracle(spec)
    caminho = oracle_store.salvar(ctx.out_dir, resultado)
    click.echo(str(caminho))
    click.echo(f"opt={resultado.opt_value!r} witness={resultado.witness}")


# ============================================================================
# report
# ============================================================================

@cli.command("report")
@click.argument("patterns", nargs=-1)
@click.option("--format", "formato", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@trata_erros
def report_cmd(ctx: Contexto, patterns, formato, output):
    """Tabela agregada a partir de registros (padrão: <out-dir>/records/*.json)."""
    padroes = patterns or (str(ctx.out_dir / "records" / "*.json"),)
    arquivos = sorted({
        c for p in padroes for c in glob.glob(p)
        if not c.endswith(".timings.json")
    })
    if not arquivos:
        raise click.UsageError(f"Nenhum registro encontrado em {', '.join(padroes)}")

    registros = [read_model(Path(c), RunRecord) for c in arquivos]
    linhas = report.build_rows(registros)
    texto = report.to_csv(linhas) if formato == "csv" else report.to_json(linhas)

    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(texto, encoding="utf-8")
        click.echo(output)
    else:
        click.echo(texto, nl=False)


# ============================================================================
# validate
# ============================================================================

@cli.command("validate")
@click.argument("solution", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@trata_erros
def validate_cmd(ctx: Contexto, solution):
    """Revalida uma solução guardada: momentos e certificado."""
    with np.load(solution, allow_pickle=False) as dados:
        meta = json.loads(str(dados["meta"]))
        spec = ProblemSpec.model_validate(json.loads(str(dados["spec"])))
        blocos = [dados[f"X{b}"] for b in range(sum(1 for k in dados.files if k.startswith("X")))]

    r = int(meta["r"])
    p = build_sdp(problems.encode(spec, r), r)
    sol = SdpSolution(
        X=blocos,
        objective_value=meta["objective_value"],
        primal_residual=meta["primal_residual"],
        psd_residual=meta["psd_residual"],
        iterations=meta["iterations"],
        converged=meta["converged"],
        rho=meta["rho"],
    )
    certificado = check_certificate(p, sol)
    momentos = validate_moments(moment_matrix(p.structure, blocos[0]), ctx.tol_psd, TOL_CONSISTENCY)
    final = ValidationReport(violations=certificado.violations + momentos.violations)

    click.echo(canonical_dumps(final), nl=False)
    if final.ok:
        logger.info("✅ Solução válida")
    else:
        logger.warning(f"⚠️  Violações: {sorted(final.kinds())}")
        sys.exit(1)


if __name__ == "__main__":
    cli()
