# ============================================================================
# config.py - CONFIGURAÇÕES E CONSTANTES
# ============================================================================
# Todos os valores podem ser sobrescritos por variáveis de ambiente com o
# prefixo LASSERRE_ (ou por um arquivo .env na pasta de execução).
# ============================================================================

import os
from dotenv import load_dotenv

load_dotenv()

ENV_PREFIX = "LASSERRE_"


def _env(nome: str, padrao: str) -> str:
    return os.getenv(f"{ENV_PREFIX}{nome}", padrao)


# ============================================================================
# ÍNDICE E LIMITES DE CAPACIDADE
# ============================================================================

INDEX_CAP = int(_env("INDEX_CAP", "5000"))            # máximo de pares (S, α)
SOLVER_DIM_CAP = int(_env("SOLVER_DIM_CAP", "2000"))  # lado máximo da matriz no solver
ORACLE_CAP = int(float(_env("ORACLE_CAP", "1e7")))    # k^n máximo na enumeração
EXHAUSTIVE_CAP = int(float(_env("EXHAUSTIVE_CAP", "1e6")))  # C(n, m) máximo
GEN_MAX_N = int(_env("GEN_MAX_N", "200"))

# ============================================================================
# TOLERÂNCIAS DOS MOMENTOS
# ============================================================================

TOL_PSD = float(_env("TOL_PSD", "1e-6"))
TOL_CONSISTENCY = float(_env("TOL_CONSISTENCY", "1e-5"))
P_MIN = float(_env("P_MIN", "1e-8"))  # probabilidade mínima para condicionar

# ============================================================================
# SOLVER (ADMM)
# ============================================================================

EPS_PRIMAL = float(_env("EPS_PRIMAL", "1e-6"))
EPS_PSD = float(_env("EPS_PSD", "1e-6"))
MAX_ITERS = int(_env("MAX_ITERS", "50000"))
RELAXATION = float(_env("RELAXATION", "1.5"))     # sobre-relaxação
RHO = float(_env("RHO", "1.0"))                   # penalidade inicial
ADAPT_EVERY = int(_env("ADAPT_EVERY", "100"))     # balanceamento de resíduos
CHECK_EVERY = 10

# ============================================================================
# EMBEDDING / SELEÇÃO DE SEMENTES
# ============================================================================

RANK_TOL = 1e-10
DEGENERATE_TOL = 1e-14

# ============================================================================
# PROBLEMAS
# ============================================================================

PREDICTED_FACTOR_C = 2.0  # fator indicativo 1 + c / λ_{r+1}
PREDICTED_FACTOR_NOTE = "indicative, constants unverified"

# ============================================================================
# APLICAÇÃO / CLI
# ============================================================================

APP_NAME = "Lasserre Propagation Rounding"
APP_VERSION = "1.0.0"
FORMAT_VERSION = 1
OUT_DIR = _env("OUT_DIR", "results")
THREADS = int(_env("THREADS", "1"))
DEFAULT_SEED = int(_env("SEED", "0"))
LOG_LEVEL = _env("LOG_LEVEL", "INFO")
