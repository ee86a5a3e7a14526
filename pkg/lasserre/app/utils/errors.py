# ============================================================================
# errors.py - EXCEÇÕES DO PROJETO
# ============================================================================
# Cada exceção carrega o código de saída que a CLI devolve
# (0 sucesso, 2 uso, 3 não-convergência, 4 limites de capacidade).
# ============================================================================


class HierarchyError(Exception):
    """Erro base do projeto."""
    exit_code = 1


class CapacityError(HierarchyError):
    """Instância grande demais para a escala de mesa (índice, solver, oráculo...)."""
    exit_code = 4


class ConvergenceError(HierarchyError):
    """O solver não convergiu dentro do número máximo de iterações."""
    exit_code = 3


class MalformedSpecError(HierarchyError, ValueError):
    """Especificação de problema mal formada."""
    exit_code = 2


class IncompatibleFamilyError(MalformedSpecError):
    """Família de grafo incompatível com o tipo de problema."""


class ScopeError(HierarchyError, ValueError):
    """Escopo de termo não representável no nível pedido."""
    exit_code = 2


class InvalidMomentError(HierarchyError):
    """Momentos violam as identidades além da tolerância."""


class NearZeroProbabilityError(HierarchyError):
    """Evento de condicionamento com probabilidade abaixo de p_min."""


class LevelBudgetError(HierarchyError, ValueError):
    """Nível r insuficiente para o número de sementes (r ≥ |sementes| + 1)."""
    exit_code = 2


class StoreConflictError(HierarchyError):
    """Arquivo já existe com conteúdo diferente (registros são só de acréscimo)."""
