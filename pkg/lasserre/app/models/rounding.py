from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.utils.enums import RoundingMode


# ============================================
# MODELO: SeedSet
# Variáveis condicionadas antes do arredondamento
# ============================================

@dataclass
class SeedSet:
    variables: list[int]
    strategy: str                # tag da estratégia (pode vir com "-padded")
    score: float                 # erro de projeção da seleção

    @property
    def size(self) -> int:
        return len(self.variables)


# ============================================
# MODELO: ConditionalTable
# Marginais condicionais das variáveis não-semente
# ============================================

@dataclass(eq=False)
class ConditionalTable:
    """
    Resultado da propagação: sementes fixadas e a marginal (renormalizada)
    de cada variável restante.
    """
    n: int
    k: int
    seed_assignment: dict[int, int]
    marginals: dict[int, np.ndarray]
    source_level: int

    def probability_matrix(self) -> np.ndarray:
        """n × k com as sementes como massas pontuais."""
        P = np.zeros((self.n, self.k))
        for v, a in self.seed_assignment.items():
            P[v, a] = 1.0
        for v, m in self.marginals.items():
            P[v] = m
        return P

    def free_variables(self) -> list[int]:
        return sorted(self.marginals)


# ============================================
# MODELO: RoundingResult
# ============================================

@dataclass
class RoundingResult:
    assignment: list[int]
    objective: float
    feasible: bool
    mode: RoundingMode
    trial_index: int
    threshold_used: Optional[float] = None
    violations: list[str] = field(default_factory=list)
