from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.models.moments import AssignmentIndex


# ============================================
# MODELO: Embedding
# Vetores x_S(α): colunas de V com M = Vᵀ V
# ============================================

@dataclass(eq=False)
class Embedding:
    vectors: np.ndarray              # dim_ambient × dim (uma coluna por índice)
    index: list[AssignmentIndex]
    n: int
    k: int

    @property
    def dim_ambient(self) -> int:
        return self.vectors.shape[0]

    def vector(self, position: int) -> np.ndarray:
        return self.vectors[:, position]

    def gram(self) -> np.ndarray:
        return self.vectors.T @ self.vectors

    def degree_one_block(self) -> np.ndarray:
        """Colunas v_{i→j} em ordem (variável, rótulo): dim_ambient × (n·k)."""
        return self.vectors[:, 1:1 + self.n * self.k]

    def groups(self) -> list[list[int]]:
        """Grupo de colunas (no bloco de grau 1) de cada variável."""
        return [list(range(i * self.k, (i + 1) * self.k)) for i in range(self.n)]


# ============================================
# MODELO: SpectralReport
# Espectro do Laplaciano normalizado D^{-1/2} L D^{-1/2}
# ============================================

@dataclass(eq=False)
class SpectralReport:
    eigenvalues: np.ndarray  # crescente

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def lambda_of(self, m: int) -> Optional[float]:
        """λ_m com m ∈ [1, n]; None fora do intervalo (espectro esgotado)."""
        if not 1 <= m <= self.n:
            return None
        return float(self.eigenvalues[m - 1])

    def lambdas(self, upto: int) -> list[float]:
        return [float(x) for x in self.eigenvalues[:min(upto, self.n)]]
