from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from app.utils.enums import Sense


# ============================================
# MODELO: AssignmentIndex
# Par (S, α): conjunto ordenado de variáveis e rótulos alinhados
# ============================================

@dataclass(frozen=True)
class AssignmentIndex:
    scope: tuple[int, ...]
    labels: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.scope)

    def sort_key(self):
        """Ordem canônica: tamanho, depois conjunto, depois rótulos."""
        return (len(self.scope), self.scope, self.labels)

    def __str__(self) -> str:
        if not self.scope:
            return "(∅)"
        return "(" + ", ".join(f"{v}→{a}" for v, a in zip(self.scope, self.labels)) + ")"


# ============================================
# MODELO: MomentStructure
# Layout combinatório de um nível r (depende só de n, k, r)
# ============================================

@dataclass(eq=False)
class MomentStructure:
    """
    Tudo que é combinatório na matriz de momentos de nível r.

    Uma "chave" é uma atribuição parcial U → γ com |U| ≤ min(2r, n); toda
    entrada compatível (i, j) da matriz lê o momento da chave união.
    """
    n: int
    k: int
    r: int
    index: list[AssignmentIndex]
    index_array: np.ndarray      # dim × n, rótulo ou -1
    index_codes: np.ndarray      # código base (k+1) de cada índice
    pair_key: np.ndarray         # dim × dim, id da chave união ou -1 (incompatível)
    key_codes: np.ndarray        # K códigos ordenados
    key_array: np.ndarray        # K × n
    rep_row: np.ndarray          # posição representante (linha ≤ coluna) de cada chave
    rep_col: np.ndarray
    marg_parent: np.ndarray      # identidades de marginalização: pai ...
    marg_children: np.ndarray    # ... e seus k filhos (R × k)
    _sorted_index_codes: np.ndarray = field(repr=False, default=None)
    _index_order: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.index)

    @property
    def key_size(self) -> np.ndarray:
        return (self.key_array >= 0).sum(axis=1)

    def encode(self, assignment: np.ndarray) -> np.ndarray:
        """Código inteiro de vetores de atribuição (último eixo = variáveis)."""
        pesos = (self.k + 1) ** np.arange(self.n, dtype=np.int64)
        return (np.asarray(assignment, dtype=np.int64) + 1) @ pesos

    def positions(self, assignments: np.ndarray) -> np.ndarray:
        """Posições de vários vetores de atribuição (-1 se ausentes)."""
        codes = self.encode(assignments)
        loc = np.searchsorted(self._sorted_index_codes, codes)
        loc = np.clip(loc, 0, len(self._sorted_index_codes) - 1)
        achou = self._sorted_index_codes[loc] == codes
        return np.where(achou, self._index_order[loc], -1)

    def key_ids(self, assignments: np.ndarray) -> np.ndarray:
        """Ids de chave de vetores de atribuição (-1 se não representáveis)."""
        codes = self.encode(assignments)
        loc = np.searchsorted(self.key_codes, codes)
        loc = np.clip(loc, 0, len(self.key_codes) - 1)
        return np.where(self.key_codes[loc] == codes, loc, -1)

    def degree_one_positions(self) -> np.ndarray:
        """Posições (i→j) em ordem (variável, rótulo): n × k."""
        if self.r < 1:
            raise ValueError("Nível 0 não tem momentos de grau 1")
        return np.arange(1, 1 + self.n * self.k).reshape(self.n, self.k)


# ============================================
# MODELO: MomentMatrix
# Tabela de pseudo-momentos y_S(α) de nível r
# ============================================

@dataclass(eq=False)
class MomentMatrix:
    """
    Matriz de momentos simétrica dim × dim sobre o índice canônico.

    `tol_scale` acompanha o condicionamento: dividir por p multiplica os
    erros absolutos por 1/p, e as verificações de soma usam a escala.
    """
    structure: MomentStructure
    entries: np.ndarray
    tol_scale: float = 1.0

    @property
    def r(self) -> int:
        return self.structure.r

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def k(self) -> int:
        return self.structure.k

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def index(self) -> list[AssignmentIndex]:
        return self.structure.index

    def key_values(self) -> np.ndarray:
        """Momento de cada chave, lido na posição representante."""
        return self.entries[self.structure.rep_row, self.structure.rep_col]


# ============================================
# svec: vetorização simétrica (triângulo superior, linha a linha)
# ============================================

SQRT2 = np.sqrt(2.0)


def svec_size(d: int) -> int:
    return d * (d + 1) // 2


def svec_position(d: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Posição svec de (i, j) com i ≤ j num bloco d × d."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    return i * d - i * (i - 1) // 2 + (j - i)


def svec(X: np.ndarray) -> np.ndarray:
    d = X.shape[0]
    iu, ju = np.triu_indices(d)
    escala = np.where(iu == ju, 1.0, SQRT2)
    return X[iu, ju] * escala


def smat(v: np.ndarray, d: int) -> np.ndarray:
    iu, ju = np.triu_indices(d)
    escala = np.where(iu == ju, 1.0, 1.0 / SQRT2)
    X = np.zeros((d, d))
    X[iu, ju] = v * escala
    X[ju, iu] = X[iu, ju]
    return X


# ============================================
# MODELO: SdpProblem
# Forma padrão: min/max ⟨C, X⟩ s.a. ⟨A_i, X⟩ = b_i, X ⪰ 0 (por bloco)
# ============================================

@dataclass(eq=False)
class SdpProblem:
    """
    SDP em forma padrão com um ou mais blocos PSD.

    As restrições ficam empilhadas em `constraints` (m × N) sobre as
    coordenadas svec concatenadas dos blocos; a linha 0 é sempre a fixação
    X[0, 0] = 1.
    """
    block_dims: list[int]
    objective: list[sp.csr_matrix]
    constraints: sp.csr_matrix
    rhs: np.ndarray
    sense: Sense = Sense.MINIMIZE
    row_kinds: list[str] = field(default_factory=list)
    structure: Optional[MomentStructure] = None

    @property
    def dim(self) -> int:
        return self.block_dims[0]

    @property
    def num_constraints(self) -> int:
        return self.constraints.shape[0]

    @property
    def offsets(self) -> list[int]:
        offs = [0]
        for d in self.block_dims:
            offs.append(offs[-1] + svec_size(d))
        return offs

    def c_vector(self) -> np.ndarray:
        return np.concatenate([svec(C.toarray()) for C in self.objective])

    def vectorize(self, blocks: list[np.ndarray]) -> np.ndarray:
        return np.concatenate([svec(B) for B in blocks])

    def unvectorize(self, v: np.ndarray) -> list[np.ndarray]:
        offs = self.offsets
        return [smat(v[offs[b]:offs[b + 1]], d) for b, d in enumerate(self.block_dims)]

    def objective_value(self, blocks: list[np.ndarray]) -> float:
        return float(sum((C.multiply(B)).sum() for C, B in zip(self.objective, blocks)))


# ============================================
# MODELO: SdpSolution
# ============================================

@dataclass(eq=False)
class SdpSolution:
    X: list[np.ndarray]
    objective_value: float
    primal_residual: float
    psd_residual: float
    iterations: int
    converged: bool
    rho: float = 1.0

    @property
    def main_block(self) -> np.ndarray:
        return self.X[0]
