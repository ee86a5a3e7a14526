import math
from typing import Sequence

from pydantic import BaseModel, Field, field_validator, model_validator

from app.utils.enums import Relation, Sense


# ============================================
# MODELO: Term
# Termo local do objetivo: escopo de até 2 variáveis + tabela por rótulo
# ============================================

class Term(BaseModel):
    """
    Termo ponderado do objetivo.

    A tabela tem k^|scope| entradas, em ordem lexicográfica das tuplas de
    rótulos (para escopo (u, v): índice a·k + b para u→a, v→b).
    """
    scope: tuple[int, ...] = Field(..., max_length=2)
    table: list[float]
    weight: float = Field(1.0, ge=0)

    @field_validator("scope", mode="after")
    @classmethod
    def validar_escopo(cls, v):
        if list(v) != sorted(set(v)):
            raise ValueError(f"Escopo {v} deve ser crescente e sem repetição")
        return v

    @field_validator("weight", mode="after")
    @classmethod
    def validar_peso(cls, v):
        if not math.isfinite(v):
            raise ValueError("Peso deve ser finito")
        return v


# ============================================
# MODELO: GlobalConstraint
# Restrição linear sobre momentos de grau 1: Σ c_(i,j) · y_{i→j} (rel) rhs
# ============================================

class GlobalConstraint(BaseModel):
    coeffs: list[tuple[int, int, float]]  # (variável, rótulo, coeficiente)
    rhs: float
    relation: Relation = Relation.EQ

    def value(self, assignment: Sequence[int]) -> float:
        """Lado esquerdo avaliado numa atribuição inteira."""
        return sum(c for (i, j, c) in self.coeffs if assignment[i] == j)

    def satisfied(self, assignment: Sequence[int], tol: float = 1e-9) -> bool:
        lhs = self.value(assignment)
        if self.relation is Relation.EQ:
            return abs(lhs - self.rhs) <= tol
        return lhs <= self.rhs + tol


# ============================================
# MODELO: LabelingInstance
# n variáveis sobre k rótulos, termos locais e restrições globais
# ============================================

class LabelingInstance(BaseModel):
    """
    Instância de rotulação: o objeto que a relaxação consome.

    `forbidden` lista eventos locais (escopo, rótulos) proibidos; no modo
    estrito viram igualdades y_U(γ) = 0 no SDP.
    """
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=2)
    terms: list[Term] = Field(default_factory=list)
    sense: Sense = Sense.MAXIMIZE
    global_constraints: list[GlobalConstraint] = Field(default_factory=list)
    forbidden: list[tuple[tuple[int, ...], tuple[int, ...]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validar_invariantes(self):
        for t in self.terms:
            for v in t.scope:
                if not 0 <= v < self.n:
                    raise ValueError(f"Variável {v} fora de [0, {self.n})")
            esperado = self.k ** len(t.scope)
            if len(t.table) != esperado:
                raise ValueError(
                    f"Tabela do escopo {t.scope} tem {len(t.table)} entradas, esperado {esperado}"
                )
        for g in self.global_constraints:
            for (i, j, _) in g.coeffs:
                if not (0 <= i < self.n and 0 <= j < self.k):
                    raise ValueError(f"Coeficiente global fora do domínio: ({i}, {j})")
        for scope, labels in self.forbidden:
            if len(scope) != len(labels) or list(scope) != sorted(set(scope)):
                raise ValueError(f"Evento proibido mal formado: {scope} → {labels}")
        return self

    @property
    def max_scope(self) -> int:
        return max((len(t.scope) for t in self.terms), default=0)

    def table_index(self, labels: Sequence[int]) -> int:
        idx = 0
        for a in labels:
            idx = idx * self.k + int(a)
        return idx

    def objective(self, assignment: Sequence[int]) -> float:
        """Valor exato do objetivo numa atribuição inteira."""
        total = 0.0
        for t in self.terms:
            total += t.weight * t.table[self.table_index([assignment[v] for v in t.scope])]
        return total

    def feasible(self, assignment: Sequence[int]) -> bool:
        if not all(g.satisfied(assignment) for g in self.global_constraints):
            return False
        for scope, labels in self.forbidden:
            if all(assignment[v] == a for v, a in zip(scope, labels)):
                return False
        return True
