from enum import Enum as PyEnum


# ========== ENUMS PYTHON ==========
# Valores fixos usados nos arquivos de instância, registros e na CLI.
# O VALUE é a forma serializada (string), o NAME é a forma do código.

class _EnumComConversao(PyEnum):
    """Base com as conversões usadas em todo o projeto."""

    @classmethod
    def from_name(cls, name: str):
        """
        Converte NAME (string) para ENUM.

        Exemplo:
            ProblemKind.from_name("MAX_CUT")  # → ProblemKind.MAX_CUT
        """
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"'{name}' não existe. Válidos: {', '.join(m.name for m in cls)}")

    @classmethod
    def from_value(cls, value: str):
        """
        Converte VALUE (string serializada) para ENUM.

        Exemplo:
            ProblemKind.from_value("max-cut")  # → ProblemKind.MAX_CUT
        """
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"Valor '{value}' não existe. Válidos: {', '.join(m.value for m in cls)}")

    @classmethod
    def values(cls) -> list[str]:
        return [m.value for m in cls]


class Sense(_EnumComConversao):
    """Sentido da otimização."""
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    @property
    def sign(self) -> float:
        """+1 para minimizar, -1 para maximizar (objetivo interno sempre minimizado)."""
        return 1.0 if self is Sense.MINIMIZE else -1.0

    def better(self, a: float, b: float) -> bool:
        """True se `a` é estritamente melhor que `b` neste sentido."""
        return a < b if self is Sense.MINIMIZE else a > b


class Relation(_EnumComConversao):
    """Relação de uma restrição global linear."""
    EQ = "eq"
    LE = "le"


class ProblemKind(_EnumComConversao):
    """Tipos de problema suportados."""
    MIN_BISECTION = "min-bisection"
    MAX_CUT = "max-cut"
    UNIQUE_GAMES = "unique-games"
    INDEPENDENT_SET = "independent-set"
    QIP = "qip"
    SPARSEST_CUT = "sparsest-cut"
    CAPACITY_CUT_PACKING = "capacity-cut-packing"
    TWO_CSP = "two-csp"
    PARTIAL_3_COLORING = "partial-3-coloring"

    @property
    def label(self) -> str:
        """Nome amigável para relatórios."""
        labels = {
            "min-bisection": "Bisseção mínima",
            "max-cut": "Corte máximo",
            "unique-games": "Unique Games",
            "independent-set": "Conjunto independente",
            "qip": "Programação inteira quadrática",
            "sparsest-cut": "Corte mais esparso",
            "capacity-cut-packing": "Corte de capacidade com empacotamento",
            "two-csp": "2-CSP",
            "partial-3-coloring": "Coloração parcial (3 cores)",
        }
        return labels.get(self.value, "Desconhecido")

    @property
    def is_cut_type(self) -> bool:
        """Tipos de corte: recebem o fator previsto 1 + c/λ_{r+1}."""
        return self in (
            ProblemKind.MIN_BISECTION,
            ProblemKind.MAX_CUT,
            ProblemKind.SPARSEST_CUT,
            ProblemKind.CAPACITY_CUT_PACKING,
        )


class GraphFamily(_EnumComConversao):
    """Famílias de grafos do gerador."""
    RING = "ring"
    GRID = "grid"
    RANDOM_REGULAR = "random-regular"
    GNP = "gnp"
    PLANTED_BISECTION = "planted-bisection"


class SeedStrategy(_EnumComConversao):
    """Estratégias de escolha do conjunto de sementes."""
    GREEDY = "greedy-colsel"
    VOLUME = "volume-sample"
    RANDOM = "random"
    EXHAUSTIVE = "exhaustive-best"


class RoundingMode(_EnumComConversao):
    """Modos de arredondamento após a propagação."""
    INDEPENDENT = "independent"
    THRESHOLD = "threshold"


class ColumnNormalization(_EnumComConversao):
    """Colunas usadas na seleção: brutas ou ponderadas pelo grau."""
    RAW = "raw"
    DEGREE = "degree"
