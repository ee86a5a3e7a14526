# lasserre/app/crud/stores.py

"""
Stores específicos

- instâncias geradas (`instances/`)
- relatórios do oráculo (`oracle/`)
- registros de execução (`records/`), um por (instância, configuração),
  com os tempos de parede num arquivo `.timings.json` ao lado
"""

from pathlib import Path

from app.crud.base import CRUDBase, write_canonical
from app.schemas import OracleResult, ProblemSpec, RunRecord


class RecordCRUD(CRUDBase[RunRecord]):
    """
    Registros de execução.

    Herda de CRUDBase:
    - criar(base, nome, obj)
    - obter(base, nome)
    - obter_todos(base)
    - contar(base)
    """

    @staticmethod
    def nome(record: RunRecord) -> str:
        """Nome do arquivo: hash da instância + hash da configuração."""
        return f"{record.instance_hash[:16]}-{record.config_hash[:16]}"

    def salvar(self, base: Path, record: RunRecord) -> Path:
        return self.criar(base, self.nome(record), record)

    def salvar_tempos(self, base: Path, record: RunRecord, tempos: dict) -> Path:
        """Tempos variam entre execuções: o arquivo ao lado é sobrescrito."""
        caminho = self.pasta(base) / f"{self.nome(record)}.timings.json"
        return write_canonical(caminho, tempos, append_only=False)


class OracleCRUD(CRUDBase[OracleResult]):

    def salvar(self, base: Path, resultado: OracleResult) -> Path:
        return self.criar(base, resultado.instance_hash[:16], resultado)


# ========== INSTÂNCIAS GLOBAIS ==========

instance_store = CRUDBase(ProblemSpec, "instances")
record_store = RecordCRUD(RunRecord, "records")
oracle_store = OracleCRUD(OracleResult, "oracle")
