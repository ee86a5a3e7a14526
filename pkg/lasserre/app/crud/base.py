# lasserre/app/crud/base.py

"""
CRUD Base - Operações genéricas sobre uma pasta de arquivos JSON

Cada store específico (instâncias, registros, oráculo) herda desta classe.
Os arquivos são JSON canônico; gravar é só de acréscimo: regravar o mesmo
conteúdo não faz nada, conteúdo diferente com o mesmo nome é erro.
"""

import json
import logging
from pathlib import Path
from typing import Generic, List, Optional, TypeVar

from pydantic import BaseModel

from app.utils.errors import StoreConflictError
from app.utils.serialization import canonical_dumps

logger = logging.getLogger(__name__)

# TypeVar: tipo genérico que cada store vai especificar
ModelType = TypeVar("ModelType", bound=BaseModel)


def write_canonical(caminho: Path, obj, append_only: bool = True) -> Path:
    """
    Grava `obj` em JSON canônico.

    Raises:
        StoreConflictError: se append_only e o arquivo existe com outro conteúdo
    """
    caminho = Path(caminho)
    texto = canonical_dumps(obj)
    if caminho.exists():
        if caminho.read_text(encoding="utf-8") == texto:
            logger.debug(f"Arquivo idêntico já existe: {caminho}")
            return caminho
        if append_only:
            raise StoreConflictError(f"{caminho} já existe com conteúdo diferente")
    caminho.parent.mkdir(parents=True, exist_ok=True)
    caminho.write_text(texto, encoding="utf-8")
    return caminho


def read_model(caminho: Path, modelo: type[ModelType]) -> ModelType:
    """Lê um arquivo JSON (aceita os tokens Infinity/NaN) e valida no modelo."""
    dados = json.loads(Path(caminho).read_text(encoding="utf-8"))
    return modelo.model_validate(dados)


class CRUDBase(Generic[ModelType]):
    """
    Store genérico: uma pasta, um modelo pydantic, um arquivo por objeto.

    Exemplo:
        class RecordCRUD(CRUDBase[RunRecord]):
            pass
    """

    def __init__(self, modelo: type[ModelType], subpasta: str):
        """
        Args:
            modelo: classe pydantic dos objetos (ex: RunRecord, ProblemSpec)
            subpasta: nome da pasta dentro do diretório de saída
        """
        self.modelo = modelo
        self.subpasta = subpasta

    def pasta(self, base: Path) -> Path:
        return Path(base) / self.subpasta

    def caminho(self, base: Path, nome: str) -> Path:
        return self.pasta(base) / f"{nome}.json"

    def criar(self, base: Path, nome: str, obj: ModelType) -> Path:
        """
        Grava um novo arquivo.

        Returns:
            Caminho gravado
        """
        return write_canonical(self.caminho(base, nome), obj)

    def obter(self, base: Path, nome: str) -> Optional[ModelType]:
        """Lê pelo nome; None se não existe."""
        caminho = self.caminho(base, nome)
        if not caminho.exists():
            return None
        return read_model(caminho, self.modelo)

    def obter_todos(self, base: Path) -> List[ModelType]:
        """Todos os objetos da pasta, em ordem de nome de arquivo."""
        return [read_model(c, self.modelo) for c in self.arquivos(base)]

    def arquivos(self, base: Path) -> List[Path]:
        pasta = self.pasta(base)
        if not pasta.is_dir():
            return []
        return sorted(c for c in pasta.glob("*.json") if not c.name.endswith(".timings.json"))

    def contar(self, base: Path) -> int:
        return len(self.arquivos(base))
