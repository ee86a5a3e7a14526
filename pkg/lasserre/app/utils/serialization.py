# ============================================================================
# serialization.py - JSON CANÔNICO E HASHES
# ============================================================================
# Bytes canônicos: chaves ordenadas, floats com 17 dígitos significativos,
# sem espaços variáveis. É isso que garante hashes estáveis e registros
# byte a byte idênticos entre execuções. Infinito e NaN saem como os
# tokens Infinity/NaN que o módulo json relê.
# ============================================================================

import hashlib
import json
import math
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel


def format_float(x: float) -> str:
    """Float com 17 dígitos significativos (forma usada no JSON e no CSV)."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    texto = format(x, ".17g")
    # mantém o tipo float ao reler (1.0 → "1.0", não "1")
    if all(c in "-0123456789" for c in texto):
        texto += ".0"
    return texto


def _para_texto(obj: Any, indent: int, nivel: int) -> str:
    quebra = "\n" + " " * (indent * (nivel + 1))
    fecha = "\n" + " " * (indent * nivel)

    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, Enum):
        return json.dumps(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, BaseModel):
        return _para_texto(obj.model_dump(mode="python"), indent, nivel)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        itens = [
            f"{json.dumps(str(k), ensure_ascii=False)}: {_para_texto(obj[k], indent, nivel + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{" + quebra + ("," + quebra).join(itens) + fecha + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        itens = [_para_texto(v, indent, nivel + 1) for v in obj]
        if not itens:
            return "[]"
        # listas de escalares ficam numa linha só
        if all(not isinstance(v, (dict, list, tuple, np.ndarray, BaseModel)) for v in obj):
            return "[" + ", ".join(itens) + "]"
        return "[" + quebra + ("," + quebra).join(itens) + fecha + "]"
    raise TypeError(f"Tipo não serializável: {type(obj).__name__}")


def canonical_dumps(obj: Any, indent: int = 2) -> str:
    """
    Serializa em JSON canônico (termina com quebra de linha).

    Exemplo:
        canonical_dumps({"b": 0.1, "a": 1})
        # → '{\\n  "a": 1,\\n  "b": 0.10000000000000001\\n}\\n'
    """
    return _para_texto(obj, indent, 0) + "\n"


def digest(texto: str) -> str:
    """SHA-256 hexadecimal de um texto canônico."""
    return hashlib.sha256(texto.encode("utf-8")).hexdigest()


def canonical_hash(obj: Any) -> str:
    return digest(canonical_dumps(obj))
