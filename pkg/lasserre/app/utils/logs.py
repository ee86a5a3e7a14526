# ═══════════════════════════════════════════════════════════════════════════
# logs.py - CONFIGURAÇÃO DE LOGGING
# ═══════════════════════════════════════════════════════════════════════════
# Logs vão para stderr: stdout e os arquivos de registro ficam limpos.
# ═══════════════════════════════════════════════════════════════════════════

import logging
import sys

FORMATO = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configurar_logging(nivel: str = "INFO") -> logging.Logger:
    """
    Configura o logger raiz uma única vez; chamadas seguintes só ajustam
    o nível e reapontam o handler para o stderr atual.

    Uso em main.py:
        configurar_logging(LOG_LEVEL)
    """
    raiz = logging.getLogger()
    raiz.setLevel(getattr(logging, nivel.upper(), logging.INFO))

    existente = [h for h in raiz.handlers if getattr(h, "_lasserre", False)]
    if existente:
        existente[0].setStream(sys.stderr)
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(FORMATO))
        handler._lasserre = True
        raiz.addHandler(handler)

    return raiz
