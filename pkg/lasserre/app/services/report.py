# lasserre/app/services/report.py

"""
Relatório agregado (subcomando `report`)

Uma linha por (instância, estratégia, modo); colunas na ordem dos campos
de ReportRow; linhas ordenadas por hash da instância, estratégia e modo.
Razões ficam vazias (não zero) quando falta o ótimo ou o valor do SDP.
"""

import csv
import io
from typing import Optional, Sequence

from app.schemas import ReportRow, RunRecord
from app.utils.serialization import canonical_dumps, format_float

COLUMNS = list(ReportRow.model_fields)


def _ratio(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None or b == 0:
        return None
    return a / b


def build_rows(records: Sequence[RunRecord]) -> list[ReportRow]:
    linhas = []
    for rec in records:
        for modo in rec.modes:
            melhor = modo.best_post_repair
            linhas.append(ReportRow(
                instance_hash=rec.instance_hash,
                instance_id=rec.instance_id,
                kind=rec.kind.value,
                n=rec.n,
                k=rec.k,
                r=rec.r,
                strategy=rec.strategy,
                mode=modo.mode.value,
                sdp_value=rec.sdp_value,
                best_rounded=melhor,
                oracle_opt=rec.oracle_opt,
                ratio_rounded_opt=_ratio(melhor, rec.oracle_opt),
                ratio_rounded_sdp=_ratio(melhor, rec.sdp_value),
                lambda_r_plus_1=rec.lambda_r_plus_1,
                predicted_factor=rec.predicted_factor,
            ))
    linhas.sort(key=lambda l: (l.instance_hash, l.strategy, l.mode, l.r))
    return linhas


def _cell(valor) -> str:
    if valor is None:
        return ""
    if isinstance(valor, float):
        return format_float(valor)
    return str(valor)


def to_csv(rows: Sequence[ReportRow]) -> str:
    saida = io.StringIO()
    escritor = csv.writer(saida, lineterminator="\n")
    escritor.writerow(COLUMNS)
    for linha in rows:
        escritor.writerow([_cell(getattr(linha, c)) for c in COLUMNS])
    return saida.getvalue()


def to_json(rows: Sequence[ReportRow]) -> str:
    return canonical_dumps([linha.model_dump() for linha in rows])
