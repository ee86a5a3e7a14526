# lasserre/app/services/relaxation.py

"""
Relaxação de Lasserre de nível r

Responsabilidades:
- Índice canônico dos pares (S, α) e layout da matriz de momentos
- Montagem do SDP de uma LabelingInstance
- Validação das identidades dos momentos
- Marginais e condicionamento (a "álgebra" usada pelo arredondamento)
"""

import logging
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from config import INDEX_CAP, P_MIN, TOL_CONSISTENCY, TOL_PSD
from app.models.instance import LabelingInstance
from app.models.moments import (
    AssignmentIndex,
    MomentMatrix,
    MomentStructure,
    SQRT2,
    SdpProblem,
    svec_position,
    svec_size,
)
from app.schemas import ValidationReport, Violation
from app.utils.enums import Relation
from app.utils.errors import (
    CapacityError,
    InvalidMomentError,
    LevelBudgetError,
    NearZeroProbabilityError,
    ScopeError,
)

logger = logging.getLogger(__name__)


# ============================================================================
# ÍNDICE CANÔNICO
# ============================================================================

def index_length(n: int, k: int, r: int) -> int:
    """Σ_{s=0..r} C(n, s)·k^s"""
    return sum(comb(n, s) * k ** s for s in range(r + 1))


def build_index(n: int, k: int, r: int, cap: int = INDEX_CAP) -> list[AssignmentIndex]:
    """
    Lista canônica de todos os (S, α) com |S| ≤ r.

    Ordem: tamanho, depois S lexicográfico, depois α lexicográfico;
    a posição 0 é sempre (∅, ()).

    Exemplo:
        build_index(2, 2, 1)
        # → [(∅), (0→0), (0→1), (1→0), (1→1)]
    """
    if n < 1 or k < 2:
        raise ValueError(f"Parâmetros inválidos: n={n}, k={k} (exige n ≥ 1, k ≥ 2)")
    if not 0 <= r <= n:
        raise LevelBudgetError(f"Nível r={r} fora de [0, n={n}]")

    tamanho = index_length(n, k, r)
    if tamanho > cap:
        raise CapacityError(
            f"Índice com {tamanho} posições excede o limite {cap} (n={n}, k={k}, r={r})"
        )

    index = []
    for s in range(r + 1):
        for scope in combinations(range(n), s):
            for labels in product(range(k), repeat=s):
                index.append(AssignmentIndex(scope, labels))
    return sorted(index, key=AssignmentIndex.sort_key)


def _decode(codes: np.ndarray, n: int, k: int) -> np.ndarray:
    pesos = (k + 1) ** np.arange(n, dtype=np.int64)
    return ((codes[:, None] // pesos[None, :]) % (k + 1)) - 1


@lru_cache(maxsize=32)
def moment_structure(n: int, k: int, r: int, cap: int = INDEX_CAP) -> MomentStructure:
    """
    Layout combinatório do nível r (cacheado por (n, k, r)).

    Chaves = atribuições parciais com |U| ≤ min(2r, n). O representante de
    cada chave é a primeira posição (i ≤ j) do triângulo superior, em ordem
    de linha, cuja união é a chave.
    """
    if n * np.log2(k + 1) >= 62:
        raise CapacityError(f"Códigos de atribuição não cabem em 64 bits (n={n}, k={k})")

    index = build_index(n, k, r, cap)
    dim = len(index)

    index_array = np.full((dim, n), -1, dtype=np.int64)
    for p, idx in enumerate(index):
        index_array[p, list(idx.scope)] = idx.labels

    pesos = (k + 1) ** np.arange(n, dtype=np.int64)
    index_codes = (index_array + 1) @ pesos

    iu, ju = np.triu_indices(dim)
    a, b = index_array[iu], index_array[ju]
    compat = np.all((a < 0) | (b < 0) | (a == b), axis=1)
    union_codes = (np.maximum(a, b) + 1) @ pesos
    del a, b

    validos = np.flatnonzero(compat)
    key_codes, first, inverse = np.unique(union_codes[validos], return_index=True, return_inverse=True)
    rep_pair = validos[first]

    upper_key = np.full(len(iu), -1, dtype=np.int64)
    upper_key[validos] = inverse
    pair_key = np.full((dim, dim), -1, dtype=np.int64)
    pair_key[iu, ju] = upper_key
    pair_key[ju, iu] = upper_key

    key_array = _decode(key_codes, n, k)
    key_size = (key_array >= 0).sum(axis=1)

    # identidades Σ_j y_{U+i→j} = y_U para todo U e i ∉ U com |U| + 1 ≤ min(2r, n)
    smax = min(2 * r, n)
    pais, filhos = [], []
    for v in range(n):
        livres = np.flatnonzero((key_array[:, v] < 0) & (key_size < smax))
        if len(livres) == 0:
            continue
        codigos_filhos = key_codes[livres][:, None] + (np.arange(k) + 1)[None, :] * pesos[v]
        pais.append(livres)
        filhos.append(np.searchsorted(key_codes, codigos_filhos))
    marg_parent = np.concatenate(pais) if pais else np.zeros(0, dtype=np.int64)
    marg_children = np.vstack(filhos) if filhos else np.zeros((0, k), dtype=np.int64)

    order = np.argsort(index_codes, kind="stable")
    logger.debug(f"Estrutura n={n} k={k} r={r}: dim={dim}, chaves={len(key_codes)}")

    return MomentStructure(
        n=n, k=k, r=r,
        index=index,
        index_array=index_array,
        index_codes=index_codes,
        pair_key=pair_key,
        key_codes=key_codes,
        key_array=key_array,
        rep_row=iu[rep_pair],
        rep_col=ju[rep_pair],
        marg_parent=marg_parent,
        marg_children=marg_children,
        _sorted_index_codes=index_codes[order],
        _index_order=order,
    )


# ============================================================================
# MONTAGEM DO SDP
# ============================================================================

def _svec_coef(i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Coeficiente svec que lê X_ij (1 na diagonal, 1/√2 fora)."""
    return np.where(np.asarray(i) == np.asarray(j), 1.0, 1.0 / SQRT2)


class _Linhas:
    """Acumulador COO de linhas de restrição."""

    def __init__(self):
        self.rows, self.cols, self.vals = [], [], []
        self.rhs, self.kinds = [], []
        self.m = 0

    def add_block(self, cols: list[np.ndarray], vals: list[np.ndarray], rhs: np.ndarray, kind: str):
        count = len(rhs)
        if count == 0:
            return
        ids = np.arange(self.m, self.m + count)
        for c, v in zip(cols, vals):
            self.rows.append(ids)
            self.cols.append(np.asarray(c, dtype=np.int64))
            self.vals.append(np.broadcast_to(np.asarray(v, dtype=float), (count,)).copy())
        self.rhs.append(np.asarray(rhs, dtype=float))
        self.kinds.extend([kind] * count)
        self.m += count

    def add_row(self, cols: Sequence[int], vals: Sequence[float], rhs: float, kind: str):
        self.rows.append(np.full(len(cols), self.m, dtype=np.int64))
        self.cols.append(np.asarray(cols, dtype=np.int64))
        self.vals.append(np.asarray(vals, dtype=float))
        self.rhs.append(np.array([rhs], dtype=float))
        self.kinds.append(kind)
        self.m += 1

    def add_entries(self, rows: np.ndarray, cols: np.ndarray, vals: np.ndarray):
        """Entradas avulsas em linhas ainda abertas (fechadas por close_rows)."""
        self.rows.append(np.asarray(rows, dtype=np.int64))
        self.cols.append(np.asarray(cols, dtype=np.int64))
        self.vals.append(np.asarray(vals, dtype=float))

    def close_rows(self, rhs: np.ndarray, kind: str):
        self.rhs.append(np.asarray(rhs, dtype=float))
        self.kinds.extend([kind] * len(rhs))
        self.m += len(rhs)

    def matrix(self, num_cols: int) -> sp.csr_matrix:
        A = sp.coo_matrix(
            (np.concatenate(self.vals), (np.concatenate(self.rows), np.concatenate(self.cols))),
            shape=(self.m, num_cols),
        )
        A = A.tocsr()
        A.eliminate_zeros()
        return A


def _signs(relation: Relation) -> tuple[float, ...]:
    return (1.0,) if relation is Relation.LE else (1.0, -1.0)


def build_sdp(inst: LabelingInstance, r: int) -> SdpProblem:
    """
    Monta o SDP de nível r da instância.

    Restrições (forma não redundante):
    - fixação y_∅ = 1 (linha 0)
    - igualdade de cada posição compatível com o representante da sua união
    - zero nas posições incompatíveis
    - marginalização: uma identidade por chave que usa o último rótulo
      (as demais identidades seguem destas)
    - restrições globais levantadas a toda linha (S, α) com |S| ≤ r − 1
      (cada linha com folga própria em bloco 1×1; eq vira duas linhas le)
    - eventos proibidos y_U(γ) = 0

    Exemplo:
        sdp = build_sdp(max_cut_de_uma_aresta, r=1)
        # → solve(sdp).objective_value ≈ 1
    """
    if r < 1:
        raise ValueError(f"Nível deve ser ≥ 1 (recebido {r})")
    smax = min(2 * r, inst.n)
    for t in inst.terms:
        if len(t.scope) > smax:
            raise ScopeError(f"Escopo {t.scope} não representável no nível {r}")

    st = moment_structure(inst.n, inst.k, r)
    dim, k = st.dim, st.k
    n_main = svec_size(dim)
    base = st.index_array[: index_length(inst.n, k, r - 1)]
    chave_base = st.key_ids(base)
    num_slacks = len(base) * sum(len(_signs(g.relation)) for g in inst.global_constraints)
    block_dims = [dim] + [1] * num_slacks
    num_cols = n_main + num_slacks

    iu, ju = np.triu_indices(dim)
    upper_key = st.pair_key[iu, ju]
    rep_svec = svec_position(dim, st.rep_row, st.rep_col)
    rep_coef = _svec_coef(st.rep_row, st.rep_col)

    linhas = _Linhas()

    # (a) fixação
    linhas.add_row([0], [1.0], 1.0, "pin")

    # (b) igualdade com o representante
    is_rep = np.zeros(len(iu), dtype=bool)
    is_rep[rep_svec] = True
    outros = np.flatnonzero((upper_key >= 0) & ~is_rep)
    chaves = upper_key[outros]
    linhas.add_block(
        [outros, rep_svec[chaves]],
        [_svec_coef(iu[outros], ju[outros]), -rep_coef[chaves]],
        np.zeros(len(outros)),
        "consistency",
    )

    # (d) incompatíveis
    incompat = np.flatnonzero(upper_key < 0)
    linhas.add_block([incompat], [_svec_coef(iu[incompat], ju[incompat])], np.zeros(len(incompat)), "incompatible")

    # (c) marginalização eliminando o último rótulo pela menor variável que o usa
    pesos = (k + 1) ** np.arange(st.n, dtype=np.int64)
    ultimo = st.key_array == k - 1
    com_ultimo = np.flatnonzero(ultimo.any(axis=1))
    if len(com_ultimo):
        v_star = np.argmax(ultimo[com_ultimo], axis=1)
        w = pesos[v_star]
        pai = np.searchsorted(st.key_codes, st.key_codes[com_ultimo] - k * w)
        cols = [rep_svec[com_ultimo], rep_svec[pai]]
        vals = [rep_coef[com_ultimo], -rep_coef[pai]]
        for j in range(k - 1):
            irmao = np.searchsorted(st.key_codes, st.key_codes[pai] + (j + 1) * w)
            cols.append(rep_svec[irmao])
            vals.append(rep_coef[irmao])
        linhas.add_block(cols, vals, np.zeros(len(com_ultimo)), "marginalization")

    # (e) restrições globais, levantadas a cada linha (S, α) do índice com |S| ≤ r − 1:
    #     Σ c·y_{(S,α)∪(i→j)} + folga = rhs·y_S(α), uma folga 1×1 por linha;
    #     igualdade = duas desigualdades (folgas opostas, ambas ≥ 0)
    folga = n_main
    for g in inst.global_constraints:
        for sinal in _signs(g.relation):
            L = len(base)
            ids = np.arange(linhas.m, linhas.m + L)
            for (i, j, c) in g.coeffs:
                compat = (base[:, i] < 0) | (base[:, i] == j)
                vecs = base[compat].copy()
                vecs[:, i] = j
                chave = st.key_ids(vecs)
                linhas.add_entries(ids[compat], rep_svec[chave], sinal * float(c) * rep_coef[chave])
            linhas.add_entries(ids, rep_svec[chave_base], -sinal * float(g.rhs) * rep_coef[chave_base])
            linhas.add_entries(ids, folga + np.arange(L), np.ones(L))
            linhas.close_rows(np.zeros(L), "global")
            folga += L

    # (f) eventos proibidos
    for scope, labels in inst.forbidden:
        if len(scope) > smax:
            raise ScopeError(f"Evento proibido {scope} não representável no nível {r}")
        chave = _key_of(st, scope, labels)
        linhas.add_row([int(rep_svec[chave])], [float(rep_coef[chave])], 0.0, "forbidden")

    A = linhas.matrix(num_cols)
    rhs = np.concatenate(linhas.rhs)

    objective = [_objective_matrix(inst, st)] + [sp.csr_matrix((1, 1)) for _ in range(num_slacks)]
    logger.info(
        f"✅ SDP nível {r}: dim={dim}, restrições={A.shape[0]}, folgas={num_slacks}"
    )
    return SdpProblem(
        block_dims=block_dims,
        objective=objective,
        constraints=A,
        rhs=rhs,
        sense=inst.sense,
        row_kinds=linhas.kinds,
        structure=st,
    )


def _key_of(st: MomentStructure, scope: Sequence[int], labels: Sequence[int]) -> int:
    vec = np.full(st.n, -1, dtype=np.int64)
    vec[list(scope)] = labels
    chave = int(st.key_ids(vec[None, :])[0])
    if chave < 0:
        raise ScopeError(f"Atribuição {dict(zip(scope, labels))} não representável no nível {st.r}")
    return chave


def _objective_matrix(inst: LabelingInstance, st: MomentStructure) -> sp.csr_matrix:
    """C tal que ⟨C, X⟩ = Σ_termos w Σ_γ tabela[γ]·y_U(γ)."""
    rows, cols, vals = [], [], []
    for t in inst.terms:
        for pos, labels in enumerate(product(range(inst.k), repeat=len(t.scope))):
            coef = t.weight * t.table[pos]
            if coef == 0.0:
                continue
            chave = _key_of(st, t.scope, labels)
            i, j = int(st.rep_row[chave]), int(st.rep_col[chave])
            if i == j:
                rows.append(i); cols.append(j); vals.append(coef)
            else:
                rows += [i, j]; cols += [j, i]; vals += [coef / 2, coef / 2]
    C = sp.coo_matrix((vals, (rows, cols)), shape=(st.dim, st.dim))
    return C.tocsr()


# ============================================================================
# CONSTRUÇÃO DE MOMENTOS A PARTIR DE DISTRIBUIÇÕES
# ============================================================================

def moment_matrix(st: MomentStructure, entries: np.ndarray, tol_scale: float = 1.0) -> MomentMatrix:
    if entries.shape != (st.dim, st.dim):
        raise ValueError(f"Matriz {entries.shape} incompatível com dim={st.dim}")
    return MomentMatrix(structure=st, entries=entries, tol_scale=tol_scale)


def moments_from_distribution(
    n: int, k: int, r: int,
    assignments: np.ndarray,
    probs: Sequence[float],
) -> MomentMatrix:
    """
    Momentos verdadeiros de uma distribuição sobre atribuições inteiras.

    Exemplo:
        moments_from_distribution(1, 3, 1, [[0], [1], [2]], [1/3, 1/3, 1/3])
        # → marginal uniforme (1/3, 1/3, 1/3)
    """
    st = moment_structure(n, k, r)
    atribs = np.atleast_2d(np.asarray(assignments, dtype=np.int64))
    p = np.asarray(probs, dtype=float)
    ia = st.index_array[None, :, :]
    V = np.all((ia < 0) | (ia == atribs[:, None, :]), axis=2).astype(float)
    X = V.T @ (p[:, None] * V)
    return moment_matrix(st, (X + X.T) / 2)


def moments_from_assignment(n: int, k: int, r: int, assignment: Sequence[int]) -> MomentMatrix:
    """Momentos de uma atribuição inteira (entradas 0/1)."""
    return moments_from_distribution(n, k, r, np.asarray([assignment]), [1.0])


def moment(M: MomentMatrix, assignment: dict[int, int]) -> float:
    """Lê y_U(γ) da matriz (|U| ≤ min(2r, n))."""
    chave = _key_of(M.structure, list(assignment), [assignment[v] for v in assignment])
    return float(M.entries[M.structure.rep_row[chave], M.structure.rep_col[chave]])


def restrict(M: MomentMatrix, level: int) -> MomentMatrix:
    """Submatriz principal dos índices com |S| ≤ level."""
    if not 0 <= level <= M.r:
        raise ValueError(f"Nível {level} fora de [0, {M.r}]")
    st = moment_structure(M.n, M.k, level)
    pos = M.structure.positions(st.index_array)
    return moment_matrix(st, M.entries[np.ix_(pos, pos)], M.tol_scale)


# ============================================================================
# VALIDAÇÃO
# ============================================================================

def validate_moments(
    M: MomentMatrix,
    tol_psd: float = TOL_PSD,
    tol_consistency: float = TOL_CONSISTENCY,
) -> ValidationReport:
    """
    Verifica todas as invariantes da matriz de momentos.

    Returns:
        ValidationReport com uma violação por classe violada (magnitude =
        pior caso). Relatório vazio ⇒ momentos válidos.
    """
    st = M.structure
    X = M.entries
    violacoes: list[Violation] = []

    fix = abs(X[0, 0] - 1.0)
    if fix > tol_consistency:
        violacoes.append(Violation(kind="pinning", magnitude=fix, detail="y_∅ ≠ 1"))

    assim = float(np.max(np.abs(X - X.T))) if X.size else 0.0
    if assim > 0.0:
        violacoes.append(Violation(kind="symmetry", magnitude=assim, detail="entries ≠ entriesᵀ"))

    lam_min = float(np.linalg.eigvalsh((X + X.T) / 2)[0])
    if -lam_min > tol_psd:
        violacoes.append(Violation(kind="psd", magnitude=-lam_min, detail=f"λ_min = {lam_min:.3e}"))

    chaves = M.key_values()
    compat = st.pair_key >= 0
    desvio = float(np.max(np.abs(X[compat] - chaves[st.pair_key[compat]])))
    if desvio > tol_consistency:
        violacoes.append(Violation(kind="consistency", magnitude=desvio, detail="posições da mesma união divergem"))
    if (~compat).any():
        nao_zero = float(np.max(np.abs(X[~compat])))
        if nao_zero > tol_consistency:
            violacoes.append(Violation(kind="consistency", magnitude=nao_zero, detail="par incompatível ≠ 0"))

    if len(st.marg_parent):
        marg = float(np.max(np.abs(chaves[st.marg_children].sum(axis=1) - chaves[st.marg_parent])))
        if marg > tol_consistency:
            violacoes.append(Violation(kind="marginalization", magnitude=marg, detail="Σ_j y_{U+i→j} ≠ y_U"))

    diag = np.diag(X)
    fora = max(float(-diag.min()), float(diag.max() - 1.0), 0.0)
    if fora > tol_consistency:
        violacoes.append(Violation(kind="diagonal", magnitude=fora, detail="diagonal fora de [0, 1]"))

    return ValidationReport(violations=violacoes)


# ============================================================================
# MARGINAIS E CONDICIONAMENTO
# ============================================================================

def marginal(M: MomentMatrix, var: int, tol_consistency: float = TOL_CONSISTENCY) -> np.ndarray:
    """
    Vetor (y_{var→0}, ..., y_{var→k-1}) cortado em [0, 1].

    Raises:
        InvalidMomentError: se a soma antes do corte se afasta de 1 mais
        que 10·tol_consistency (escalado pelo condicionamento acumulado)
    """
    if M.r < 1:
        raise LevelBudgetError("Marginais exigem nível ≥ 1")
    if not 0 <= var < M.n:
        raise ValueError(f"Variável {var} fora de [0, {M.n})")
    pos = M.structure.degree_one_positions()[var]
    valores = np.diag(M.entries)[pos].copy()
    soma = float(valores.sum())
    if abs(soma - 1.0) > 10 * tol_consistency * M.tol_scale:
        raise InvalidMomentError(f"Marginal da variável {var} soma {soma:.8f} ≠ 1")
    return np.clip(valores, 0.0, 1.0)


def condition(M: MomentMatrix, var: int, label: int, p_min: float = P_MIN) -> MomentMatrix:
    """
    Condiciona no evento var→label, descendo um nível.

    y'_S(α) = y_{S∪{var}}(α ∪ {var→label}) / y_{var}(label), |S| ≤ r−1.
    A nova matriz é uma submatriz principal (com linhas repetidas ou
    zeradas) dividida por p, portanto continua PSD.

    Raises:
        NearZeroProbabilityError: se y_{var}(label) < p_min
    """
    if M.r < 2:
        raise LevelBudgetError(f"Condicionar exige nível ≥ 2 (matriz de nível {M.r})")
    if not 0 <= label < M.k:
        raise ValueError(f"Rótulo {label} fora de [0, {M.k})")

    pos_evento = int(M.structure.degree_one_positions()[var, label])
    p = float(M.entries[pos_evento, pos_evento])
    if p < p_min:
        raise NearZeroProbabilityError(
            f"P[{var}→{label}] = {p:.3e} abaixo de p_min = {p_min:.1e}"
        )

    novo = moment_structure(M.n, M.k, M.r - 1)
    atrib = novo.index_array.copy()
    conflito = (atrib[:, var] >= 0) & (atrib[:, var] != label)
    atrib[:, var] = label
    origem = M.structure.positions(atrib)
    origem[conflito] = 0

    entries = M.entries[np.ix_(origem, origem)] / p
    entries[conflito, :] = 0.0
    entries[:, conflito] = 0.0
    return moment_matrix(novo, entries, M.tol_scale / p)
