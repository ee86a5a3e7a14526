# lasserre/app/services/problems.py

"""
Problemas: codificação, avaliação, reparo e oráculo

Cada tipo de ProblemSpec vira uma LabelingInstance (encode), tem um
avaliador no valor nativo do problema (evaluate), um reparo de
viabilidade (repair) e um oráculo por enumeração exaustiva (oracle).

Convenções de rótulos:
- tipos de corte: rótulo 1 = lado B / lado escolhido
- independent-set: rótulo 1 = dentro do conjunto
- qip: rótulo 0 ↦ +1, rótulo 1 ↦ −1
- partial-3-coloring: rótulo 0 = sem cor, 1..c = cores
"""

import logging
from math import ceil
from typing import Optional, Sequence

import numpy as np

from config import ORACLE_CAP, PREDICTED_FACTOR_C
from app.models.embedding import SpectralReport
from app.models.instance import GlobalConstraint, LabelingInstance, Term
from app.schemas import EvaluationResult, OracleResult, ProblemSpec
from app.utils.enums import ProblemKind, Relation, Sense
from app.utils.errors import CapacityError, MalformedSpecError, ScopeError
from app.utils.serialization import canonical_hash

logger = logging.getLogger(__name__)

CUT_TABLE = [0.0, 1.0, 1.0, 0.0]
FEASIBILITY_TOL = 1e-9
ORACLE_CHUNK = 1 << 16


# ============================================================================
# FORMA CANÔNICA
# ============================================================================

def normalized(spec: ProblemSpec) -> ProblemSpec:
    """
    Arestas com u < v, ordenadas; parâmetros por aresta acompanham.

    Trocar as pontas inverte a permutação (unique-games) e transpõe a
    tabela (two-csp).
    """
    p = spec.params
    k = spec.k
    linhas = []
    for e, (u, v, w) in enumerate(spec.edges):
        perm = p.permutations[e] if p.permutations is not None else None
        tabela = p.csp_tables[e] if p.csp_tables is not None else None
        if u > v:
            u, v = v, u
            if perm is not None:
                inversa = [0] * k
                for a, b in enumerate(perm):
                    inversa[b] = a
                perm = inversa
            if tabela is not None:
                tabela = list(np.asarray(tabela, dtype=float).reshape(k, k).T.ravel())
        linhas.append((int(u), int(v), float(w), perm, tabela))

    linhas.sort(key=lambda t: (t[0], t[1], t[2], t[3] or [], t[4] or []))

    atualiza = {}
    if p.permutations is not None:
        atualiza["permutations"] = [t[3] for t in linhas]
    if p.csp_tables is not None:
        atualiza["csp_tables"] = [[float(x) for x in t[4]] for t in linhas]
    return spec.model_copy(update={
        "edges": [(u, v, w) for (u, v, w, _, _) in linhas],
        "params": p.model_copy(update=atualiza),
    })


def instance_hash(spec: ProblemSpec) -> str:
    """Digest estável da serialização canônica (arestas normalizadas)."""
    return canonical_hash(normalized(spec))


def graph_edges(spec: ProblemSpec) -> list[tuple[int, int, float]]:
    """Grafo da instância (para o espectro); qip sem arestas usa |A_ij|."""
    arestas = list(normalized(spec).edges)
    if spec.kind is ProblemKind.QIP and not arestas and spec.params.qip_matrix is not None:
        A = np.asarray(spec.params.qip_matrix, dtype=float)
        for i in range(spec.n):
            for j in range(i + 1, spec.n):
                if A[i, j] != 0.0:
                    arestas.append((i, j, abs(float(A[i, j]))))
    return arestas


def _pairs(spec: ProblemSpec) -> list[tuple[int, int]]:
    """Pares distintos de vértices adjacentes (ignora pesos e repetições)."""
    return sorted({(u, v) for (u, v, _) in normalized(spec).edges})


def _vertex_weights(spec: ProblemSpec) -> np.ndarray:
    if spec.params.vertex_weights is not None:
        return np.asarray(spec.params.vertex_weights, dtype=float)
    return np.ones(spec.n)


def _min_side(spec: ProblemSpec) -> float:
    ms = spec.params.min_side
    return float(ceil(spec.n / 3)) if ms is None else float(ms)


def _penalty(spec: ProblemSpec) -> float:
    return spec.params.penalty if spec.params.penalty is not None else 2.0 * spec.n


# ============================================================================
# CODIFICAÇÃO
# ============================================================================

def _cut_terms(spec: ProblemSpec) -> list[Term]:
    return [Term(scope=(u, v), table=CUT_TABLE, weight=w) for (u, v, w) in spec.edges]


def _side_sum(n: int, coef: float = 1.0) -> list[tuple[int, int, float]]:
    return [(i, 1, coef) for i in range(n)]


def _encode_max_cut(spec: ProblemSpec):
    return _cut_terms(spec), [], []


def _encode_min_bisection(spec: ProblemSpec):
    n, s = spec.n, spec.params.bisection_slack
    if s == 0:
        globais = [GlobalConstraint(coeffs=_side_sum(n), rhs=n // 2, relation=Relation.EQ)]
    else:
        globais = [
            GlobalConstraint(coeffs=_side_sum(n), rhs=ceil(n / 2) + s, relation=Relation.LE),
            GlobalConstraint(coeffs=_side_sum(n, -1.0), rhs=-(n // 2 - s), relation=Relation.LE),
        ]
    return _cut_terms(spec), globais, []


def _encode_unique_games(spec: ProblemSpec):
    k = spec.k
    termos = []
    for (u, v, w), perm in zip(spec.edges, spec.params.permutations):
        tabela = [0.0] * (k * k)
        for a in range(k):
            tabela[a * k + perm[a]] = 1.0
        termos.append(Term(scope=(u, v), table=tabela, weight=w))
    return termos, [], []


def _encode_independent_set(spec: ProblemSpec):
    pesos = _vertex_weights(spec)
    m_big = 2.0 * float(pesos.sum())
    termos = [Term(scope=(i,), table=[0.0, float(pesos[i])]) for i in range(spec.n)]
    proibidos = []
    for (u, v) in _pairs(spec):
        if spec.params.strict:
            proibidos.append(((u, v), (1, 1)))
        else:
            termos.append(Term(scope=(u, v), table=[0.0, 0.0, 0.0, -m_big]))
    return termos, [], proibidos


def _encode_qip(spec: ProblemSpec):
    A = np.asarray(spec.params.qip_matrix, dtype=float)
    termos = [Term(scope=(i,), table=[A[i, i], A[i, i]]) for i in range(spec.n)]
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            a = float(A[i, j])
            if a != 0.0:
                # x_i x_j = +1 se rótulos iguais, −1 se diferentes
                termos.append(Term(scope=(i, j), table=[2 * a, -2 * a, -2 * a, 2 * a]))
    return termos, [], []


def _encode_sparsest_cut(spec: ProblemSpec):
    norm = spec.params.normalization
    rhs = float(spec.n // 2) if norm is None else float(norm)
    globais = [GlobalConstraint(coeffs=_side_sum(spec.n), rhs=rhs, relation=Relation.EQ)]
    return _cut_terms(spec), globais, []


def _encode_capacity_cut_packing(spec: ProblemSpec):
    globais = []
    for c in spec.params.packing:
        coeffs = [(i, 1, float(x)) for i, x in enumerate(c.coeffs) if x != 0.0]
        globais.append(GlobalConstraint(coeffs=coeffs, rhs=c.budget, relation=Relation.LE))
    ms = _min_side(spec)
    if ms > 0:
        globais.append(GlobalConstraint(coeffs=_side_sum(spec.n, -1.0), rhs=-ms, relation=Relation.LE))
    return _cut_terms(spec), globais, []


def _encode_two_csp(spec: ProblemSpec):
    termos = [
        Term(scope=(u, v), table=list(tabela), weight=w)
        for (u, v, w), tabela in zip(spec.edges, spec.params.csp_tables)
    ]
    return termos, [], []


def _encode_partial_coloring(spec: ProblemSpec):
    k = spec.k
    cores = range(1, k)
    termos = [Term(scope=(i,), table=[0.0] + [1.0] * (k - 1)) for i in range(spec.n)]
    proibidos = []
    lam = _penalty(spec)
    for (u, v) in _pairs(spec):
        if spec.params.strict:
            proibidos.extend(((u, v), (c, c)) for c in cores)
        else:
            tabela = [0.0] * (k * k)
            for c in cores:
                tabela[c * k + c] = -lam
            termos.append(Term(scope=(u, v), table=tabela))
    return termos, [], proibidos


_ENCODERS = {
    ProblemKind.MAX_CUT: _encode_max_cut,
    ProblemKind.MIN_BISECTION: _encode_min_bisection,
    ProblemKind.UNIQUE_GAMES: _encode_unique_games,
    ProblemKind.INDEPENDENT_SET: _encode_independent_set,
    ProblemKind.QIP: _encode_qip,
    ProblemKind.SPARSEST_CUT: _encode_sparsest_cut,
    ProblemKind.CAPACITY_CUT_PACKING: _encode_capacity_cut_packing,
    ProblemKind.TWO_CSP: _encode_two_csp,
    ProblemKind.PARTIAL_3_COLORING: _encode_partial_coloring,
}


def encode(spec: ProblemSpec, r: Optional[int] = None) -> LabelingInstance:
    """
    Codifica o problema como instância de rotulação.

    Raises:
        MalformedSpecError: se a instância resultante não é bem formada
        ScopeError: se algum termo não cabe no nível r

    Exemplo:
        inst = encode(ProblemSpec(kind="max-cut", n=2, edges=[(0, 1, 1.0)]))
        # → k=2, um termo de corte, maximizar
    """
    spec = normalized(spec)
    termos, globais, proibidos = _ENCODERS[spec.kind](spec)
    try:
        inst = LabelingInstance(
            n=spec.n,
            k=spec.k,
            terms=termos,
            sense=spec.sense,
            global_constraints=globais,
            forbidden=proibidos,
        )
    except ValueError as e:
        raise MalformedSpecError(f"Instância de {spec.kind.value} mal formada: {e}") from e
    if r is not None and inst.max_scope > 2 * r:
        raise ScopeError(f"Termos de escopo {inst.max_scope} não cabem no nível {r}")
    return inst


# ============================================================================
# AVALIAÇÃO (vetorizada: uma linha por atribuição)
# ============================================================================

def _edge_arrays(spec: ProblemSpec):
    if not spec.edges:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)
    U = np.array([e[0] for e in spec.edges], dtype=np.int64)
    V = np.array([e[1] for e in spec.edges], dtype=np.int64)
    W = np.array([e[2] for e in spec.edges], dtype=float)
    return U, V, W


def _pair_arrays(spec: ProblemSpec):
    pares = _pairs(spec)
    PU = np.array([u for u, _ in pares], dtype=np.int64)
    PV = np.array([v for _, v in pares], dtype=np.int64)
    return PU, PV


def batch_evaluate(spec: ProblemSpec, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Valor nativo e viabilidade de várias atribuições (B × n) de uma vez.

    Returns:
        (valores, viaveis), ambos de comprimento B
    """
    spec = normalized(spec)
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    n, k, p, kind = spec.n, spec.k, spec.params, spec.kind
    U, V, W = _edge_arrays(spec)
    viaveis = np.ones(X.shape[0], dtype=bool)
    lado = X.sum(axis=1) if k == 2 else None
    corte = (X[:, U] != X[:, V]).astype(float) @ W

    if kind is ProblemKind.MAX_CUT:
        valores = corte

    elif kind is ProblemKind.MIN_BISECTION:
        valores = corte
        viaveis = np.minimum(lado, n - lado) >= n // 2 - p.bisection_slack

    elif kind is ProblemKind.SPARSEST_CUT:
        produto = (lado * (n - lado)).astype(float)
        viaveis = produto > 0
        valores = np.full(X.shape[0], np.inf)
        np.divide(corte, produto, out=valores, where=viaveis)

    elif kind is ProblemKind.CAPACITY_CUT_PACKING:
        valores = corte
        viaveis = lado >= _min_side(spec) - FEASIBILITY_TOL
        if p.packing:
            C = np.array([c.coeffs for c in p.packing], dtype=float)
            b = np.array([c.budget for c in p.packing], dtype=float)
            carga = (X == 1).astype(float) @ C.T
            viaveis &= np.all(carga <= b + FEASIBILITY_TOL, axis=1)

    elif kind is ProblemKind.UNIQUE_GAMES:
        P = np.asarray(p.permutations, dtype=np.int64)
        arestas = np.arange(len(U))[None, :]
        valores = (P[arestas, X[:, U]] == X[:, V]).astype(float) @ W

    elif kind is ProblemKind.TWO_CSP:
        T = np.asarray(p.csp_tables, dtype=float)
        arestas = np.arange(len(U))[None, :]
        valores = T[arestas, X[:, U] * k + X[:, V]] @ W

    elif kind is ProblemKind.INDEPENDENT_SET:
        dentro = X == 1
        valores = dentro.astype(float) @ _vertex_weights(spec)
        PU, PV = _pair_arrays(spec)
        viaveis = ~np.any(dentro[:, PU] & dentro[:, PV], axis=1)

    elif kind is ProblemKind.QIP:
        A = np.asarray(p.qip_matrix, dtype=float)
        s = 1.0 - 2.0 * X
        valores = np.einsum("bi,ij,bj->b", s, A, s)

    elif kind is ProblemKind.PARTIAL_3_COLORING:
        valores = (X != 0).sum(axis=1).astype(float)
        PU, PV = _pair_arrays(spec)
        viaveis = ~np.any((X[:, PU] == X[:, PV]) & (X[:, PU] != 0), axis=1)

    else:
        raise MalformedSpecError(f"Tipo desconhecido: {kind}")

    return np.asarray(valores, dtype=float), np.asarray(viaveis, dtype=bool)


def _check_assignment(spec: ProblemSpec, assignment: Sequence[int]):
    if len(assignment) != spec.n:
        raise ValueError(f"Atribuição com {len(assignment)} posições, esperado {spec.n}")
    if any(not 0 <= a < spec.k for a in assignment):
        raise ValueError(f"Rótulos devem estar em [0, {spec.k})")


def _violations(spec: ProblemSpec, x: Sequence[int]) -> list[str]:
    n, p, kind = spec.n, spec.params, spec.kind
    out = []
    if kind is ProblemKind.MIN_BISECTION:
        c1 = sum(x)
        if min(c1, n - c1) < n // 2 - p.bisection_slack:
            out.append(f"desbalanceada: lados {n - c1}/{c1}")
    elif kind is ProblemKind.SPARSEST_CUT:
        if sum(x) in (0, n):
            out.append("lado vazio")
    elif kind is ProblemKind.CAPACITY_CUT_PACKING:
        for j, c in enumerate(p.packing):
            carga = sum(ci for ci, xi in zip(c.coeffs, x) if xi == 1)
            if carga > c.budget + FEASIBILITY_TOL:
                out.append(f"orçamento {j} excedido: {carga:g} > {c.budget:g}")
        if sum(x) < _min_side(spec) - FEASIBILITY_TOL:
            out.append(f"lado escolhido com {sum(x)} < min_side {_min_side(spec):g}")
    elif kind is ProblemKind.INDEPENDENT_SET:
        out.extend(f"aresta ({u}, {v}) com as duas pontas no conjunto"
                   for (u, v) in _pairs(spec) if x[u] == 1 and x[v] == 1)
    elif kind is ProblemKind.PARTIAL_3_COLORING:
        out.extend(f"aresta ({u}, {v}) monocromática (cor {x[u]})"
                   for (u, v) in _pairs(spec) if x[u] == x[v] != 0)
    return out


def evaluate(spec: ProblemSpec, assignment: Sequence[int]) -> EvaluationResult:
    """
    Valor exato no valor nativo do problema, viabilidade e violações.

    Exemplo:
        evaluate(k4_bissecao, [0, 0, 1, 1])
        # → EvaluationResult(value=4.0, feasible=True, violations=[])
    """
    _check_assignment(spec, assignment)
    x = [int(a) for a in assignment]
    valores, viaveis = batch_evaluate(spec, np.asarray([x]))
    return EvaluationResult(
        value=float(valores[0]),
        feasible=bool(viaveis[0]),
        violations=_violations(normalized(spec), x),
    )


# ============================================================================
# REPARO
# ============================================================================

def _adjacency(spec: ProblemSpec) -> list[dict[int, float]]:
    adj: list[dict[int, float]] = [dict() for _ in range(spec.n)]
    for (u, v, w) in normalized(spec).edges:
        adj[u][v] = adj[u].get(v, 0.0) + w
        adj[v][u] = adj[v].get(u, 0.0) + w
    return adj


def _move_delta(adj: list[dict[int, float]], x: list[int], i: int) -> float:
    """Variação do corte ao trocar o lado de i."""
    return sum(w if x[j] == x[i] else -w for j, w in adj[i].items())


def _repair_bisection(spec: ProblemSpec, x: list[int]) -> list[int]:
    n, adj = spec.n, _adjacency(spec)
    limite = ceil(n / 2) + spec.params.bisection_slack
    while True:
        c1 = sum(x)
        maior = 1 if c1 > n - c1 else 0
        if max(c1, n - c1) <= limite:
            return x
        i = min((i for i in range(n) if x[i] == maior), key=lambda i: (_move_delta(adj, x, i), i))
        x[i] = 1 - x[i]


def _repair_independent_set(spec: ProblemSpec, x: list[int]) -> list[int]:
    pesos = _vertex_weights(spec)
    for (u, v) in _pairs(spec):
        if x[u] == 1 and x[v] == 1:
            sai = min((pesos[u], u), (pesos[v], v))[1]
            x[sai] = 0
    return x


def _repair_partial_coloring(spec: ProblemSpec, x: list[int]) -> list[int]:
    adj = _adjacency(spec)
    for (u, v) in _pairs(spec):
        if x[u] == x[v] != 0:
            sai = min((len(adj[u]), u), (len(adj[v]), v))[1]
            x[sai] = 0
    return x


def _repair_capacity(spec: ProblemSpec, x: list[int]) -> list[int]:
    adj = _adjacency(spec)
    p = spec.params
    C = np.array([c.coeffs for c in p.packing], dtype=float).reshape(len(p.packing), spec.n)
    b = np.array([c.budget for c in p.packing], dtype=float)

    # tira do lado escolhido quem tem menor custo de corte por carga liberada
    while True:
        violadas = C @ np.asarray(x, dtype=float) > b + FEASIBILITY_TOL
        if not violadas.any():
            break
        candidatos = [i for i in range(spec.n) if x[i] == 1 and C[violadas, i].sum() > 0]
        if not candidatos:
            break
        i = min(candidatos, key=lambda i: (_move_delta(adj, x, i) / C[violadas, i].sum(), i))
        x[i] = 0

    # completa o lado mínimo sem estourar orçamento
    ms = _min_side(spec)
    while sum(x) < ms - FEASIBILITY_TOL:
        carga = C @ np.asarray(x, dtype=float)
        candidatos = [
            i for i in range(spec.n)
            if x[i] == 0 and np.all(carga + C[:, i] <= b + FEASIBILITY_TOL)
        ]
        if not candidatos:
            logger.warning("⚠️  Reparo de empacotamento não alcança min_side")
            break
        i = min(candidatos, key=lambda i: (_move_delta(adj, x, i), i))
        x[i] = 1
    return x


def _repair_sparsest(spec: ProblemSpec, x: list[int]) -> list[int]:
    n = spec.n
    if n >= 2 and sum(x) in (0, n):
        adj = _adjacency(spec)
        i = min(range(n), key=lambda i: (sum(adj[i].values()), i))
        x[i] = 1 - x[i]
    return x


_REPAIRS = {
    ProblemKind.MIN_BISECTION: _repair_bisection,
    ProblemKind.INDEPENDENT_SET: _repair_independent_set,
    ProblemKind.PARTIAL_3_COLORING: _repair_partial_coloring,
    ProblemKind.CAPACITY_CUT_PACKING: _repair_capacity,
    ProblemKind.SPARSEST_CUT: _repair_sparsest,
}


def repair(spec: ProblemSpec, assignment: Sequence[int]) -> list[int]:
    """
    Restaura a viabilidade (identidade para tipos sem restrição dura).

    Exemplo:
        repair(c2_conjunto_independente, [1, 1])
        # → [0, 1] (pesos iguais: sai a ponta de menor índice)
    """
    _check_assignment(spec, assignment)
    x = [int(a) for a in assignment]
    reparo = _REPAIRS.get(spec.kind)
    return reparo(normalized(spec), x) if reparo else x


# ============================================================================
# ORÁCULO
# ============================================================================

def _enumerate(n: int, k: int, inicio: int, fim: int) -> np.ndarray:
    """Atribuições de códigos [inicio, fim) em ordem lexicográfica (variável 0 mais significativa)."""
    codigos = np.arange(inicio, fim, dtype=np.int64)
    potencias = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codigos[:, None] // potencias[None, :]) % k


def oracle(spec: ProblemSpec, cap: int = ORACLE_CAP) -> OracleResult:
    """
    Ótimo exato por enumeração de todas as k^n atribuições viáveis.
    Empates → testemunha lexicograficamente menor.

    Raises:
        CapacityError: se k^n > cap
        MalformedSpecError: se nenhuma atribuição é viável
    """
    n, k = spec.n, spec.k
    total = k ** n
    if total > cap:
        raise CapacityError(f"Enumeração de {k}^{n} = {total} atribuições excede o limite {cap}")

    spec = normalized(spec)
    sentido = spec.sense
    pior = np.inf if sentido is Sense.MINIMIZE else -np.inf
    melhor_valor, melhor_codigo = pior, None

    for inicio in range(0, total, ORACLE_CHUNK):
        X = _enumerate(n, k, inicio, min(total, inicio + ORACLE_CHUNK))
        valores, viaveis = batch_evaluate(spec, X)
        valores = np.where(viaveis, valores, pior)
        j = int(np.argmin(valores) if sentido is Sense.MINIMIZE else np.argmax(valores))
        if viaveis[j] and (melhor_codigo is None or sentido.better(float(valores[j]), melhor_valor)):
            melhor_valor, melhor_codigo = float(valores[j]), inicio + j

    if melhor_codigo is None:
        raise MalformedSpecError(f"Nenhuma atribuição viável para {spec.kind.value} (n={n})")

    testemunha = [int(a) for a in _enumerate(n, k, melhor_codigo, melhor_codigo + 1)[0]]
    resultado = evaluate(spec, testemunha)
    logger.info(f"✅ Oráculo {spec.kind.value}: ótimo {resultado.value:g} ({total} atribuições)")
    return OracleResult(
        opt_value=resultado.value,
        witness=testemunha,
        enumerated=total,
        instance_hash=instance_hash(spec),
    )


def labeling_optimum(inst: LabelingInstance, cap: int = ORACLE_CAP) -> tuple[float, list[int]]:
    """
    Ótimo exato da própria instância de rotulação (objetivo codificado,
    restrições globais e eventos proibidos).
    """
    n, k = inst.n, inst.k
    total = k ** n
    if total > cap:
        raise CapacityError(f"Enumeração de {k}^{n} = {total} atribuições excede o limite {cap}")

    melhor_valor, melhor = None, None
    for inicio in range(0, total, ORACLE_CHUNK):
        X = _enumerate(n, k, inicio, min(total, inicio + ORACLE_CHUNK))
        valores = np.zeros(len(X))
        for t in inst.terms:
            tabela = np.asarray(t.table, dtype=float)
            idx = np.zeros(len(X), dtype=np.int64)
            for v in t.scope:
                idx = idx * k + X[:, v]
            valores += t.weight * tabela[idx]
        viaveis = np.ones(len(X), dtype=bool)
        for g in inst.global_constraints:
            lhs = sum(c * (X[:, i] == j) for (i, j, c) in g.coeffs) if g.coeffs else np.zeros(len(X))
            if g.relation is Relation.EQ:
                viaveis &= np.abs(lhs - g.rhs) <= FEASIBILITY_TOL
            else:
                viaveis &= lhs <= g.rhs + FEASIBILITY_TOL
        for scope, labels in inst.forbidden:
            viaveis &= ~np.all(X[:, list(scope)] == np.asarray(labels)[None, :], axis=1)
        if not viaveis.any():
            continue
        pior = np.inf if inst.sense is Sense.MINIMIZE else -np.inf
        valores = np.where(viaveis, valores, pior)
        j = int(np.argmin(valores) if inst.sense is Sense.MINIMIZE else np.argmax(valores))
        if melhor_valor is None or inst.sense.better(float(valores[j]), melhor_valor):
            melhor_valor, melhor = float(valores[j]), [int(a) for a in X[j]]

    if melhor is None:
        raise MalformedSpecError("Instância de rotulação sem atribuição viável")
    return melhor_valor, melhor


# ============================================================================
# FATOR PREVISTO
# ============================================================================

def predicted_factor(
    spec: ProblemSpec,
    r: int,
    spectrum: SpectralReport,
    c: float = PREDICTED_FACTOR_C,
) -> tuple[Optional[float], Optional[float]]:
    """
    (λ_{r+1}, 1 + c/λ_{r+1}): fator indicativo, constantes não verificadas.

    O fator só existe para tipos de corte; λ_{r+1} = 0 dá infinito e
    r + 1 > n dá ausente.

    Exemplo:
        predicted_factor(k4, 1, laplacian_spectrum(k4_arestas, 4))
        # → (4/3, 2.5)
    """
    lam = spectrum.lambda_of(r + 1)
    if lam is None or not spec.kind.is_cut_type:
        return lam, None
    if lam <= 1e-12:
        return lam, float("inf")
    return lam, 1.0 + c / lam
