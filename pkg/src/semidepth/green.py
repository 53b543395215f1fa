"""Green's relations of a finite semigroup.

R-, L- and J-classes are the strongly connected components of the right,
left and two-sided Cayley graphs; reachability along a path is exactly
membership in the principal ideal generated with an identity adjoined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import PreconditionError
from .semigroup_engine import FiniteSemigroup, from_table, kernel


def _scc(n: int, edges_to: np.ndarray) -> np.ndarray:
    rows = np.repeat(np.arange(n), edges_to.shape[1])
    cols = edges_to.reshape(-1)
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(g, directed=True, connection="strong")
    return _canonical(labels)


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Renumber class labels in order of first appearance."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv]


def _classes(labels: np.ndarray) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(int(labels.max()) + 1)]
    for i, c in enumerate(labels.tolist()):
        out[c].append(i)
    return out


@dataclass
class JClassInfo:
    size: int
    h: int  # common size of the H-classes
    l: int  # number of L-classes
    r: int  # number of R-classes
    is_regular: bool
    elements: list[int] = field(repr=False)


@dataclass
class GreenData:
    r_of: np.ndarray
    l_of: np.ndarray
    j_of: np.ndarray
    h_of: np.ndarray
    r_classes: list[list[int]]
    l_classes: list[list[int]]
    j_classes: list[list[int]]
    h_classes: list[list[int]]
    j_order: nx.DiGraph  # transitively reduced; edge u -> v means J_v is covered by J_u
    j_info: list[JClassInfo]
    maximal_j_classes: list[int]
    kernel_j_class: int
    idempotents: np.ndarray

    def above(self, j: int) -> set[int]:
        """J-classes strictly above ``j``."""
        return nx.ancestors(self.j_order, j)

    def below(self, j: int) -> set[int]:
        return nx.descendants(self.j_order, j)

    def leq(self, a: int, b: int) -> bool:
        """J-class ``a`` lies at or below ``b``."""
        return a == b or a in self.below(b)

    def to_json(self, S: FiniteSemigroup | None = None) -> list[dict]:
        out = []
        for j, info in enumerate(self.j_info):
            d = dict(size=info.size, h=info.h, l=info.l, r=info.r, is_regular=info.is_regular)
            if S is not None and S.images is not None:
                d["rank_of_elements"] = S.element_rank(info.elements[0])
            out.append(d)
        return out

    def to_dot(self, S: FiniteSemigroup | None = None) -> str:
        lines = ["digraph jorder {"]
        for j, info in enumerate(self.j_info):
            lab = f"J{j} |{info.size}|"
            if S is not None:
                lab += "\\n" + S.label(info.elements[0])
            lines.append(f'  J{j} [label="{lab}"];')
        for u, v in sorted(self.j_order.edges):
            lines.append(f"  J{u} -> J{v};")
        lines.append("}")
        return "\n".join(lines)


def idempotents(S: FiniteSemigroup) -> np.ndarray:
    idx = np.arange(S.order)
    if S.has_table:
        return S.table[idx, idx] == idx
    return np.asarray([S.mul(i, i) == i for i in range(S.order)])


def green_data(S: FiniteSemigroup) -> GreenData:
    cached = getattr(S, "_green", None)
    if cached is not None:
        return cached
    m = S.order
    right, left = S.right_cayley, S.left_cayley
    r_of = _scc(m, right)
    l_of = _scc(m, left)
    both = np.concatenate([right, left], axis=1)
    j_of = _scc(m, both)
    pairs = r_of * (int(l_of.max()) + 1) + l_of
    h_of = _canonical(pairs)

    nj = int(j_of.max()) + 1
    src = np.repeat(j_of, both.shape[1])
    dst = j_of[both.reshape(-1)]
    cross = np.unique(np.stack([src, dst], axis=1)[src != dst], axis=0)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(nj))
    dag.add_edges_from(map(tuple, cross.tolist()))
    order = nx.transitive_reduction(dag)
    order.add_nodes_from(range(nj))

    idem = idempotents(S)
    j_classes = _classes(j_of)
    info = []
    for j, members in enumerate(j_classes):
        rs = {int(r_of[x]) for x in members}
        ls = {int(l_of[x]) for x in members}
        info.append(
            JClassInfo(
                size=len(members),
                h=len(members) // (len(rs) * len(ls)),
                l=len(ls),
                r=len(rs),
                is_regular=bool(idem[members].any()),
                elements=members,
            )
        )
    maximal = sorted(j for j in range(nj) if order.in_degree(j) == 0)
    sinks = [j for j in range(nj) if order.out_degree(j) == 0]
    if len(sinks) != 1:
        raise AssertionError("a finite semigroup has exactly one minimal J-class")
    kj = sinks[0]
    assert set(j_classes[kj]) == set(kernel(S).kernel_indices)
    G = GreenData(
        r_of=r_of,
        l_of=l_of,
        j_of=j_of,
        h_of=h_of,
        r_classes=_classes(r_of),
        l_classes=_classes(l_of),
        j_classes=j_classes,
        h_classes=_classes(h_of),
        j_order=order,
        j_info=info,
        maximal_j_classes=maximal,
        kernel_j_class=kj,
        idempotents=idem,
    )
    S._green = G
    return G


def d_classes_via_join(S: FiniteSemigroup) -> np.ndarray:
    """D = R o L computed independently of J, as class labels."""
    G = green_data(S)
    parent = list(range(S.order))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    r_rep = {}
    l_rep = {}
    for x in range(S.order):
        r, l = int(G.r_of[x]), int(G.l_of[x])
        for rep, key in ((r_rep, r), (l_rep, l)):
            if key in rep:
                parent[find(x)] = find(rep[key])
            else:
                rep[key] = x
    return _canonical(np.asarray([find(x) for x in range(S.order)]))


def top_classes_without_identity(S: FiniteSemigroup, G: GreenData) -> list[int]:
    """Maximal J-classes once an isolated identity (J-class {1}) is removed."""
    e = S.identity
    if e is None or G.j_info[int(G.j_of[e])].size != 1:
        return list(G.maximal_j_classes)
    je = int(G.j_of[e])
    return [c for c in range(len(G.j_classes)) if c != je and G.above(c) <= {je}]


def covers_max_j_class(S: FiniteSemigroup, A) -> tuple[bool, list[tuple[str, int]]]:
    """Whether ``A`` meets every R- and L-class of the unique maximal J-class of S minus 1.

    Returns the verdict and the list of uncovered ``("R", id)`` / ``("L", id)`` classes.
    """
    G = green_data(S)
    tops = top_classes_without_identity(S, G)
    if len(tops) != 1:
        raise PreconditionError(f"S has {len(tops)} maximal J-classes: {tops}")
    J = G.j_info[tops[0]].elements
    A = set(int(a) for a in A)
    missing = []
    for r in sorted({int(G.r_of[x]) for x in J}):
        if not any(int(G.r_of[a]) == r for a in A):
            missing.append(("R", r))
    for l in sorted({int(G.l_of[x]) for x in J}):
        if not any(int(G.l_of[a]) == l for a in A):
            missing.append(("L", l))
    return not missing, missing


def is_completely_regular(S: FiniteSemigroup) -> bool:
    G = green_data(S)
    has_idem = np.zeros(len(G.h_classes), dtype=bool)
    has_idem[G.h_of[G.idempotents]] = True
    return bool(has_idem.all())


def d_quotient(S: FiniteSemigroup) -> FiniteSemigroup:
    """The semilattice S/D of a completely regular semigroup."""
    if not is_completely_regular(S):
        raise PreconditionError("S is not completely regular")
    G = green_data(S)
    reps = [c[0] for c in G.j_classes]
    k = len(reps)
    tab = np.empty((k, k), dtype=np.int32)
    for a in range(k):
        for b in range(k):
            tab[a, b] = G.j_of[S.mul(reps[a], reps[b])]
    if not (np.array_equal(tab, tab.T) and all(tab[a, a] == a for a in range(k))):
        raise AssertionError("S/D is not a semilattice")
    return from_table(tab, keys=[f"D{j}" for j in range(k)])


def irreducible_d_classes(S: FiniteSemigroup) -> list[int]:
    from .semilattice import irreducibles

    Q = d_quotient(S)
    return sorted(irreducibles(Q))
