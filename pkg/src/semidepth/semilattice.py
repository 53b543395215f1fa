"""Semilattices: irreducible elements, depth, Hasse diagrams.

Order convention: x <= y iff x = xy, so the zero is the minimum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import PreconditionError
from .semigroup_engine import FiniteSemigroup, from_table


def is_semilattice(S: FiniteSemigroup) -> bool:
    t = S.table
    idx = np.arange(S.order)
    return bool(np.array_equal(t, t.T) and (t[idx, idx] == idx).all())


def _require(S: FiniteSemigroup) -> np.ndarray:
    if not is_semilattice(S):
        raise PreconditionError("S is not a semilattice (needs a commutative idempotent operation)")
    return S.table


def zero(S: FiniteSemigroup) -> int:
    t = _require(S)
    z = 0
    for x in range(1, S.order):
        z = int(t[z, x])
    return z


def irreducibles(S: FiniteSemigroup) -> list[int]:
    """Elements s such that s = ab forces a = s or b = s."""
    t = _require(S)
    m = S.order
    out = []
    for s in range(m):
        ab = np.argwhere(t == s)
        if ((ab[:, 0] == s) | (ab[:, 1] == s)).all():
            out.append(s)
    if m and not out:
        raise AssertionError("a finite semilattice has irreducible elements")
    return out


def depth_semilattice(S: FiniteSemigroup) -> int:
    """Fewest irreducibles whose product is the zero."""
    t = _require(S)
    irr = irreducibles(S)
    z = zero(S)
    level = {x: 1 for x in irr}
    frontier = list(irr)
    d = 1
    while z not in level:
        nxt = []
        for x in frontier:
            for a in irr:
                y = int(t[x, a])
                if y not in level:
                    level[y] = d + 1
                    nxt.append(y)
        frontier = nxt
        d += 1
    return level[z]


def is_free(S: FiniteSemigroup) -> bool:
    """Whether S is free on its irreducibles: order 2^k - 1 and distinct subset products."""
    t = _require(S)
    irr = irreducibles(S)
    if S.order != 2 ** len(irr) - 1:
        return False
    seen = set()
    for k in range(1, len(irr) + 1):
        for combo in itertools.combinations(irr, k):
            p = combo[0]
            for x in combo[1:]:
                p = int(t[p, x])
            seen.add(p)
    return len(seen) == S.order


@dataclass
class HasseDiagram:
    vertices: list[int]
    edges: list[tuple[int, int]]  # (u, v) with u covered by v
    zero: int

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def to_dot(self, labels: list[str] | None = None) -> str:
        lab = labels or [str(v) for v in self.vertices]
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for v in self.vertices:
            lines.append(f'  n{v} [label="{lab[v]}"];')
        for u, v in self.edges:
            lines.append(f"  n{u} -> n{v};")
        lines.append("}")
        return "\n".join(lines)


def hasse(S: FiniteSemigroup) -> HasseDiagram:
    t = _require(S)
    m = S.order
    below = t == np.arange(m)[:, None]  # below[x, y]: x <= y
    strict = below & ~np.eye(m, dtype=bool)
    edges = []
    for u in range(m):
        for v in np.nonzero(strict[u])[0].tolist():
            # v covers u when nothing lies strictly between
            if not (strict[u] & strict[:, v]).any():
                edges.append((u, v))
    return HasseDiagram(list(range(m)), edges, zero(S))


def is_rooted_tree(d: HasseDiagram) -> bool:
    """Every down-set {x : x <= s} is a chain."""
    g = d.graph()
    for s in d.vertices:
        down = nx.ancestors(g, s)
        for a, b in itertools.combinations(down, 2):
            if not (nx.has_path(g, a, b) or nx.has_path(g, b, a)):
                return False
    return True


def from_covers(n: int, covers: list[tuple[int, int]]) -> FiniteSemigroup:
    """Meet semilattice on 0..n-1 from cover pairs (u, v) meaning u lies just below v."""
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(covers)
    if not nx.is_directed_acyclic_graph(g):
        raise PreconditionError("cover relation has a cycle")
    down = [nx.ancestors(g, v) | {v} for v in range(n)]
    tab = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(n):
            common = down[a] & down[b]
            tops = [c for c in common if all(x in down[c] for x in common)]
            if len(tops) != 1:
                raise PreconditionError(f"elements {a} and {b} have no meet")
            tab[a, b] = tops[0]
    return from_table(tab, keys=[str(v) for v in range(n)])


def chain(k: int) -> FiniteSemigroup:
    """0 < 1 < ... < k-1 with product = minimum."""
    tab = np.minimum.outer(np.arange(k), np.arange(k)).astype(np.int32)
    return from_table(tab, keys=[str(v) for v in range(k)])


def random_tree_semilattice(size: int, rng: np.random.Generator) -> FiniteSemigroup:
    """Random rooted tree (root = zero); the product is the lowest common ancestor."""
    parent = [-1] + [int(rng.integers(v)) for v in range(1, size)]
    covers = [(parent[v], v) for v in range(1, size)]
    return from_covers(size, covers)
