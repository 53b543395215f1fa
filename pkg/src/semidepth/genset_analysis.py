"""Rank, minimal generating sets and the four depth parameters.

Everything rests on one decomposition.  Elements of a J-class ``J`` can
only be written as products of elements lying in ``J`` or strictly above
it, so a set ``A`` generates ``S`` exactly when, for every J-class ``J``,

    J  is contained in  < (everything strictly above J)  u  (A n J) >.

Hence a generating set is minimal iff each slice ``A n J`` is minimal for
that relative condition, the rank is the sum over J-classes of the least
slice size, and classes already generated from above never contribute.

Depth parameters are exact whenever the slices can be enumerated within
budget.  Otherwise they are certified intervals: the lower end comes from
the rank-counting bound for transformation semigroups and from the depth of
the whole candidate pool, the upper end from explicit witnesses and from a
complete search for generating sets that avoid every short kernel word.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .green import GreenData, green_data
from .semigroup_engine import FiniteSemigroup, kernel, shortest_kernel_word, word_lengths

DEFAULT_SEARCH_BUDGET = 200_000


def default_search_budget() -> int:
    return int(os.environ.get("SEMIDEPTH_SEARCH_BUDGET", DEFAULT_SEARCH_BUDGET))


class _OutOfBudget(Exception):
    pass


# ---------------------------------------------------------------------------
# closures specialised for repeated small queries


class _Closer:
    """Subsemigroup membership and word lengths, with a pure-Python path for small orders."""

    def __init__(self, S: FiniteSemigroup, budget: int):
        self.S = S
        self.small = S.order <= 1500
        self.tab = S.table.tolist() if self.small else None
        self.calls = 0
        self.budget = budget

    def tick(self, n: int = 1):
        self.calls += n
        if self.calls > self.budget:
            raise _OutOfBudget

    def members(self, gens: Sequence[int], within: set[int] | None = None) -> set[int]:
        self.tick()
        gens = list(dict.fromkeys(gens))
        if within is not None:
            gens = [g for g in gens if g in within]
        if not self.small:
            mask = None
            if within is not None:
                mask = np.zeros(self.S.order, dtype=bool)
                mask[list(within)] = True
            L = word_lengths(self.S, gens, mask) if gens else np.full(self.S.order, -1)
            return set(np.nonzero(L >= 0)[0].tolist())
        tab = self.tab
        seen = set(gens)
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                row = tab[x]
                for a in gens:
                    y = row[a]
                    if y not in seen and (within is None or y in within):
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def kernel_distance(self, gens: Sequence[int], K: set[int], cap: int | None = None) -> int:
        """Length of the shortest word over ``gens`` landing in ``K`` (capped BFS)."""
        self.tick()
        gens = list(dict.fromkeys(gens))
        e = self.S.identity
        if not self.small:
            L = word_lengths(self.S, gens)
            vals = L[list(K)]
            vals = vals[vals >= 0]
            return int(vals.min()) if len(vals) else math.inf
        tab = self.tab
        seen = set(gens)
        frontier = list(seen)
        level = 1
        while frontier:
            if any(x in K for x in frontier):
                if e is not None and e in K and e in seen:
                    return 0
                return level
            if cap is not None and level >= cap:
                return math.inf
            nxt = []
            for x in frontier:
                row = tab[x]
                for a in gens:
                    y = row[a]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
            level += 1
        return math.inf


# ---------------------------------------------------------------------------
# results


@dataclass
class ParamValue:
    lo: int
    hi: int
    complete: bool

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.exact else None

    def to_json(self) -> dict:
        if self.exact:
            return {"value": self.lo, "complete": self.complete}
        return {"interval": [self.lo, self.hi], "complete": self.complete}


@dataclass
class DepthReport:
    N: ParamValue
    M: ParamValue
    N_prime: ParamValue
    M_prime: ParamValue
    rank: ParamValue
    r_value: int | None
    t_value: int | None
    witnesses: dict = field(default_factory=dict)
    enumeration_complete: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def chain_ok(self) -> bool:
        """N' <= N <= M <= M' on whatever bounds are known."""
        Np, N, M, Mp = self.N_prime, self.N, self.M, self.M_prime
        return Np.lo <= N.hi and N.lo <= M.hi and M.lo <= Mp.hi and Np.lo <= Mp.hi

    def to_json(self) -> dict:
        return {
            "rank": self.rank.value if self.rank.exact else {"interval": [self.rank.lo, self.rank.hi]},
            "r": self.r_value,
            "t": self.t_value,
            "N": self.N.to_json(),
            "Nprime": self.N_prime.to_json(),
            "M": self.M.to_json(),
            "Mprime": self.M_prime.to_json(),
            "witnesses": self.witnesses,
        }


# ---------------------------------------------------------------------------
# structural context


class _Context:
    def __init__(self, S: FiniteSemigroup, budget: int):
        self.S = S
        self.G: GreenData = green_data(S)
        self.K = set(kernel(S).kernel_indices)
        self.closer = _Closer(S, budget)
        self.topo = list(nx.topological_sort(self.G.j_order))
        self._up: dict[int, set[int]] = {}
        e = S.identity
        self.identity = e
        self.identity_class = None if e is None else int(self.G.j_of[e])

    def upset(self, j: int) -> set[int]:
        """Elements in J-class ``j`` or above it."""
        if j not in self._up:
            cls = self.G.above(j) | {j}
            self._up[j] = {x for c in cls for x in self.G.j_classes[c]}
        return self._up[j]

    def members(self, j: int) -> list[int]:
        return self.G.j_classes[j]

    def covers(self, j: int, gens: Sequence[int]) -> bool:
        got = self.closer.members(gens, self.upset(j))
        return all(x in got for x in self.members(j))

    def effectively_maximal(self, j: int) -> bool:
        above = self.G.above(j)
        if not above:
            return True
        ic = self.identity_class
        return ic is not None and above == {ic} and self.G.j_info[ic].size == 1

    def holds_identity(self, j: int) -> bool:
        return self.identity_class == j


def group_rank(S: FiniteSemigroup, members: Sequence[int], closer: _Closer | None = None) -> tuple[int, list[int]]:
    """Least number of elements generating the subgroup ``members`` (0 for the trivial group)."""
    members = sorted(members)
    if len(members) == 1:
        return 0, []
    closer = closer or _Closer(S, 10**9)
    target = set(members)
    for k in range(1, len(members) + 1):
        for B in itertools.combinations(members, k):
            if closer.members(B, target) == target:
                return k, list(B)
    raise AssertionError("unreachable")


def _h_group(ctx: _Context, j: int) -> list[int]:
    G = ctx.G
    members = ctx.members(j)
    e = next(x for x in members if G.idempotents[x])
    h = int(G.h_of[e])
    return G.h_classes[h]


def _need_lower_bound(ctx: _Context, j: int) -> int:
    G = ctx.G
    info = G.j_info[j]
    if ctx.holds_identity(j):
        d, _ = group_rank(ctx.S, ctx.members(j), ctx.closer)
        return max(d, 1)
    if not ctx.effectively_maximal(j):
        return 1
    if not info.is_regular:
        # a maximal J-class meeting its own square is regular, so nothing here is a product
        return info.size
    d, _ = group_rank(ctx.S, _h_group(ctx, j), ctx.closer)
    idem_h = len({int(G.h_of[x]) for x in ctx.members(j) if G.idempotents[x]})
    # the graph on R- and L-classes carries the group of the principal factor as
    # labels of closed walks, and its cycle rank must reach the group's rank
    return max(info.r, info.l, d + info.r + info.l - 1 - idem_h)


@dataclass
class _ClassNeed:
    lo: int
    hi: int
    witness: list[int]
    exhaustive: bool  # whether ``lo`` is certified by an exhausted search at lo-1 or by the bound


def _random_slice(ctx: _Context, j: int, k: int, rng: np.random.Generator, seed_elems: Sequence[int] = ()) -> list[int]:
    G = ctx.G
    members = ctx.members(j)
    B = list(dict.fromkeys(seed_elems))
    if ctx.effectively_maximal(j) and not ctx.holds_identity(j):
        rs = sorted({int(G.r_of[x]) for x in members})
        ls_all = {int(G.l_of[x]) for x in members}
        met_r = {int(G.r_of[x]) for x in B}
        met_l = {int(G.l_of[x]) for x in B}
        for r in rng.permutation(rs).tolist():
            if r in met_r:
                continue
            cands = [x for x in G.r_classes[r] if int(G.l_of[x]) not in met_l] or G.r_classes[r]
            x = cands[int(rng.integers(len(cands)))]
            B.append(x)
            met_r.add(r)
            met_l.add(int(G.l_of[x]))
        for l in rng.permutation(sorted(ls_all - met_l)).tolist():
            cands = G.l_classes[l]
            x = cands[int(rng.integers(len(cands)))]
            B.append(x)
            met_l.add(l)
    rest = [x for x in members if x not in set(B)]
    while len(B) < k and rest:
        B.append(rest.pop(int(rng.integers(len(rest)))))
    return B


def _class_need(ctx: _Context, j: int, base: list[int], rng, combo_limit: int, attempts: int) -> _ClassNeed:
    if ctx.covers(j, base):
        return _ClassNeed(0, 0, [], True)
    members = ctx.members(j)
    if ctx.holds_identity(j):
        d, B = group_rank(ctx.S, members, ctx.closer)
        if d == 0:
            B = list(members)
        return _ClassNeed(len(B), len(B), B, True)
    lb = _need_lower_bound(ctx, j)
    k = lb
    exhaustive = True
    while k <= len(members):
        if math.comb(len(members), k) <= combo_limit:
            for B in itertools.combinations(members, k):
                if ctx.covers(j, base + list(B)):
                    return _ClassNeed(k, k, list(B), exhaustive)
            continue_k = k + 1
            k = continue_k
            continue
        # too many subsets: random restarts at this size, then grow greedily
        for _ in range(attempts):
            B = _random_slice(ctx, j, k, rng)
            if len(B) == k and ctx.covers(j, base + B):
                return _ClassNeed(k, k, B, exhaustive)
        B = _random_slice(ctx, j, k, rng)
        rest = [x for x in members if x not in set(B)]
        rng.shuffle(rest)
        while not ctx.covers(j, base + B):
            B.append(rest.pop())
        B = _prune(ctx, j, base, B)
        return _ClassNeed(k, len(B), B, exhaustive)
    raise AssertionError("a J-class always generates itself")


def _prune(ctx: _Context, j: int, base: list[int], B: list[int]) -> list[int]:
    B = list(B)
    for x in list(B):
        trial = [y for y in B if y != x]
        if ctx.covers(j, base + trial):
            B = trial
    return B


@dataclass
class RankResult:
    lo: int
    hi: int
    witness: list[int]
    slices: dict[int, list[int]]
    needs: dict[int, _ClassNeed]

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def _rank(ctx: _Context, seed: int = 0, combo_limit: int = 20_000, attempts: int = 3000) -> RankResult:
    rng = np.random.default_rng(seed)
    chosen: dict[int, list[int]] = {}
    needs: dict[int, _ClassNeed] = {}
    for j in ctx.topo:
        base = [x for c in ctx.G.above(j) for x in chosen.get(c, [])]
        need = _class_need(ctx, j, base, rng, combo_limit, attempts)
        needs[j] = need
        chosen[j] = need.witness
    lo = sum(n.lo for n in needs.values())
    hi = sum(n.hi for n in needs.values())
    witness = sorted(x for B in chosen.values() for x in B)
    return RankResult(lo, hi, witness, {j: B for j, B in chosen.items() if B}, needs)


def rank(S: FiniteSemigroup, budget: int | None = None, seed: int = 0) -> tuple[ParamValue, list[int]]:
    """Rank of ``S`` with one generating set of that size (as element indices)."""
    if S.order == 1:
        return ParamValue(1, 1, True), [0]
    ctx = _Context(S, default_search_budget() if budget is None else budget)
    try:
        res = _rank(ctx, seed)
    except _OutOfBudget:
        raise BudgetExceeded("rank search exceeded its budget", ctx.closer.calls) from None
    return ParamValue(res.lo, res.hi, res.exact), res.witness


# ---------------------------------------------------------------------------
# minimal generating sets


def _minimal_slices(ctx: _Context, j: int, base: list[int]) -> list[tuple[int, ...]]:
    """All minimal subsets B of J with J inside <base u B> (complete or raises _OutOfBudget)."""
    if ctx.covers(j, base):
        return [()]
    members = ctx.members(j)
    up = ctx.upset(j)
    closer = ctx.closer
    target = set(members)
    must_meet = None
    if ctx.effectively_maximal(j) and not ctx.holds_identity(j):
        G = ctx.G
        must_meet = [set(G.r_classes[r]) for r in {int(G.r_of[x]) for x in members}]
        must_meet += [set(G.l_classes[l]) for l in {int(G.l_of[x]) for x in members}]
    found: list[tuple[int, ...]] = []

    def rec(B: list[int], start: int):
        if B:
            for i, b in enumerate(B):
                if b in closer.members(base + B[:i] + B[i + 1 :], up):
                    return
            if target <= closer.members(base + B, up):
                found.append(tuple(B))
                return
        rest = members[start:]
        if must_meet is not None:
            chosen = set(B) | set(rest)
            if any(not (cls & chosen) for cls in must_meet):
                return
        if not target <= closer.members(base + B + rest, up):
            return
        for idx in range(start, len(members)):
            rec(B + [members[idx]], idx + 1)

    rec([], 0)
    return found


class MinimalGensetStream:
    """Iterator over minimal generating sets; ``complete`` is set once exhausted."""

    def __init__(self, S: FiniteSemigroup, budget: int | None = None, only_minimum: bool = False):
        self.S = S
        self.budget = default_search_budget() if budget is None else budget
        self.only_minimum = only_minimum
        self.complete = False

    def __iter__(self) -> Iterator[frozenset[int]]:
        S = self.S
        if S.order == 1:
            self.complete = True
            yield frozenset([0])
            return
        ctx = _Context(S, self.budget)
        try:
            slices = _all_slices(ctx)
        except _OutOfBudget:
            return
        if self.only_minimum:
            slices = {j: [B for B in Bs if len(B) == min(map(len, Bs))] for j, Bs in slices.items()}
        for combo in itertools.product(*slices.values()):
            yield frozenset(x for B in combo for x in B)
        self.complete = True


def _all_slices(ctx: _Context) -> dict[int, list[tuple[int, ...]]]:
    """Minimal slices per J-class (only classes that need generators)."""
    rankres = _rank(ctx)
    out = {}
    for j in ctx.topo:
        base = [x for c in ctx.G.above(j) for x in rankres.slices.get(c, [])]
        Bs = _minimal_slices(ctx, j, base)
        if Bs != [()]:
            out[j] = Bs
    return out


def minimal_gensets(S: FiniteSemigroup, budget: int | None = None) -> MinimalGensetStream:
    return MinimalGensetStream(S, budget)


# ---------------------------------------------------------------------------
# bounds


def lower_bound_N_prime(n: int, r: int, t: int) -> int:
    """Smallest number of factors of rank >= r that can reach rank t on n points."""
    if r >= n:
        raise PreconditionError("S is a group of permutations; bound inapplicable")
    if t >= n:
        raise PreconditionError("t must be smaller than n")
    return -(-(n - t) // (n - r))


def upper_bound_M_prime(S: FiniteSemigroup) -> int:
    """N(S, union of maximal J-classes) times the largest min(l*h, r*h) over those classes."""
    G = green_data(S)
    top = [x for j in G.maximal_j_classes for x in G.j_classes[j]]
    L = word_lengths(S, top)
    if (L < 0).any():
        raise PreconditionError("S is not generated by its maximal J-classes")
    K = sorted(kernel(S).kernel_indices)
    n_top = int(L[K].min())
    factor = max(min(G.j_info[j].l * G.j_info[j].h, G.j_info[j].r * G.j_info[j].h) for j in G.maximal_j_classes)
    return n_top * factor


def r_and_t(S: FiniteSemigroup, genset: Sequence[int] | None = None) -> tuple[int, int]:
    """Least element rank in a minimal generating set, and the rank of kernel elements."""
    if S.images is None:
        raise PreconditionError("r and t are defined for transformation semigroups")
    if genset is None:
        _, genset = rank(S)
    t = kernel(S).t_value
    return min(S.element_rank(a) for a in genset), t


# ---------------------------------------------------------------------------
# search for generating sets that avoid short kernel words


def _find_deep_genset(
    ctx: _Context, pool_classes: list[int], d: int, max_size: int | None = None
) -> list[int] | None:
    """A generating set inside the pool whose kernel depth exceeds ``d``, or None.

    Complete branch-and-bound: branch on the topmost J-class not yet
    generated, restricted to an uncovered R- or L-class when the class is
    maximal; every branch excludes the candidates tried before it.
    """
    S, G, closer = ctx.S, ctx.G, ctx.closer
    K = ctx.K
    everything = set(range(S.order))
    pool = [x for j in pool_classes for x in G.j_classes[j]]
    ok0 = [x for x in pool if closer.kernel_distance([x], K, cap=d) > d]

    def deep(A):
        return closer.kernel_distance(A, K, cap=d) > d

    def rec(A: list[int], compat: list[int]) -> list[int] | None:
        got = closer.members(A) if A else set()
        if got == everything:
            return A
        if max_size is not None and len(A) >= max_size:
            return None
        if closer.members(A + compat) != everything:
            return None
        j = next(c for c in ctx.topo if c in pool_classes and not set(G.j_classes[c]) <= got)
        cands = [x for x in compat if int(G.j_of[x]) == j]
        if ctx.effectively_maximal(j) and not ctx.holds_identity(j):
            options = []
            for r in {int(G.r_of[x]) for x in G.j_classes[j]} - {int(G.r_of[a]) for a in A}:
                options.append([x for x in cands if int(G.r_of[x]) == r])
            for l in {int(G.l_of[x]) for x in G.j_classes[j]} - {int(G.l_of[a]) for a in A}:
                options.append([x for x in cands if int(G.l_of[x]) == l])
            if options:
                cands = min(options, key=len)
        tried: set[int] = set()
        for c in cands:
            A2 = A + [c]
            rest = [x for x in compat if x != c and x not in tried and deep(A2 + [x])]
            res = rec(A2, rest)
            if res is not None:
                return res
            tried.add(c)
        return None

    return rec([], ok0)


def _shrink(ctx: _Context, A: list[int]) -> list[int]:
    everything = set(range(ctx.S.order))
    A = list(A)
    for x in list(A):
        trial = [y for y in A if y != x]
        if trial and ctx.closer.members(trial) == everything:
            A = trial
    return A


# ---------------------------------------------------------------------------
# depth parameters


def _depth_of(ctx: _Context, A: Sequence[int]) -> int:
    return ctx.closer.kernel_distance(list(A), ctx.K)


def _witness(ctx: _Context, A: Sequence[int]) -> dict:
    S = ctx.S
    A = sorted(A)
    w = shortest_kernel_word(S, A)
    return {
        "generating_set": [S.label(a) for a in A],
        "indices": A,
        "kernel_word": [S.label(a) for a in w],
    }


def _guided_witness(ctx: _Context, j: int, k: int, target: int, rng, attempts: int) -> list[int] | None:
    """Random size-k slices of a single maximal class seeded with a short kernel word."""
    S = ctx.S
    members = ctx.members(j)
    ranks = None
    if S.images is not None:
        ranks = np.asarray([S.element_rank(x) for x in range(S.order)])
    everything = set(range(S.order))
    for _ in range(attempts):
        if ranks is not None:
            x = members[int(rng.integers(len(members)))]
            word = [x]
            while x not in ctx.K and len(word) < target:
                prods = S.left_mul(x, np.asarray(members))
                pr = ranks[prods]
                best = np.nonzero(pr == pr.min())[0]
                pick = int(best[int(rng.integers(len(best)))])
                word.append(members[pick])
                x = int(prods[pick])
            if x not in ctx.K:
                continue
        else:
            perm = [members[i] for i in rng.permutation(len(members))]
            word = shortest_kernel_word(S, perm)
        B = _random_slice(ctx, j, k, rng, seed_elems=word)
        if len(B) != k:
            continue
        if ctx.closer.members(B) == everything and _depth_of(ctx, B) <= target:
            return sorted(B)
    return None


def depth_parameters(
    S: FiniteSemigroup,
    budget: int | None = None,
    seed: int = 0,
    witness: Sequence[int] | None = None,
    search_max: bool = True,
) -> DepthReport:
    """N, N', M, M' of ``S`` together with rank, r, t and witnesses.

    ``witness`` may supply a known minimum-size generating set (element
    indices) used for upper bounds when the exhaustive route is out of reach.
    """
    budget = default_search_budget() if budget is None else budget
    t_value = kernel(S).t_value

    if S.order == 1:
        zero = ParamValue(0, 0, True)
        rep = DepthReport(zero, zero, zero, zero, ParamValue(1, 1, True), None, t_value)
        rep.witnesses = {p: {"generating_set": [S.label(0)], "indices": [0], "kernel_word": []} for p in ("N", "M", "Nprime", "Mprime")}
        return rep
    if S.is_group():
        ctx = _Context(S, budget)
        d, B = group_rank(S, list(range(S.order)), ctx.closer)
        zero = ParamValue(0, 0, True)
        r_val = min(S.element_rank(a) for a in B) if S.images is not None else None
        rep = DepthReport(zero, zero, zero, zero, ParamValue(d, d, True), r_val, t_value)
        rep.notes.append("group: every parameter is 0")
        rep.witnesses = {p: _witness(ctx, B) for p in ("N", "M", "Nprime", "Mprime")}
        return rep

    ctx = _Context(S, budget)
    rng = np.random.default_rng(seed)
    rk = _rank(ctx, seed)
    rank_pv = ParamValue(rk.lo, rk.hi, rk.exact)

    # exhaustive route, with a share of the budget that shrinks as S grows
    ctx.closer.budget = min(budget, max(2000, 2_000_000 // S.order))
    hopeless = any(math.comb(len(ctx.members(j)), nd.lo) > budget for j, nd in rk.needs.items() if nd.hi > 0)
    try:
        if hopeless:
            raise _OutOfBudget
        slices = {}
        for j in ctx.topo:
            base = [x for c in ctx.G.above(j) for x in rk.slices.get(c, [])]
            Bs = _minimal_slices(ctx, j, base)
            if Bs != [()]:
                slices[j] = Bs
        n_combos = math.prod(len(v) for v in slices.values())
        if n_combos > budget:
            raise _OutOfBudget
        return _exhaustive_report(ctx, slices, rank_pv, t_value)
    except _OutOfBudget:
        pass

    # certified intervals
    ctx.closer.calls = 0
    ctx.closer.budget = budget
    pool_classes = [j for j, nd in rk.needs.items() if nd.hi > 0]
    pool = [x for j in pool_classes for x in ctx.G.j_classes[j]]
    W = sorted(witness) if witness is not None else rk.witness
    if rk.exact and len(W) != rk.lo:
        raise PreconditionError("supplied witness is not of minimum size")
    if witness is not None and not (word_lengths(S, W) >= 0).all():
        raise PreconditionError("supplied witness does not generate S")
    lower = _depth_of(ctx, pool)
    notes = []
    r_value = None
    if S.images is not None:
        # minimal generating sets live in the pool, so its least rank bounds r from below
        r_pool = min(S.element_rank(a) for a in pool)
        r_value = min(S.element_rank(a) for a in W)
        if r_value != r_pool:
            notes.append(f"r is between {r_pool} and {r_value}")
        if r_pool < S.degree:
            formula = lower_bound_N_prime(S.degree, r_pool, t_value)
            lower = max(lower, formula)
            notes.append(f"rank-counting lower bound {formula}")
    upper_N = _depth_of(ctx, W)
    best_W = W
    if upper_N > lower and len(pool_classes) == 1 and rk.exact:
        found = _guided_witness(ctx, pool_classes[0], rk.lo, lower, rng, attempts=min(4000, budget))
        if found is not None:
            best_W, upper_N = found, _depth_of(ctx, found)
    witnesses = {}
    if not rk.exact:
        notes.append("rank not certified; N and M are relative to the best generating set found")
    N = ParamValue(lower, upper_N, False)
    Np = ParamValue(lower, upper_N, False)
    Mp_lo = upper_N
    M_lo = upper_N
    Mp_hi = S.order - len(ctx.K) + 1
    try:
        Mp_hi = min(Mp_hi, upper_bound_M_prime(S))
    except PreconditionError:
        pass
    Mp_hi = max(Mp_hi, Mp_lo)
    Mp_complete = False
    M_witness = best_W
    Mp_witness = best_W
    if search_max:
        try:
            d = Mp_lo
            while True:
                A = _find_deep_genset(ctx, pool_classes, d)
                if A is None:
                    Mp_hi = d
                    Mp_complete = True
                    break
                A = _shrink(ctx, A)
                d = _depth_of(ctx, A)
                Mp_lo, Mp_witness = d, sorted(A)
        except _OutOfBudget:
            notes.append("maximum-depth search stopped at the budget")
    M_hi = Mp_hi
    M_complete = False
    if search_max and rk.exact:
        try:
            d = M_lo
            while True:
                A = _find_deep_genset(ctx, pool_classes, d, max_size=rk.lo)
                if A is None:
                    M_hi, M_complete = d, True
                    break
                d = _depth_of(ctx, A)
                M_lo, M_witness = d, sorted(A)
        except _OutOfBudget:
            notes.append("minimum-size maximum-depth search stopped at the budget")
    M_hi = max(min(M_hi, Mp_hi), M_lo)
    M = ParamValue(M_lo, M_hi, M_complete)
    Mp = ParamValue(Mp_lo, Mp_hi, Mp_complete)
    if N.exact and rk.exact:
        N.complete = Np.complete = True
    if N.exact and rk.exact:
        witnesses["N"] = _witness(ctx, best_W)
        witnesses["Nprime"] = _witness(ctx, best_W)
    if M.exact:
        witnesses["M"] = _witness(ctx, M_witness)
    if Mp.exact:
        witnesses["Mprime"] = _witness(ctx, Mp_witness)
    rep = DepthReport(N, M, Np, Mp, rank_pv, r_value, t_value, witnesses)
    rep.enumeration_complete = {"N": N.complete, "Nprime": Np.complete, "M": M.complete, "Mprime": Mp.complete}
    rep.notes = notes
    return rep


def _exhaustive_report(ctx: _Context, slices: dict, rank_pv: ParamValue, t_value) -> DepthReport:
    S = ctx.S
    best = {}

    def consider(key, value, A, better):
        cur = best.get(key)
        if cur is None or better(value, cur[0]) or (value == cur[0] and A < cur[1]):
            best[key] = (value, A)

    min_size = sum(min(len(B) for B in Bs) for Bs in slices.values())
    r_values = set()
    for combo in itertools.product(*slices.values()):
        A = sorted(x for B in combo for x in B)
        d = _depth_of(ctx, A)
        consider("Nprime", d, A, lambda a, b: a < b)
        consider("Mprime", d, A, lambda a, b: a > b)
        if len(A) == min_size:
            consider("N", d, A, lambda a, b: a < b)
            consider("M", d, A, lambda a, b: a > b)
        if S.images is not None:
            r_values.add(min(S.element_rank(a) for a in A))
    if len(r_values) > 1:
        raise AssertionError(f"minimal generating sets disagree on r: {sorted(r_values)}")
    vals = {k: ParamValue(v[0], v[0], True) for k, v in best.items()}
    rank_pv = ParamValue(min_size, min_size, True)
    rep = DepthReport(
        vals["N"], vals["M"], vals["Nprime"], vals["Mprime"], rank_pv,
        r_values.pop() if r_values else None, t_value,
    )
    rep.witnesses = {k: _witness(ctx, v[1]) for k, v in best.items()}
    rep.enumeration_complete = {k: True for k in best}
    return rep
