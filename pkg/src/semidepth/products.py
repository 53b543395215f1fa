"""Direct and wreath products of finite monoids, with their rank formulas and depth bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .genset_analysis import _Closer, depth_parameters, group_rank, rank
from .green import green_data
from .semigroup_engine import (
    TABLE_LIMIT,
    FiniteSemigroup,
    from_rows,
    from_table,
    kernel,
    word_lengths,
)
from .transform_core import PartialMap

_MAX_DEGREE = 15


# ---------------------------------------------------------------------------
# groups of units and diameters


def units(M: FiniteSemigroup) -> list[int]:
    """The group of units: the J-class of the identity."""
    e = M.identity
    if e is None:
        raise PreconditionError("not a monoid")
    G = green_data(M)
    return list(G.j_classes[int(G.j_of[e])])


def group_rank_convention(M: FiniteSemigroup, members) -> tuple[int, list[int]]:
    """Group rank with the trivial group counted as rank one (generated by its identity)."""
    d, B = group_rank(M, members)
    if d == 0:
        return 1, list(members)
    return d, B


def subsemigroup(M: FiniteSemigroup, members) -> FiniteSemigroup:
    """The given subset (closed under products) as a semigroup in its own right."""
    members = list(members)
    if M.images is not None:
        return from_rows(M.images[members])
    pos = {x: i for i, x in enumerate(members)}
    sub = M.table[np.ix_(members, members)]
    tab = np.vectorize(pos.__getitem__)(sub).astype(np.int32)
    return from_table(tab, keys=[M.label(x) for x in members], check=False)


@dataclass
class DiameterStats:
    diam_min: int
    D: int
    complete: bool
    rank: int
    best: list[int] = field(default_factory=list)
    worst: list[int] = field(default_factory=list)

    def to_json(self, G: FiniteSemigroup | None = None) -> dict:
        lab = (lambda A: [G.label(a) for a in A]) if G is not None else list
        return {
            "diam_min": self.diam_min,
            "D": self.D,
            "complete": self.complete,
            "rank": self.rank,
            "diam_min_witness": lab(self.best),
            "D_witness": lab(self.worst),
        }


def diam(G: FiniteSemigroup, A) -> int:
    """Largest word length over ``A`` of a group element (the identity has length 0)."""
    L = word_lengths(G, list(A))
    if (L < 0).any():
        raise PreconditionError("A does not generate G")
    e = G.identity
    if e is not None:
        L[e] = 0
    return int(L.max())


def diameter_stats(G: FiniteSemigroup, budget: int = 200_000) -> DiameterStats:
    """diam_min and D over minimum-size generating sets, by exhaustive search."""
    if not G.is_group():
        raise PreconditionError("diameter statistics need a group")
    if G.order == 1:
        return DiameterStats(0, 0, True, 1, [0], [0])
    d, B = group_rank(G, list(range(G.order)))
    closer = _Closer(G, budget)
    everything = set(range(G.order))
    best = worst = None
    lo, hi = math.inf, -1
    complete = math.comb(G.order, d) <= budget
    combos = itertools.combinations(range(G.order), d) if complete else [tuple(B)]
    for A in combos:
        if closer.members(A) != everything:
            continue
        v = diam(G, A)
        if v < lo:
            lo, best = v, list(A)
        if v > hi:
            hi, worst = v, list(A)
    return DiameterStats(int(lo), int(hi), complete, d, best, worst)


# ---------------------------------------------------------------------------
# direct products


@dataclass
class DirectProduct:
    P: FiniteSemigroup
    S: FiniteSemigroup
    T: FiniteSemigroup
    pairs: np.ndarray  # pairs[i] = (s, t)

    def index(self, s: int, t: int) -> int:
        return int(self._lookup[s * self.T.order + t])

    def __post_init__(self):
        self._lookup = np.full(self.S.order * self.T.order, -1, dtype=np.int64)
        self._lookup[self.pairs[:, 0] * self.T.order + self.pairs[:, 1]] = np.arange(self.P.order)

    def kernel_pairs(self) -> set[tuple[int, int]]:
        return {tuple(map(int, self.pairs[i])) for i in kernel(self.P).kernel_indices}

    def kernel_is_product(self) -> bool:
        kS, kT = kernel(self.S).kernel_indices, kernel(self.T).kernel_indices
        return self.kernel_pairs() == {(a, b) for a in kS for b in kT}


def _standard_product_generators(S, T) -> list[tuple[int, int]]:
    e1, e2 = S.identity, T.identity
    gens = [(a, e2) for a in S.generators] + [(e1, b) for b in T.generators]
    return list(dict.fromkeys(gens))


def direct_product(S: FiniteSemigroup, T: FiniteSemigroup, generators=None) -> DirectProduct:
    """S x T with componentwise product.

    Two transformation monoids act on the disjoint union of their point sets;
    everything else goes through a Cayley table on pairs.  ``generators`` may
    list (s, t) pairs; by default monoids use (A x 1) u (1 x B).
    """
    both_monoids = S.identity is not None and T.identity is not None
    if generators is None and both_monoids:
        generators = _standard_product_generators(S, T)
    if S.images is not None and T.images is not None and generators is not None and S.degree + T.degree <= _MAX_DEGREE:
        n, m = S.degree, T.degree
        k = n + m

        def row(a, b):
            ra, rb = S.images[a], T.images[b]
            return np.concatenate([np.where(ra == n, k, ra), np.where(rb == m, k, rb + n)])

        P = from_rows(np.asarray([row(a, b) for a, b in generators]))
        if P.order != S.order * T.order:
            raise PreconditionError("the given pairs do not generate the direct product")
        sa = P.images[:, :n]
        tb = P.images[:, n:]
        sa = np.where(sa == k, n, sa)
        tb = np.where(tb == k, m, tb - n)
        pairs = np.stack([S.lookup_rows(sa), T.lookup_rows(tb)], axis=1)
        return DirectProduct(P, S, T, pairs)
    mS, mT = S.order, T.order
    if mS * mT > TABLE_LIMIT:
        raise PreconditionError(f"direct product of order {mS * mT} is too large for a table")
    idx = np.arange(mS * mT)
    A, B = idx // mT, idx % mT
    tab = (S.table[A[:, None], A[None, :]].astype(np.int64) * mT + T.table[B[:, None], B[None, :]]).astype(np.int32)
    keys = [f"({S.label(a)},{T.label(b)})" for a, b in zip(A.tolist(), B.tolist())]
    gens = None if generators is None else [a * mT + b for a, b in generators]
    P = from_table(tab, generators=gens, keys=keys, check=False)
    return DirectProduct(P, S, T, np.stack([A, B], axis=1))


def monogenic_product_depth(i: int, n: int, j: int, m: int) -> int:
    """Depth of C(i,n) x C(j,m), where C(i,n) is the monogenic semigroup with a^i = a^(i+n)."""
    if min(i, n, j, m) < 1:
        raise PreconditionError("indices and periods must be positive")
    if i == 1 and j == 1:
        return 0
    if j == 1:
        return i
    if i == 1:
        return j
    return 2


def unit_product(M1: FiniteSemigroup, M2: FiniteSemigroup) -> FiniteSemigroup:
    U1 = subsemigroup(M1, units(M1))
    U2 = subsemigroup(M2, units(M2))
    gens = [(a, U2.identity) for a in U1.generators] + [(U1.identity, b) for b in U2.generators]
    return direct_product(U1, U2, list(dict.fromkeys(gens))).P


@dataclass
class DirectRankReport:
    value: int
    rank_units_product: int
    rank_units: tuple[int, int]
    modulo_units: tuple[int, int]


def rank_modulo_units(M: FiniteSemigroup) -> int:
    """Fewest non-units which together with the units generate M."""
    U = units(M)
    pv, _ = rank(M)
    if not pv.exact:
        raise PreconditionError("rank of the monoid was not certified")
    return pv.lo - group_rank_convention(M, U)[0]


def rank_direct_product(M1: FiniteSemigroup, M2: FiniteSemigroup) -> DirectRankReport:
    """rank(U1 x U2) + k1 + k2, with k_i the rank of M_i modulo its units."""
    if M1.identity is None or M2.identity is None:
        raise PreconditionError("both factors must be monoids")
    UP = unit_product(M1, M2)
    ru = group_rank_convention(UP, list(range(UP.order)))[0]
    r1 = group_rank_convention(M1, units(M1))[0]
    r2 = group_rank_convention(M2, units(M2))[0]
    k1, k2 = rank_modulo_units(M1), rank_modulo_units(M2)
    return DirectRankReport(ru + k1 + k2, ru, (r1, r2), (k1, k2))


def depth_T_product(n: int, m: int) -> int:
    if min(n, m) < 1:
        raise PreconditionError("degrees must be positive")
    return n + m - 2


def k_fold_T_product(degrees: list[int]) -> int:
    if not degrees or min(degrees) < 1:
        raise PreconditionError("degrees must be positive")
    return sum(degrees) - len(degrees)


@dataclass
class DirectBound:
    value: int
    kind: str  # "additive" or "diameter-scaled"
    D: int
    ranks_add_up: bool


def upper_bound_direct(M1: FiniteSemigroup, M2: FiniteSemigroup, N1: int, N2: int) -> DirectBound:
    """Upper bound on N(M1 x M2) from the factors' depths and the unit product's diameter."""
    if M1.identity is None or M2.identity is None:
        raise PreconditionError("both factors must be monoids")
    UP = unit_product(M1, M2)
    stats = diameter_stats(UP)
    r1 = group_rank_convention(M1, units(M1))[0]
    r2 = group_rank_convention(M2, units(M2))[0]
    adds = stats.rank == r1 + r2
    if UP.order == 1 or adds:
        return DirectBound(N1 + N2, "additive", stats.D, adds)
    return DirectBound((N1 + N2) * stats.D, "diameter-scaled", stats.D, adds)


# ---------------------------------------------------------------------------
# wreath products


def u2() -> FiniteSemigroup:
    """U_2 acting on {1,2}: the identity and the two constant maps."""
    from .semigroup_engine import close

    return close([PartialMap.identity(2), PartialMap.of([1, 1]), PartialMap.of([2, 2])])


def v_monoid() -> FiniteSemigroup:
    """The monoid generated by the identity and two rank-two maps of five points."""
    from .semigroup_engine import close

    return close([PartialMap.identity(5), PartialMap.of([1, 4, 1, 4, 1]), PartialMap.of([3, 2, 3, 2, 2])])


@dataclass
class WreathProduct:
    """(X,S) wr (Y,T) realised as a transformation semigroup on X x Y.

    The point (x, y) is coded as y * |X| + x (0-based); ``decode`` recovers
    the pair (f, t) with f a tuple over Y of element indices of S.
    """

    W: FiniteSemigroup
    S: FiniteSemigroup
    T: FiniteSemigroup

    @property
    def nx(self) -> int:
        return self.S.degree

    @property
    def ny(self) -> int:
        return self.T.degree

    def row(self, f, t) -> np.ndarray:
        nx, ny = self.nx, self.ny
        out = np.empty(nx * ny, dtype=np.int64)
        trow = self.T.images[t]
        for y in range(ny):
            srow = self.S.images[f[y]]
            out[y * nx : (y + 1) * nx] = int(trow[y]) * nx + srow
        return out

    def index(self, f, t) -> int:
        return int(self.W.lookup_rows(self.row(f, t)[None, :])[0])

    def decode(self, i: int) -> tuple[tuple[int, ...], int]:
        nx, ny = self.nx, self.ny
        r = self.W.images[i]
        t_row = (r[::nx] // nx)[None, :]
        s_rows = np.stack([r[y * nx : (y + 1) * nx] % nx for y in range(ny)])
        f = tuple(int(v) for v in self.S.lookup_rows(s_rows))
        return f, int(self.T.lookup_rows(t_row)[0])

    def at(self, s: int, y: int) -> int:
        """The element (s)_y: s at coordinate y, identity elsewhere, paired with 1."""
        e = self.S.identity
        f = [e] * self.ny
        f[y] = s
        return self.index(f, self.T.identity)

    def lift(self, b: int) -> int:
        """(1-bar, b)."""
        return self.index([self.S.identity] * self.ny, b)

    def constant(self, s: int, t: int) -> int:
        return self.index([s] * self.ny, t)


def wreath(S: FiniteSemigroup, T: FiniteSemigroup) -> WreathProduct:
    for name, M in (("S", S), ("T", T)):
        if M.images is None or M.identity is None:
            raise PreconditionError(f"{name} must be a transformation monoid")
        if (M.images == M.degree).any():
            raise PreconditionError(f"{name} must consist of total maps for a faithful action")
    nx, ny = S.degree, T.degree
    if nx * ny > _MAX_DEGREE:
        raise PreconditionError(f"the wreath acts on {nx * ny} points; at most {_MAX_DEGREE} are supported")
    proto = WreathProduct(None, S, T)  # rows only need S and T
    e = S.identity
    gens = []
    for y in range(ny):
        for s in S.generators:
            f = [e] * ny
            f[y] = s
            gens.append(proto.row(f, T.identity))
    for b in T.generators:
        gens.append(proto.row([e] * ny, b))
    W = from_rows(np.asarray(gens))
    expected = S.order**ny * T.order
    if W.order != expected:
        raise AssertionError(f"wreath has {W.order} elements, expected {expected}")
    return WreathProduct(W, S, T)


def kernel_E(wp: WreathProduct) -> set[int]:
    """Pairs (f, t) with f constant into ker(S) and t in ker(T)."""
    kS, kT = kernel(wp.S).kernel_indices, kernel(wp.T).kernel_indices
    return {wp.constant(s, t) for s in kS for t in kT}


@dataclass
class WreathKernelSizes:
    kernel: int
    E: int
    product: int  # |ker(S)|^|Y| * |ker(T)|
    sandwich_ok: bool


def wreath_kernel_sizes(wp: WreathProduct) -> WreathKernelSizes:
    K = set(kernel(wp.W).kernel_indices)
    E = kernel_E(wp)
    kS, kT = kernel(wp.S).kernel_indices, kernel(wp.T).kernel_indices
    inside = all(all(v in kS for v in f) and t in kT for f, t in map(wp.decode, K))
    return WreathKernelSizes(len(K), len(E), len(kS) ** wp.ny * len(kT), E <= K and inside)


def wreath_units(wp: WreathProduct) -> list[int]:
    return units(wp.W)


@dataclass
class WreathRank:
    value: int
    rank_units: int
    rank_S: int
    rank_units_S: int
    rank_T: int
    rank_units_T: int
    witness: list[int]
    witness_generates: bool
    # the matching lower bound needs U_T trivial; otherwise the value only bounds the rank from above
    lower_bound_holds: bool


def wreath_rank(wp: WreathProduct) -> WreathRank:
    """rank(U_S^Y x| U_T) + |Y|(rank S - rank U_S) + rank T - rank U_T, with its witness set."""
    S, T, W = wp.S, wp.T, wp.W
    UW = wreath_units(wp)
    ru, A_units = group_rank_convention(W, UW)
    rS_pv, A = rank(S)
    rT_pv, B = rank(T)
    if not (rS_pv.exact and rT_pv.exact):
        raise PreconditionError("factor ranks were not certified")
    rUS = group_rank_convention(S, units(S))[0]
    rUT = group_rank_convention(T, units(T))[0]
    value = ru + wp.ny * (rS_pv.lo - rUS) + rT_pv.lo - rUT
    US, UT = set(units(S)), set(units(T))
    C = list(A_units)
    C += [wp.at(a, y) for a in A if a not in US for y in range(wp.ny)]
    C += [wp.lift(b) for b in B if b not in UT]
    C = list(dict.fromkeys(C))
    gen_ok = bool((word_lengths(W, C) >= 0).all())
    return WreathRank(value, ru, rS_pv.lo, rUS, rT_pv.lo, rUT, sorted(C), gen_ok, len(UT) == 1)


def _unit_power(wp: WreathProduct) -> FiniteSemigroup:
    """U_S^Y as the subgroup {(f, 1) : f(y) a unit} of the wreath."""
    US = units(wp.S)
    rows = [wp.row(f, wp.T.identity) for f in itertools.product(US, repeat=wp.ny)]
    # generate from the coordinate copies of the unit generators
    G = subsemigroup(wp.S, US)
    gens = [US[g] for g in G.generators]
    e = wp.S.identity
    grow = []
    for y in range(wp.ny):
        for g in gens:
            f = [e] * wp.ny
            f[y] = g
            grow.append(wp.row(f, wp.T.identity))
    P = from_rows(np.asarray(grow))
    if P.order != len(rows):
        raise AssertionError("unit power has the wrong order")
    return P


def _kernel_words(M: FiniteSemigroup, A: list[int], length: int, cap: int = 100_000) -> list[tuple[int, ...]]:
    """All words over A of the given length landing in the kernel (element indices)."""
    K = kernel(M).kernel_indices
    out = []
    frontier = [((), None)]
    for _ in range(length):
        nxt = []
        for w, x in frontier:
            for a in A:
                y = a if x is None else M.mul(x, a)
                nxt.append((w + (a,), y))
        frontier = nxt
        if len(frontier) > cap:
            raise PreconditionError("too many candidate kernel words")
    for w, x in frontier:
        if x in K:
            out.append(w)
    return out


@dataclass
class WreathBounds:
    N_S: int
    N_T: int
    general: int | None
    m1: int | None
    m2: int | None
    diam_min_units: int
    special: int | None
    special_refined: int | None
    special_applicable: bool
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "N_S": self.N_S,
            "N_T": self.N_T,
            "general_bound": self.general,
            "m1": self.m1,
            "m2": self.m2,
            "diam_min_units": self.diam_min_units,
            "special_bound": self.special,
            "special_refined_bound": self.special_refined,
            "special_applicable": self.special_applicable,
            "notes": self.notes,
        }


def _unit_letter_counts(M: FiniteSemigroup, depth_value: int) -> set[int]:
    """How many unit letters occur in shortest kernel words over depth-attaining minimum-size sets."""
    if depth_value == 0:
        return {0}
    from .genset_analysis import MinimalGensetStream

    U = set(units(M))
    stream = MinimalGensetStream(M, only_minimum=True)
    counts = set()
    for A in stream:
        A = sorted(A)
        for w in _kernel_words(M, A, depth_value):
            counts.add(sum(1 for a in w if a in U))
    if not stream.complete:
        raise PreconditionError("could not enumerate minimum-size generating sets")
    return counts


def wreath_depth_bounds(wp: WreathProduct) -> WreathBounds:
    S, T = wp.S, wp.T
    rS, rT = depth_parameters(S), depth_parameters(T)
    if not (rS.N.exact and rT.N.exact):
        raise PreconditionError("N(S) and N(T) must be known exactly")
    NS, NT = rS.N.lo, rT.N.lo
    ny = wp.ny
    UW = subsemigroup(wp.W, wreath_units(wp))
    dmin_w = diameter_stats(UW).diam_min
    notes = []
    general = m1 = m2 = None
    try:
        c1 = _unit_letter_counts(S, NS)
        c2 = _unit_letter_counts(T, NT)
        best = None
        for a in sorted(c1):
            for b in sorted(c2):
                v = (a + b) * dmin_w + ny * (NS - a) + NT - b
                if best is None or v < best[0]:
                    best = (v, a, b)
        general, m1, m2 = best
    except PreconditionError as exc:
        notes.append(f"general bound unavailable: {exc}")
    UT = units(T)
    special = refined = None
    applicable = len(UT) == 1 and T.order > 1
    if applicable:
        dmin_us = diameter_stats(_unit_power(wp)).diam_min
        special = max(ny, dmin_us) * NS + NT
        refined = ny * NS + NT if dmin_us <= ny or _unit_rank_additive(wp) else None
    else:
        notes.append("special bound needs T non-trivial with trivial units")
    return WreathBounds(NS, NT, general, m1, m2, dmin_w, special, refined, applicable, notes)


def _unit_rank_additive(wp: WreathProduct) -> bool:
    """rank(U_S^k) = k rank(U_S) for k up to |Y|."""
    US = units(wp.S)
    if len(US) == 1:
        return False
    G = subsemigroup(wp.S, US)
    r = group_rank(G, list(range(G.order)))[0]
    P = G
    for k in range(2, wp.ny + 1):
        gens = [(a, P.identity) for a in G.generators] + [(G.identity, b) for b in P.generators]
        P = direct_product(G, P, list(dict.fromkeys(gens))).P
        if group_rank(P, list(range(P.order)))[0] != k * r:
            return False
    return True
