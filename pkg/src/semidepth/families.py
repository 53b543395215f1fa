"""Named semigroup families and their standard small generating sets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .semigroup_engine import FiniteSemigroup, close, from_rows, from_table, word_lengths
from .transform_core import PartialMap

FAMILY_NAMES = ("Tn", "PTn", "In", "K", "Kp", "L", "PO", "O", "POI", "C", "FS", "Rees")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple[int, ...] = ()
    group_table: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)
    sandwich: tuple[tuple[int | None, ...], ...] | None = field(default=None, compare=False)

    def validate(self) -> None:
        name, p = self.name, self.params
        if name not in FAMILY_NAMES:
            raise PreconditionError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")
        arity = {"Tn": 1, "PTn": 1, "In": 1, "K": 2, "Kp": 2, "L": 2, "PO": 1, "O": 1, "POI": 1, "C": 2, "FS": 1, "Rees": 0}
        if len(p) != arity[name]:
            raise PreconditionError(f"{name} takes {arity[name]} integer parameter(s)")
        if any(v < 1 for v in p):
            raise PreconditionError("parameters must be positive")
        if name in ("K", "Kp", "L") and not 1 <= p[1] <= p[0] - 1:
            raise PreconditionError("need 1 <= r <= n-1")
        if name in ("PO", "O", "POI") and p[0] < 2:
            raise PreconditionError("need n >= 2 (the identity is removed)")
        if name == "Rees":
            if self.group_table is None or self.sandwich is None:
                raise PreconditionError("Rees needs a group table and a sandwich matrix")
            _check_rees(self.group_table, self.sandwich)


# ---------------------------------------------------------------------------
# raw enumeration of maps


def _all_rows(n: int, partial: bool) -> np.ndarray:
    vals = n + 1 if partial else n
    return np.asarray(list(itertools.product(range(vals), repeat=n)), dtype=np.int64).reshape(-1, n)


def _row_rank(rows: np.ndarray, n: int) -> np.ndarray:
    present = np.zeros((len(rows), n + 1), dtype=bool)
    np.put_along_axis(present, rows, True, axis=1)
    return present[:, :n].sum(axis=1)


def _injective(rows: np.ndarray, n: int) -> np.ndarray:
    defined = (rows < n).sum(axis=1)
    return _row_rank(rows, n) == defined


def _order_preserving(rows: np.ndarray, n: int) -> np.ndarray:
    ok = np.ones(len(rows), dtype=bool)
    # compare every pair of defined points
    for x in range(n):
        for y in range(x + 1, n):
            both = (rows[:, x] < n) & (rows[:, y] < n)
            ok &= ~both | (rows[:, x] <= rows[:, y])
    return ok


def enumerate_family_rows(name: str, n: int, r: int | None = None) -> np.ndarray:
    """All elements of a transformation family by filtering, independent of closure."""
    partial = name in ("PTn", "In", "Kp", "L", "PO", "POI")
    rows = _all_rows(n, partial)
    keep = np.ones(len(rows), dtype=bool)
    if name in ("In", "L", "POI"):
        keep &= _injective(rows, n)
    if name in ("K", "Kp", "L"):
        keep &= _row_rank(rows, n) <= r
    if name in ("PO", "O", "POI"):
        keep &= _order_preserving(rows, n)
        keep &= ~(rows == np.arange(n)).all(axis=1)
    return rows[keep]


def _pm(rows) -> list[PartialMap]:
    return [PartialMap.of(r) for r in rows]


# ---------------------------------------------------------------------------
# generating sets


def sn_coprime_generators(n: int) -> tuple[PartialMap, PartialMap]:
    """Two generators of S_n of coprime orders: (n, 2) for odd n, (n-1, 2) for even n."""
    if n < 3:
        raise PreconditionError("need n >= 3")
    b = PartialMap.of([2, 1] + list(range(3, n + 1)))
    if n % 2:
        a = PartialMap.of(list(range(2, n + 1)) + [1])
    else:
        a = PartialMap.of([1] + list(range(3, n + 1)) + [2])
    return a, b


def _sn_pair(n: int) -> list[PartialMap]:
    if n == 1:
        return [PartialMap.identity(1)]
    if n == 2:
        return [PartialMap.of([2, 1])]
    cyc = PartialMap.of(list(range(2, n + 1)) + [1])
    return [cyc, PartialMap.of([2, 1] + list(range(3, n + 1)))]


def theta(n: int) -> PartialMap:
    """[1, 1, 2, ..., n-1]: rank n-1 and its (n-1)-th power is constant."""
    return PartialMap.of([1] + list(range(1, n)))


def gamma(n: int) -> PartialMap:
    """[-, 1, 2, ..., n-1]: a partial injection of rank n-1 whose n-th power is empty."""
    return PartialMap.of([None] + list(range(1, n)))


def minsize_genset_Tn(n: int, variant: PartialMap | None = None) -> list[PartialMap]:
    if n < 3:
        raise PreconditionError("need n >= 3")
    t = theta(n) if variant is None else variant
    if t.degree != n or not t.is_total() or len(set(t.images)) != n - 1:
        raise PreconditionError("the variant must be a total map of rank n-1")
    return _sn_pair(n) + [t]


def minsize_genset_PTn(n: int) -> list[PartialMap]:
    if n < 3:
        raise PreconditionError("need n >= 3")
    return _sn_pair(n) + [theta(n), gamma(n)]


def minsize_genset_In(n: int) -> list[PartialMap]:
    if n < 3:
        raise PreconditionError("need n >= 3")
    return _sn_pair(n) + [gamma(n)]


def alpha_i(n: int, i: int) -> PartialMap:
    """Sends i to i+1 and fixes every other point."""
    imgs = list(range(1, n + 1))
    imgs[i - 1] = i + 1
    return PartialMap.of(imgs)


def minsize_genset_On(n: int) -> list[PartialMap]:
    if n < 3:
        raise PreconditionError("need n >= 3")
    return [alpha_i(n, i) for i in range(1, n)] + [theta(n)]


# ---------------------------------------------------------------------------
# constructors


def _monogenic_table(i: int, period: int) -> tuple[np.ndarray, list[str]]:
    m = i + period - 1

    def red(s):
        return s if s <= m else i + (s - i) % period

    tab = np.asarray([[red(p + q) - 1 for q in range(1, m + 1)] for p in range(1, m + 1)], dtype=np.int32)
    return tab, [f"a^{k}" for k in range(1, m + 1)]


def monogenic(i: int, period: int) -> FiniteSemigroup:
    tab, keys = _monogenic_table(i, period)
    return from_table(tab, generators=[0], keys=keys)


def free_semilattice(k: int) -> FiniteSemigroup:
    subsets = [frozenset(c) for size in range(1, k + 1) for c in itertools.combinations(range(1, k + 1), size)]
    index = {s: i for i, s in enumerate(subsets)}
    tab = np.asarray([[index[a | b] for b in subsets] for a in subsets], dtype=np.int32)
    keys = ["{" + ",".join(map(str, sorted(s))) + "}" for s in subsets]
    return from_table(tab, generators=list(range(k)), keys=keys)


def _check_rees(group_table, P) -> None:
    g = len(group_table)
    if any(len(row) != g for row in group_table):
        raise PreconditionError("group table must be square")
    if not P or any(len(row) != len(P[0]) for row in P):
        raise PreconditionError("sandwich matrix must be rectangular")
    for row in P:
        for v in row:
            if v is not None and not 0 <= v < g:
                raise PreconditionError("sandwich entries must be group elements or zero")
    if any(all(v is None for v in row) for row in P) or any(all(row[c] is None for row in P) for c in range(len(P[0]))):
        raise PreconditionError("sandwich matrix is not regular: a row or column is all zero")


def rees_matrix(group_table, P) -> FiniteSemigroup:
    """M^0[G; I, Lambda; P] with P indexed [lambda][i]; ``None`` marks a zero entry.

    Group elements are 0-based indices into ``group_table``.
    """
    _check_rees(group_table, P)
    gt = [list(r) for r in group_table]
    n_l, n_i, g = len(P), len(P[0]), len(gt)
    keys: list = ["0"] + [(i, h, lam) for i in range(n_i) for h in range(g) for lam in range(n_l)]
    index = {k: n for n, k in enumerate(keys)}
    m = len(keys)
    tab = np.zeros((m, m), dtype=np.int32)
    for a in range(1, m):
        i, x, lam = keys[a]
        for b in range(1, m):
            j, y, mu = keys[b]
            p = P[lam][j]
            if p is not None:
                tab[a, b] = index[(i, gt[gt[x][p]][y], mu)]
    labels = ["0"] + [f"({i + 1},{h + 1},{lam + 1})" for (i, h, lam) in keys[1:]]
    return from_table(tab, keys=labels)


def cyclic_group_table(k: int) -> list[list[int]]:
    return [[(a + b) % k for b in range(k)] for a in range(k)]


def rees_depth(group_table, P) -> int:
    """1 when the sandwich matrix has no zero entry, else 2."""
    _check_rees(group_table, P)
    return 1 if all(v is not None for row in P for v in row) else 2


def _kernel_signature(row, n: int) -> tuple:
    seen: dict[int, int] = {}
    return tuple(n if v == n else seen.setdefault(v, len(seen)) for v in row)


def _cover_generators(rows: np.ndarray, n: int, seed: int = 0) -> list[int]:
    """A small subset of the top-rank rows that generates the whole element set.

    Picks top-rank rows covering every kernel and every image, which is how
    the top J-class's R- and L-classes are met; retries with fresh picks.
    """
    ranks = _row_rank(rows, n)
    top = np.nonzero(ranks == ranks.max())[0]
    rng = np.random.default_rng(seed)
    target = len(rows)
    kern = [_kernel_signature(rows[i].tolist(), n) for i in top]
    imgs = [frozenset(rows[i].tolist()) - {n} for i in top]
    for _ in range(20):
        chosen: list[int] = []
        need_k, need_i = set(kern), set(imgs)
        for p in rng.permutation(len(top)).tolist():
            if kern[p] in need_k and (imgs[p] in need_i or not need_i):
                chosen.append(int(top[p]))
                need_k.discard(kern[p])
                need_i.discard(imgs[p])
        for p in rng.permutation(len(top)).tolist():
            if imgs[p] in need_i:
                chosen.append(int(top[p]))
                need_i.discard(imgs[p])
        for _ in range(8):
            if from_rows(rows[chosen]).order == target:
                return chosen
            chosen.append(int(top[rng.integers(len(top))]))
    return top.tolist()


def build(spec: FamilySpec) -> FiniteSemigroup:
    spec.validate()
    name, p = spec.name, spec.params
    if name == "C":
        return monogenic(p[0], p[1])
    if name == "FS":
        return free_semilattice(p[0])
    if name == "Rees":
        return rees_matrix(spec.group_table, spec.sandwich)
    n = p[0]
    if name == "Tn":
        gens = minsize_genset_Tn(n) if n >= 3 else (_sn_pair(n) + ([theta(n)] if n == 2 else []))
        return close(gens)
    if name == "PTn":
        gens = minsize_genset_PTn(n) if n >= 3 else (_sn_pair(n) + [gamma(n)] + ([theta(n)] if n == 2 else []))
        return close(gens)
    if name == "In":
        gens = minsize_genset_In(n) if n >= 3 else (_sn_pair(n) + [gamma(n)])
        return close(gens)
    r = p[1] if len(p) > 1 else None
    rows = enumerate_family_rows(name, n, r)
    if name in ("PO", "O", "POI"):
        ranks = _row_rank(rows, n)
        top = rows[ranks == ranks.max()]
        S = from_rows(top)
    else:
        S = from_rows(rows[_cover_generators(rows, n)])
    if S.order != len(rows):
        raise AssertionError(f"{name}{p}: closure has {S.order} elements, expected {len(rows)}")
    return S


def family_order(name: str, n: int, r: int | None = None) -> int:
    """Closed-form orders used as independent checks."""
    C, F = math.comb, math.factorial

    def stirling2(a, b):
        return sum((-1) ** i * C(b, i) * (b - i) ** a for i in range(b + 1)) // F(b)

    if name == "Tn":
        return n**n
    if name == "PTn":
        return (n + 1) ** n
    if name == "In":
        return sum(C(n, k) ** 2 * F(k) for k in range(n + 1))
    if name == "K":
        return sum(stirling2(n, k) * C(n, k) * F(k) for k in range(1, r + 1))
    if name == "Kp":
        return sum(stirling2(n + 1, k + 1) * C(n, k) * F(k) for k in range(0, r + 1))
    if name == "L":
        return sum(C(n, k) ** 2 * F(k) for k in range(0, r + 1))
    if name == "O":
        return C(2 * n - 1, n) - 1
    if name == "POI":
        return C(2 * n, n) - 1
    if name == "PO":
        return sum(C(n, k) * C(n + k - 1, k) for k in range(n + 1)) - 1
    raise PreconditionError(f"no closed form for {name}")


def index_set(S: FiniteSemigroup, maps) -> list[int]:
    return [S.index_of(m) for m in maps]


def generates(S: FiniteSemigroup, maps) -> bool:
    L = word_lengths(S, index_set(S, maps))
    return bool((L >= 0).all())


def parse_family_args(name: str, args: list[str], rees_json: dict | None = None) -> FamilySpec:
    if name == "Rees":
        if rees_json is None:
            raise PreconditionError("Rees needs a JSON file with group_table and P")
        gt = tuple(tuple(int(v) - 1 for v in row) for row in rees_json["group_table"])
        P = tuple(tuple(None if (v is None or int(v) == 0) else int(v) - 1 for v in row) for row in rees_json["P"])
        return FamilySpec("Rees", (), gt, P)
    try:
        params = tuple(int(a) for a in args)
    except ValueError:
        raise PreconditionError(f"family parameters must be integers, got {args}") from None
    return FamilySpec(name, params)
