"""Finite semigroups from generators: closure, word lengths, kernel, depth.

Two backends share one interface.  Transformation semigroups keep an
``(order, degree)`` image array (0-based, with ``degree`` standing for
"undefined") and multiply by composing rows; table semigroups keep a full
Cayley table.  Elements are numbered in breadth-first order of first
discovery, so index order is deterministic for a given generator list.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotAssociativeError, ParseError, PreconditionError
from .transform_core import UNDEF, PartialMap, format_map

DEFAULT_BUDGET = 5_000_000
TABLE_LIMIT = 4096  # largest order for which a transformation semigroup caches a full table
_MAX_CODE_DEGREE = 15


def default_budget() -> int:
    return int(os.environ.get("SEMIDEPTH_ELEMENT_BUDGET", DEFAULT_BUDGET))


def _ext(rows: np.ndarray, n: int) -> np.ndarray:
    """Append the absorbing 'undefined' column so rows can be used as lookup tables."""
    pad = np.full(rows.shape[:-1] + (1,), n, dtype=rows.dtype)
    return np.concatenate([rows, pad], axis=-1)


class _Codec:
    """Integer encoding of image rows, used for hashing whole arrays at once."""

    def __init__(self, n: int):
        if n > _MAX_CODE_DEGREE:
            raise PreconditionError(f"degree {n} exceeds the supported maximum {_MAX_CODE_DEGREE}")
        self.n = n
        self.weights = (n + 1) ** np.arange(n, dtype=np.int64)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        return rows.astype(np.int64) @ self.weights


@dataclass(frozen=True)
class KernelInfo:
    kernel_indices: frozenset[int]
    t_value: int | None


class FiniteSemigroup:
    """A closed finite semigroup with a distinguished generator list."""

    def __init__(
        self,
        *,
        generators: Sequence[int],
        word_length: np.ndarray,
        parent: np.ndarray,
        parent_gen: np.ndarray,
        images: np.ndarray | None = None,
        table: np.ndarray | None = None,
        keys: list | None = None,
    ):
        self.images = images
        self._table = table
        self.keys = keys
        self.generators = list(generators)
        self.word_length = word_length
        self._parent = parent
        self._parent_gen = parent_gen
        self.order = len(word_length)
        self.degree = None if images is None else images.shape[1]
        self.backend = "transformation" if images is not None else "table"
        if images is not None:
            self._codec = _Codec(self.degree)
            codes = self._codec.encode(images)
            self._sort = np.argsort(codes, kind="stable")
            self._sorted_codes = codes[self._sort]
        self._identity: int | None | bool = False
        self._right = None
        self._left = None
        self._kernel = None

    # -- element access -------------------------------------------------

    def __len__(self) -> int:
        return self.order

    def element(self, i: int):
        if self.images is not None:
            row = self.images[i]
            n = self.degree
            return PartialMap(n, tuple(UNDEF if v == n else int(v) + 1 for v in row))
        return self.keys[i] if self.keys is not None else i

    def element_rank(self, i: int) -> int:
        row = self.images[i]
        return len(set(row[row < self.degree].tolist()))

    def label(self, i: int) -> str:
        if self.images is not None:
            return format_map(self.element(i))
        if self.keys is not None:
            return str(self.keys[i])
        return str(i + 1)

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        """Indices of image rows; -1 for rows not in the semigroup."""
        codes = self._codec.encode(rows)
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, self.order - 1)
        found = self._sorted_codes[pos] == codes
        return np.where(found, self._sort[pos], -1)

    def index_of(self, x) -> int:
        if self.images is not None:
            if isinstance(x, PartialMap):
                x = [self.degree if v == UNDEF else v - 1 for v in x.images]
            idx = int(self.lookup_rows(np.asarray([x], dtype=self.images.dtype))[0])
        else:
            idx = self.keys.index(x) if self.keys is not None else int(x)
        if idx < 0:
            raise KeyError(f"{x} is not an element of this semigroup")
        return idx

    # -- multiplication -------------------------------------------------

    @property
    def has_table(self) -> bool:
        return self._table is not None or (self.images is not None and self.order <= TABLE_LIMIT)

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise PreconditionError(f"order {self.order} is too large for a full Cayley table")
            dtype = np.int16 if self.order < 2**15 else np.int32
            tab = np.empty((self.order, self.order), dtype=dtype)
            for j in range(self.order):
                tab[:, j] = self._compose_lookup(np.arange(self.order), j)
            self._table = tab
        return self._table

    def _compose_lookup(self, left: np.ndarray, j: int) -> np.ndarray:
        g = _ext(self.images[j], self.degree)
        out = self.lookup_rows(g[self.images[left]])
        return out

    def mul(self, i: int, j: int) -> int:
        if self.has_table:
            return int(self.table[i, j])
        return int(self._compose_lookup(np.asarray([i]), j)[0])

    def right_mul(self, left: np.ndarray, j: int) -> np.ndarray:
        """Vector of ``x * j`` for ``x`` in ``left``."""
        if self.has_table:
            return self.table[left, j].astype(np.int64)
        return self._compose_lookup(left, j)

    def left_mul(self, j: int, right: np.ndarray) -> np.ndarray:
        """Vector of ``j * x`` for ``x`` in ``right``."""
        if self.has_table:
            return self.table[j, right].astype(np.int64)
        ext = _ext(self.images[right], self.degree)
        return self.lookup_rows(ext[:, self.images[j]])

    def product(self, word: Iterable[int]) -> int:
        word = list(word)
        x = word[0]
        for w in word[1:]:
            x = self.mul(x, w)
        return x

    @property
    def right_cayley(self) -> np.ndarray:
        """``right_cayley[x, k] = x * generators[k]``."""
        if self._right is None:
            idx = np.arange(self.order)
            self._right = np.stack([self.right_mul(idx, g) for g in self.generators], axis=1)
        return self._right

    @property
    def left_cayley(self) -> np.ndarray:
        """``left_cayley[x, k] = generators[k] * x``."""
        if self._left is None:
            idx = np.arange(self.order)
            self._left = np.stack([self.left_mul(g, idx) for g in self.generators], axis=1)
        return self._left

    # -- structure -------------------------------------------------------

    @property
    def identity(self) -> int | None:
        if self._identity is False:
            self._identity = None
            gens = np.asarray(self.generators)
            for e in range(self.order):
                if np.array_equal(self.right_mul(gens, e), gens) and np.array_equal(self.left_mul(e, gens), gens):
                    self._identity = e
                    break
        return self._identity

    @property
    def is_monoid(self) -> bool:
        return self.identity is not None

    def is_group(self) -> bool:
        # a finite monoid is a group iff its identity lies in every principal right ideal,
        # i.e. the right Cayley graph is strongly connected and contains the identity
        if self.identity is None:
            return False
        k = kernel(self)
        return len(k.kernel_indices) == self.order

    def word(self, i: int) -> list[int]:
        """A shortest word over ``generators`` (as positions) evaluating to element ``i``."""
        out = []
        while self._parent_gen[i] >= 0:
            out.append(int(self._parent_gen[i]))
            p = int(self._parent[i])
            if p < 0:
                break
            i = p
        return out[::-1]

    def to_json(self) -> dict:
        k = kernel(self)
        hist = Counter(int(v) for v in self.word_length)
        out = {}
        if self.degree is not None:
            out["degree"] = self.degree
        out["order"] = self.order
        out["generators"] = [self.label(g) for g in self.generators] if self.images is not None else "table"
        out["kernel_size"] = len(k.kernel_indices)
        out["depth"] = depth(self)
        out["word_length_histogram"] = {str(a): hist[a] for a in sorted(hist)}
        return out


# ---------------------------------------------------------------------------
# closure


def _transformation_closure(rows: np.ndarray, budget: int) -> FiniteSemigroup:
    k, n = rows.shape
    codec = _Codec(n)
    gen_codes = codec.encode(rows)
    _, first = np.unique(gen_codes, return_index=True)
    first.sort()
    elems = [rows[first]]
    parent = [np.full(len(first), -1, dtype=np.int64)]
    pgen = [first.astype(np.int64)]
    lengths = [np.ones(len(first), dtype=np.int64)]
    seen = np.sort(gen_codes[first])
    frontier = rows[first]
    frontier_idx = np.arange(len(first))
    total = len(first)
    gexts = [_ext(rows[j], n) for j in range(k)]
    level = 1
    while len(frontier):
        level += 1
        prods = np.stack([g[frontier] for g in gexts], axis=1).reshape(-1, n)
        codes = codec.encode(prods)
        uniq, first_pos = np.unique(codes, return_index=True)
        fresh = ~np.isin(uniq, seen, assume_unique=True)
        first_pos = np.sort(first_pos[fresh])
        if not len(first_pos):
            break
        total += len(first_pos)
        if total > budget:
            raise BudgetExceeded("closure exceeded the element budget", total)
        new_rows = prods[first_pos]
        elems.append(new_rows)
        parent.append(frontier_idx[first_pos // k])
        pgen.append(first_pos % k)
        lengths.append(np.full(len(first_pos), level, dtype=np.int64))
        seen = np.union1d(seen, codes[first_pos])
        frontier_idx = np.arange(total - len(first_pos), total)
        frontier = new_rows
    images = np.concatenate(elems).astype(np.int16 if n < 2**15 else np.int32)
    gen_index = {int(c): i for i, c in enumerate(codec.encode(images[: len(first)]))}
    generators = [gen_index[int(c)] for c in gen_codes]
    return _finish(
        dict(
            images=images,
            generators=generators,
            word_length=np.concatenate(lengths),
            parent=np.concatenate(parent),
            parent_gen=np.concatenate(pgen),
        )
    )


def _finish(kw: dict) -> FiniteSemigroup:
    S = FiniteSemigroup(**kw)
    e = S.identity
    if e is not None:
        # the identity has length zero by convention
        S.word_length[e] = 0
        S._parent[e] = -1
        S._parent_gen[e] = -1
    return S


def _generic_closure(gens: list, multiply: Callable, budget: int) -> FiniteSemigroup:
    keys: list = []
    index: dict = {}
    parent, pgen, lengths = [], [], []
    for j, g in enumerate(gens):
        if g not in index:
            index[g] = len(keys)
            keys.append(g)
            parent.append(-1)
            pgen.append(j)
            lengths.append(1)
    frontier = list(range(len(keys)))
    level = 1
    while frontier:
        level += 1
        nxt = []
        for i in frontier:
            for j, g in enumerate(gens):
                p = multiply(keys[i], g)
                if p not in index:
                    index[p] = len(keys)
                    keys.append(p)
                    parent.append(i)
                    pgen.append(j)
                    lengths.append(level)
                    nxt.append(index[p])
                    if len(keys) > budget:
                        raise BudgetExceeded("closure exceeded the element budget", len(keys))
        frontier = nxt
    m = len(keys)
    table = np.empty((m, m), dtype=np.int32)
    for a in range(m):
        for b in range(m):
            table[a, b] = index[multiply(keys[a], keys[b])]
    return _finish(
        dict(
            table=table,
            keys=keys,
            generators=[index[g] for g in gens],
            word_length=np.asarray(lengths, dtype=np.int64),
            parent=np.asarray(parent, dtype=np.int64),
            parent_gen=np.asarray(pgen, dtype=np.int64),
        )
    )


def close(generators: Sequence, multiply: Callable | None = None, budget: int | None = None) -> FiniteSemigroup:
    """Close ``generators`` under multiplication.

    With ``PartialMap`` generators and no ``multiply`` the fast array path is
    used.  Otherwise elements are arbitrary hashable keys multiplied by
    ``multiply(a, b)`` and the result carries a full table.
    """
    if not generators:
        raise PreconditionError("at least one generator is required")
    budget = default_budget() if budget is None else budget
    if multiply is None:
        if not all(isinstance(g, PartialMap) for g in generators):
            raise PreconditionError("non-map generators need an explicit multiply function")
        n = generators[0].degree
        if any(g.degree != n for g in generators):
            raise PreconditionError("all generators must have the same degree")
        rows = np.asarray([[n if v == UNDEF else v - 1 for v in g.images] for g in generators], dtype=np.int64)
        return _transformation_closure(rows, budget)
    return _generic_closure(list(generators), multiply, budget)


def from_rows(rows: np.ndarray, budget: int | None = None) -> FiniteSemigroup:
    """Closure of 0-based image rows (``degree`` marks undefined points)."""
    budget = default_budget() if budget is None else budget
    return _transformation_closure(np.asarray(rows, dtype=np.int64), budget)


def _lengths_from(table: np.ndarray, generators: Sequence[int]):
    m = table.shape[0]
    lengths = np.full(m, -1, dtype=np.int64)
    parent = np.full(m, -1, dtype=np.int64)
    pgen = np.full(m, -1, dtype=np.int64)
    frontier = []
    for j, g in enumerate(generators):
        if lengths[g] < 0:
            lengths[g] = 1
            pgen[g] = j
            frontier.append(g)
    level = 1
    gens = np.asarray(generators)
    while frontier:
        level += 1
        f = np.asarray(frontier)
        prods = table[np.ix_(f, gens)].reshape(-1)
        nxt = []
        for q, p in enumerate(prods.tolist()):
            if lengths[p] < 0:
                lengths[p] = level
                parent[p] = f[q // len(gens)]
                pgen[p] = q % len(gens)
                nxt.append(p)
        frontier = nxt
    return lengths, parent, pgen


def greedy_generators(table: np.ndarray) -> list[int]:
    """A deterministic irredundant-ish generating set, chosen top-down by ideal size."""
    m = table.shape[0]
    ideal_size = []
    for x in range(m):
        ideal = set(table[x].tolist()) | set(table[:, x].tolist()) | {x}
        ideal |= set(table[np.ix_(list(ideal), range(m))].reshape(-1).tolist())
        ideal_size.append(len(ideal))
    chosen: list[int] = []
    covered = np.zeros(m, dtype=bool)
    for x in sorted(range(m), key=lambda x: (-ideal_size[x], x)):
        if not covered[x]:
            chosen.append(x)
            covered = generated_mask(table, chosen)
    return sorted(chosen)


def generated_mask(table: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    m = table.shape[0]
    mask = np.zeros(m, dtype=bool)
    g = np.asarray(list(gens))
    mask[g] = True
    frontier = np.unique(g)
    while len(frontier):
        prods = np.unique(table[np.ix_(frontier, g)])
        frontier = prods[~mask[prods]]
        mask[frontier] = True
    return mask


def from_table(
    table, generators: Sequence[int] | None = None, keys: list | None = None, check: bool = True
) -> FiniteSemigroup:
    """Wrap a 0-based Cayley table, verifying closure and (for small orders) associativity."""
    table = np.asarray(table, dtype=np.int32)
    m = table.shape[0]
    if table.shape != (m, m) or m == 0:
        raise PreconditionError("a Cayley table must be square and non-empty")
    if table.min() < 0 or table.max() >= m:
        raise PreconditionError("table entries out of range")
    if check:
        check_associative(table)
    if generators is None:
        generators = greedy_generators(table)
    lengths, parent, pgen = _lengths_from(table, generators)
    if (lengths < 0).any():
        raise PreconditionError("the given generators do not generate the table")
    return _finish(
        dict(table=table, keys=keys, generators=list(generators), word_length=lengths, parent=parent, parent_gen=pgen)
    )


def from_elements(rows: np.ndarray, generators: Sequence[int]) -> FiniteSemigroup:
    """Transformation semigroup from an explicit element list and generator positions.

    Element numbering follows a breadth-first closure of the generators, which
    must reproduce exactly the given set.
    """
    rows = np.asarray(rows, dtype=np.int64)
    S = from_rows(rows[list(generators)])
    if S.order != len(np.unique(_Codec(rows.shape[1]).encode(rows))):
        raise PreconditionError("generators do not generate the given element set")
    return S


def check_associative(table: np.ndarray, sample: int = 200, seed: int = 0) -> None:
    m = table.shape[0]
    if m <= sample:
        lhs = table[table]  # lhs[a,b,c] = (ab)c
        rhs = table[:, table]  # rhs[a,b,c] = a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, c = (int(v) + 1 for v in bad[0])
            raise NotAssociativeError((a, b, c))
        return
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, m, size=(3, 200_000))
    bad = np.nonzero(table[table[a, b], c] != table[a, table[b, c]])[0]
    if len(bad):
        i = bad[0]
        raise NotAssociativeError((int(a[i]) + 1, int(b[i]) + 1, int(c[i]) + 1))


def parse_table(text: str) -> np.ndarray:
    """Read ``m`` followed by ``m`` rows of ``m`` 1-based entries; returns a 0-based array."""
    lines = [ln for ln in text.splitlines()]
    body = [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(lines)]
    body = [(i, toks) for i, toks in body if toks]
    if not body:
        raise ParseError("empty table input")
    lineno, toks = body[0]
    if len(toks) != 1 or not toks[0].isdigit():
        raise ParseError("first line must contain the order", line=lineno)
    m = int(toks[0])
    rows = body[1:]
    if len(rows) != m:
        raise ParseError(f"expected {m} rows, found {len(rows)}", line=rows[-1][0] if rows else lineno)
    out = np.empty((m, m), dtype=np.int32)
    for r, (lineno, toks) in enumerate(rows):
        if len(toks) != m:
            raise ParseError(f"expected {m} entries, found {len(toks)}", line=lineno)
        for c, tok in enumerate(toks):
            if not tok.isdigit() or not 1 <= int(tok) <= m:
                raise ParseError(f"bad entry {tok!r}", line=lineno, column=c + 1)
            out[r, c] = int(tok) - 1
    return out


# ---------------------------------------------------------------------------
# lengths, kernel, depth


def word_lengths(S: FiniteSemigroup, A: Sequence[int], within: np.ndarray | None = None) -> np.ndarray:
    """Shortest word length over ``A`` for every element (-1 if not generated).

    ``within`` optionally restricts the search to a boolean mask; products that
    leave the mask are dropped.  An identity element of ``S`` that is
    generated gets length 0.
    """
    A = list(dict.fromkeys(int(a) for a in A))
    lengths = np.full(S.order, -1, dtype=np.int64)
    if not A:
        return lengths
    frontier = np.asarray(A)
    if within is not None:
        frontier = frontier[within[frontier]]
    lengths[frontier] = 1
    level = 1
    tab = S.table if S.has_table else None
    gens = np.asarray(A)
    while len(frontier):
        level += 1
        if tab is not None:
            prods = tab[np.ix_(frontier, gens)].reshape(-1)
        else:
            prods = np.concatenate([S.right_mul(frontier, a) for a in A])
        prods = np.unique(prods)
        new = prods[lengths[prods] < 0]
        if within is not None:
            new = new[within[new]]
        lengths[new] = level
        frontier = new
    e = S.identity
    if e is not None and lengths[e] >= 0:
        lengths[e] = 0
    return lengths


def generated(S: FiniteSemigroup, A: Sequence[int]) -> np.ndarray:
    return word_lengths(S, A) >= 0


def is_generating(S: FiniteSemigroup, A: Iterable[int]) -> bool:
    A = list(A)
    if not A:
        return False
    return bool(generated(S, A).all())


def _ideal_closure(S: FiniteSemigroup, start: int) -> np.ndarray:
    mask = np.zeros(S.order, dtype=bool)
    mask[start] = True
    frontier = np.asarray([start])
    R, L = S.right_cayley, S.left_cayley
    while len(frontier):
        nb = np.unique(np.concatenate([R[frontier].reshape(-1), L[frontier].reshape(-1)]))
        frontier = nb[~mask[nb]]
        mask[frontier] = True
    return mask


def kernel(S: FiniteSemigroup) -> KernelInfo:
    """The minimum ideal.

    Any product in which every element of ``S`` occurs as a factor lies in the
    minimum ideal; the two-sided ideal it generates is the whole minimum ideal.
    """
    if S._kernel is None:
        z = 0
        for x in range(1, S.order):
            z = S.mul(z, x)
        # ideal generated by z, which equals its J-class since the kernel is simple
        mask = _ideal_closure(S, z)
        idx = frozenset(np.nonzero(mask)[0].tolist())
        t = S.element_rank(next(iter(idx))) if S.images is not None else None
        S._kernel = KernelInfo(idx, t)
    return S._kernel


def min_length(S: FiniteSemigroup, subset: Iterable[int], lengths: np.ndarray | None = None) -> int:
    sub = list(subset)
    if not sub:
        raise PreconditionError("subset must be non-empty")
    lengths = S.word_length if lengths is None else lengths
    vals = lengths[sub]
    vals = vals[vals >= 0]
    if not len(vals):
        raise PreconditionError("no element of the subset is generated")
    return int(vals.min())


def max_length(S: FiniteSemigroup, subset: Iterable[int], lengths: np.ndarray | None = None) -> int:
    sub = list(subset)
    if not sub:
        raise PreconditionError("subset must be non-empty")
    lengths = S.word_length if lengths is None else lengths
    return int(lengths[sub].max())


def depth(S: FiniteSemigroup, A: Sequence[int] | None = None) -> int:
    """Minimum word length of a kernel element over ``A`` (default: the stored generators)."""
    K = sorted(kernel(S).kernel_indices)
    if A is None:
        return min_length(S, K)
    lengths = word_lengths(S, A)
    if (lengths < 0).any():
        raise PreconditionError("A does not generate S")
    return min_length(S, K, lengths)


def shortest_kernel_word(S: FiniteSemigroup, A: Sequence[int]) -> list[int]:
    """A shortest word over ``A`` (as element indices) whose value lies in the kernel."""
    A = list(dict.fromkeys(int(a) for a in A))
    K = kernel(S).kernel_indices
    e = S.identity
    if e is not None and e in K and e in set(generated_elements(S, A)):
        return []
    parent = {a: (None, a) for a in A}
    frontier = list(A)
    while frontier:
        for x in frontier:
            if x in K:
                out = []
                while x is not None:
                    p, a = parent[x]
                    out.append(a)
                    x = p
                return out[::-1]
        nxt = []
        for x in frontier:
            for a in A:
                y = S.mul(x, a)
                if y not in parent:
                    parent[y] = (x, a)
                    nxt.append(y)
        frontier = nxt
    raise PreconditionError("A does not reach the kernel")


def generated_elements(S: FiniteSemigroup, A: Sequence[int]) -> list[int]:
    return np.nonzero(generated(S, A))[0].tolist()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
