"""Slow, independent reference implementations used to freeze expected values.

Nothing here imports semidepth; maps are tuples of 1-based images with 0 for
"undefined" and products apply the left factor first.
"""

from collections import deque


def compose(f, g):
    return tuple(0 if v == 0 else g[v - 1] for v in f)


def closure(gens):
    """All products of ``gens`` with their shortest word lengths."""
    length = {}
    queue = deque()
    for g in gens:
        if g not in length:
            length[g] = 1
            queue.append(g)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in length:
                length[y] = length[x] + 1
                queue.append(y)
    return length


def cayley(elements):
    index = {x: i for i, x in enumerate(elements)}
    return [[index[compose(a, b)] for b in elements] for a in elements]


def identity_of(table):
    m = len(table)
    for e in range(m):
        if all(table[e][x] == x and table[x][e] == x for x in range(m)):
            return e
    return None


def kernel(table):
    """Intersection of all principal two-sided ideals S^1 s S^1."""
    m = len(table)
    K = set(range(m))
    for s in range(m):
        ideal = {s}
        ideal |= {table[a][s] for a in range(m)}
        ideal |= {table[x][b] for x in list(ideal) for b in range(m)}
        K &= ideal
    return K


def word_lengths(table, A):
    """Shortest word lengths over A (-1 when unreachable), identity at length 0."""
    m = len(table)
    L = [-1] * m
    queue = deque()
    for a in A:
        if L[a] < 0:
            L[a] = 1
            queue.append(a)
    while queue:
        x = queue.popleft()
        for a in A:
            y = table[x][a]
            if L[y] < 0:
                L[y] = L[x] + 1
                queue.append(y)
    e = identity_of(table)
    if e is not None and L[e] > 0:
        L[e] = 0
    return L


def generated_mask(table, A, cache):
    key = frozenset(A)
    if key not in cache:
        mask = 0
        for i, v in enumerate(word_lengths(table, list(key))):
            if v >= 0:
                mask |= 1 << i
        cache[key] = mask
    return cache[key]


def minimal_generating_sets(table):
    """Every minimal generating set, by include/exclude search over element indices."""
    m = len(table)
    full = (1 << m) - 1
    cache = {}
    found = []

    def gen(A):
        return generated_mask(table, A, cache)

    def minimal(A):
        return all(not (gen([b for b in A if b != a]) >> a) & 1 for a in A if len(A) > 1)

    def rec(i, A):
        if A and gen(A) == full:
            found.append(tuple(A))
            return
        if i == m or gen(A + list(range(i, m))) != full:
            return
        B = A + [i]
        if not (A and (gen(A) >> i) & 1) and minimal(B):
            rec(i + 1, B)
        rec(i + 1, A)

    rec(0, [])
    return found


def depth_params(table):
    """(rank, N, N', M, M') by brute force over minimal generating sets."""
    K = kernel(table)
    sets = minimal_generating_sets(table)
    depths = {}
    for A in sets:
        L = word_lengths(table, list(A))
        depths[A] = min(L[k] for k in K)
    rk = min(len(A) for A in sets)
    small = [d for A, d in depths.items() if len(A) == rk]
    return rk, min(small), min(depths.values()), max(small), max(depths.values())


def reset_length_sets(letters, n):
    """Shortest word taking {1..n} to a set of least size, over frozensets of states."""
    start = frozenset(range(1, n + 1))
    seen = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for f in letters:
            t = frozenset(f[q - 1] for q in s)
            if t not in seen:
                seen[t] = seen[s] + 1
                queue.append(t)
    least = min(len(s) for s in seen)
    return least, min(d for s, d in seen.items() if len(s) == least)


def green_classes(table):
    """R, L, J partitions as sets of frozensets, from principal ideals of S^1."""
    m = len(table)

    def ideal(x, side):
        out = {x}
        if side in ("R", "J"):
            out |= {table[x][b] for b in range(m)}
        if side in ("L", "J"):
            out |= {table[a][y] for a in range(m) for y in list(out)}
        if side == "J":
            out |= {table[y][b] for y in list(out) for b in range(m)}
        return frozenset(out)

    result = {}
    for side in ("R", "L", "J"):
        ideals = [ideal(x, side) for x in range(m)]
        result[side] = {frozenset(y for y in range(m) if ideals[y] == ideals[x]) for x in range(m)}
    return result
