from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semidepth.errors import PreconditionError
from semidepth.families import FamilySpec, build, free_semilattice, monogenic
from semidepth.genset_analysis import (
    MinimalGensetStream,
    depth_parameters,
    lower_bound_N_prime,
    minimal_gensets,
    r_and_t,
    rank,
    upper_bound_M_prime,
)
from semidepth.products import direct_product
from semidepth.semigroup_engine import close, from_table, kernel, word_lengths
from semidepth.transform_core import PartialMap

import oracles

S3_GENS = [PartialMap.of([2, 3, 1]), PartialMap.of([2, 1, 3])]


def four(rep):
    return rep.N.value, rep.N_prime.value, rep.M.value, rep.M_prime.value


@pytest.mark.parametrize("spec, expected", [(FamilySpec("Tn", (3,)), 3), (FamilySpec("PTn", (3,)), 4), (FamilySpec("FS", (4,)), 4)])
def test_rank_known_values(spec, expected):
    pv, w = rank(build(spec))
    assert pv.exact and pv.value == expected and len(w) == expected


def test_rank_witness_generates():
    S = build(FamilySpec("In", (3,)))
    pv, w = rank(S)
    assert pv.value == 3
    assert (word_lengths(S, w) >= 0).all()


def test_free_semilattice_unique_minimal_genset():
    S = free_semilattice(3)
    stream = minimal_gensets(S)
    sets = list(stream)
    assert stream.complete
    assert sets == [frozenset({0, 1, 2})]


def test_monogenic_product_unique_minimal_genset():
    P = direct_product(monogenic(2, 3), monogenic(3, 2)).P
    sets = list(minimal_gensets(P))
    assert len(sets) == 1


def test_s3_minimal_gensets_all_size_two():
    S = close(S3_GENS)
    sets = list(minimal_gensets(S))
    naive = oracles.minimal_generating_sets(S.table.tolist())
    assert {frozenset(A) for A in naive} == set(sets)
    assert {len(A) for A in sets} == {2}


def test_only_minimum_stream():
    S = build(FamilySpec("K", (3, 2)))
    all_sets = list(MinimalGensetStream(S))
    small = list(MinimalGensetStream(S, only_minimum=True))
    k = min(map(len, all_sets))
    assert small and all(len(A) == k for A in small)
    assert set(small) == {A for A in all_sets if len(A) == k}


@pytest.mark.parametrize(
    "S, expected",
    [(free_semilattice(3), 3), (build(FamilySpec("K", (4, 2))), 2), (monogenic(3, 2), 3)],
)
def test_depth_parameters_all_equal(S, expected):
    rep = depth_parameters(S)
    assert four(rep) == (expected,) * 4
    assert all(rep.enumeration_complete.values())


def test_group_short_circuit():
    rep = depth_parameters(close(S3_GENS))
    assert four(rep) == (0, 0, 0, 0)
    assert rep.rank.value == 2


def test_trivial_semigroup():
    rep = depth_parameters(from_table(np.zeros((1, 1), dtype=int)))
    assert rep.rank.value == 1 and rep.N.value == 0


def test_witness_words_land_in_kernel():
    S = build(FamilySpec("PTn", (3,)))
    rep = depth_parameters(S)
    K = kernel(S).kernel_indices
    for key, param in (("N", rep.N), ("M", rep.M), ("Nprime", rep.N_prime), ("Mprime", rep.M_prime)):
        w = rep.witnesses[key]
        word = [S.index_of(PartialMap.of([int(v) if v != "-" else 0 for v in lab.strip("[]").split()])) for lab in w["kernel_word"]]
        assert len(word) == param.value
        assert S.product(word) in K
        assert set(word) <= set(w["indices"])


@pytest.mark.parametrize(
    "spec, expected",
    [(FamilySpec("Tn", (4,)), (3, 1)), (FamilySpec("PO", (3,)), (2, 0)), (FamilySpec("L", (4, 2)), (2, 0))],
)
def test_r_and_t(spec, expected):
    assert r_and_t(build(spec)) == expected


def test_r_and_t_needs_transformations():
    with pytest.raises(PreconditionError):
        r_and_t(free_semilattice(2))


@pytest.mark.parametrize("args, expected", [((4, 3, 1), 3), ((5, 4, 0), 5), ((5, 2, 0), 2)])
def test_lower_bound_values(args, expected):
    assert lower_bound_N_prime(*args) == expected


def test_lower_bound_rejects_groups():
    with pytest.raises(PreconditionError, match="group of permutations"):
        lower_bound_N_prime(3, 3, 1)


def test_upper_bound_m_prime():
    K = build(FamilySpec("K", (3, 2)))
    assert upper_bound_M_prime(K) >= depth_parameters(K).M_prime.value == 2
    assert upper_bound_M_prime(free_semilattice(3)) == 3
    assert upper_bound_M_prime(close(S3_GENS)) == 0


def test_rank_lower_bound_factor_count():
    # reaching a constant map in T_n from maps of rank >= n-1 needs n-1 factors of rank n-1
    for n in (3, 4):
        S = build(FamilySpec("Tn", (n,)))
        letters = [x for x in range(S.order) if S.element_rank(x) >= n - 1]
        cost = {x: int(S.element_rank(x) == n - 1) for x in letters}
        best = dict(cost)
        dq = deque(sorted(letters, key=cost.get))
        while dq:
            x = dq.popleft()
            for a in letters:
                y = S.mul(x, a)
                c = best[x] + cost[a]
                if c < best.get(y, 10**9):
                    best[y] = c
                    (dq.appendleft if cost[a] == 0 else dq.append)(y)
        assert min(best[k] for k in kernel(S).kernel_indices) == n - 1


small_maps = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, n), min_size=n, max_size=n), min_size=1, max_size=3)
)


def small_semigroup(gens, limit=40):
    S = close([PartialMap.of(g) for g in gens])
    return S if S.order <= limit else None


@settings(max_examples=40, deadline=None)
@given(small_maps)
def test_chain_and_bounds(gens):
    S = small_semigroup(gens)
    if S is None:
        return
    rep = depth_parameters(S)
    assert rep.chain_ok()
    assert rep.N_prime.value <= rep.N.value <= rep.M.value <= rep.M_prime.value
    n, t = S.degree, rep.t_value
    # a group has depth 0 by convention, so the factor count does not apply
    if not S.is_group() and rep.r_value is not None and rep.r_value < n:
        assert lower_bound_N_prime(n, rep.r_value, t) <= rep.N_prime.value
    try:
        assert rep.M_prime.value <= upper_bound_M_prime(S)
    except PreconditionError:
        pass


@settings(max_examples=30, deadline=None)
@given(small_maps)
def test_r_is_the_same_for_all_minimal_gensets(gens):
    S = small_semigroup(gens, 30)
    if S is None:
        return
    stream = minimal_gensets(S)
    ranks = {min(S.element_rank(a) for a in A) for A in stream}
    assert stream.complete and len(ranks) == 1


@settings(max_examples=30, deadline=None)
@given(small_maps)
def test_minimal_gensets_avoid_redundant_ideals(gens):
    S = small_semigroup(gens, 30)
    if S is None:
        return
    sets = list(minimal_gensets(S))
    everything = set(range(S.order))
    # every principal ideal I with I inside <S \ I> is avoided
    for s in range(S.order):
        I = {S.mul(S.mul(a, s), b) for a in range(S.order) for b in range(S.order)} | {s}
        I |= {S.mul(a, s) for a in range(S.order)} | {S.mul(s, b) for b in range(S.order)}
        rest = sorted(everything - I)
        if rest and (word_lengths(S, rest) >= 0).all():
            assert all(not (A & I) for A in sets)
