import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semidepth.errors import BudgetExceeded, NotAssociativeError, ParseError, PreconditionError
from semidepth.families import FamilySpec, build, minsize_genset_Tn, monogenic, index_set
from semidepth.semigroup_engine import (
    close,
    depth,
    from_table,
    is_generating,
    kernel,
    max_length,
    min_length,
    parse_table,
    shortest_kernel_word,
    word_lengths,
)
from semidepth.transform_core import PartialMap

import oracles

A3 = PartialMap.of([2, 3, 1])
B3 = PartialMap.of([2, 1, 3])


def test_s3_closure():
    S = close([A3, B3])
    assert S.order == 6
    assert S.is_group()
    # identity has length 0; the longest element is a product of two letters
    assert max_length(S, range(S.order)) == 2
    assert depth(S) == 0


def test_s3_by_involutions():
    S = close([PartialMap.of([2, 1, 3]), PartialMap.of([1, 3, 2])])
    assert S.order == 6
    assert max_length(S, range(S.order)) == 3


def test_monogenic_c23():
    S = monogenic(2, 3)
    assert S.order == 4
    a = 0
    a2 = S.mul(a, a)
    assert S.word_length[a2] == 2
    p = a
    for _ in range(4):
        p = S.mul(p, a)
    assert p == a2  # a^2 = a^5
    assert depth(S) == 2


def test_t3_closure_and_kernel():
    S = close(minsize_genset_Tn(3))
    assert S.order == 27
    K = kernel(S)
    assert len(K.kernel_indices) == 3 and K.t_value == 1
    assert depth(S) == 2
    assert min_length(S, K.kernel_indices) == depth(S)


def test_pt3_kernel_is_empty_map():
    S = build(FamilySpec("PTn", (3,)))
    K = kernel(S)
    assert K.t_value == 0
    assert [S.label(k) for k in K.kernel_indices] == ["[- - -]"]


def test_identity_length_zero_when_listed():
    S = close([PartialMap.identity(3), PartialMap.of([1, 1, 2])])
    assert S.word_length[S.identity] == 0
    assert min_length(S, [g for g in S.generators if g != S.identity]) == 1


def test_is_generating():
    S = close(minsize_genset_Tn(3))
    assert is_generating(S, S.generators)
    assert not is_generating(S, index_set(S, [A3, B3]))
    M = close([PartialMap.identity(2), PartialMap.of([1, 1])])
    assert not is_generating(M, [M.identity])


def test_shortest_kernel_word():
    S = close(minsize_genset_Tn(4))
    w = shortest_kernel_word(S, S.generators)
    assert len(w) == 3
    assert S.product(w) in kernel(S).kernel_indices


def test_budget_exceeded_carries_count():
    with pytest.raises(BudgetExceeded) as exc:
        close(minsize_genset_Tn(4), budget=50)
    assert exc.value.partial >= 50


def test_table_backend_and_associativity():
    tab = np.array([[0, 1], [1, 0]])
    S = from_table(tab)
    assert S.order == 2 and S.is_group()
    bad = np.array([[1, 0], [0, 0]])
    with pytest.raises(NotAssociativeError) as exc:
        from_table(bad)
    assert len(exc.value.triple) == 3


def test_parse_table():
    tab = parse_table("2\n1 2\n2 2\n")
    assert tab.tolist() == [[0, 1], [1, 1]]
    with pytest.raises(ParseError):
        parse_table("2\n1 2\n")
    with pytest.raises(ParseError) as exc:
        parse_table("2\n1 2\n3 1\n")
    assert exc.value.line == 3


def test_word_lengths_rejects_nothing_generated():
    S = close([A3, B3])
    with pytest.raises(PreconditionError):
        min_length(S, [])


def test_json_dump_fields():
    S = close(minsize_genset_Tn(3))
    js = S.to_json()
    assert js["order"] == 27 and js["kernel_size"] == 3 and js["depth"] == 2
    assert sum(js["word_length_histogram"].values()) == 27


def test_deterministic_numbering():
    S1, S2 = close([A3, B3]), close([A3, B3])
    assert np.array_equal(S1.images, S2.images)


small_maps = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, n), min_size=n, max_size=n), min_size=1, max_size=3)
)


@settings(max_examples=60, deadline=None)
@given(small_maps)
def test_closure_matches_oracle(gens):
    lengths = oracles.closure([tuple(g) for g in gens])
    S = close([PartialMap.of(g) for g in gens])
    assert S.order == len(lengths)
    for i in range(S.order):
        key = tuple(int(v) for v in S.element(i).images)
        expected = lengths[key]
        if i == S.identity:
            expected = 0
        assert S.word_length[i] == expected


@settings(max_examples=60, deadline=None)
@given(small_maps)
def test_word_length_is_a_path_metric(gens):
    S = close([PartialMap.of(g) for g in gens])
    L = S.word_length
    for s in range(S.order):
        for g in S.generators:
            assert L[S.mul(s, g)] <= max(L[s], 0) + 1


@settings(max_examples=40, deadline=None)
@given(small_maps)
def test_kernel_matches_oracle(gens):
    S = close([PartialMap.of(g) for g in gens])
    K = kernel(S).kernel_indices
    assert K == oracles.kernel(S.table.tolist())


@settings(max_examples=40, deadline=None)
@given(small_maps, st.integers(0, 10**6))
def test_larger_generating_set_is_no_deeper(gens, seed):
    S = close([PartialMap.of(g) for g in gens])
    rng = np.random.default_rng(seed)
    B = sorted(set(S.generators) | set(rng.integers(0, S.order, size=2).tolist()))
    assert depth(S, B) <= depth(S, S.generators)
