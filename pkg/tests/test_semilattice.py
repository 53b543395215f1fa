import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semidepth.errors import PreconditionError
from semidepth.families import free_semilattice
from semidepth.genset_analysis import depth_parameters, minimal_gensets
from semidepth.semigroup_engine import close, from_table
from semidepth.semilattice import (
    chain,
    depth_semilattice,
    from_covers,
    hasse,
    irreducibles,
    is_free,
    is_rooted_tree,
    is_semilattice,
    random_tree_semilattice,
    zero,
)
from semidepth.transform_core import PartialMap


def diamond():
    # 0 = bottom, 1 = a, 2 = b, 3 = top
    return from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.mark.parametrize("k", [2, 3, 4])
def test_free_semilattice(k):
    S = free_semilattice(k)
    irr = irreducibles(S)
    assert sorted(S.label(x) for x in irr) == sorted("{" + str(i) + "}" for i in range(1, k + 1))
    assert depth_semilattice(S) == k
    assert is_free(S)


def test_chain():
    C = chain(4)
    assert irreducibles(C) == [0, 1, 2, 3]
    assert depth_semilattice(C) == 1
    assert is_rooted_tree(hasse(C))


def test_single_element():
    S = from_table(np.zeros((1, 1), dtype=int))
    assert irreducibles(S) == [0]
    assert depth_semilattice(S) == 1


def test_diamond():
    S = diamond()
    assert sorted(irreducibles(S)) == [1, 2, 3]
    assert depth_semilattice(S) == 2
    assert not is_free(S)
    assert not is_rooted_tree(hasse(S))


def test_tree_criterion_on_free():
    assert is_rooted_tree(hasse(free_semilattice(2)))
    assert not is_rooted_tree(hasse(free_semilattice(3)))


def test_hasse_edges_are_covers():
    S = free_semilattice(3)
    d = hasse(S)
    assert d.zero == zero(S)
    assert len(d.edges) == 9
    g = d.graph()
    assert nx.is_directed_acyclic_graph(g)
    assert [v for v in g if g.in_degree(v) == 0] == [d.zero]
    assert "digraph" in d.to_dot()


def test_not_a_semilattice():
    with pytest.raises(PreconditionError):
        irreducibles(close([PartialMap.of([2, 1])]))
    assert not is_semilattice(close([PartialMap.of([1, 1, 2])]))


def test_from_covers_errors():
    with pytest.raises(PreconditionError):
        from_covers(3, [(1, 0), (2, 0)])  # two minimal elements without a meet
    with pytest.raises(PreconditionError):
        from_covers(2, [(0, 1), (1, 0)])


def test_random_trees_have_small_depth():
    rng = np.random.default_rng(3)
    for _ in range(20):
        S = random_tree_semilattice(int(rng.integers(1, 41)), rng)
        assert is_rooted_tree(hasse(S))
        assert depth_semilattice(S) <= 2


def random_meet_semilattice(seed, size):
    # the nonempty unions of a few random subsets of a small ground set
    rng = np.random.default_rng(seed)
    base = [frozenset(np.nonzero(rng.random(5) < 0.5)[0].tolist()) for _ in range(size)]
    elems = set(base)
    while True:
        new = {a | b for a in elems for b in elems} - elems
        if not new:
            break
        elems |= new
    elems = sorted(elems, key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(elems)}
    tab = np.array([[index[a | b] for b in elems] for a in elems])
    return from_table(tab)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_semilattice_invariants(seed, size):
    S = random_meet_semilattice(seed, size)
    if S.order > 60:
        return
    irr = irreducibles(S)
    p = irr[0]
    for x in irr[1:]:
        p = S.mul(p, x)
    assert p == zero(S)
    d = depth_semilattice(S)
    assert d <= len(irr)
    assert (d == len(irr)) == is_free(S)
    stream = minimal_gensets(S)
    assert list(stream) == [frozenset(irr)]
    rep = depth_parameters(S)
    # a one-element semilattice is a trivial group, whose depth is 0 by convention
    expected = d if S.order > 1 else 0
    assert (rep.N.value, rep.N_prime.value, rep.M.value, rep.M_prime.value) == (expected,) * 4
