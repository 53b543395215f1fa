import itertools
import math

import pytest

from semidepth.errors import PreconditionError
from semidepth.families import (
    FamilySpec,
    alpha_i,
    build,
    cyclic_group_table,
    enumerate_family_rows,
    family_order,
    free_semilattice,
    gamma,
    generates,
    index_set,
    minsize_genset_In,
    minsize_genset_On,
    minsize_genset_PTn,
    minsize_genset_Tn,
    monogenic,
    parse_family_args,
    rees_depth,
    rees_matrix,
    sn_coprime_generators,
    theta,
)
from semidepth.genset_analysis import depth_parameters, rank
from semidepth.green import green_data
from semidepth.semigroup_engine import close, depth, from_rows
from semidepth.transform_core import PartialMap, is_order_preserving


def power(f, k):
    p = f
    for _ in range(k - 1):
        p = p * f
    return p


def brute_count(name, n, r=None):
    # direct enumeration over all (partial) maps with the family's filter
    partial = name in ("PTn", "In", "Kp", "L", "PO", "POI")
    vals = range(0, n + 1) if partial else range(1, n + 1)
    count = 0
    for imgs in itertools.product(vals, repeat=n):
        f = PartialMap.of(imgs)
        rk = len(set(imgs) - {0})
        if name in ("In", "L", "POI") and not f.is_injective():
            continue
        if name in ("K", "Kp", "L") and rk > r:
            continue
        if name in ("PO", "O", "POI"):
            if not is_order_preserving(f) or f == PartialMap.identity(n):
                continue
        count += 1
    return count


CASES = [("Tn", 3, None), ("PTn", 3, None), ("In", 3, None), ("K", 4, 2), ("Kp", 3, 2), ("L", 4, 2),
         ("PO", 3, None), ("O", 4, None), ("POI", 4, None), ("Kp", 4, 3), ("In", 4, None)]


@pytest.mark.parametrize("name, n, r", CASES)
def test_orders_three_ways(name, n, r):
    params = (n,) if r is None else (n, r)
    S = build(FamilySpec(name, params))
    assert S.order == family_order(name, n, r) == brute_count(name, n, r)
    assert len(enumerate_family_rows(name, n, r)) == S.order


def test_small_known_orders():
    assert build(FamilySpec("Tn", (3,))).order == 27
    assert build(FamilySpec("L", (4, 2))).order == 1 + 16 + 72
    assert build(FamilySpec("In", (3,))).order == 34
    assert build(FamilySpec("O", (3,))).order == 9


def test_monogenic_relation():
    S = build(FamilySpec("C", (2, 3)))
    assert S.order == 4
    a = 0
    a2, a5 = S.product([a] * 2), S.product([a] * 5)
    assert a2 == a5


@pytest.mark.parametrize(
    "spec",
    [FamilySpec("K", (3, 3)), FamilySpec("K", (3, 0)), FamilySpec("Tn", ()), FamilySpec("X", (3,)), FamilySpec("PO", (1,))],
)
def test_invalid_specs(spec):
    with pytest.raises(PreconditionError):
        build(spec)


def test_tn_generating_set():
    for n in (3, 4):
        S = build(FamilySpec("Tn", (n,)))
        gens = minsize_genset_Tn(n)
        assert len(gens) == 3 and generates(S, gens)
        assert depth(S, index_set(S, gens)) == n - 1
    t = theta(3)
    assert len(set(power(t, 2).images)) == 1


def test_tn_variant_idempotent():
    e = PartialMap.of([1, 1, 3, 4])
    assert e * e == e
    S = build(FamilySpec("Tn", (4,)))
    assert generates(S, minsize_genset_Tn(4, e))
    with pytest.raises(PreconditionError):
        minsize_genset_Tn(4, PartialMap.of([1, 1, 1, 4]))
    with pytest.raises(PreconditionError):
        minsize_genset_Tn(2)


def test_ptn_and_in_generating_sets():
    PT3 = build(FamilySpec("PTn", (3,)))
    assert PT3.order == 64 and len(minsize_genset_PTn(3)) == 4
    assert generates(PT3, minsize_genset_PTn(3))
    assert power(gamma(3), 3) == PartialMap.empty(3)
    assert depth(PT3, index_set(PT3, minsize_genset_PTn(3))) == 3
    gens = minsize_genset_In(3)
    I3 = close(gens)
    assert I3.order == 34 and len(gens) == 3
    # the inverse of gamma is reachable
    inv = PartialMap.of([2, 3, 0])
    assert gamma(3) * inv == PartialMap.of([0, 2, 3])
    assert I3.index_of(inv) >= 0


def test_on_generating_set():
    for n in (3, 4):
        gens = minsize_genset_On(n)
        S = build(FamilySpec("O", (n,)))
        assert len(gens) == n and generates(S, gens)
        assert len(set(power(theta(n), n - 1).images)) == 1
        assert depth(S, index_set(S, gens)) == n - 1
    assert alpha_i(3, 1).images == (2, 2, 3)


@pytest.mark.parametrize("n, orders", [(3, (3, 2)), (4, (3, 2)), (5, (5, 2)), (6, (5, 2))])
def test_sn_coprime_generators(n, orders):
    a, b = sn_coprime_generators(n)
    G = close([a, b])
    assert G.order == math.factorial(n)
    got = tuple(close([x]).order for x in (a, b))
    assert got == orders and math.gcd(*got) == 1
    if n == 4:
        assert a * b == PartialMap.of([2, 3, 4, 1])


def test_rees_depth_examples():
    z2 = cyclic_group_table(2)
    assert rees_depth(z2, [[0, 0], [0, 0]]) == 1
    assert rees_depth(z2, [[0, None], [0, 0]]) == 2
    assert rees_depth([[0]], [[0]]) == 1
    with pytest.raises(PreconditionError):
        rees_depth(z2, [[None, None], [0, 0]])


def test_rees_matrix_order_and_depth():
    z3 = cyclic_group_table(3)
    P = [[0, None], [1, 2]]
    S = rees_matrix(z3, P)
    assert S.order == 2 * 3 * 2 + 1
    rep = depth_parameters(S)
    assert rep.N.value == rep.M_prime.value == rees_depth(z3, P) == 2


def test_free_semilattice_shape():
    S = free_semilattice(3)
    assert S.order == 7
    assert [S.label(g) for g in S.generators] == ["{1}", "{2}", "{3}"]


def test_parse_family_args():
    spec = parse_family_args("K", ["4", "2"])
    assert spec == FamilySpec("K", (4, 2))
    with pytest.raises(PreconditionError):
        parse_family_args("K", ["4", "x"])
    spec = parse_family_args("Rees", [], {"group_table": [[1, 2], [2, 1]], "P": [[1, 0], [1, 1]]})
    assert spec.sandwich == ((0, None), (0, 0))
    assert build(spec).order == 9


@pytest.mark.parametrize("name", ["K", "Kp", "L"])
def test_generated_by_top_class(name):
    for n in (3, 4, 5):
        for r in range(1, n):
            rows = enumerate_family_rows(name, n, r)
            S = build(FamilySpec(name, (n, r)))
            top = [x for x in range(S.order) if S.element_rank(x) == r]
            T = from_rows(S.images[top])
            assert T.order == len(rows)


@pytest.mark.parametrize("n", [3, 4])
def test_order_preserving_top_class_geometry(n):
    expected_r = {"PO": 2 * n - 1, "O": n - 1, "POI": n}
    for name, r_count in expected_r.items():
        S = build(FamilySpec(name, (n,)))
        G = green_data(S)
        assert len(G.maximal_j_classes) == 1
        info = G.j_info[G.maximal_j_classes[0]]
        assert (info.l, info.r) == (n, r_count)


def test_minimum_size_sets_match_rank():
    for spec, gens in [
        (FamilySpec("Tn", (3,)), minsize_genset_Tn(3)),
        (FamilySpec("PTn", (3,)), minsize_genset_PTn(3)),
        (FamilySpec("In", (3,)), minsize_genset_In(3)),
        (FamilySpec("O", (3,)), minsize_genset_On(3)),
    ]:
        S = build(spec)
        assert rank(S)[0].value == len(gens)
