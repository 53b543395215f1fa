"""Named verification suites reproducing the published values."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .families import FamilySpec, build, cyclic_group_table, index_set, minsize_genset_In, minsize_genset_PTn, minsize_genset_Tn
from .genset_analysis import depth_parameters
from .products import kernel_E, u2, v_monoid, wreath, wreath_kernel_sizes
from .semigroup_engine import close, kernel
from .transform_core import PartialMap


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _certified_N(name: str, n: int, witness_maps, expected: int) -> Check:
    S = build(FamilySpec(name, (n,)))
    rep = depth_parameters(S, witness=index_set(S, witness_maps), search_max=False)
    ok = rep.N.exact and rep.N.lo == expected and rep.N_prime.exact and rep.N_prime.lo == expected
    got = rep.N.to_json()
    return Check(f"N({name}_{n}) = {expected}", ok, f"N={got} N'={rep.N_prime.to_json()} r={rep.r_value} t={rep.t_value}")


def transformation_corollaries(max_n: int = 5) -> list[Check]:
    out = []
    for n in range(3, max_n + 1):
        out.append(_certified_N("Tn", n, minsize_genset_Tn(n), n - 1))
        out.append(_certified_N("PTn", n, minsize_genset_PTn(n), n))
        out.append(_certified_N("In", n, minsize_genset_In(n), n))
    return out


def _group_wreath_check(name: str, gens) -> Check:
    G = close(gens)
    wp = wreath(G, u2())
    sizes = wreath_kernel_sizes(wp)
    ok = sizes.kernel == sizes.product and sizes.sandwich_ok
    return Check(f"ker({name} wr U2) = ker^Y x ker(U2)", ok, f"kernel={sizes.kernel} product={sizes.product}")


def wreath_examples() -> list[Check]:
    out = []
    z3 = [PartialMap.of([2, 3, 1])]
    s3 = [PartialMap.of([2, 3, 1]), PartialMap.of([2, 1, 3])]
    out.append(_group_wreath_check("Z3", z3))
    out.append(_group_wreath_check("S3", s3))
    T3 = build(FamilySpec("Tn", (3,)))
    wp = wreath(T3, u2())
    K = set(kernel(wp.W).kernel_indices)
    out.append(Check("ker(T3 wr U2) = E", K == kernel_E(wp), f"|W|={wp.W.order} kernel={len(K)} E={len(kernel_E(wp))}"))
    sizes = wreath_kernel_sizes(wreath(v_monoid(), u2()))
    ok = (sizes.kernel, sizes.E, sizes.product) == (16, 8, 32) and sizes.sandwich_ok
    out.append(Check("V wr U2 sizes 16/8/32", ok, f"kernel={sizes.kernel} E={sizes.E} product={sizes.product}"))
    return out


def zero_simple_examples() -> list[Check]:
    from .families import rees_depth, rees_matrix

    out = []
    z2 = cyclic_group_table(2)
    for P, expected in (([[0, 0], [0, 1]], 1), ([[0, None], [None, 0]], 2)):
        S = rees_matrix(z2, P)
        rep = depth_parameters(S)
        vals = {rep.N.lo, rep.N.hi, rep.M.lo, rep.M.hi, rep.N_prime.lo, rep.M_prime.hi}
        ok = vals == {expected} and rees_depth(z2, P) == expected
        out.append(Check(f"Rees over Z2 with P={P} has depth {expected}", ok, str(sorted(vals))))
    return out


SUITES = {
    "transformation-corollaries": transformation_corollaries,
    "wreath-examples": wreath_examples,
    "zero-simple": zero_simple_examples,
}


def run_suite(name: str) -> list[Check]:
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    return SUITES[name]()
