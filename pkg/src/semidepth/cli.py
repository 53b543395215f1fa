"""Command-line interface: ``semidepth <command> ...`` with JSON output."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import BudgetExceeded, NotAssociativeError, ParseError, PreconditionError, SemidepthError
from .semigroup_engine import FiniteSemigroup, close, dumps, from_table, parse_table
from .transform_core import PartialMap, parse, parse_many

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(SemidepthError):
    pass


# ---------------------------------------------------------------------------
# input formats


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def semigroup_from_text(text: str) -> FiniteSemigroup:
    """A list of maps (one per line) or a 1-based multiplication table."""
    body = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    if not any(body):
        raise UsageError("input is empty")
    first = next(ln for ln in body if ln)
    if first.startswith("["):
        return close(parse_many(text.splitlines()))
    return from_table(parse_table(text))


def semigroup_from_json(data: dict) -> FiniteSemigroup:
    """``{"family": name, "params": [...]}``, ``{"maps": [[...], ...]}`` or ``{"table": [[...], ...]}``."""
    from .families import FamilySpec, build

    if not isinstance(data, dict):
        raise UsageError("a semigroup description must be a JSON object")
    if "family" in data:
        return build(FamilySpec(str(data["family"]), tuple(int(v) for v in data.get("params", []))))
    if "maps" in data:
        maps = [parse(m) if isinstance(m, str) else PartialMap.of(m) for m in data["maps"]]
        return close(maps)
    if "table" in data:
        import numpy as np

        tab = np.asarray(data["table"], dtype=np.int64) - 1
        return from_table(tab)
    raise UsageError("expected one of the keys family, maps, table")


def load_semigroup(path: str) -> FiniteSemigroup:
    text = _read(path)
    if path.endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        return semigroup_from_json(data)
    return semigroup_from_text(text)


# ---------------------------------------------------------------------------
# reports


def analysis(S: FiniteSemigroup, args) -> dict:
    from .genset_analysis import MinimalGensetStream, depth_parameters, rank
    from .green import green_data

    out = {"semigroup": S.to_json()}
    if args.green:
        G = green_data(S)
        out["green"] = {"j_classes": G.to_json(S), "j_order": sorted(map(list, G.j_order.edges)), "maximal": G.maximal_j_classes}
        if args.dot:
            out["green"]["dot"] = G.to_dot(S)
    if args.rank:
        pv, w = rank(S, seed=args.seed)
        out["rank"] = {"value": pv.to_json(), "witness": [S.label(a) for a in w]}
    if args.minimal_gensets:
        stream = MinimalGensetStream(S)
        sets = [sorted(S.label(a) for a in A) for A in stream]
        out["minimal_generating_sets"] = {"complete": stream.complete, "count": len(sets), "sets": sorted(sets)}
    if args.depth:
        rep = depth_parameters(S, seed=args.seed, search_max=not args.no_max)
        out["depth"] = rep.to_json()
        out["depth"]["notes"] = rep.notes
    return out


def cmd_family(args) -> dict:
    from .families import build, parse_family_args

    rees = json.loads(_read(args.rees)) if args.rees else None
    spec = parse_family_args(args.name, args.params, rees)
    S = build(spec)
    out = analysis(S, args)
    out["family"] = {"name": spec.name, "params": list(spec.params)}
    return out


def cmd_custom(args) -> dict:
    return analysis(load_semigroup(args.file), args)


def cmd_product(args) -> dict:
    from .genset_analysis import depth_parameters
    from .products import (
        direct_product,
        rank_direct_product,
        upper_bound_direct,
        wreath,
        wreath_depth_bounds,
        wreath_kernel_sizes,
        wreath_rank,
    )

    A, B = load_semigroup(args.first), load_semigroup(args.second)
    if args.wreath:
        wp = wreath(A, B)
        sizes = wreath_kernel_sizes(wp)
        out = {
            "order": wp.W.order,
            "kernel_size": sizes.kernel,
            "E_size": sizes.E,
            "kernel_product_size": sizes.product,
            "sandwich_holds": sizes.sandwich_ok,
        }
        wr = wreath_rank(wp)
        out["rank_formula"] = wr.value
        out["rank_witness_generates"] = wr.witness_generates
        out["rank_formula_exact"] = wr.lower_bound_holds
        if args.check_bounds:
            bounds = wreath_depth_bounds(wp)
            out["bounds"] = bounds.to_json()
            rep = depth_parameters(wp.W, search_max=False)
            out["N"] = rep.N.to_json()
            applicable = [v for v in (bounds.general, bounds.special, bounds.special_refined) if v is not None]
            out["bounds_dominate_N"] = all(rep.N.hi <= v for v in applicable) if rep.N.exact else None
        return out
    dp = direct_product(A, B)
    out = {"order": dp.P.order, "kernel_size": len(dp.kernel_pairs()), "kernel_is_product": dp.kernel_is_product()}
    if A.identity is not None and B.identity is not None:
        rr = rank_direct_product(A, B)
        out["rank_formula"] = rr.value
        if args.check_bounds:
            nA, nB = depth_parameters(A, search_max=False), depth_parameters(B, search_max=False)
            if nA.N.exact and nB.N.exact:
                bd = upper_bound_direct(A, B, nA.N.lo, nB.N.lo)
                out["bound"] = {"value": bd.value, "kind": bd.kind, "D": bd.D}
                rep = depth_parameters(dp.P, search_max=False)
                out["N"] = rep.N.to_json()
                out["bound_dominates_N"] = rep.N.hi <= bd.value
    return out


def cmd_automaton(args) -> dict:
    from .automata import Automaton, analyze

    A = Automaton.from_json(_read(args.file))
    return analyze(A, semigroup=not args.no_semigroup)


def cmd_semilattice(args) -> dict:
    from .semilattice import depth_semilattice, from_covers, hasse, irreducibles, is_free, is_rooted_tree

    text = _read(args.file)
    if args.file.endswith(".json"):
        data = json.loads(text)
        if "covers" in data:
            S = from_covers(int(data["n"]), [tuple(int(v) for v in c) for c in data["covers"]])
        else:
            S = semigroup_from_json(data)
    else:
        S = semigroup_from_text(text)
    d = hasse(S)
    out = {
        "order": S.order,
        "irreducibles": [S.label(x) for x in irreducibles(S)],
        "depth": depth_semilattice(S),
        "free": is_free(S),
        "rooted_tree": is_rooted_tree(d),
        "cover_edges": [[S.label(u), S.label(v)] for u, v in d.edges],
    }
    if args.dot:
        out["dot"] = d.to_dot([S.label(v) for v in d.vertices])
    return out


def cmd_verify(args) -> dict:
    from .verify import run_suite

    checks = run_suite(args.suite)
    return {"suite": args.suite, "passed": all(c.passed for c in checks), "checks": [c.to_json() for c in checks]}


# ---------------------------------------------------------------------------
# plumbing


def _analysis_flags(p):
    p.add_argument("--depth", action="store_true", help="compute N, N', M, M'")
    p.add_argument("--green", action="store_true", help="report Green's structure")
    p.add_argument("--rank", action="store_true", help="compute the rank with a witness")
    p.add_argument("--minimal-gensets", action="store_true", help="enumerate minimal generating sets")
    p.add_argument("--no-max", action="store_true", help="skip the searches for M and M'")
    p.add_argument("--dot", action="store_true", help="include DOT renderings")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semidepth", description="Depth parameters of finite semigroups.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--element-budget", type=int, help="largest closure size (default from SEMIDEPTH_ELEMENT_BUDGET)")
    p.add_argument("--search-budget", type=int, help="closure calls allowed in searches (default from SEMIDEPTH_SEARCH_BUDGET)")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; analysis runs single-threaded")
    p.add_argument("--output", choices=["json", "table"], default="json")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("family", help="analyze a named family")
    f.add_argument("name")
    f.add_argument("params", nargs="*")
    f.add_argument("--rees", help="JSON file with group_table and P for the Rees family")
    _analysis_flags(f)
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("custom", help="analyze maps or a multiplication table from a file")
    c.add_argument("file")
    _analysis_flags(c)
    c.set_defaults(func=cmd_custom)

    pr = sub.add_parser("product", help="direct or wreath product of two monoids")
    kind = pr.add_mutually_exclusive_group(required=True)
    kind.add_argument("--direct", action="store_true")
    kind.add_argument("--wreath", action="store_true")
    pr.add_argument("first")
    pr.add_argument("second")
    pr.add_argument("--check-bounds", action="store_true")
    pr.set_defaults(func=cmd_product)

    w = sub.add_parser("wreath", help="shorthand for product --wreath")
    w.add_argument("first")
    w.add_argument("second")
    w.add_argument("--check-bounds", action="store_true")
    w.set_defaults(func=cmd_product, wreath=True, direct=False)

    a = sub.add_parser("automaton", help="analyze a complete deterministic automaton")
    a.add_argument("action", choices=["analyze"])
    a.add_argument("file")
    a.add_argument("--no-semigroup", action="store_true", help="skip the transition-semigroup route")
    a.set_defaults(func=cmd_automaton)

    s = sub.add_parser("semilattice", help="irreducibles, depth and Hasse diagram of a semilattice")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_semilattice)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite")
    v.set_defaults(func=cmd_verify)
    return p


def _render_table(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            lines += _render_table(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
        for i, v in enumerate(obj):
            lines += _render_table(v, f"{prefix}{i}.")
    else:
        lines.append(f"{prefix[:-1]}: {json.dumps(obj, sort_keys=True)}")
    return lines


def _emit(obj, fmt: str, stream) -> None:
    if fmt == "table":
        stream.write("\n".join(_render_table(obj)) + "\n")
    else:
        stream.write(dumps(obj) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    overrides = {}
    for value, var in ((args.element_budget, "SEMIDEPTH_ELEMENT_BUDGET"), (args.search_budget, "SEMIDEPTH_SEARCH_BUDGET")):
        if value is not None:
            if value <= 0:
                parser.print_usage(sys.stderr)
                return EXIT_USAGE
            overrides[var] = str(value)
    saved = {k: os.environ.get(k) for k in overrides}
    os.environ.update(overrides)
    try:
        result = args.func(args)
    except BudgetExceeded as exc:
        _emit({"error": str(exc), "partial": exc.partial}, args.output, sys.stdout)
        return EXIT_BUDGET
    except (ParseError, NotAssociativeError, PreconditionError, UsageError) as exc:
        sys.stderr.write(f"semidepth: error: {exc}\n")
        return EXIT_USAGE
    except AssertionError as exc:
        sys.stderr.write(f"semidepth: internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v
    _emit(result, args.output, sys.stdout)
    if args.command == "verify" and not result["passed"]:
        return 1
    return EXIT_OK
