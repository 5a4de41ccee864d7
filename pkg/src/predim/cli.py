"""Command-line interface: ``predim <subcommand> ...``.

Exit codes: 0 success, 1 semantic failure (a check or suite fails),
2 usage or parse error, 3 guardrail exceeded.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Callable

from . import closure, propcheck
from .errors import FormulaMismatch, GuardrailExceeded, NotSelfsufficient
from .exterior import Bivector, bivector_rank, min_support_dim_oracle
from .free import orbit_separation_witnesses, orbit_verdict, verify_lemma_4_1
from .linalg import Subspace, format_subspace, format_vector, parse_subspace, parse_vector, parse_vectors
from .structure import (
    BilinearStructure,
    StructureFormatError,
    beta_map,
    check_few_relations,
    delta,
    load_structure,
    n_of,
    parse_inline,
    serialize_structure,
)

Pairs = list[tuple[str, object]]


class UsageError(Exception):
    pass


def _emit(pairs: Pairs, output: str, out) -> None:
    if output == "machine":
        out.write("format 1\n")
        for key, value in pairs:
            out.write(f"{key} {value}\n")
    else:
        width = max((len(k) for k, _ in pairs), default=0)
        for key, value in pairs:
            out.write(f"{key.ljust(width)}  {value}\n")


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _structure(args) -> BilinearStructure:
    if args.structure and args.inline:
        raise UsageError("give either --structure or --inline, not both")
    if args.structure:
        S = load_structure(args.structure)
    elif args.inline:
        S = parse_inline(args.inline)
    else:
        raise UsageError("a structure is required (--structure FILE or --inline TEXT)")
    if args.k is not None:
        S = S.with_k(args.k)
    return S


def _subspace(S: BilinearStructure, text: str) -> Subspace:
    return parse_subspace(text, S.p, S.n)


def _delta_pairs(prefix: str, value) -> Pairs:
    return [(f"{prefix}_scaled", value.value), (prefix, value.fraction)]


# -- handlers ----------------------------------------------------------------

def cmd_delta(args, limit, out) -> int:
    S = _structure(args)
    H = _subspace(S, args.subspace)
    d = delta(S, H)
    _emit([("subspace", H), ("dim", H.dim), ("relations_dim", n_of(S, H).dim), ("k", S.k)]
          + _delta_pairs("delta", d), args.output, out)
    return 0


def cmd_nof(args, limit, out) -> int:
    S = _structure(args)
    N = n_of(S, _subspace(S, args.subspace))
    _emit([("relations", N), ("dim", N.dim)], args.output, out)
    return 0


def cmd_beta(args, limit, out) -> int:
    S = _structure(args)
    u, v = parse_vector(args.u, S.p, S.n), parse_vector(args.v, S.p, S.n)
    b = beta_map(S, u, v)
    _emit([("beta", b), ("zero", _yn(not b))], args.output, out)
    return 0


def cmd_few_relations(args, limit, out) -> int:
    S = _structure(args)
    verdict = check_few_relations(S, limit)
    pairs: Pairs = [("few_relations", "holds" if verdict.holds else "fails"), ("k", S.k)]
    if not verdict.holds:
        pairs += [("witness", verdict.witness), ("witness_dim", verdict.witness.dim),
                  ("witness_relations_dim", verdict.witness_relations)]
    _emit(pairs, args.output, out)
    return 0 if verdict.holds else 1


def cmd_selfsufficient(args, limit, out) -> int:
    S = _structure(args)
    H = _subspace(S, args.subspace)
    _emit([("subspace", H), ("selfsufficient", _yn(closure.is_selfsufficient(S, H, limit)))], args.output, out)
    return 0


def cmd_css(args, limit, out) -> int:
    S = _structure(args)
    H = _subspace(S, args.subspace)
    C = closure.css(S, H, limit)
    _emit([("css", C), ("dim", C.dim)] + _delta_pairs("delta", delta(S, C)), args.output, out)
    return 0


def cmd_dk(args, limit, out) -> int:
    S = _structure(args)
    A = parse_vectors(args.vectors, S.p, S.n)
    _emit(_delta_pairs("d_k", closure.d_k(S, A, limit)), args.output, out)
    return 0


def cmd_in_closure(args, limit, out) -> int:
    S = _structure(args)
    A = parse_vectors(args.a, S.p, S.n)
    B = parse_vectors(args.b, S.p, S.n)
    _emit([("in_closure", _yn(closure.in_closure(S, A, B, limit)))], args.output, out)
    return 0


def cmd_closure(args, limit, out) -> int:
    S = _structure(args)
    B = _subspace(S, args.subspace)
    cl = closure.closure_set(S, B, limit)
    pairs: Pairs = [("base", B), ("size", len(cl.vectors)), ("subspace", _yn(cl.is_subspace))]
    if cl.subspace is not None:
        pairs += [("closure", cl.subspace), ("dim", cl.subspace.dim)]
    else:
        pairs += [("vector", format_vector(v)) for v in sorted(cl.vectors)]
    _emit(pairs, args.output, out)
    return 0


def cmd_delta_rel(args, limit, out) -> int:
    S = _structure(args)
    K = _subspace(S, args.ext)
    H = _subspace(S, args.base)
    _emit(_delta_pairs("delta_rel", closure.delta_rel(S, K, H, limit)), args.output, out)
    return 0


def cmd_minimal_extensions(args, limit, out) -> int:
    S = _structure(args)
    H = _subspace(S, args.subspace)
    exts = closure.minimal_extensions(S, H, limit)
    _emit([("count", len(exts))] + [("extension", K) for K in exts], args.output, out)
    return 0


def cmd_chain(args, limit, out) -> int:
    S = _structure(args)
    report = closure.closure_chain(S, _subspace(S, args.subspace), limit)
    out.write(report.render_machine() if args.output == "machine" else report.render_text())
    return 0


def cmd_bivector_rank(args, limit, out) -> int:
    w = Bivector.parse(args.bivector, args.n, args.p)
    pairs: Pairs = [("rank", bivector_rank(w))]
    if args.oracle:
        pairs.append(("min_support_dim", min_support_dim_oracle(w, limit)))
    if args.output == "machine":
        _emit(pairs, args.output, out)
    else:
        out.write(f"{pairs[0][1]}\n")
        for key, value in pairs[1:]:
            out.write(f"{key} {value}\n")
    return 0


def cmd_free_orbits(args, limit, out) -> int:
    ws = orbit_separation_witnesses(args.count, args.p, limit)
    pairs: Pairs = [("ambient_dim", ws[-1].w.n)]
    pairs += [(f"witness_{w.g_index}", f"m={w.m} rank={w.rank}") for w in ws]
    distinct = len({w.rank for w in ws}) == len(ws)
    pairs += [("distinct", _yn(distinct)), ("verdict", orbit_verdict(ws))]
    _emit(pairs, args.output, out)
    return 0 if distinct else 1


def cmd_lemma41(args, limit, out) -> int:
    v = verify_lemma_4_1(args.m, args.p, mode=args.mode, samples=args.samples, seed=args.seed, limit=limit)
    if args.output == "machine":
        pairs: Pairs = [("m", v.m), ("p", v.p), ("result", "pass" if v.passed else "fail"),
                        ("mode", v.mode), ("checked", v.checked), ("rank", v.rank),
                        ("threshold", v.threshold), ("threshold_source", v.threshold_source)]
        if v.counterexample is not None:
            pairs.append(("counterexample", v.counterexample))
        _emit(pairs, args.output, out)
    else:
        out.write(v.render_text())
    return 0 if v.passed else 1


def cmd_verify(args, limit, out) -> int:
    ids = propcheck.LEMMA_IDS if args.lemma == "all" else (args.lemma,)
    if args.lemma != "all" and args.lemma not in propcheck.LEMMA_IDS:
        raise UsageError(f"unknown lemma id {args.lemma!r}; known: all, {', '.join(propcheck.LEMMA_IDS)}")
    timing = not args.no_timing
    if args.output == "machine":
        out.write("format 1\n")
    failed = False
    for lemma in ids:
        catalog = propcheck.default_catalog(lemma, args.seed, args.samples)
        if limit is not None:
            catalog = tuple(replace(cfg, limit=limit) for cfg in catalog)
        result = propcheck.run_suite(lemma, catalog, workers=args.workers)
        failed |= not result.passed
        if args.output == "machine":
            out.write(result.machine_line(timing) + "\n")
        else:
            out.write(result.render_text(timing))
        out.flush()
    return 1 if failed else 0


def cmd_fmt(args, limit, out) -> int:
    if args.file:
        S = load_structure(args.file)
        if args.k is not None:
            S = S.with_k(args.k)
    else:
        S = _structure(args)
    out.write(serialize_structure(S))
    return 0


# -- parser ------------------------------------------------------------------

def _structure_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--structure", metavar="FILE", help="structure file")
    p.add_argument("--inline", metavar="TEXT", help="structure literal, ';' separating lines")
    p.add_argument("--k", type=int, help="override the structure's k")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "machine"), default="text")
    common.add_argument("--guardrail", type=int, metavar="N", help="enumeration budget (needs --allow-long)")
    common.add_argument("--allow-long", action="store_true", help="acknowledge a raised guardrail may run long")

    parser = argparse.ArgumentParser(prog="predim", description="Predimension and closure calculus of alternating bilinear maps over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, structure: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        if structure:
            _structure_opts(p)
        p.set_defaults(func=func)
        return p

    for name, func, help in (
        ("delta", cmd_delta, "scaled predimension of a subspace"),
        ("nof", cmd_nof, "relations N(H) visible in a subspace"),
        ("selfsufficient", cmd_selfsufficient, "is the subspace selfsufficient"),
        ("css", cmd_css, "selfsufficient closure"),
        ("closure", cmd_closure, "combinatorial closure cl_k as a vector set"),
        ("minimal-extensions", cmd_minimal_extensions, "minimal extensions of a selfsufficient subspace"),
        ("chain", cmd_chain, "closure chain from a selfsufficient subspace"),
    ):
        add(name, func, help).add_argument("--subspace", default="", help="subspace literal, e.g. '1,0,0;0,1,0'")

    p = add("beta", cmd_beta, "β(u, v) as a coset representative")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    add("few-relations", cmd_few_relations, "check dim N(H) ≤ k dim H everywhere")

    p = add("dk", cmd_dk, "d_k of a finite set of vectors")
    p.add_argument("--vectors", default="", help="vectors separated by ';'")

    p = add("in-closure", cmd_in_closure, "decide A ⊆ cl_k(B)")
    p.add_argument("--a", required=True, help="vectors separated by ';'")
    p.add_argument("--b", default="", help="vectors separated by ';'")

    p = add("delta-rel", cmd_delta_rel, "relative predimension δ_k(K/H)")
    p.add_argument("--ext", required=True, help="subspace K")
    p.add_argument("--base", default="", help="selfsufficient subspace H")

    p = add("bivector-rank", cmd_bivector_rank, "rank of a bivector", structure=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bivector", required=True, help="residues in wedge-basis order")
    p.add_argument("--oracle", action="store_true", help="also run the min-support scan")

    p = add("free-orbits", cmd_free_orbits, "rank-separated witnesses w_g(i)", structure=False)
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--p", type=int, default=2)

    p = add("lemma41", cmd_lemma41, "check w_m ∉ Λ²E for dim E < m", structure=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", cmd_verify, "run lemma suites", structure=False)
    p.add_argument("lemma", help=f"one of: all, {', '.join(propcheck.LEMMA_IDS)}")
    p.add_argument("--seed", type=int, default=propcheck.DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=propcheck.DEFAULT_SAMPLES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="print time_ms=- for reproducible output")

    p = add("fmt", cmd_fmt, "parse and canonically re-serialize a structure")
    p.add_argument("file", nargs="?", help="structure file")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    limit = None
    try:
        if args.guardrail is not None:
            if not args.allow_long:
                raise UsageError("--guardrail needs --allow-long")
            limit = args.guardrail
        return args.func(args, limit, out)
    except GuardrailExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"required {exc.required}", file=sys.stderr)
        return 3
    except (NotSelfsufficient, FormulaMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, StructureFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
