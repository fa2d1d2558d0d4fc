"""Command-line entry point: ``pmalg <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from math import prod

from . import congruence as cg
from . import duality as du
from . import terms
from .algebra import (
    DEFAULT_ELEMENT_CAP,
    FiniteAlgebra,
    algebra_from_raw,
    bits,
    direct_product,
    is_kleene,
    validate,
)
from .constructions import SiDescriptor, automorphisms, build_si, homomorphisms, surjective_homs
from .errors import (
    CapExceeded,
    DomainError,
    InvalidAlgebra,
    PmAlgError,
    StructureError,
    TermSyntaxError,
)
from .free import free_decomposition, free_size, oracle_sur_count, sur_count
from .io import algebra_to_dot, dumps_algebra, load_algebra, load_raw


def _emit(args, lines: list[str], data: dict) -> None:
    if args.format == "structured-text":
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _load(args, path: str | None = None) -> FiniteAlgebra:
    return load_algebra(path or args.algebra, args.cap_elements)


def _pts(mask: int) -> str:
    return "{" + ",".join(f"P{p}" for p in bits(mask)) + "}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    raw = load_raw(args.algebra)
    report = validate(raw, args.cap_elements)
    data = {
        "valid": report.passed,
        "violations": [{"axiom": a, "witness": list(w)} for a, w in report.violations],
    }
    if report.passed:
        L = algebra_from_raw(raw, args.cap_elements)
        data["elements"] = L.n
        data["kleene"] = is_kleene(L)
        lines = [f"valid pm-algebra with {L.n} elements", f"kleene: {_yn(data['kleene'])}"]
    else:
        lines = ["invalid"] + [f"  {a} fails at {tuple(w)}" for a, w in report.violations]
    _emit(args, lines, data)
    return 0 if report.passed else 1


def cmd_dual(args) -> int:
    L = _load(args)
    X = du.dual_space(L)
    if args.format == "dot":
        sys.stdout.write(du.to_dot(X))
        return 0
    pts = []
    lines = [f"points: {X.n}"]
    for p in range(X.n):
        filt = [L.names[x] for x in bits(X.filters[p])]
        pts.append({"point": f"P{p}", "filter": filt, "phi": f"P{X.phi[p]}"})
        lines.append(f"  P{p}  phi=P{X.phi[p]}  filter={{{','.join(filt)}}}")
    edges = du.hasse_edges(X)
    lines.append("covers: " + " ".join(f"P{a}<P{b}" for a, b in edges))
    comps = du.phi_component_masks(X)
    st = du.space_type(X)
    summary = {
        "max": _pts(X.max_mask),
        "min": _pts(X.min_mask),
        "body": _pts(X.body_mask),
        "phi_components": [_pts(c) for c in comps],
        "type": st.value,
        "kleene_space": du.is_kleene_space(X),
    }
    lines += [
        f"Max: {summary['max']}",
        f"Min: {summary['min']}",
        f"Body: {summary['body']}",
        f"phi-components: {len(comps)}",
        f"space type: {st.value}",
    ]
    _emit(args, lines, {"points": pts, "covers": [[a, b] for a, b in edges], **summary})
    return 0


def cmd_congruences(args) -> int:
    L = _load(args)
    pairs = cg.csubset_congruence_pairs(L)
    pairs.sort(key=lambda yc: cg._sort_key(yc[1]))
    rows = []
    lines = [f"congruences: {len(pairs)}"]
    for Y, c in pairs:
        blocks = [[L.names[x] for x in blk] for blk in c.blocks]
        rows.append({"csubset": _pts(Y), "blocks": blocks})
        lines.append(f"  {_pts(Y):<20} " + " ".join("[" + ",".join(b) + "]" for b in blocks))
    data = {"count": len(pairs), "congruences": rows}
    if args.bruteforce:
        brute = cg.congruence_lattice_bruteforce(L, max(args.cap_elements_bruteforce, 0))
        agree = sorted(brute) == sorted(c for _, c in pairs)
        data["bruteforce_agrees"] = agree
        lines.append(f"brute-force agrees: {_yn(agree)}")
    _emit(args, lines, data)
    return 0


def classify_text(L: FiniteAlgebra) -> tuple[str, dict]:
    congs = cg.congruence_lattice(L)
    X = du.dual_space(L)
    nb = bin(X.body_mask).count("1")
    st = du.space_type(X)
    simple = cg.is_simple(L, congs)
    si = cg.is_subdirectly_irreducible(L, congs)
    if L.n == 1:
        kind = "trivial"
    elif simple:
        kind = "simple"
    elif si:
        kind = "subdirectly irreducible, not simple"
    else:
        kind = "not subdirectly irreducible"
    space = "space Other" if st is du.SpaceType.OTHER else f"space Type {st.value[-1]}"
    text = f"{kind}; Body size {nb}; {space}"
    data = {
        "simple": simple,
        "subdirectly_irreducible": si,
        "congruences": len(congs),
        "body_size": nb,
        "space_type": st.value,
    }
    return text, data


def cmd_classify(args) -> int:
    text, data = classify_text(_load(args))
    _emit(args, [text], data)
    return 0


def cmd_check(args) -> int:
    L = _load(args)
    identity = terms.parse_identity(args.identity)
    res = terms.holds(L, identity, args.cap_evals)
    data = {"identity": args.identity, "holds": res.holds}
    if res.holds:
        line = "PASS"
    else:
        wit = {v: L.names[e] for v, e in res.witness.items()}
        data["witness"] = wit
        data["lhs"] = L.names[res.lhs_value]
        data["rhs"] = L.names[res.rhs_value]
        shown = ", ".join(f"{v}={e}" for v, e in wit.items())
        line = f"FAIL witness: {shown} (lhs={data['lhs']}, rhs={data['rhs']})"
    _emit(args, [line], data)
    if args.expect == "pass" and not res.holds:
        return 1
    if args.expect == "fail" and res.holds:
        return 1
    return 0


def cmd_variety(args) -> int:
    L = _load(args)
    ns = tuple(_int_list(args.n))
    rec = terms.variety_membership(L, ns, args.cap_evals, args.beta_method)
    rows = rec.rows()
    width = max(len(name) for name, _ in rows)
    lines = [f"{name:<{width}}  {_yn(v)}" for name, v in rows]
    _emit(args, lines, {name: v for name, v in rows})
    return 0


def _write_algebra(args, L: FiniteAlgebra) -> None:
    if args.format == "dot":
        sys.stdout.write(algebra_to_dot(L))
    else:
        sys.stdout.write(dumps_algebra(L))


def cmd_build(args) -> int:
    _write_algebra(args, build_si(SiDescriptor.parse(args.si)))
    return 0


def cmd_product(args) -> int:
    factors = [_load(args, p) for p in args.factors]
    size = prod(F.n for F in factors)
    if size > args.cap_elements:
        raise CapExceeded(f"product has {size} elements, above element cap {args.cap_elements}")
    _write_algebra(args, direct_product(*factors))
    return 0


def cmd_homs(args) -> int:
    A = _load(args, args.source)
    if args.auto:
        maps, label = automorphisms(A, args.cap_elements), "automorphisms"
        B = A
    else:
        if args.target is None:
            raise DomainError("homs needs a target algebra unless --auto is given")
        B = _load(args, args.target)
        if args.surjective:
            maps, label = surjective_homs(A, B, args.cap_elements), "surjective homomorphisms"
        else:
            maps, label = homomorphisms(A, B, args.cap_elements), "homomorphisms"
    listing = [[B.names[v] for v in h] for h in maps]
    lines = [f"{label}: {len(maps)}"]
    if args.list:
        for h in listing:
            lines.append("  " + ", ".join(f"{A.names[x]}->{v}" for x, v in enumerate(h)))
    data = {"kind": label, "count": len(maps)}
    if args.list:
        data["maps"] = listing
    _emit(args, lines, data)
    return 0


def cmd_free_decomp(args) -> int:
    n = args.n
    dec = free_decomposition(n)
    lines = [f"F({n}) = {dec}", f"{'k':>3}  {'|B_k|':>6}  multiplicity"]
    for k, size, mult in dec.rows():
        lines.append(f"{k:>3}  {size:>6}  {mult}")
    data = {"n": n, "factors": [{"k": k, "size": s, "multiplicity": m} for k, s, m in dec.rows()]}
    if n <= 2:
        size = free_size(n)
        lines.append(f"|F({n})| = {size}")
        data["size"] = str(size)
    if args.oracle_verify:
        checks = []
        ok = True
        for k in _int_list(args.oracle_verify):
            formula = sur_count(n, k)
            oracle = oracle_sur_count(n, k)
            ok &= formula == oracle
            checks.append({"k": k, "formula": formula, "oracle": oracle})
            verdict = "agree" if formula == oracle else "DISAGREE"
            lines.append(f"oracle k={k}: formula {formula}, oracle {oracle}, {verdict}")
        data["oracle"] = checks
        _emit(args, lines, data)
        return 0 if ok else 1
    _emit(args, lines, data)
    return 0


def cmd_export(args) -> int:
    _write_algebra(args, _load(args))
    return 0


# ---------------------------------------------------------------------------


def _yn(v: bool) -> str:
    return "yes" if v else "no"


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "structured-text", "dot"], default="table")
    common.add_argument("--cap-elements", type=int, default=DEFAULT_ELEMENT_CAP)
    common.add_argument("--cap-evals", type=int, default=terms.DEFAULT_EVAL_CAP)

    parser = argparse.ArgumentParser(
        prog="pmalg", description="Finite pm-algebras: duality, congruences, identities."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, needs_algebra=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if needs_algebra:
            p.add_argument("--algebra", required=True, metavar="PATH")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check every pm-algebra axiom")
    add("dual", cmd_dual, "dual space and its classifiers")
    p = add("congruences", cmd_congruences, "congruences via C-subsets")
    p.add_argument("--bruteforce", action="store_true", help="cross-check by closure search")
    p.add_argument(
        "--cap-elements-bruteforce", type=int, default=cg.DEFAULT_BRUTEFORCE_CAP, metavar="N"
    )
    add("classify", cmd_classify, "simplicity, subdirect irreducibility, space type")
    p = add("check", cmd_check, "test an identity exhaustively")
    p.add_argument("identity")
    p.add_argument("--expect", choices=["pass", "fail"])
    p = add("variety", cmd_variety, "membership in the named varieties")
    p.add_argument("--n", default="1,2,3", help="beta indices, comma separated")
    p.add_argument("--beta-method", choices=["dual", "exhaustive"], default="dual")
    p = add("build", cmd_build, "build B(i,m)", needs_algebra=False)
    p.add_argument("--si", required=True, metavar="I,M")
    p = add("product", cmd_product, "direct product of algebra files", needs_algebra=False)
    p.add_argument("factors", nargs="+", metavar="FILE")
    p = add("homs", cmd_homs, "enumerate homomorphisms", needs_algebra=False)
    p.add_argument("source", metavar="A")
    p.add_argument("target", metavar="B", nargs="?")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--surjective", action="store_true")
    group.add_argument("--auto", action="store_true")
    p.add_argument("--list", action="store_true", help="print every map")
    p = add("free-decomp", cmd_free_decomp, "decomposition of the free BPK0 algebra",
            needs_algebra=False)
    p.add_argument("n", type=int)
    p.add_argument("--oracle-verify", metavar="K[,K...]")
    add("export", cmd_export, "re-emit an algebra canonically (or as dot)")
    return parser


_PREFIXES = (
    (TermSyntaxError, "error[syntax]", 2),
    (InvalidAlgebra, "error[invalid-algebra]", 1),
    (StructureError, "error[malformed]", 1),
    (CapExceeded, "error[cap]", 1),
    (DomainError, "error[domain]", 1),
    (PmAlgError, "error", 1),
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error[io]: cannot read {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except PmAlgError as exc:
        for cls, prefix, code in _PREFIXES:
            if isinstance(exc, cls):
                print(f"{prefix}: {exc}", file=sys.stderr)
                return code
        raise  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
