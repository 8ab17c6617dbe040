"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 a checked mathematical assertion
failed (for example `check-koszul --expect koszul` on a non-Koszul input).
KOSZUL_THREADS caps the per-vertex parallelism of certificates.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import engine, randomgen, reports
from .algebra import Presentation
from .complexes import homology_tables
from .dsl import ParseError, parse_presentation, print_presentation
from .engine import TruncationPolicy
from .linalg import GF, QQ
from .modules import injective_module, projective_module, simple_module


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="rationals",
                        help="'rationals' or a prime p for F_p arithmetic")
    common.add_argument("-N", "--span", type=int, default=6,
                        help="max homological span for truncated claims")
    common.add_argument("--window", nargs=2, type=int, default=[-2, 10],
                        metavar=("LO", "HI"), help="internal degree window")
    common.add_argument("-D", "--degree-cap", type=int, default=None,
                        help="degree cap for algebra pieces (default: fits the window)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized self-check subcommands")
    p = argparse.ArgumentParser(
        prog="koszul",
        description="Quadratic quiver algebras: Koszul duals, certificates, "
                    "Koszul functors and resolutions, by exact linear algebra.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text, with_input=True):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        if with_input:
            sp.add_argument("input", help="presentation file (.kz)")
        return sp

    add("dual", "emit the quadratic dual presentation")
    ck = add("check-koszul", "Koszulity certificate")
    ck.add_argument("--expect", choices=["koszul", "non-koszul"], default=None)
    cs = add("check-star", "special multiserial and condition (*) verdicts")
    cs.add_argument("--expect", choices=["satisfied", "violated"], default=None)
    rs = add("resolve", "projective resolution of a module")
    rs.add_argument("--module", required=True,
                    help="simple:a[@s], proj:a[@s], inj:a[@s] or a JSON file")
    rs.add_argument("--coresolution", action="store_true",
                    help="emit the injective coresolution instead")
    fn = add("functor", "apply a Koszul functor")
    fn.add_argument("--side", required=True, choices=["F", "G"])
    fn.add_argument("--module", required=True)
    hm = add("homology", "homology of a complex file")
    hm.add_argument("--complex", required=True, help="JSON complex in the module schema")
    et = add("ext-table", "graded Ext dimensions between simples")
    et.add_argument("--from", dest="src", required=True)
    et.add_argument("--to", dest="dst", required=True)
    add("pairing-table", "dim R^(n)(a,x) versus dim e_a Lambda^!_n e_x")
    add("selfcheck", "seeded randomized identity checks", with_input=False)
    return p


def _field_of(args):
    if args.field == "rationals":
        return QQ
    try:
        return GF(int(args.field))
    except ValueError as exc:
        raise CliError(f"bad field {args.field!r}: {exc}")


def _policy_of(args) -> TruncationPolicy:
    lo, hi = args.window
    if args.span < 1 or lo > hi:
        raise CliError("invalid -N/--window configuration")
    return TruncationPolicy(args.span, (lo, hi))


def _load(args) -> Presentation:
    field = _field_of(args)
    lo, hi = args.window
    cap = args.degree_cap if args.degree_cap is not None else max(8, hi, args.span + 2)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc}")
    try:
        return parse_presentation(text, field, cap)
    except ParseError as exc:
        raise CliError(f"{args.input}:{exc}")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KOSZUL_THREADS", "1")))
    except ValueError:
        return 1


def _module_of(args, pres, policy):
    spec = args.module
    window = policy.degree_window
    if spec.startswith(("simple:", "proj:", "inj:")):
        kind, rest = spec.split(":", 1)
        shift = 0
        if "@" in rest:
            rest, s = rest.split("@", 1)
            try:
                shift = int(s)
            except ValueError:
                raise CliError(f"bad shift in module spec {spec!r}")
        if rest not in pres.quiver.vertices:
            raise CliError(f"unknown vertex {rest!r} in module spec")
        if kind == "simple":
            return simple_module(pres, rest, shift, window)
        if kind == "proj":
            return projective_module(pres, rest, shift, window)
        return injective_module(pres, rest, shift, window)
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load module file {spec!r}: {exc}")
    try:
        return reports.module_from_json(pres, data)
    except ValueError as exc:
        raise CliError(f"invalid module data: {exc}")


def _emit(args, payload, human_lines):
    if args.json:
        sys.stdout.write(reports.dumps(payload))
    else:
        for line in human_lines:
            print(line)


def cmd_dual(args):
    pres = _load(args)
    dual = pres.quadratic_dual()
    payload = {"command": "dual", "dual": reports.presentation_json(dual)}
    _emit(args, payload, [print_presentation(dual).rstrip("\n")])
    return 0


def cmd_check_koszul(args):
    pres = _load(args)
    policy = _policy_of(args)
    cert = engine.koszulity_certificate(pres, policy, max_workers=_threads())
    payload = {"command": "check-koszul", "certificate": cert.to_dict()}
    lines = [f"verdict: {cert.verdict}",
             f"checked {cert.checked} (vertex, position, degree) triples; "
             f"complete: {cert.complete}"]
    for e in cert.failures[:5]:
        lines.append(f"  failure at vertex {e.vertex}, position {e.position}, "
                     f"degree {e.degree}; witness dim {e.witness_dim}")
    _emit(args, payload, lines)
    if args.expect == "koszul" and not cert.is_koszul:
        return 2
    if args.expect == "non-koszul" and cert.is_koszul:
        return 2
    return 0


def cmd_check_star(args):
    pres = _load(args)
    sm_ok, sm_violations = pres.special_multiserial_check()
    result = {"command": "check-star", "special_multiserial": sm_ok,
              "violations": sm_violations,
              "index_reading": "each witnessed term index is excluded literally"}
    lines = [f"special multiserial: {sm_ok}"]
    star_ok = None
    if sm_ok:
        star_self, ce_self = pres.condition_star_check("self")
        star_dual, ce_dual = pres.condition_star_check("dual-of-opposite")
        result["condition_star"] = {"self": star_self, "dual-of-opposite": star_dual,
                                    "counterexample_self": ce_self,
                                    "counterexample_dual": ce_dual}
        star_ok = star_self or star_dual
        lines.append(f"condition (*): self={star_self} dual-of-opposite={star_dual}")
        if star_ok:
            lines.append("Koszul by the multiserial criterion")
    else:
        lines.append(f"violations: {sm_violations}")
    _emit(args, result, lines)
    if args.expect == "satisfied" and not star_ok:
        return 2
    if args.expect == "violated" and star_ok:
        return 2
    return 0


def cmd_resolve(args):
    pres = _load(args)
    policy = _policy_of(args)
    m = _module_of(args, pres, policy)
    cert = engine.koszulity_certificate(pres, policy, max_workers=_threads())
    if args.coresolution:
        res = engine.injective_coresolution(m, policy)
        kind = "injective coresolution"
    else:
        res = engine.projective_resolution(m, policy)
        kind = "projective resolution"
    payload = {
        "command": "resolve",
        "kind": kind,
        "koszul_certificate": cert.verdict,
        "asserted": cert.is_koszul,
        "quasi_isomorphism": res.quasi_iso,
        "h0_isomorphism": res.h0_isomorphism,
        "safe_positions": list(res.safe_positions),
        "complex": reports.labeled_complex_json(res.complex, res.labels),
    }
    lines = [f"{kind}; certificate: {cert.verdict}",
             f"quasi-isomorphism: {res.quasi_iso} (safe positions "
             f"{res.safe_positions[0]}..{res.safe_positions[1]}); "
             f"H^0 matches: {res.h0_isomorphism}"]
    for n in sorted(res.labels):
        terms = ", ".join(f"{'P' if not args.coresolution else 'I'}_{e['vertex']}"
                          f"<{e['shift']}>^{e['multiplicity']}"
                          for e in res.labels[n]) or "0"
        lines.append(f"  position {n}: {terms}")
    _emit(args, payload, lines)
    if cert.is_koszul and not (res.quasi_iso and res.h0_isomorphism):
        return 2
    return 0


def cmd_functor(args):
    pres = _load(args)
    policy = _policy_of(args)
    m = _module_of(args, pres, policy)
    side = "right" if args.side == "F" else "left"
    window = policy.degree_window
    cx = engine.koszul_functor(side, m, window)
    labels = engine.functor_labels(cx, side, pres.quadratic_dual(), window)
    payload = {"command": "functor", "side": args.side,
               "complex": reports.labeled_complex_json(cx, labels),
               "homology": reports.homology_json(homology_tables(cx))}
    lines = [f"{args.side}(M): positions {cx.positions()}"]
    for n in sorted(labels):
        terms = ", ".join(f"{'P!' if side == 'right' else 'I!'}_{e['vertex']}"
                          f"<{e['shift']}>^{e['multiplicity']}" for e in labels[n]) or "0"
        lines.append(f"  position {n}: {terms}")
    _emit(args, payload, lines)
    return 0


def cmd_homology(args):
    pres = _load(args)
    try:
        with open(args.complex, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load complex {args.complex!r}: {exc}")
    try:
        cx = reports.complex_from_json(pres, data)
    except ValueError as exc:
        raise CliError(f"invalid complex: {exc}")
    tables = homology_tables(cx)
    payload = {"command": "homology", "homology": reports.homology_json(tables)}
    lines = []
    for n in sorted(tables):
        dims = ", ".join(f"({i},{x}):{d}" for (i, x), d in sorted(tables[n].items()))
        lines.append(f"H^{n}: {dims}")
    if not tables:
        lines.append("acyclic")
    _emit(args, payload, lines)
    return 0


def cmd_ext_table(args):
    pres = _load(args)
    policy = _policy_of(args)
    for v in (args.src, args.dst):
        if v not in pres.quiver.vertices:
            raise CliError(f"unknown vertex {v!r}")
    cert = engine.koszulity_certificate(pres, policy, max_workers=_threads())
    table = engine.ext_table(pres, args.src, args.dst, policy.max_span)
    payload = {"command": "ext-table", "from": args.src, "to": args.dst,
               "koszul_certificate": cert.verdict, "caveat": not cert.is_koszul,
               "table": {str(n): d for n, d in table.items()}}
    lines = [f"GExt^n(S_{args.src}, S_{args.dst}<-n>) for n = 0..{policy.max_span}"
             + ("" if cert.is_koszul else "  [caveat: certificate " + cert.verdict + "]")]
    lines.append("  " + "  ".join(f"n={n}:{d}" for n, d in sorted(table.items())))
    _emit(args, payload, lines)
    return 0


def cmd_pairing_table(args):
    pres = _load(args)
    policy = _policy_of(args)
    ok, rows = engine.pairing_table(pres, policy.max_span)
    payload = {"command": "pairing-table", "all_equal": ok, "rows": rows}
    lines = [f"pairing dimensions equal: {ok}"]
    for r in rows:
        if not r["equal"]:
            lines.append(f"  MISMATCH at a={r['a']} x={r['x']} n={r['n']}: "
                         f"{r['dim_R_upper']} vs {r['dim_dual_piece']}")
    _emit(args, payload, lines)
    return 0 if ok else 2


def cmd_selfcheck(args):
    from .complexes import (ComplexOfModules, acyclic_assembly_check,
                            mapping_cone, horizontal_cone, vertical_cone,
                            null_homotopy_solve, relabel_cells, relabel_double_map,
                            total_chain_map, total_complex)
    rng = random.Random(args.seed)
    field = _field_of(args)
    pres = randomgen.point_presentation(field)
    failures = []
    rounds = 12
    for t in range(rounds):
        dc = randomgen.random_double_complex(rng, pres, grid=(0, 2, 0, 2), degrees=(0, 1))
        tot = total_complex(dc)
        try:
            ComplexOfModules(pres, tot.window, tot.modules, tot.diffs)
        except ValueError:
            failures.append(f"total d^2 != 0 in round {t}")
        other = randomgen.random_double_complex(rng, pres, grid=(0, 2, 0, 2), degrees=(0, 1))
        f = randomgen.random_double_morphism(rng, dc, other)
        src = relabel_cells(dc, 0)
        tgt = relabel_cells(other, 1)
        g = relabel_double_map(f, src, tgt)
        lhs = total_complex(horizontal_cone(g)).canonical_form()
        mid = mapping_cone(total_chain_map(g)).canonical_form()
        rhs = total_complex(vertical_cone(g)).canonical_form()
        if not (lhs.same_content(mid) and mid.same_content(rhs)):
            failures.append(f"cone identity failed in round {t}")
        u, hf = randomgen.random_horizontal_homotopy(rng, dc, other)
        tf = total_chain_map(hf)
        if null_homotopy_solve(tf) is None:
            failures.append(f"null homotopy not found in round {t}")
        rows_exact = randomgen.random_double_complex(rng, pres, grid=(0, 2, 0, 2),
                                                     degrees=(0, 1), exact_rows=True)
        for n in range(0, 5):
            verdict, trace = acyclic_assembly_check(rows_exact, n, "rows")
            if verdict is False:
                failures.append(f"acyclic assembly failed at n={n} in round {t}")
    payload = {"command": "selfcheck", "seed": args.seed, "rounds": rounds,
               "failures": failures}
    _emit(args, payload, [f"selfcheck over {rounds} rounds: "
                          + ("all identities hold" if not failures else "FAILURES"),
                          *[f"  {f}" for f in failures]])
    return 0 if not failures else 2


_COMMANDS = {
    "dual": cmd_dual,
    "check-koszul": cmd_check_koszul,
    "check-star": cmd_check_star,
    "resolve": cmd_resolve,
    "functor": cmd_functor,
    "homology": cmd_homology,
    "ext-table": cmd_ext_table,
    "pairing-table": cmd_pairing_table,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        kind = "assertion-failed" if exc.code == 2 else "input-error"
        payload = {"error": str(exc), "exit": exc.code, "code": kind}
        if args.json:
            sys.stdout.write(reports.dumps(payload))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        if args.json:
            sys.stdout.write(reports.dumps(
                {"error": str(exc), "exit": 1, "code": "input-error"}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
