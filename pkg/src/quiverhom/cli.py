"""Command-line front door: quiver files in, structured verdicts out.

Commands: gate, ext, asreg, nakayama, cy, localcoh, verify.  Negative
mathematical verdicts (not AS-regular, not CY) are successful runs and exit
zero; nonzero exits are reserved for computation failures:

    2  parse error (reported with line numbers)
    3  growth-gate rejection without --force
    4  stabilization / truncation failure (the report names the smallest
       parameter change expected to fix it)

JSON reports carry a schema version and are byte-identical for identical
inputs and seed, apart from the timings block.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .exactlin import Field, Matrix
from .homology import (
    StabilizationError,
    duality_roundtrip_fd,
    duality_roundtrip_injective,
    ext_comodule_C,
    ext_fd,
    ext_vs_algebra,
    hom_into_C,
    local_cohomology,
    rational_part,
)
from .pathcoalg import AlgElement, PathCoalgebra, TruncatedDualAlgebra, bigraded_dims
from .quiver import QuiverParseError, growth_gate, parse_quiver
from .regularity import (
    NotASRegularError,
    as_regular_check,
    chi_probe,
    cy_check,
    dualizing_report,
    nakayama,
)
from .repmod import (
    Rep,
    euler_pairing,
    hom_dim,
    linear_dual,
    presentation_of_rep,
    random_graded_rep,
    rep_from_matrices,
    simple,
    truncated_injective,
    truncated_free_rep,
    uniserial,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GATE = 3
EXIT_STABILIZATION = 4


class CliError(RuntimeError):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_rep_literal(text: str, quiver, fld: Field) -> Rep:
    """Parse the small Rep text format: side line, dims line, one matrix
    block per arrow introduced by 'arrow <label>:'.  Entries are integers or
    fractions p/q."""
    from fractions import Fraction

    side = "left"
    dims = None
    blocks = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("side:"):
            side = line.split(":", 1)[1].strip()
            continue
        if line.startswith("dims:"):
            dims = [int(x) for x in line.split(":", 1)[1].split()]
            continue
        if line.startswith("arrow"):
            label = line.split(None, 1)[1].rstrip(":").strip()
            matches = [i for i, a in enumerate(quiver.arrows) if a.label == label]
            if not matches:
                raise CliError(f"rep literal line {lineno}: unknown arrow {label!r}", EXIT_PARSE)
            current = matches[0]
            blocks[current] = []
            continue
        if current is None:
            raise CliError(f"rep literal line {lineno}: matrix row outside arrow block", EXIT_PARSE)
        blocks[current].append([Fraction(tok) for tok in line.split()])
    if dims is None:
        raise CliError("rep literal: missing dims line", EXIT_PARSE)
    from .repmod import arrow_ends

    maps = []
    for ai, a in enumerate(quiver.arrows):
        dom, cod = arrow_ends(side, a)
        rows = blocks.get(ai, [])
        if not rows:
            maps.append(Matrix.zeros(fld, dims[cod], dims[dom]))
        else:
            maps.append(Matrix(fld, rows, cols=dims[dom]))
    return rep_from_matrices(quiver, dims, maps, side, fld)


def resolve_rep_spec(spec: str, quiver, trunc: int, fld: Field) -> Rep:
    """Object specs: simple:<v>, injective:<v>[:<N>], free:<v>[:<N>],
    uniserial:<v>:<len>, rep:<file>."""
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "simple":
            return simple(quiver, int(parts[1]) - 1, "left", fld)
        if kind == "injective":
            n = int(parts[2]) if len(parts) > 2 else min(3, trunc)
            return truncated_injective(quiver, int(parts[1]) - 1, n, "right", fld)
        if kind == "free":
            n = int(parts[2]) if len(parts) > 2 else min(3, trunc)
            return truncated_free_rep(quiver, int(parts[1]) - 1, n, "left", fld)
        if kind == "uniserial":
            return uniserial(quiver, int(parts[1]) - 1, int(parts[2]), "left", fld)
        if kind == "rep":
            with open(parts[1], encoding="utf-8") as fh:
                return parse_rep_literal(fh.read(), quiver, fld)
    except (IndexError, ValueError, OSError) as exc:
        raise CliError(f"bad object spec {spec!r}: {exc}", EXIT_PARSE) from None
    raise CliError(f"unknown object spec {spec!r}", EXIT_PARSE)


def _base_report(args, command: str) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": {
            "quiver": args.quiver,
            "trunc": args.trunc,
            "mmax": args.mmax,
            "field": args.field,
            "seed": args.seed,
            "force": bool(args.force),
        },
    }


def _load(args):
    try:
        with open(args.quiver, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read quiver file: {exc}", EXIT_PARSE) from None
    try:
        quiver, file_field = parse_quiver(text)
    except QuiverParseError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    fld = Field.parse(args.field) if args.field else file_field
    return quiver, fld


def _gate(quiver, args):
    verdict = growth_gate(quiver)
    if not verdict.bounded and not args.force:
        witness = verdict.describe()
        raise CliError(
            "growth gate rejected the quiver (pass --force for "
            f"finite-dimensional-only computations); witness: {witness['witness']['kind']}",
            EXIT_GATE,
        )
    return verdict


def cmd_gate(args) -> tuple:
    quiver, fld = _load(args)
    verdict = growth_gate(quiver)
    report = _base_report(args, "gate")
    desc = verdict.describe()
    if not verdict.bounded:
        w = desc["witness"]
        desc["witness"] = {
            "kind": w["kind"],
            "vertex_pair": [v + 1 for v in w["vertex_pair"]],
            "path_length": w["paths"][0].length,
            "paths": [
                {"source": p.source + 1, "target": p.target + 1,
                 "arrows": [quiver.arrows[ai].label for ai in p.arrows]}
                for p in w["paths"]
            ],
        }
    report["verdicts"] = {"growth": desc}
    code = EXIT_OK if verdict.bounded or args.force else EXIT_GATE
    return report, code


def cmd_ext(args) -> tuple:
    quiver, fld = _load(args)
    report = _base_report(args, "ext")
    report["config"]["module"] = args.module
    report["config"]["target"] = args.target
    report["config"]["degree"] = args.deg
    degrees = [args.deg] if args.deg is not None else [0, 1]
    results = {}
    if args.module == "C":
        _gate(quiver, args)
        if not args.target.startswith("simple:"):
            raise CliError("ext with module C needs target simple:<v>", EXIT_PARSE)
        try:
            j = int(args.target.split(":")[1]) - 1
        except (IndexError, ValueError) as exc:
            raise CliError(f"bad target spec {args.target!r}: {exc}", EXIT_PARSE) from None
        for i in degrees:
            results[str(i)] = ext_comodule_C(quiver, j, i, args.trunc, fld).describe()
    elif args.target == "A":
        _gate(quiver, args)
        m = resolve_rep_spec(args.module, quiver, args.trunc, fld)
        for i in degrees:
            results[str(i)] = ext_vs_algebra(m, i, args.trunc).describe()
    else:
        m = resolve_rep_spec(args.module, quiver, args.trunc, fld)
        n = resolve_rep_spec(args.target, quiver, args.trunc, fld)
        for i in degrees:
            results[str(i)] = ext_fd(m, n, i).describe()
    report["tables"] = {"ext": results}
    return report, EXIT_OK


def cmd_asreg(args) -> tuple:
    quiver, fld = _load(args)
    _gate(quiver, args)
    report = _base_report(args, "asreg")
    verdict = as_regular_check(quiver, args.trunc, fld)
    report["verdicts"] = {"as_regular": verdict.as_regular,
                          "gldim": verdict.gldim,
                          "sides_agree": verdict.sides_agree}
    report["tables"] = {"ext": verdict.describe()["tables"],
                        "failures": verdict.failures,
                        "chi_probe": chi_probe(quiver, args.trunc, fld)}
    report["field"] = fld.describe()
    return report, EXIT_OK


def cmd_nakayama(args) -> tuple:
    quiver, fld = _load(args)
    _gate(quiver, args)
    report = _base_report(args, "nakayama")
    try:
        nak = nakayama(quiver, args.trunc, args.mmax, fld)
    except NotASRegularError as exc:
        report["verdicts"] = {"applicable": False, "reason": str(exc),
                              "witness": exc.witness}
        return report, EXIT_OK
    report["verdicts"] = {"applicable": True, "inner": nak.inner}
    report["tables"] = {"nakayama": nak.describe(),
                        "dualizing": dualizing_report(quiver, args.trunc, args.mmax, fld)}
    return report, EXIT_OK


def cmd_cy(args) -> tuple:
    quiver, fld = _load(args)
    _gate(quiver, args)
    report = _base_report(args, "cy")
    if args.family:
        family = [resolve_rep_spec(s.strip(), quiver, args.trunc, fld)
                  for s in args.family.split(",")]
    else:
        family = [simple(quiver, v, "left", fld) for v in quiver.vertices]
        family += [truncated_free_rep(quiver, v, 2, "left", fld) for v in quiver.vertices]
    report["config"]["family"] = args.family or "default (simples + small frees)"
    try:
        result = cy_check(quiver, family, args.trunc, args.mmax, fld)
    except NotASRegularError as exc:
        report["verdicts"] = {"applicable": False, "reason": str(exc),
                              "witness": exc.witness}
        return report, EXIT_OK
    report["verdicts"] = {"cy": result["cy"], "verdict": result["verdict"]}
    report["tables"] = {"cy": result}
    return report, EXIT_OK


def cmd_localcoh(args) -> tuple:
    quiver, fld = _load(args)
    _gate(quiver, args)
    report = _base_report(args, "localcoh")
    i = args.index if args.index is not None else (0 if not quiver.arrows else 1)
    report["config"]["index"] = i
    lc = local_cohomology(quiver, i, args.mmax, args.trunc, fld)
    report["tables"] = {"local_cohomology": lc.describe(),
                        "coalgebra_bigraded": bigraded_dims(quiver, lc.max_degree).describe()}
    report["verdicts"] = {"matches_twisted_coalgebra": lc.twist_sigma is not None}
    return report, EXIT_OK


def cmd_verify(args) -> tuple:
    quiver, fld = _load(args)
    _gate(quiver, args)
    report = _base_report(args, "verify")
    rng = random.Random(args.seed)
    cases = args.cases
    suite = {}

    # coalgebra laws
    coalg = PathCoalgebra(quiver, min(args.trunc, 6), fld)
    law_fail = 0
    for p in coalg.basis():
        splits = coalg.comultiply(p)
        lefts = [p2 for p2, p1 in splits if p1.length == 0]
        rights = [p1 for p2, p1 in splits if p2.length == 0]
        if lefts != [p] or rights != [p] or len(splits) != p.length + 1:
            law_fail += 1
        one = sorted(
            ((q2, q1, p1) for p2, p1 in splits for q2, q1 in coalg.comultiply(p2)), key=repr)
        two = sorted(
            ((p2, q2, q1) for p2, p1 in splits for q2, q1 in coalg.comultiply(p1)), key=repr)
        if one != two:
            law_fail += 1
    suite["coalgebra_laws"] = {"cases": len(coalg.basis()), "failures": law_fail}

    # convolution associativity on random triples
    alg = TruncatedDualAlgebra(quiver, min(args.trunc, 5), fld)
    basis = alg.coalgebra.basis()
    conv_fail = 0
    for _ in range(cases):
        f, g, h = (
            AlgElement(fld, {p: rng.randint(-2, 2)
                             for p in rng.sample(basis, min(3, len(basis)))})
            for _ in range(3)
        )
        if alg.convolve(alg.convolve(f, g), h) != alg.convolve(f, alg.convolve(g, h)):
            conv_fail += 1
    suite["convolution_associativity"] = {"cases": cases, "failures": conv_fail}

    # Euler form and duality involution on random pairs
    euler_fail = 0
    dual_fail = 0
    for _ in range(cases):
        m = random_graded_rep(quiver, rng, "left", fld)
        n = random_graded_rep(quiver, rng, "left", fld)
        d_hom = hom_dim(m, n)
        d_ext = ext_fd(m, n, 1).total_dim
        if d_hom - d_ext != euler_pairing(m, n):
            euler_fail += 1
        if d_hom != hom_dim(linear_dual(n), linear_dual(m)):
            dual_fail += 1
    suite["euler_form"] = {"cases": cases, "failures": euler_fail}
    suite["duality_involution"] = {"cases": cases, "failures": dual_fail}

    # double-dual roundtrip of single-term complexes
    roundtrip_fail = 0
    for _ in range(max(4, cases // 8)):
        m = random_graded_rep(quiver, rng, "left", fld)
        if not duality_roundtrip_fd(m)["passes"]:
            roundtrip_fail += 1
    suite["double_dual_roundtrip"] = {"cases": max(4, cases // 8), "failures": roundtrip_fail}

    # injective roundtrips through both one-sided local cohomologies; only
    # meaningful where the twisted-column identification exists
    try:
        inj_fail = 0
        for v in quiver.vertices:
            if not duality_roundtrip_injective(quiver, v, args.mmax, args.trunc, fld)["passes"]:
                inj_fail += 1
        suite["injective_roundtrip"] = {"cases": quiver.vertex_count, "failures": inj_fail}
    except (StabilizationError, ValueError):
        suite["injective_roundtrip"] = {
            "cases": 0, "failures": 0,
            "skipped": "no stabilized twisted column at these parameters",
        }

    # phi check on random graded presentations through degree 6
    phi_fail = 0
    phi_cases = max(3, cases // 10)
    for _ in range(phi_cases):
        m = random_graded_rep(quiver, rng, "left", fld)
        if m.total_dim == 0:
            continue
        pres = presentation_of_rep(m)
        if not hom_into_C(pres, min(args.trunc, 8)).phi_check["passes"]:
            phi_fail += 1
    suite["phi_check"] = {"cases": phi_cases, "failures": phi_fail}

    # torsion-duality identities: dim Ext^n(M, A) = dim Rat(M) at n = gldim,
    # lower degrees unchanged by killing the torsion; a theorem only on
    # regular instances, so skipped (not failed) elsewhere
    regularity = as_regular_check(quiver, args.trunc, fld)
    if regularity.as_regular:
        n_top = regularity.gldim
        cor_fail = 0
        cor_cases = max(3, cases // 10)
        for _ in range(cor_cases):
            m = random_graded_rep(quiver, rng, "left", fld)
            if m.total_dim == 0:
                continue
            e_top = ext_vs_algebra(m, n_top, args.trunc, want_rep=False).total_dim
            rat = rational_part(presentation_of_rep(m), args.trunc).rep.total_dim
            bad = e_top != rat
            if n_top > 0:
                e0 = ext_vs_algebra(m, 0, args.trunc, want_rep=False).total_dim
                if rat == m.total_dim and e0 != 0:
                    bad = True
            if bad:
                cor_fail += 1
        suite["torsion_ext_identities"] = {"cases": cor_cases, "failures": cor_fail}
    else:
        suite["torsion_ext_identities"] = {
            "cases": 0, "failures": 0,
            "skipped": "instance is not AS-regular; identity not asserted",
        }

    # graded finality: a larger truncation must not disturb certified degrees
    final_fail = 0
    small = bigraded_dims(quiver, min(args.trunc, 6))
    large = bigraded_dims(quiver, min(args.trunc, 6) + 3)
    for ell in range(small.up_to + 1):
        if small.matrix(ell) != large.matrix(ell):
            final_fail += 1
    s1 = simple(quiver, 0, "left", fld)
    r_small = ext_vs_algebra(s1, 1, args.trunc, want_rep=False)
    r_large = ext_vs_algebra(s1, 1, args.trunc + 2, want_rep=False)
    if r_small.graded_dims != r_large.graded_dims:
        final_fail += 1
    suite["graded_finality"] = {"cases": small.up_to + 2, "failures": final_fail}

    total_failures = sum(block["failures"] for block in suite.values())
    report["verdicts"] = {"all_passed": total_failures == 0,
                          "total_failures": total_failures}
    report["tables"] = {"suite": suite}
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverhom",
        description="homological invariants of path coalgebras and their completed duals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--quiver", required=True, help="quiver file")
        p.add_argument("--trunc", type=int, default=12, help="truncation degree N")
        p.add_argument("--mmax", type=int, default=None, help="colimit stage bound (default N)")
        p.add_argument("--field", default=None, help="Q or F<p>; overrides the file")
        p.add_argument("--json", action="store_true", help="JSON report on stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
        p.add_argument("--force", action="store_true",
                       help="proceed past a gate rejection (finite-dimensional work only)")

    p = sub.add_parser("gate", help="growth gate verdict")
    common(p)
    p = sub.add_parser("ext", help="Ext computations")
    common(p)
    p.add_argument("--module", required=True, help="C | simple:v | injective:v[:N] | free:v[:N] | uniserial:v:len | rep:file")
    p.add_argument("--target", required=True, help="A | simple:v | ... (object specs)")
    p.add_argument("--deg", type=int, default=None, help="cohomological degree (default: 0 and 1)")
    p = sub.add_parser("asreg", help="AS-regularity verdict with chi probes")
    common(p)
    p = sub.add_parser("nakayama", help="Nakayama twist, innerness, dualizing complex")
    common(p)
    p = sub.add_parser("cy", help="Serre identities and Calabi-Yau verdict")
    common(p)
    p.add_argument("--family", default=None, help="comma-separated object specs")
    p = sub.add_parser("localcoh", help="local cohomology bigraded dims")
    common(p)
    p.add_argument("--index", type=int, default=None, help="cohomological index (default gldim)")
    p = sub.add_parser("verify", help="full invariant suite")
    common(p)
    p.add_argument("--cases", type=int, default=48, help="random cases per property")
    return parser


COMMANDS = {
    "gate": cmd_gate,
    "ext": cmd_ext,
    "asreg": cmd_asreg,
    "nakayama": cmd_nakayama,
    "cy": cmd_cy,
    "localcoh": cmd_localcoh,
    "verify": cmd_verify,
}


def _render_text(report: dict, stream) -> None:
    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for key, val in obj.items():
                if isinstance(val, (dict, list)) and val:
                    stream.write(f"{pad}{key}:\n")
                    walk(val, indent + 1)
                else:
                    stream.write(f"{pad}{key}: {val}\n")
        elif isinstance(obj, list):
            for item in obj:
                if isinstance(item, (dict, list)):
                    stream.write(f"{pad}-\n")
                    walk(item, indent + 1)
                else:
                    stream.write(f"{pad}- {item}\n")

    stream.write(f"== quiverhom {report['command']} ==\n")
    walk({k: v for k, v in report.items() if k not in ("schema", "command")})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trunc < 1:
        parser.error("--trunc must be at least 1")
    if args.mmax is None:
        args.mmax = args.trunc
    if args.mmax > args.trunc + 1:
        parser.error("--mmax must be at most --trunc + 1")
    started = time.perf_counter()
    try:
        report, code = COMMANDS[args.command](args)
    except CliError as exc:
        report = {"schema": SCHEMA_VERSION, "command": args.command,
                  "error": str(exc)}
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except StabilizationError as exc:
        report = {"schema": SCHEMA_VERSION, "command": args.command,
                  "error": str(exc), "suggestion": exc.suggestion}
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_STABILIZATION
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    report["timings"] = {"total_ms": elapsed_ms}
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        _render_text(report, sys.stdout)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
