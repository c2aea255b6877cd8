"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (unstratifiable, false, axiom
fails, witness not produced or not validated, EXHAUSTED), 2 errors.
``--format lines`` prints one tab-separated ``key=value`` record per line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .boffa import ARITY, PI_VARIANTS, format_trace, render, run_witness, transposition_example
from .errors import NFBenchError, RecipeError
from .formula import FIN_SF, AxiomId, RelSym, parse_formula, print_formula, recode_translate
from .hfset import ack_decode, hf_text, parse_hf
from .search import AxiomRequest, SearchSpec, cantor_check, find_model
from .stratification import StratFailure, stratify
from .structure import check_axiom, check_extensionality, eval_formula, load_structure

OK, NEGATIVE, ERROR = 0, 1, 2


def _record(**fields) -> str:
    return "\t".join(f"{k}={v}" for k, v in fields.items())


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _flavor(text: Optional[str], M=None) -> RelSym:
    if text is not None:
        return RelSym.parse(text)
    if M is not None and M.f_mode == "set":
        return RelSym.MEM_F
    if M is not None and M.f_mode == "element":
        return RelSym.MEM_PRIME
    return RelSym.MEM


# -------------------------------------------------------------- commands

def cmd_stratify(args, out) -> int:
    phi = parse_formula(_read(args.formula))
    result = stratify(phi)
    if isinstance(result, StratFailure):
        if args.format == "lines":
            out.append(_record(verdict="unstratified", offset=result.offset))
            for s in result.steps:
                out.append(_record(atom=print_formula(s.atom), src=s.src, dst=s.dst, delta=s.delta))
        else:
            out.append("not stratified; inconsistent cycle:")
            out.append("  " + result.describe())
        return NEGATIVE
    if args.format == "lines":
        out.append(_record(verdict="stratified"))
        out.extend(_record(var=v, level=t) for v, t in sorted(result.levels.items()))
    else:
        out.append("stratified")
        out.extend(f"  {v}: {t}" for v, t in sorted(result.levels.items()))
    return OK


def cmd_eval(args, out) -> int:
    M = load_structure(_read(args.structure))
    phi = parse_formula(_read(args.formula))
    assignment = {}
    for item in args.assign or []:
        var, sep, ident = item.partition("=")
        if not sep:
            raise NFBenchError(f"--assign expects var=id, got {item!r}")
        assignment[var.strip()] = ident.strip()
    value = eval_formula(M, phi, assignment)
    out.append(_record(verdict=str(value).lower()) if args.format == "lines" else str(value).lower())
    return OK if value else NEGATIVE


def _fmt_tuple(t) -> str:
    return "(" + ",".join(t) + ")"


def cmd_axioms(args, out) -> int:
    M = load_structure(_read(args.structure))
    flavor = _flavor(args.flavor, M)
    reports = [check_axiom(M, aid, flavor) for aid in FIN_SF]
    reports.append(check_extensionality(M, flavor, "sets" if args.ext == "sets" else "all"))
    for r in reports:
        if args.format == "lines":
            fields = dict(axiom=r.axiom.value, flavor=r.flavor.value, verdict=r.verdict)
            if r.axiom is AxiomId.EXTENSIONALITY:
                fields["scope"] = r.scope
                if not r.holds:
                    fields["counterexample"] = _fmt_tuple(r.counterexample)
            elif r.holds:
                fields["witnesses"] = ";".join(f"{_fmt_tuple(t)}->{w}" for t, w in r.witnesses.items())
            else:
                fields["counterexample"] = _fmt_tuple(r.counterexample)
            out.append(_record(**fields))
        else:
            name = r.axiom.value + (f" [{r.scope}]" if r.axiom is AxiomId.EXTENSIONALITY else "")
            line = f"{name:<28} {r.verdict}"
            if not r.holds:
                line += f"  counterexample {_fmt_tuple(r.counterexample)}"
            elif r.witnesses:
                line += "  witnesses " + ", ".join(f"{_fmt_tuple(t)}->{w}" for t, w in r.witnesses.items())
            out.append(line)
    return OK if all(r.holds for r in reports) else NEGATIVE


def cmd_witness(args, out) -> int:
    M = load_structure(_read(args.structure))
    aid = AxiomId.parse(args.axiom)
    if aid not in ARITY:
        raise NFBenchError(f"no witness recipe for {aid.value}")
    inputs = tuple(args.inputs or ())
    if len(inputs) != ARITY[aid]:
        raise NFBenchError(f"{aid.value} takes {ARITY[aid]} input(s), got {len(inputs)}")
    try:
        outcome = run_witness(M, aid, inputs, args.variant)
    except RecipeError as exc:
        for line in format_trace(M, exc.trace):
            label, obj = line.split("\t", 1)
            out.append(_record(step=label, object=obj) if args.format == "lines" else f"{label:<22} {obj}")
        if args.format == "lines":
            out.append(_record(verdict="error", kind=exc.kind, step=exc.step))
        else:
            out.append(f"recipe stopped: {exc}")
        return NEGATIVE
    for line in format_trace(M, outcome.trace):
        label, obj = line.split("\t", 1)
        out.append(_record(step=label, object=obj) if args.format == "lines" else f"{label:<22} {obj}")
    verdict = "validated" if outcome.validated else "not-validated"
    if args.format == "lines":
        out.append(_record(verdict=verdict, witness=outcome.witness, recipe=outcome.recipe))
    else:
        out.append(f"witness {outcome.witness} ({render(M, outcome.witness)}): {verdict}")
    return OK if outcome.validated else NEGATIVE


def cmd_search(args, out) -> int:
    default = RelSym.MEM_F if args.mode == "set" else RelSym.MEM_PRIME
    requests = tuple(
        AxiomRequest.parse(tok, default) for tok in (args.axioms or "").split(",") if tok.strip()
    )
    spec = SearchSpec(
        domain_size=args.size,
        f_mode=args.mode,
        require_injective=args.injective,
        require_total=args.total,
        axioms=requests,
        budget=args.budget,
        randomized=args.random,
        seed=args.seed,
        canonical=args.canonical,
    )
    result = find_model(spec)
    out.append(result.serialize().rstrip("\n"))
    return OK if result.verdict == "FOUND" else NEGATIVE


def cmd_cantor(args, out) -> int:
    report = cantor_check(args.max_n)
    for row in report.rows:
        if args.format == "lines":
            out.append(_record(n=row.n, maps=row.maps, surjections=row.surjections,
                               min_missing=row.min_missing,
                               diagonal_missing=str(row.diagonal_always_missing).lower()))
        else:
            out.append(f"n={row.n}: {row.maps} maps, {row.surjections} surjections, "
                       f"every map misses >= {row.min_missing} subsets")
    return OK if report.no_surjection else NEGATIVE


def cmd_translate(args, out) -> int:
    phi = parse_formula(_read(args.formula))
    psi = recode_translate(phi, RelSym.parse(args.src), RelSym.parse(args.dst), args.guard)
    out.append(print_formula(psi))
    return OK


def cmd_encode(args, out) -> int:
    if args.code is not None:
        out.append(hf_text(ack_decode(args.code)))
    elif args.notation is not None:
        out.append(str(parse_hf(args.notation).code))
    else:
        raise NFBenchError("encode needs HF notation or --code N")
    return OK


def cmd_transposition(args, out) -> int:
    rep = transposition_example(args.n)
    wit = "none" if rep.automorphism_witness is None else \
        "(" + ",".join(hf_text(s) for s in rep.automorphism_witness) + ")"
    if args.format == "lines":
        out.append(_record(n=rep.n, automorphism_witness=wit, j_rejected=str(rep.j_rejected).lower(),
                           pair_sets=rep.pair_sets_checked, downward_mismatches=rep.downward_mismatches,
                           upward_mismatches=rep.upward_mismatches))
    else:
        out.append(f"swap of {{}} and {{{{}}}} on V_{rep.n} is not an automorphism: witness {wit}")
        out.append(f"Upward/Downward checked on {rep.pair_sets_checked} pair-sets: "
                   f"{rep.downward_mismatches} downward, {rep.upward_mismatches} upward mismatches")
    ok = rep.automorphism_witness is not None and rep.agrees
    return OK if ok else NEGATIVE


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "lines"), default="text")

    parser = argparse.ArgumentParser(prog="nfbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stratify", parents=[common], help="type a formula or print a failure cycle")
    p.add_argument("formula")
    p.set_defaults(run=cmd_stratify)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a structure")
    p.add_argument("structure")
    p.add_argument("formula")
    p.add_argument("--assign", action="append", metavar="VAR=ID")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("axioms", parents=[common], help="check the five axioms and extensionality")
    p.add_argument("structure")
    p.add_argument("--flavor", choices=[r.value for r in RelSym if r.is_membership])
    p.add_argument("--ext", choices=("all", "sets"), default="all")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("witness", parents=[common], help="run a witness recipe and print its trace")
    p.add_argument("structure")
    p.add_argument("--axiom", required=True)
    p.add_argument("--inputs", nargs="*", metavar="ID")
    p.add_argument("--variant", choices=PI_VARIANTS, default=PI_VARIANTS[0])
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("search", parents=[common], help="search small structures for a model")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--mode", choices=("set", "element"), default="set")
    p.add_argument("--axioms", default="", help="comma list of NAME[:flavor][@all|@sets]")
    p.add_argument("--injective", action="store_true")
    p.add_argument("--total", action="store_true")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--canonical", action="store_true")
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("cantor", parents=[common], help="no surjection D -> P(D) for small D")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(run=cmd_cantor)

    p = sub.add_parser("translate", parents=[common], help="recode membership and relativize")
    p.add_argument("formula")
    p.add_argument("--from", dest="src", default="mem")
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--guard")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("encode", parents=[common], help="HF notation <-> Ackermann code")
    p.add_argument("notation", nargs="?")
    p.add_argument("--code", type=int)
    p.set_defaults(run=cmd_encode)

    p = sub.add_parser("transposition", parents=[common], help="the {}/{{}} swap on V_n")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(run=cmd_transposition)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    out: list[str] = []
    try:
        code = args.run(args, out)
    except (NFBenchError, OSError, ValueError) as exc:
        for line in out:
            print(line, file=stdout)
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    for line in out:
        print(line, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
