"""Command-line front end: parse, typecheck, reduce, translate and verify.

Exit status: 0 for success and ok-verdicts, 1 for failing verdicts (type
errors, non-confluence, failed simulation or subject reduction,
inconclusive searches), 2 for usage, parse and precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import parse, sequent
from .analysis import (
    STRATEGIES, TRANSLATIONS, Trace, Verdict, check_confluence, check_simulation,
    check_subject_reduction, choose, gen_typed, normalize, reduction_graph,
)
from .analysis.rewriting import Step
from .calculi import CALCULUS_IDS, FRAGMENTS, Redex, Sequent, get_calculus
from .errors import ModalcutError, TypingError
from .syntax.concrete import parse_declarations, parse_raw, parse_type, show
from .syntax.terms import show_type
from .translate import (
    SOURCE_CALCULUS, TARGETS, cm_aux, cm_sequent, embed_cbn, embed_cbv, embed_sequent,
    forget_vc_sequent, forget_vn_sequent, mtr_sequent, translate,
)

COMMANDS = ("check", "step", "normalize", "translate", "graph", "confluence", "simulate",
            "sr", "demo", "gen")

LAFONT = "< mu @a:X. < y | @b > | mt x:X. < z | @b > >"
LAFONT_ENV = ("y:X, z:X", "@b:X")


class UsageError(ModalcutError):
    pass


# ---------------------------------------------------------------- argument parsing

def _default_seed() -> int:
    raw = os.environ.get("MODALCUT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MODALCUT_SEED must be an integer, got {raw!r}") from None


def _path(text: str) -> tuple[int, ...]:
    text = text.strip().strip("[]")
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad path {text!r}; use e.g. 0,1") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--calculus", "-c", choices=CALCULUS_IDS, default="lmmt")
    common.add_argument("--fragment", choices=FRAGMENTS, default="full",
                        help="lmmt fragment (full, cbn, cbv)")
    common.add_argument("--restricted", action="store_true",
                        help="restricted lm-M (first-order monadic codomains)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $MODALCUT_SEED or 0)")

    expr = argparse.ArgumentParser(add_help=False)
    expr.add_argument("input", nargs="?", default="-",
                      help="file holding the expression ('-' or omitted: stdin)")
    expr.add_argument("--expr", "-e", help="expression given inline instead of a file")
    expr.add_argument("--gamma", default="", help="variable declarations, e.g. '%%v:X, #p:M Y'")
    expr.add_argument("--delta", default="", help="co-variable declarations, e.g. '@a:X'")
    expr.add_argument("--type", dest="type_", default=None, help="type of the subject")

    bound = argparse.ArgumentParser(add_help=False)
    bound.add_argument("--bound", type=int, default=10_000, help="node bound")

    redex = argparse.ArgumentParser(add_help=False)
    redex.add_argument("--rule", help="rule of the redex to contract")
    redex.add_argument("--path", type=_path, default=None, help="position, e.g. 0,1")
    redex.add_argument("--strategy", choices=STRATEGIES, default="leftmost-outermost")

    p = argparse.ArgumentParser(prog="modalcut", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("check", parents=[common, expr], help="typecheck and print the derivation")
    sub.add_parser("step", parents=[common, expr, redex], help="contract one redex")
    s = sub.add_parser("normalize", parents=[common, expr], help="reduce to normal form")
    s.add_argument("--strategy", choices=STRATEGIES, default="leftmost-outermost")
    s.add_argument("--fuel", type=int, default=1000)
    s = sub.add_parser("translate", parents=[common, expr], help="translate to another calculus")
    s.add_argument("--to", required=True, choices=TARGETS)
    s.add_argument("--emit-type", action="store_true",
                   help="print the image sequent (needs a typed subject)")
    s.add_argument("--aux", action="store_true", help="cm: use the sparing variant on computations")
    sub.add_parser("graph", parents=[common, expr, bound], help="bounded reduction graph")
    sub.add_parser("confluence", parents=[common, expr, bound], help="confluence verdict")
    s = sub.add_parser("simulate", parents=[common, expr, redex, bound],
                       help="strict simulation of one step")
    s.add_argument("--to", required=True, choices=TRANSLATIONS + ("monadic",))
    s.add_argument("--fuel", type=int, default=50)
    sub.add_parser("sr", parents=[common, expr, bound], help="subject-reduction verdict")
    s = sub.add_parser("demo", parents=[common], help="canned demonstrations")
    s.add_argument("name", choices=("lafont",))
    s = sub.add_parser("gen", parents=[common], help="random well-typed expression")
    s.add_argument("--budget", type=int, default=8)
    s.add_argument("--kind", default=None, help="force the subject class")
    return p


# ---------------------------------------------------------------- helpers

class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def text(self, line: str) -> None:
        if not self.as_json:
            self.lines.append(line)

    def data(self, obj) -> None:
        if self.as_json:
            self.lines.append(json.dumps(obj, indent=2))


def _read(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.input == "-":
        return sys.stdin.read()
    with open(args.input, encoding="utf-8") as fh:
        return fh.read()


def _calculus(args):
    return get_calculus(args.calculus, args.fragment, args.restricted)


def _load(args) -> Sequent:
    e = parse(_read(args), args.calculus)
    ty = parse_type(args.type_) if args.type_ else None
    return sequent(args.calculus, e, parse_declarations(args.gamma),
                   parse_declarations(args.delta), ty)


def _typed(args) -> bool:
    return bool(args.gamma or args.delta or args.type_)


def _pick(calc, e, args) -> Redex:
    rs = calc.redexes(e)
    if args.rule is not None or args.path is not None:
        hits = [r for r in rs if (args.rule is None or r.rule == args.rule)
                and (args.path is None or r.path == args.path)]
        if not hits:
            raise UsageError("no such redex; available: "
                             + ", ".join(f"{r.rule}@{list(r.path)}" for r in rs))
        return hits[0]
    if not rs:
        raise UsageError("expression is in normal form")
    return choose(calc, rs, args.strategy, random.Random(args.seed))


def _verdict(out: Output, v: Verdict) -> int:
    out.text(v.render())
    out.data(v.to_json())
    return 0 if v.ok else 1


# ---------------------------------------------------------------- commands

def cmd_check(args, out: Output) -> int:
    seq = _load(args)
    calc = _calculus(args)
    try:
        d = calc.typecheck(seq)
    except TypingError as exc:
        out.text(f"type error: {exc}")
        out.data({"ok": False, "error": str(exc)})
        return 1
    out.text(d.render())
    out.data({"ok": True, "judgement": d.judgement, "rules": d.rules,
              "derivation": d.render(), "class": calc.classify(seq.subject)})
    return 0


def cmd_step(args, out: Output) -> int:
    seq = _load(args)
    calc = _calculus(args)
    env = seq.env if _typed(args) else None
    trace = Trace(calc.name, seq.subject)
    if calc.redexes(seq.subject) or args.rule or args.path is not None:
        r = _pick(calc, seq.subject, args)
        trace.steps.append(Step(r.rule, r.path, calc.step(seq.subject, r, env=env)))
    else:
        out.text("(normal form)")
    out.text(trace.render())
    out.data(trace.to_json())
    return 0


def cmd_normalize(args, out: Output) -> int:
    seq = _load(args)
    calc = _calculus(args)
    env = seq.env if _typed(args) else None
    trace = normalize(calc, seq.subject, args.strategy, args.fuel, args.seed, env=env)
    out.text(trace.render())
    out.data(trace.to_json())
    return 0


def _image_sequent(seq: Sequent, target: str, aux: bool) -> Sequent:
    match target:
        case "monadic":
            return mtr_sequent(seq)
        case "cm":
            return cm_sequent(seq, aux=aux)
        case "cps":
            return cm_sequent(mtr_sequent(seq))
        case "forget-vn":
            return forget_vn_sequent(seq)
        case "forget-vc":
            return forget_vc_sequent(seq)
        case "embed-cbn":
            return embed_sequent(seq, "cbn")
        case "embed-cbv":
            return embed_sequent(seq, "cbv")
    raise UsageError(f"unknown target {target!r}")


def cmd_translate(args, out: Output) -> int:
    if SOURCE_CALCULUS[args.to] != args.calculus:
        raise UsageError(f"{args.to} translates from {SOURCE_CALCULUS[args.to]}, "
                         f"not {args.calculus}")
    seq = _load(args)
    if args.emit_type:
        get_calculus(args.calculus).typecheck(seq)
        image = _image_sequent(seq, args.to, args.aux)
        out.text(str(image))
        out.data({"target": args.to, "result": show(image.subject), "kind": image.kind,
                  "type": None if image.type is None else show_type(image.type),
                  "sequent": str(image)})
        return 0
    if args.aux:
        res = cm_aux(seq.subject).result
        kind = "value"
    else:
        o = translate(seq.subject, args.to, env=seq.env if _typed(args) else None)
        res, kind = o.result, o.kind
    out.text(show(res))
    out.data({"target": args.to, "result": show(res), "kind": kind})
    return 0


def cmd_graph(args, out: Output) -> int:
    seq = _load(args)
    g = reduction_graph(_calculus(args), seq.subject, args.bound)
    out.text(f"nodes: {len(g.nodes)}, edges: {len(g.edges)}, exhausted: {g.exhausted}")
    for i, n in enumerate(g.nodes):
        out.text(f"  [{i}] {show(n)}")
    for ed in g.edges:
        out.text(f"  {ed.source} -> {ed.target}  {ed.rule} @ {list(ed.path)}")
    out.text("normal forms:")
    for i in g.normal_forms:
        out.text(f"  {show(g.nodes[i])}")
    out.data(g.to_json())
    return 0


def cmd_confluence(args, out: Output) -> int:
    seq = _load(args)
    return _verdict(out, check_confluence(_calculus(args), seq.subject, args.bound))


def cmd_simulate(args, out: Output) -> int:
    seq = _load(args)
    calc = _calculus(args)
    r = _pick(calc, seq.subject, args)
    to = "mtr" if args.to == "monadic" else args.to
    return _verdict(out, check_simulation(calc, seq.subject, r, to, args.fuel, args.bound))


def cmd_sr(args, out: Output) -> int:
    seq = _load(args)
    return _verdict(out, check_subject_reduction(_calculus(args), seq, args.bound))


def lafont_report() -> tuple[list[tuple[str, Verdict]], bool]:
    """Confluence verdicts for the Lafont command in full lmmt, in both
    fragments and under both embeddings into lmmt-vn."""
    e = parse_raw(LAFONT, "lmmt")
    gamma, delta = (parse_declarations(s) for s in LAFONT_ENV)
    get_calculus("lmmt").typecheck(Sequent(gamma, delta, e, "command"))
    runs = [
        ("lmmt (full)", get_calculus("lmmt"), e),
        ("lmmt (cbn)", get_calculus("lmmt", "cbn"), e),
        ("lmmt (cbv)", get_calculus("lmmt", "cbv"), e),
        ("lmmt-vn (cbn embedding)", get_calculus("lmmt-vn"), embed_cbn(e)),
        ("lmmt-vn (cbv embedding)", get_calculus("lmmt-vn"), embed_cbv(e)),
    ]
    report = [(label, check_confluence(calc, x, 100)) for label, calc, x in runs]
    expected = ["non-confluent"] + ["confluent"] * 4
    as_expected = [v.kind for _, v in report] == expected
    return report, as_expected


def cmd_demo(args, out: Output) -> int:
    report, ok = lafont_report()
    out.text(f"Lafont command: {LAFONT}")
    out.text(f"  with {LAFONT_ENV[0]} | {LAFONT_ENV[1]}")
    blob = []
    for label, v in report:
        nfs = [show(t.final) for t in v.witness] if v.witness else []
        out.text(f"\n== {label}: {v.kind}; normal forms: {', '.join(nfs)}")
        out.text(v.render())
        blob.append({"setting": label, **v.to_json(), "normal_forms": nfs})
    out.data({"demo": "lafont", "expression": LAFONT, "results": blob, "as_expected": ok})
    return 0 if ok else 1


def cmd_gen(args, out: Output) -> int:
    if args.budget < 1:
        raise UsageError("--budget must be at least 1")
    seq = gen_typed(args.calculus, args.budget, args.seed, args.kind)
    out.text(str(seq))
    out.data({
        "calculus": args.calculus, "seed": args.seed, "kind": seq.kind,
        "subject": show(seq.subject),
        "gamma": {str(x): show_type(t) for x, t in seq.gamma.items()},
        "delta": {str(a): show_type(t) for a, t in seq.delta.items()},
        "type": None if seq.type is None else show_type(seq.type),
    })
    return 0


HANDLERS = {
    "check": cmd_check, "step": cmd_step, "normalize": cmd_normalize,
    "translate": cmd_translate, "graph": cmd_graph, "confluence": cmd_confluence,
    "simulate": cmd_simulate, "sr": cmd_sr, "demo": cmd_demo, "gen": cmd_gen,
}


def run(argv: list[str]) -> tuple[int, str]:
    """Run one invocation; return the exit status and the printed output."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), ""
    try:
        if args.seed is None:
            args.seed = _default_seed()
        out = Output(args.json)
        code = HANDLERS[args.command](args, out)
        return code, "\n".join(out.lines)
    except (ModalcutError, ValueError, OSError) as exc:
        return 2, f"error: {exc}"


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        stream = sys.stderr if code == 2 and text.startswith("error:") else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
