"""Command-line interface.

Exit codes: 0 success, 2 input or parse error, 3 inconsistent knowledge
base, 4 internal invariant breach (including KM postulate violations).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    EmptyUniverse,
    FormulaSyntaxError,
    InconsistentDefaults,
    InconsistentStrict,
    KbSyntaxError,
    ReasoningError,
    UniverseTooLarge,
    UnknownAtom,
)
from .humor import Statement, analyze, analyze_cascade
from .kbio import KbDocument, load_kb, render_report, report_dict
from .logic import models_of_all, render
from .orders import OrderMethod, build_order, check_km_postulates

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
EXIT_INTERNAL = 4


def _order(value: str) -> OrderMethod:
    try:
        return OrderMethod.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="punchline",
        description="Belief-revision analysis of jokes over a knowledge base of strict and default rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, order: bool = True, fmt: bool = True) -> None:
        p.add_argument("--kb", required=True, help="knowledge base file")
        if order:
            p.add_argument(
                "--order", type=_order, default=OrderMethod.LEX,
                help="plausibility order: bo (best-out) or lex (default: lex)",
            )
        if fmt:
            p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("analyze", help="analyze one statement (context, punchline)")
    common(p)
    p.add_argument("--context", required=True)
    p.add_argument("--punchline", required=True)

    p = sub.add_parser("cascade", help="analyze a story told in successive parts")
    common(p)
    p.add_argument("--part", action="append", required=True, help="repeat for each part, in telling order")

    p = sub.add_parser("stratify", help="print default strata and the layers of the possibility distribution")
    common(p, order=False)

    p = sub.add_parser("models", help="models of P plus a formula, and its preferred models under both orders")
    common(p, order=False)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("check-km", help="randomised KM postulate check of the induced revision")
    common(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _emit(data, text: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_analyze(doc: KbDocument, args) -> int:
    doc, (context, punchline) = doc.resolve(args.context, args.punchline)
    result = analyze(doc.kb, Statement(context, punchline), args.order)
    print(render_report(result, args.format, doc.kb))
    return EXIT_OK


def cmd_cascade(doc: KbDocument, args) -> int:
    if len(args.part) < 2:
        print("error: a cascade needs at least two --part options", file=sys.stderr)
        return EXIT_INPUT
    doc, parts = doc.resolve(*args.part)
    steps = analyze_cascade(doc.kb, parts, args.order)
    if args.format == "json":
        print(json.dumps([report_dict(s) for s in steps], indent=2, ensure_ascii=False))
    else:
        blocks = [f"step {k}:\n{render_report(s, 'text', doc.kb)}" for k, s in enumerate(steps, 1)]
        print("\n\n".join(blocks))
    return EXIT_OK


def cmd_stratify(doc: KbDocument, args) -> int:
    kb = doc.kb
    strat = kb.stratification
    dist = kb.distribution
    strata = [[str(kb.defaults[i]) for i in stratum] for stratum in strat.strata]
    layers = [{"level": f"{lv}/{dist.top}", "models": dist.layer(lv).render()} for lv in range(dist.top, 0, -1)]
    data = {
        "atoms": list(kb.universe.atoms),
        "strict": [str(r) for r in kb.strict],
        "strata": strata,
        "layers": layers,
        "impossible": dist.impossible().render(),
    }
    lines = [f"atoms: {' '.join(kb.universe.atoms)}", f"strict (priority {strat.strict_priority}): "
             + ("; ".join(data["strict"]) or "none")]
    for rank in reversed(range(strat.count)):
        lines.append(f"stratum {rank} (priority {rank + 1}): " + "; ".join(strata[rank]))
    for layer in layers:
        lines.append(f"pi = {layer['level']}: " + ", ".join(layer["models"]))
    lines.append("pi = 0: " + (", ".join(data["impossible"]) or "none"))
    _emit(data, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_models(doc: KbDocument, args) -> int:
    doc, (phi,) = doc.resolve(args.formula)
    kb = doc.kb
    mods = models_of_all([r.formula for r in kb.strict] + [phi], kb.universe)
    data = {
        "formula": render(phi),
        "models": mods.render(),
        "preferred": {m.value: build_order(kb, m).min_models(phi).render() for m in OrderMethod},
    }
    lines = [f"Mod(P ∪ {{{render(phi)}}}): " + (", ".join(data["models"]) or "∅")]
    for name, ms in data["preferred"].items():
        lines.append(f"preferred ({name}): " + (", ".join(ms) or "∅"))
    _emit(data, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_check_km(doc: KbDocument, args) -> int:
    report = check_km_postulates(doc.kb, args.order, args.trials, args.seed)
    data = {
        "method": report.method.value,
        "trials": report.trials,
        "seed": report.seed,
        "checked": report.checked,
        "violations": [vars(v) for v in report.violations],
        "ok": report.ok,
    }
    _emit(data, report.summary(), args.format)
    return EXIT_OK if report.ok else EXIT_INTERNAL


COMMANDS = {
    "analyze": cmd_analyze,
    "cascade": cmd_cascade,
    "stratify": cmd_stratify,
    "models": cmd_models,
    "check-km": cmd_check_km,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_kb(args.kb)
        return COMMANDS[args.command](doc, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KbSyntaxError, FormulaSyntaxError, UnknownAtom, UniverseTooLarge, EmptyUniverse, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InconsistentStrict, InconsistentDefaults) as exc:
        print(f"error: inconsistent knowledge base: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ReasoningError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
