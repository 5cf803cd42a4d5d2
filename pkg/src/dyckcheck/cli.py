"""Command-line front end.

Every command prints a report of ``key: value`` lines (or one JSON object
with ``--json``) and exits with

    0  positive verdict (WF, Balanced, nonnegative; also BalancedUpToDepth)
    1  negative verdict (NotWF, NotBalanced, negative)
    2  input could not be parsed
    3  a resource limit was hit
    4  internal invariant breach, e.g. an ``--oracle`` mismatch (a bug)
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

from . import oracles
from .brackets import WordSyntaxError, format_word, height, involute, is_nonnegative, is_wf, is_wwf, parse_word, reduce
from .grammar import GrammarError, load_grammar, normalize, prefix_grammar
from .slp import DEFAULT_CAP
from .summary import sig_of_finite, tsn
from .transducer import TransducerError, decide_balanced_2ltw, load_transducer, output_cfg
from .ulp import TOP, Finite, format_elem, lcs_set, parse_elem
from .wellformed import (
    BALANCED,
    NOT_WF,
    RESOURCE_LIMIT,
    WF,
    check_nonnegative,
    decide_balanced_cfg,
    decide_well_formed,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_RESOURCE, EXIT_BUG = 0, 1, 2, 3, 4


class Report:
    def __init__(self):
        self.items: Dict[str, object] = {}
        self.exit = EXIT_OK

    def __setitem__(self, key, value):
        self.items[key] = value

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.items, indent=2, default=str)
        lines = []
        for key, value in self.items.items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, (list, tuple)):
                value = ", ".join(str(v) for v in value)
            lines.append(f"{key}: {value}")
        return "\n".join(lines)


def oracle_form(x):
    """A suffix value in the oracle's tuple encoding."""
    if x is TOP:
        return ("top",)
    if isinstance(x, Finite):
        return ("finite", x.word)
    if x.core:
        return ("ulp", x.period, x.core)
    return ("omega", x.period)


def _words(texts: List[str]):
    return [tuple(a.name for a in parse_word(t)) for t in texts]


def _limits(args) -> Dict[str, object]:
    return {"max_height": args.max_height, "max_word_len": args.max_word_len, "cap": args.cap}


def _oracle_height(args, g) -> int:
    return args.height if args.height is not None else 4 * g.size + 2


def _cmd_reduce(args, rep: Report):
    w = parse_word(args.word)
    r = reduce(w)
    rep["result"] = format_word(r)
    rep["height"] = height(w)
    rep["nonnegative"] = is_nonnegative(w)
    rep["wwf"] = is_wwf(w)
    rep["wf"] = is_wf(w)
    if args.oracle and oracles.naive_reduce(w) != r:
        rep["oracle"] = "mismatch: " + " ".join(str(a) for a in oracles.naive_reduce(w))
        rep.exit = EXIT_BUG


def _cmd_hd(args, rep: Report):
    rep["result"] = height(parse_word(args.word))


def _cmd_invert(args, rep: Report):
    rep["result"] = format_word(involute(parse_word(args.word)))


def _cmd_lcs(args, rep: Report):
    rep["result"] = format_elem(lcs_set(parse_elem(t) for t in args.elems))


def _cmd_sig(args, rep: Report):
    words = _words(args.words)
    s = sig_of_finite(words)
    rep["lcs"] = format_elem(s.lcs)
    rep["lcsext"] = format_elem(s.ext)
    rep["tsn"] = [" ".join(w) or "_" for w in sorted(tsn(words), key=lambda w: (len(w), w))]
    if args.oracle:
        expected = oracles.naive_sig(words)
        ok = expected == (oracle_form(s.lcs), oracle_form(s.ext))
        rep["oracle"] = "agree" if ok else f"mismatch: {expected}"
        if not ok:
            rep.exit = EXIT_BUG


def _cmd_nonneg(args, rep: Report):
    g = normalize(load_grammar(args.grammar))
    if g.is_empty():
        rep["verdict"] = "nonnegative"
        rep["reason"] = "empty language"
        return
    gp, pname = prefix_grammar(g)
    res = check_nonnegative(gp.with_axiom(pname[g.axiom]))
    rep["verdict"] = "nonnegative" if res.nonnegative else "negative"
    rep["min_height"] = res.min_height
    if res.cycle:
        rep["negative_cycle"] = " -> ".join(res.cycle)
    rep.exit = EXIT_OK if res.nonnegative else EXIT_NEGATIVE


def _wf_report(res, rep: Report, prefix: str = ""):
    rep[prefix + "verdict"] = res.verdict
    rep[prefix + "reason"] = res.reason
    for k, v in res.evidence.items():
        rep[f"{prefix}evidence.{k}"] = v
    if res.descent is not None:
        for x in res.grammar.nonterminals:
            if res.descent.d(x):
                rep[f"{prefix}descent.{x}"] = res.descent.d(x)
    for k, v in res.counters.items():
        rep[f"{prefix}{k}"] = v


def _oracle_wf(args, res, rep: Report, raw):
    h = _oracle_height(args, res.grammar)
    bl = oracles.enumerate_cfg(raw, h, cap=args.oracle_cap)
    bad = sorted(w for w in bl.words if not oracles.naive_is_wf(w))
    rep["oracle.height"] = h
    rep["oracle.complete"] = bl.complete
    if bad:
        rep["oracle.witness"] = " ".join(f"{n}'" if c else n for n, c in min(bad, key=lambda w: (len(w), w)))
    if res.verdict == WF and bad:
        rep["oracle"] = "mismatch"
        rep.exit = EXIT_BUG
    elif res.verdict == NOT_WF and not bad:
        rep["oracle"] = "inconclusive" if not bl.complete else "no counterexample up to this height"
    else:
        rep["oracle"] = "agree" if res.verdict != RESOURCE_LIMIT else "n/a"


def _cmd_wf(args, rep: Report):
    raw = load_grammar(args.grammar)
    res = decide_well_formed(raw, **_limits(args))
    _wf_report(res, rep)
    rep.exit = {WF: EXIT_OK, NOT_WF: EXIT_NEGATIVE, RESOURCE_LIMIT: EXIT_RESOURCE}[res.verdict]
    if args.plot_dir and res.table is not None and res.table.height:
        from .plotting import plot_trajectory

        stem = os.path.splitext(os.path.basename(args.grammar))[0]
        path = os.path.join(args.plot_dir, f"{stem}-lcs.png")
        plot_trajectory(res.table, path, title=f"{stem}: {res.verdict}")
        rep["plot"] = path
    if args.oracle:
        _oracle_wf(args, res, rep, raw)


def _cmd_balanced(args, rep: Report):
    raw = load_grammar(args.grammar)
    res = decide_balanced_cfg(raw, **_limits(args))
    rep["verdict"] = res.verdict
    bad = res.failing
    if bad is not None:
        rep["side"] = "language" if bad is res.forward else "involuted language"
        _wf_report(bad, rep, prefix="wf.")
    rep.exit = {BALANCED: EXIT_OK, RESOURCE_LIMIT: EXIT_RESOURCE}.get(res.verdict, EXIT_NEGATIVE)
    if args.oracle:
        h = args.height if args.height is not None else 4 * normalize(raw).size + 2
        bl = oracles.enumerate_cfg(raw, h, cap=args.oracle_cap)
        unbalanced = [w for w in bl.words if w]
        rep["oracle.height"] = h
        rep["oracle.complete"] = bl.complete
        if res.verdict == BALANCED and unbalanced:
            rep["oracle"] = "mismatch"
            rep.exit = EXIT_BUG
        else:
            rep["oracle"] = "agree" if (res.verdict == BALANCED) == (not unbalanced) else "inconclusive"


def _cmd_balanced_2ltw(args, rep: Report):
    m = load_transducer(args.transducer)
    res = decide_balanced_2ltw(m, depth=args.depth, certified_depth=args.certified_depth,
                               tree_budget=args.tree_budget, **_limits(args))
    rep["verdict"] = res.verdict if res.verdict != "BalancedUpToDepth" else f"BalancedUpToDepth({res.depth})"
    rep["depth"] = res.depth
    rep["reason"] = res.reason
    for k, v in res.evidence.items():
        rep[f"evidence.{k}"] = v
    for k, v in res.counters.items():
        rep[k] = v
    rep.exit = EXIT_OK if res.balanced else (EXIT_RESOURCE if res.verdict == RESOURCE_LIMIT else EXIT_NEGATIVE)
    if args.oracle:
        depth = args.height if args.height is not None else args.depth
        bad = None
        for t in oracles.enumerate_trees(m.input, depth):
            if oracles.naive_run(m, t):
                bad = t
                break
        rep["oracle.depth"] = depth
        if bad is not None:
            from .transducer import Tree

            def conv(t):
                return Tree(t[0], tuple(conv(c) for c in t[1]))

            rep["oracle.witness"] = str(conv(bad))
        if res.balanced and bad is not None:
            rep["oracle"] = "mismatch"
            rep.exit = EXIT_BUG
        else:
            rep["oracle"] = "agree" if res.balanced == (bad is None) else "inconclusive"


def _cmd_output_cfg(args, rep: Report):
    from .grammar import format_raw

    m = load_transducer(args.transducer)
    text = format_raw(output_cfg(m, args.state))
    rep["grammar"] = text
    rep.raw_text = text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyckcheck", description="Well-formedness and balancedness over bracket alphabets.")
    p.add_argument("--json", action="store_true", help="emit the report as one JSON object")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, oracle=True):
        sp.add_argument("--max-height", type=int, default=None, help="stop the height iteration here (default 4N+1)")
        sp.add_argument("--max-word-len", type=int, default=None, help="resource limit on stored word length")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="letter cap for SLP expansion")
        if oracle:
            sp.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration")
            sp.add_argument("--height", type=int, default=None, help="oracle height (default 4N+2) or tree depth")
            sp.add_argument("--oracle-cap", type=int, default=20_000, help="oracle word-count cap")

    sp = sub.add_parser("reduce", help="reduce a bracket word")
    sp.add_argument("word")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=_cmd_reduce)
    sp = sub.add_parser("hd", help="height of a word")
    sp.add_argument("word")
    sp.set_defaults(func=_cmd_hd)
    sp = sub.add_parser("invert", help="involution of a word")
    sp.add_argument("word")
    sp.set_defaults(func=_cmd_invert)
    sp = sub.add_parser("lcs", help="longest common suffix of suffix values such as '(ab)^~w' or 'b a b'")
    sp.add_argument("elems", nargs="+")
    sp.set_defaults(func=_cmd_lcs)
    sp = sub.add_parser("sig", help="(lcs, lcsext) summary and a 3-word normal form of opener words")
    sp.add_argument("words", nargs="*")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=_cmd_sig)
    sp = sub.add_parser("check-nonneg", help="is every prefix of every word nonnegative?")
    sp.add_argument("grammar")
    sp.set_defaults(func=_cmd_nonneg)
    sp = sub.add_parser("check-wf", help="is the grammar's language well-formed?")
    sp.add_argument("grammar")
    common(sp)
    sp.add_argument("--plot-dir", default=None, help="write a PNG of the lcs length per height here")
    sp.set_defaults(func=_cmd_wf)
    sp = sub.add_parser("check-balanced", help="is the grammar's language a subset of the Dyck language?")
    sp.add_argument("grammar")
    common(sp)
    sp.set_defaults(func=_cmd_balanced)
    sp = sub.add_parser("check-balanced-2ltw", help="is the transducer's output always balanced?")
    sp.add_argument("transducer")
    common(sp)
    sp.add_argument("--depth", type=int, default=4, help="tree depth for the equivalence check")
    sp.add_argument("--certified-depth", type=int, default=None,
                    help="a depth known to suffice for equivalence; enables a definite Balanced")
    sp.add_argument("--tree-budget", type=int, default=100_000, help="maximum number of trees built")
    sp.set_defaults(func=_cmd_balanced_2ltw)
    sp = sub.add_parser("output-cfg", help="print the grammar of a state's output language")
    sp.add_argument("transducer")
    sp.add_argument("state")
    sp.set_defaults(func=_cmd_output_cfg)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report()
    try:
        args.func(args, rep)
    except (WordSyntaxError, GrammarError, TransducerError, ValueError) as exc:
        rep = Report()
        rep["error"] = str(exc)
        rep.exit = EXIT_PARSE
    except OSError as exc:
        rep = Report()
        rep["error"] = str(exc)
        rep.exit = EXIT_PARSE
    except Exception as exc:  # anything else is a bug, not a verdict
        rep = Report()
        rep["error"] = f"internal error: {type(exc).__name__}: {exc}"
        rep.exit = EXIT_BUG
    text = getattr(rep, "raw_text", None)
    if text is not None and not args.json:
        sys.stdout.write(text)
    else:
        print(rep.render(args.json))
    return rep.exit


if __name__ == "__main__":
    sys.exit(main())
