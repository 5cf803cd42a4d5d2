"""Deterministic total linear tree-to-word transducers and their 2-copy variant.

A rule ``q(f(x1,...,xn)) -> u0 q1(x_i1) u1 ... qk(x_ik) uk`` maps an input
node to a bracket word with calls on distinct children.  The axiom either
ignores the tree (a constant), calls one state on the root, or (2-copy) calls
two states on the same root.

File format::

    format: 1
    input: f/2 g/0
    brackets: a
    axiom: q3(x1)
    q3(f(x1,x2)) -> a q2(x1) q2(x2) a'
    q3(g) -> _
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .brackets import EMPTY_TOKEN, BracketAlphabet, Letter, Word, format_word, parse_token, reduce
from .grammar import GrammarError, RawGrammar

__all__ = [
    "TransducerError",
    "Tree",
    "Call",
    "Transducer",
    "parse_tree",
    "parse_transducer",
    "load_transducer",
    "format_transducer",
    "evaluate",
    "run",
    "invert",
    "bar",
    "output_cfg",
    "axiom_cfg",
    "normalize_axiom",
    "EquivalenceResult",
    "check_equivalent_bounded",
    "Balanced2Result",
    "decide_balanced_2ltw",
]


class TransducerError(ValueError):
    """Malformed, nondeterministic, partial or nonlinear transducer."""


class Tree(NamedTuple):
    symbol: str
    children: Tuple["Tree", ...] = ()

    def __str__(self):
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)


class Call(NamedTuple):
    state: str
    var: int  # 0-based child index

    def __str__(self):
        return f"{self.state}(x{self.var + 1})"


Item = Union[Letter, Call]
Body = Tuple[Item, ...]


def _format_body(body: Body) -> str:
    return " ".join(str(it) for it in body) if body else EMPTY_TOKEN


@dataclass(frozen=True)
class Transducer:
    input: Dict[str, int]
    alphabet: BracketAlphabet
    axiom: Body
    rules: Dict[Tuple[str, str], Body]
    states: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.states:
            names: List[str] = []
            for (q, _f) in self.rules:
                if q not in names:
                    names.append(q)
            object.__setattr__(self, "states", tuple(names))
        self.validate()

    def validate(self) -> None:
        if not any(r == 0 for r in self.input.values()):
            raise TransducerError("input alphabet needs a symbol of rank 0")
        for q in self.states:
            for f in self.input:
                if (q, f) not in self.rules:
                    raise TransducerError(f"missing rule for {q}({f})")
        for (q, f), body in self.rules.items():
            if q not in self.states or f not in self.input:
                raise TransducerError(f"rule {q}({f}) uses an undeclared state or symbol")
            seen = set()
            for it in body:
                if isinstance(it, Call):
                    if it.state not in self.states:
                        raise TransducerError(f"rule {q}({f}) calls unknown state {it.state}")
                    if not 0 <= it.var < self.input[f]:
                        raise TransducerError(f"rule {q}({f}) reads x{it.var + 1} but {f} has rank {self.input[f]}")
                    if it.var in seen:
                        raise TransducerError(f"rule {q}({f}) reads x{it.var + 1} twice (not linear)")
                    seen.add(it.var)
                else:
                    self.alphabet.check((it,))
        calls = [it for it in self.axiom if isinstance(it, Call)]
        if len(calls) > 2:
            raise TransducerError("the axiom may call at most two states")
        for it in calls:
            if it.var != 0 or it.state not in self.states:
                raise TransducerError(f"bad axiom call {it}")

    @property
    def calls(self) -> Tuple[Call, ...]:
        return tuple(it for it in self.axiom if isinstance(it, Call))

    def reachable(self, q: str) -> Tuple[str, ...]:
        order = [q]
        i = 0
        while i < len(order):
            cur = order[i]
            i += 1
            for f in self.input:
                for it in self.rules[(cur, f)]:
                    if isinstance(it, Call) and it.state not in order:
                        order.append(it.state)
        return tuple(order)


_RULE = re.compile(r"^\s*(?P<q>[^\s(]+)\(\s*(?P<f>[^\s(),]+)\s*(?:\((?P<vars>[^)]*)\))?\s*\)\s*$")
_CALL = re.compile(r"^(?P<q>[^\s(]+)\(x(?P<i>[0-9]+)\)$")


def _parse_body(text: str, vars_: Sequence[str], alphabet: BracketAlphabet, where: str) -> Body:
    items: List[Item] = []
    for tok in text.split():
        if tok == EMPTY_TOKEN:
            continue
        m = _CALL.match(tok)
        if m:
            var = f"x{m.group('i')}"
            if var not in vars_:
                raise TransducerError(f"{where}: variable {var} is not bound")
            items.append(Call(m.group("q"), vars_.index(var)))
            continue
        try:
            letter = parse_token(tok)
            alphabet.check((letter,))
        except ValueError as exc:
            raise TransducerError(f"{where}: {exc}") from None
        items.append(letter)
    return tuple(items)


def parse_transducer(text: str) -> Transducer:
    input_: Optional[Dict[str, int]] = None
    brackets: Optional[Tuple[str, ...]] = None
    axiom_text: Optional[Tuple[int, str]] = None
    rule_lines: List[Tuple[int, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            lhs, rhs = line.split("->", 1)
            rule_lines.append((lineno, lhs, rhs))
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise TransducerError(f"line {lineno}: expected 'key: value' or a rule")
        key, value = key.strip(), value.strip()
        if key == "format":
            if value != "1":
                raise TransducerError(f"line {lineno}: unsupported format version {value}")
        elif key == "input":
            input_ = {}
            for tok in value.split():
                name, slash, rank = tok.partition("/")
                if not slash or not rank.isdigit() or not name:
                    raise TransducerError(f"line {lineno}: bad ranked symbol {tok!r}")
                if name in input_:
                    raise TransducerError(f"line {lineno}: duplicate symbol {name}")
                input_[name] = int(rank)
        elif key == "brackets":
            brackets = tuple(value.split())
        elif key == "axiom":
            axiom_text = (lineno, value)
        else:
            raise TransducerError(f"line {lineno}: unknown key {key!r}")
    if input_ is None or brackets is None or axiom_text is None:
        raise TransducerError("need 'input:', 'brackets:' and 'axiom:' declarations")
    try:
        alphabet = BracketAlphabet(brackets)
    except ValueError as exc:
        raise TransducerError(str(exc)) from None
    rules: Dict[Tuple[str, str], Body] = {}
    states: List[str] = []
    for lineno, lhs, rhs in rule_lines:
        m = _RULE.match(lhs)
        if not m:
            raise TransducerError(f"line {lineno}: bad left-hand side {lhs.strip()!r}")
        q, f = m.group("q"), m.group("f")
        if f not in input_:
            raise TransducerError(f"line {lineno}: unknown input symbol {f}")
        vars_ = [v.strip() for v in m.group("vars").split(",")] if m.group("vars") else []
        if len(vars_) != input_[f]:
            raise TransducerError(f"line {lineno}: {f} has rank {input_[f]}, got {len(vars_)} variables")
        if vars_ != [f"x{i + 1}" for i in range(len(vars_))]:
            raise TransducerError(f"line {lineno}: variables must be x1..x{len(vars_)} in order")
        if (q, f) in rules:
            raise TransducerError(f"line {lineno}: second rule for {q}({f}) (transducers must be deterministic)")
        rules[(q, f)] = _parse_body(rhs, vars_, alphabet, f"line {lineno}")
        if q not in states:
            states.append(q)
    lineno, value = axiom_text
    axiom = _parse_body(value, ["x1"], alphabet, f"line {lineno}")
    return Transducer(input_, alphabet, axiom, rules, tuple(states))


def load_transducer(path) -> Transducer:
    with open(path, encoding="utf-8") as fh:
        return parse_transducer(fh.read())


def format_transducer(m: Transducer) -> str:
    lines = [
        "format: 1",
        "input: " + " ".join(f"{f}/{r}" for f, r in m.input.items()),
        "brackets: " + " ".join(m.alphabet.openers),
        "axiom: " + _format_body(m.axiom),
    ]
    for q in m.states:
        for f, rank in m.input.items():
            args = f"({','.join(f'x{i + 1}' for i in range(rank))})" if rank else ""
            lines.append(f"{q}({f}{args}) -> {_format_body(m.rules[(q, f)])}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> Tree:
    pos = 0
    text = text.strip()

    def node() -> Tree:
        nonlocal pos
        m = re.compile(r"\s*([^\s(),]+)\s*").match(text, pos)
        if not m:
            raise ValueError(f"expected a symbol at {pos} in {text!r}")
        pos = m.end()
        kids: List[Tree] = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                kids.append(node())
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise ValueError(f"unbalanced parentheses in {text!r}")
        return Tree(m.group(1), tuple(kids))

    tree = node()
    if pos != len(text):
        raise ValueError(f"trailing text in {text!r}")
    return tree


# -- semantics ----------------------------------------------------------------


def _check_tree(m: Transducer, t: Tree) -> None:
    stack = [t]
    while stack:
        node = stack.pop()
        if m.input.get(node.symbol) != len(node.children):
            raise TransducerError(f"node {node.symbol} with {len(node.children)} children does not match the input alphabet")
        stack.extend(node.children)


def _sem(m: Transducer, q: str, t: Tree, memo: Dict) -> Word:
    key = (q, t)
    if key not in memo:
        out: List[Letter] = []
        for it in m.rules[(q, t.symbol)]:
            if isinstance(it, Call):
                out.extend(_sem(m, it.state, t.children[it.var], memo))
            else:
                out.append(it)
        memo[key] = reduce(out)
    return memo[key]


def evaluate(m: Transducer, q: str, t: Tree) -> Word:
    """``[[q]](t)``, reduced."""
    _check_tree(m, t)
    return _sem(m, q, t, {})


def run(m: Transducer, t: Tree) -> Word:
    """The reduced output of the whole transducer (the axiom) on ``t``."""
    _check_tree(m, t)
    memo: Dict = {}
    out: List[Letter] = []
    for it in m.axiom:
        out.extend(_sem(m, it.state, t, memo) if isinstance(it, Call) else (it,))
    return reduce(out)


def bar(q: str) -> str:
    """Name of the inverted copy of ``q``; ``bar(bar(q)) == q``."""
    return q[:-1] if q.endswith("~") else q + "~"


def _invert_body(body: Body) -> Body:
    out: List[Item] = []
    for it in reversed(body):
        out.append(Call(bar(it.state), it.var) if isinstance(it, Call) else it.flipped())
    return tuple(out)


def invert(m: Transducer, q: str) -> Transducer:
    """Copy of the states reachable from ``q`` with involuted right-hand sides.

    The result has axiom ``bar(q)(x1)``; ``[[bar(q)]](t)`` is the involution of
    ``[[q]](t)``.
    """
    if q not in m.states:
        raise TransducerError(f"unknown state {q}")
    reach = m.reachable(q)
    rules = {(bar(p), f): _invert_body(m.rules[(p, f)]) for p in reach for f in m.input}
    return Transducer(dict(m.input), m.alphabet, (Call(bar(q), 0),), rules, tuple(bar(p) for p in reach))


def _raw_from_states(m: Transducer, states: Sequence[str], axiom: str, extra=None) -> RawGrammar:
    productions: Dict[str, List[tuple]] = {}
    if extra:
        productions.update(extra)
    for p in states:
        alts = []
        for f in m.input:
            body = tuple(it.state if isinstance(it, Call) else it for it in m.rules[(p, f)])
            if body not in alts:
                alts.append(body)
        productions[p] = alts
    try:
        return RawGrammar(m.alphabet, axiom, productions)
    except GrammarError as exc:
        raise TransducerError(f"cannot build the output grammar: {exc}") from None


def output_cfg(m: Transducer, q: str) -> RawGrammar:
    """Grammar for ``L(q)``: one nonterminal per state reachable from ``q``.

    Each input symbol contributes one alternative, with calls replaced by the
    called state's nonterminal (the input symbol is guessed).
    """
    if q not in m.states:
        raise TransducerError(f"unknown state {q}")
    return _raw_from_states(m, m.reachable(q), q)


def axiom_cfg(m: Transducer, axiom_name: str = "S") -> RawGrammar:
    """Grammar for the output of an axiom with at most one call."""
    if len(m.calls) > 1:
        raise TransducerError("a two-call axiom does not give a context-free output language in general")
    name = axiom_name
    while name in m.states:
        name += "_"
    body = tuple(it.state if isinstance(it, Call) else it for it in m.axiom)
    states = m.reachable(m.calls[0].state) if m.calls else ()
    return _raw_from_states(m, states, name, {name: [body]})


def normalize_axiom(m: Transducer) -> Transducer:
    """Move the constants of a two-call axiom into copies of the called states.

    ``u0 q1(x1) u1 q2(x1) u2`` becomes ``q1'(x1) q2'(x1)`` where every rule of
    ``q1'`` is the matching rule of ``q1`` with ``u0`` prepended, and every
    rule of ``q2'`` the rule of ``q2`` between ``u1`` and ``u2``.
    """
    calls = m.calls
    if len(calls) != 2:
        raise TransducerError("normalize_axiom needs an axiom with two calls")
    i1 = m.axiom.index(calls[0])
    i2 = len(m.axiom) - 1 - m.axiom[::-1].index(calls[1])
    u0, u1, u2 = m.axiom[:i1], m.axiom[i1 + 1 : i2], m.axiom[i2 + 1 :]
    taken = set(m.states)

    def fresh(base: str) -> str:
        k = 1
        while f"{base}.{k}" in taken:
            k += 1
        taken.add(f"{base}.{k}")
        return f"{base}.{k}"

    s1, s2 = fresh(calls[0].state), fresh(calls[1].state)
    rules = dict(m.rules)
    for f in m.input:
        rules[(s1, f)] = u0 + m.rules[(calls[0].state, f)]
        rules[(s2, f)] = u1 + m.rules[(calls[1].state, f)] + u2
    return Transducer(dict(m.input), m.alphabet, (Call(s1, 0), Call(s2, 0)), rules, m.states + (s1, s2))


# -- bounded equivalence --------------------------------------------------------

EQUIVALENT = "EquivalentUpTo"
COUNTEREXAMPLE = "Counterexample"
RESOURCE_LIMIT = "ResourceLimit"


@dataclass
class EquivalenceResult:
    status: str
    depth: int
    exhaustive: bool = False  # no new behaviour appeared: holds for every depth
    tree: Optional[Tree] = None
    left: Optional[Word] = None
    right: Optional[Word] = None
    trees: int = 0  # candidate trees built
    classes: int = 0  # distinct behaviours kept


def _tree_key(t: Tree):
    return (t.size, str(t))


def check_equivalent_bounded(
    m1: Transducer,
    q1: str,
    m2: Transducer,
    q2: str,
    depth: int,
    tree_budget: int = 100_000,
) -> EquivalenceResult:
    """Compare ``[[q1]]`` and ``[[q2]]`` on every tree of depth at most ``depth``.

    Trees are only kept if their outputs under all states of both
    transducers differ from every kept tree: a tree with the same outputs
    behaves identically inside any context.  If a whole depth adds nothing
    new, the kept trees represent every tree, and the answer is exhaustive.
    """
    if m1.input != m2.input:
        raise TransducerError("the transducers read different input alphabets")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    s1, s2 = m1.reachable(q1), m2.reachable(q2)
    memo1: Dict = {}
    memo2: Dict = {}

    def signature(t: Tree):
        return tuple(_sem(m1, p, t, memo1) for p in s1) + tuple(_sem(m2, p, t, memo2) for p in s2)

    reps: List[Tree] = []
    seen: Dict[tuple, Tree] = {}
    built = 0
    symbols = sorted(m1.input.items())
    for d in range(1, depth + 1):
        fresh: List[Tree] = []
        pool = sorted(reps, key=_tree_key)
        for f, rank in symbols:
            for kids in _product(pool, rank):
                if rank and max(k.depth for k in kids) != d - 1:
                    continue
                if not rank and d != 1:
                    continue
                built += 1
                if built > tree_budget:
                    return EquivalenceResult(RESOURCE_LIMIT, d, trees=built, classes=len(reps))
                t = Tree(f, kids)
                sig = signature(t)
                if sig not in seen:
                    seen[sig] = t
                    fresh.append(t)
        fresh.sort(key=_tree_key)
        for t in fresh:
            left, right = _sem(m1, q1, t, memo1), _sem(m2, q2, t, memo2)
            if left != right:
                return EquivalenceResult(COUNTEREXAMPLE, depth, tree=t, left=left, right=right,
                                         trees=built, classes=len(reps) + len(fresh))
        reps.extend(fresh)
        if not fresh:
            return EquivalenceResult(EQUIVALENT, depth, exhaustive=True, trees=built, classes=len(reps))
    return EquivalenceResult(EQUIVALENT, depth, trees=built, classes=len(reps))


def _product(pool: Sequence[Tree], rank: int) -> Iterable[Tuple[Tree, ...]]:
    if rank == 0:
        yield ()
        return
    yield from itertools.product(pool, repeat=rank)


# -- balancedness ---------------------------------------------------------------

BALANCED = "Balanced"
NOT_BALANCED = "NotBalanced"
BALANCED_UP_TO = "BalancedUpToDepth"


@dataclass
class Balanced2Result:
    verdict: str
    depth: int
    reason: str
    evidence: Dict[str, object] = field(default_factory=dict)
    counters: Dict[str, object] = field(default_factory=dict)

    @property
    def balanced(self) -> bool:
        return self.verdict in (BALANCED, BALANCED_UP_TO)


def decide_balanced_2ltw(
    m: Transducer,
    depth: int = 4,
    certified_depth: Optional[int] = None,
    tree_budget: int = 100_000,
    **limits,
) -> Balanced2Result:
    """Balancedness of the transducer's output language.

    Two calls: both ``L(q1)`` and the involution of ``L(q2)`` must be
    well-formed, and ``q1`` must agree with the inverted copy of ``q2``.  The
    last check runs on trees up to ``depth``; the answer is a definite
    ``Balanced`` only if that search saturated or ``certified_depth`` (a
    depth the caller knows to be sufficient) is at most ``depth``.
    """
    from .wellformed import NOT_WF, WF, decide_balanced_cfg, decide_well_formed

    calls = m.calls
    if len(calls) < 2:
        res = decide_balanced_cfg(axiom_cfg(m), **limits)
        if res.verdict == BALANCED:
            return Balanced2Result(BALANCED, depth, "output grammar is balanced")
        bad = res.failing
        ev = {"side": "output" if bad is res.forward else "involuted output", "reason": bad.reason}
        ev.update(bad.evidence)
        return Balanced2Result(res.verdict, depth, "output grammar is not balanced", ev)

    norm = normalize_axiom(m)
    a, b = norm.calls[0].state, norm.calls[1].state
    inv = invert(norm, b)
    for side, grammar in (("first copy", output_cfg(norm, a)), ("inverted second copy", output_cfg(inv, bar(b)))):
        res = decide_well_formed(grammar, **limits)
        if res.verdict != WF:
            ev = {"side": side, "reason": res.reason}
            ev.update(res.evidence)
            verdict = NOT_BALANCED if res.verdict == NOT_WF else RESOURCE_LIMIT
            return Balanced2Result(verdict, depth, f"{side} is not well-formed" if res.verdict == NOT_WF else res.reason, ev)

    eq = check_equivalent_bounded(norm, a, inv, bar(b), depth, tree_budget)
    counters = {"trees": eq.trees, "classes": eq.classes}
    if eq.status == RESOURCE_LIMIT:
        return Balanced2Result(RESOURCE_LIMIT, depth, "tree budget exceeded", counters=counters)
    if eq.status == COUNTEREXAMPLE:
        out = run(m, eq.tree)
        ev = {"tree": str(eq.tree), "first": format_word(eq.left), "inverted_second": format_word(eq.right),
              "output": format_word(out)}
        if not out:
            raise AssertionError(f"equivalence counterexample {eq.tree} has a balanced output")
        return Balanced2Result(NOT_BALANCED, depth, "copies disagree", ev, counters)
    if eq.exhaustive:
        return Balanced2Result(BALANCED, depth, "copies agree on every tree (search saturated)", counters=counters)
    if certified_depth is not None and certified_depth <= depth:
        return Balanced2Result(BALANCED, depth, f"copies agree up to the certified depth {certified_depth}",
                               counters=counters)
    return Balanced2Result(BALANCED_UP_TO, depth, f"copies agree on all trees of depth <= {depth}", counters=counters)
