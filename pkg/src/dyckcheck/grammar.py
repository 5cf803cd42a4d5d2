"""Context-free grammars over a bracket alphabet.

A :class:`RawGrammar` keeps bodies as written (any mix of nonterminals and
bracket letters).  :func:`normalize` turns it into a :class:`Grammar` whose
rules all have one of three shapes::

    X -> Y Z        (Binary)
    X -> Y          (Unit)
    X -> w          (Const, w a reduced bracket word)

and which keeps only productive nonterminals reachable from the axiom.

File format (one declaration or production per line, ``#`` starts a comment)::

    format: 1
    brackets: a b c
    axiom: S
    S -> U c | _
    U -> A V | W2
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from .brackets import (
    EMPTY_TOKEN,
    BracketAlphabet,
    Letter,
    Word,
    format_word,
    involute,
    parse_token,
    reduce,
)

__all__ = [
    "GrammarError",
    "Binary",
    "Unit",
    "Const",
    "Rule",
    "Grammar",
    "RawGrammar",
    "parse_grammar",
    "load_grammar",
    "normalize",
    "prefix_grammar",
    "prefix_closure",
    "involute_grammar",
    "format_raw",
]


class GrammarError(ValueError):
    """Malformed grammar text or an inconsistent grammar."""


class Binary(NamedTuple):
    head: str
    left: str
    right: str

    def __str__(self):
        return f"{self.head} -> {self.left} {self.right}"


class Unit(NamedTuple):
    head: str
    child: str

    def __str__(self):
        return f"{self.head} -> {self.child}"


class Const(NamedTuple):
    head: str
    word: Word

    def __str__(self):
        return f"{self.head} -> {format_word(self.word)}"


Rule = Union[Binary, Unit, Const]
Symbol = Union[str, Letter]


def _children(rule: Rule) -> Tuple[str, ...]:
    if isinstance(rule, Binary):
        return (rule.left, rule.right)
    if isinstance(rule, Unit):
        return (rule.child,)
    return ()


@dataclass(frozen=True)
class Grammar:
    alphabet: BracketAlphabet
    axiom: str
    rules: Tuple[Rule, ...]
    nonterminals: Tuple[str, ...] = ()
    # fresh nonterminals introduced by normalization, mapped to what they stand for
    origin: Dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.nonterminals:
            names: List[str] = [self.axiom]
            for rule in self.rules:
                for name in (rule.head,) + _children(rule):
                    if name not in names:
                        names.append(name)
            object.__setattr__(self, "nonterminals", tuple(names))

    @property
    def size(self) -> int:
        return len(self.nonterminals)

    def rules_of(self, head: str) -> List[Rule]:
        return [rule for rule in self.rules if rule.head == head]

    def is_empty(self) -> bool:
        return not self.rules

    def with_axiom(self, axiom: str) -> "Grammar":
        return trim(Grammar(self.alphabet, axiom, self.rules, origin=self.origin))

    def to_raw(self) -> "RawGrammar":
        productions: Dict[str, List[Tuple[Symbol, ...]]] = {}
        for rule in self.rules:
            body: Tuple[Symbol, ...]
            if isinstance(rule, Const):
                body = tuple(rule.word)
            else:
                body = _children(rule)
            productions.setdefault(rule.head, []).append(body)
        return RawGrammar(self.alphabet, self.axiom, productions)

    def __str__(self):
        return format_raw(self.to_raw())


@dataclass
class RawGrammar:
    alphabet: BracketAlphabet
    axiom: str
    productions: Dict[str, List[Tuple[Symbol, ...]]]

    def __post_init__(self):
        if self.axiom not in self.productions:
            raise GrammarError(f"axiom {self.axiom} has no productions")
        for head, bodies in self.productions.items():
            if head in self.alphabet:
                raise GrammarError(f"{head} is both a bracket and a nonterminal")
            for body in bodies:
                for sym in body:
                    if isinstance(sym, Letter):
                        if sym.name not in self.alphabet:
                            raise GrammarError(f"undeclared bracket {sym} in a body of {head}")
                    elif sym not in self.productions:
                        raise GrammarError(f"undefined nonterminal {sym} in a body of {head}")


def format_raw(raw: RawGrammar) -> str:
    lines = [
        "format: 1",
        "brackets: " + " ".join(raw.alphabet.openers),
        f"axiom: {raw.axiom}",
    ]
    heads = [raw.axiom] + [h for h in raw.productions if h != raw.axiom]
    for head in heads:
        alts = []
        for body in raw.productions[head]:
            alts.append(" ".join(str(sym) for sym in body) if body else EMPTY_TOKEN)
        lines.append(f"{head} -> " + " | ".join(alts))
    return "\n".join(lines) + "\n"


def parse_grammar(text: str) -> RawGrammar:
    brackets: Optional[Tuple[str, ...]] = None
    axiom: Optional[str] = None
    lines: List[Tuple[int, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            head, body = line.split("->", 1)
            head = head.strip()
            if not head or len(head.split()) != 1:
                raise GrammarError(f"line {lineno}: bad left-hand side {head!r}")
            lines.append((lineno, head, body))
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise GrammarError(f"line {lineno}: expected 'key: value' or a production")
        key, value = key.strip(), value.strip()
        if key == "format":
            if value != "1":
                raise GrammarError(f"line {lineno}: unsupported format version {value}")
        elif key == "brackets":
            brackets = tuple(value.split())
        elif key == "axiom":
            axiom = value
        else:
            raise GrammarError(f"line {lineno}: unknown key {key!r}")
    if brackets is None:
        raise GrammarError("missing 'brackets:' declaration")
    if not lines:
        raise GrammarError("grammar has no productions")
    try:
        alphabet = BracketAlphabet(brackets)
    except ValueError as exc:
        raise GrammarError(str(exc)) from None
    heads = {head for _, head, _ in lines}
    if axiom is None:
        axiom = lines[0][1]
    productions: Dict[str, List[Tuple[Symbol, ...]]] = {}
    for lineno, head, body in lines:
        for alt in body.split("|"):
            symbols: List[Symbol] = []
            for tok in alt.split():
                if tok == EMPTY_TOKEN:
                    continue
                if tok in heads:
                    symbols.append(tok)
                    continue
                try:
                    letter = parse_token(tok)
                except ValueError:
                    raise GrammarError(f"line {lineno}: bad token {tok!r}") from None
                if letter.name not in alphabet:
                    raise GrammarError(f"line {lineno}: {tok!r} is neither a nonterminal nor a declared bracket")
                symbols.append(letter)
            productions.setdefault(head, []).append(tuple(symbols))
    return RawGrammar(alphabet, axiom, productions)


def load_grammar(path) -> RawGrammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


def _fresh(base: str, taken: Set[str]) -> str:
    name = base
    i = 1
    while name in taken:
        i += 1
        name = f"{base}.{i}"
    taken.add(name)
    return name


def normalize(raw: RawGrammar) -> Grammar:
    """Bring every rule into Binary/Unit/Const shape, then trim.

    Runs of brackets inside longer bodies become fresh constant nonterminals
    (one per distinct reduced constant), and bodies longer than two are
    nested to the right: ``X -> a Y Y a'`` gives ``X -> <a> X.1``,
    ``X.1 -> Y X.2``, ``X.2 -> Y <a'>``.
    """
    taken: Set[str] = set(raw.productions)
    rules: List[Rule] = []
    origin: Dict[str, str] = {}
    constants: Dict[Word, str] = {}

    def constant(word: Word) -> str:
        word = reduce(word)
        if word not in constants:
            name = _fresh("<" + format_word(word) + ">", taken)
            constants[word] = name
            origin[name] = format_word(word)
            rules.append(Const(name, word))
        return constants[word]

    for head, bodies in raw.productions.items():
        for body in bodies:
            items: List[Union[str, Word]] = []
            run: List[Letter] = []
            for sym in body:
                if isinstance(sym, Letter):
                    run.append(sym)
                else:
                    if run:
                        items.append(tuple(run))
                        run = []
                    items.append(sym)
            if run:
                items.append(tuple(run))
            if not items:
                rules.append(Const(head, ()))
            elif len(items) == 1 and not isinstance(items[0], str):
                rules.append(Const(head, reduce(items[0])))
            elif len(items) == 1:
                rules.append(Unit(head, items[0]))
            else:
                names = [it if isinstance(it, str) else constant(it) for it in items]
                current = head
                for i, name in enumerate(names[:-2]):
                    nxt = _fresh(f"{head}.{len(origin) + 1}", taken)
                    origin[nxt] = f"{head} (suffix of a body)"
                    rules.append(Binary(current, name, nxt))
                    current = nxt
                rules.append(Binary(current, names[-2], names[-1]))
    return trim(Grammar(raw.alphabet, raw.axiom, tuple(dict.fromkeys(rules)), origin=origin))


def productive(rules: Sequence[Rule]) -> Set[str]:
    alive: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.head not in alive and all(c in alive for c in _children(rule)):
                alive.add(rule.head)
                changed = True
    return alive


def trim(g: Grammar) -> Grammar:
    """Keep the productive nonterminals reachable from the axiom.

    An unproductive axiom leaves a grammar without rules (empty language).
    """
    alive = productive(g.rules)
    rules = [r for r in g.rules if r.head in alive and all(c in alive for c in _children(r))]
    if g.axiom not in alive:
        return Grammar(g.alphabet, g.axiom, (), (g.axiom,), g.origin)
    reach = {g.axiom}
    stack = [g.axiom]
    by_head: Dict[str, List[Rule]] = {}
    for rule in rules:
        by_head.setdefault(rule.head, []).append(rule)
    while stack:
        head = stack.pop()
        for rule in by_head.get(head, ()):
            for c in _children(rule):
                if c not in reach:
                    reach.add(c)
                    stack.append(c)
    kept = tuple(r for r in rules if r.head in reach)
    order = [g.axiom] + [n for n in g.nonterminals if n in reach and n != g.axiom]
    for rule in kept:
        for name in (rule.head,) + _children(rule):
            if name not in order:
                order.append(name)
    origin = {k: v for k, v in g.origin.items() if k in reach}
    return Grammar(g.alphabet, g.axiom, kept, tuple(order), origin)


def prefix_grammar(g: Grammar) -> Tuple[Grammar, Dict[str, str]]:
    """Add a prefix nonterminal ``X^p`` for every ``X``.

    ``L(X^p)`` holds every nonempty prefix of a word of ``L(X)`` and otherwise
    only words of ``L(X)`` (the empty word can come through a binary rule).  Besides
    the copies of every rule::

        X -> Y Z   gives   X^p -> Y^p | Y Z^p | Y Z
        X -> Y     gives   X^p -> Y^p | Y
        X -> w     gives   X^p -> w'  for every nonempty prefix w' of w

    The returned grammar keeps ``g``'s axiom and is not trimmed.
    """
    taken = set(g.nonterminals)
    pname = {x: _fresh(f"{x}^p", taken) for x in g.nonterminals}
    rules: List[Rule] = list(g.rules)
    for rule in g.rules:
        hp = pname[rule.head]
        if isinstance(rule, Binary):
            rules += [Unit(hp, pname[rule.left]), Binary(hp, rule.left, pname[rule.right]), Binary(hp, rule.left, rule.right)]
        elif isinstance(rule, Unit):
            rules += [Unit(hp, pname[rule.child]), Unit(hp, rule.child)]
        else:
            for i in range(1, len(rule.word) + 1):
                rules.append(Const(hp, reduce(rule.word[:i])))
    rules = list(dict.fromkeys(rules))
    names = tuple(g.nonterminals) + tuple(pname[x] for x in g.nonterminals)
    origin = dict(g.origin)
    origin.update({p: f"prefixes of {x}" for x, p in pname.items()})
    return Grammar(g.alphabet, g.axiom, tuple(rules), names, origin), pname


def prefix_closure(g: Grammar, x: str) -> Grammar:
    """Trimmed grammar for ``L(x)`` and its nonempty prefixes; axiom ``x^p``."""
    if x not in g.nonterminals:
        raise GrammarError(f"unknown nonterminal {x}")
    gp, pname = prefix_grammar(g)
    return gp.with_axiom(pname[x])


def involute_grammar(g: Grammar) -> Grammar:
    """Grammar for the involuted language: bodies reversed, constants involuted."""
    rules: List[Rule] = []
    for rule in g.rules:
        if isinstance(rule, Binary):
            rules.append(Binary(rule.head, rule.right, rule.left))
        elif isinstance(rule, Unit):
            rules.append(rule)
        else:
            rules.append(Const(rule.head, reduce(involute(rule.word))))
    return Grammar(g.alphabet, g.axiom, tuple(rules), g.nonterminals, g.origin)


def grammar_from_rules(alphabet: BracketAlphabet, axiom: str, rules: Iterable[Rule]) -> Grammar:
    return trim(Grammar(alphabet, axiom, tuple(dict.fromkeys(rules))))
