"""Shared generators and conversions for the test suites."""
from __future__ import annotations

import os
import random
from typing import List, Optional

from dyckcheck.brackets import BracketAlphabet, Letter, reduce
from dyckcheck.grammar import Binary, Const, Grammar, Unit, trim
from dyckcheck.transducer import Call, Transducer, invert
from dyckcheck.ulp import TOP, Finite

DATA = os.path.join(os.path.dirname(__file__), "data")


def data(name: str) -> str:
    return os.path.join(DATA, name)


def oracle_form(x):
    if x is TOP:
        return ("top",)
    if isinstance(x, Finite):
        return ("finite", x.word)
    if x.core:
        return ("ulp", x.period, x.core)
    return ("omega", x.period)


def sig_form(s):
    return (oracle_form(s.lcs), oracle_form(s.ext))


def random_word(rng: random.Random, names=("a", "b"), max_len: int = 8, p_close: float = 0.45):
    return tuple(Letter(rng.choice(names), rng.random() < p_close) for _ in range(rng.randint(0, max_len)))


def random_positive_language(rng: random.Random, letters: str = "abc", max_words: int = 6, max_len: int = 8):
    k = rng.randint(1, max_words)
    alpha = letters[: rng.randint(1, len(letters))]
    return {tuple(rng.choice(alpha) for _ in range(rng.randint(0, max_len))) for _ in range(k)}


def random_grammar(rng: random.Random, max_n: int = 4, max_letters: int = 2, p_close: float = 0.4) -> Grammar:
    """A trimmed grammar in Binary/Unit/Const form with at most ``max_n`` nonterminals."""
    n = rng.randint(1, max_n)
    names = [f"X{i}" for i in range(n)]
    alpha = BracketAlphabet(tuple("ab"[: rng.randint(1, max_letters)]))

    def const() -> tuple:
        return reduce(tuple(Letter(rng.choice(alpha.openers), rng.random() < p_close) for _ in range(rng.randint(0, 3))))

    rules: List = []
    for x in names:
        for _ in range(rng.randint(1, 3)):
            t = rng.random()
            if t < 0.35:
                rules.append(Const(x, const()))
            elif t < 0.5:
                rules.append(Unit(x, rng.choice(names)))
            else:
                rules.append(Binary(x, rng.choice(names), rng.choice(names)))
        if not any(r.head == x and isinstance(r, Const) for r in rules) and rng.random() < 0.7:
            rules.append(Const(x, const()))
    return trim(Grammar(alpha, "X0", tuple(dict.fromkeys(rules))))


def random_ltw(rng: random.Random, n_states: Optional[int] = None, two_copy: bool = True,
               letters=("a", "b"), p_close: float = 0.35) -> Transducer:
    """A total deterministic linear transducer with at most 3 states and 2 input symbols."""
    n_states = n_states or rng.randint(1, 3)
    states = [f"q{i}" for i in range(1, n_states + 1)]
    inputs = {"g": 0}
    if rng.random() < 0.85:
        inputs["f"] = rng.choice([1, 2])
    alpha = BracketAlphabet(tuple(letters[: rng.randint(1, len(letters))]))

    def letters_(k):
        return [Letter(rng.choice(alpha.openers), rng.random() < p_close) for _ in range(k)]

    rules = {}
    for q in states:
        for f, rank in inputs.items():
            vars_ = [v for v in range(rank) if rng.random() < 0.8]
            rng.shuffle(vars_)
            body: List = letters_(rng.randint(0, 2))
            for v in vars_:
                body.append(Call(rng.choice(states), v))
                body.extend(letters_(rng.randint(0, 1)))
            rules[(q, f)] = tuple(body)
    if two_copy:
        axiom = tuple(letters_(rng.randint(0, 1))) + (Call(rng.choice(states), 0),) + tuple(
            letters_(rng.randint(0, 1))) + (Call(rng.choice(states), 0),) + tuple(letters_(rng.randint(0, 1)))
    else:
        axiom = (Call(states[0], 0),)
    return Transducer(inputs, alpha, axiom, rules, tuple(states))


def mirrored(m: Transducer, q: str) -> Transducer:
    """``m`` extended by the inverted copy of ``q``, with axiom ``q(x1) bar(q)(x1)``."""
    inv = invert(m, q)
    rules = dict(m.rules)
    rules.update(inv.rules)
    return Transducer(dict(m.input), m.alphabet, (Call(q, 0), inv.axiom[0]), rules, m.states + inv.states)
