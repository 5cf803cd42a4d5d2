"""Brute-force reference implementations.

Everything here is written from the definitions and deliberately shares no
algorithm with the rest of the package: reduction rewrites one pair at a
time, languages are enumerated explicitly, infinite words are unrolled.
Only plain data (letters, grammar rules, transducer rules) is read from the
production types.

Letters are ``(name, is_closer)`` pairs; production ``Letter`` values are
such pairs already.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

__all__ = [
    "naive_reduce",
    "naive_height",
    "naive_is_wf",
    "naive_wf_language",
    "naive_nonnegative",
    "BoundedLanguage",
    "grammar_productions",
    "enumerate_cfg",
    "naive_lcs",
    "naive_lcsext",
    "naive_sig",
    "brute_tsn",
    "naive_primitive_root",
    "enumerate_trees",
    "naive_eval",
    "naive_run",
]


# -- words ---------------------------------------------------------------------


def naive_reduce(word: Sequence) -> Tuple:
    """Delete the leftmost factor ``a a'`` until none is left."""
    w = [tuple(x) for x in word]
    while True:
        for i in range(len(w) - 1):
            (n1, c1), (n2, c2) = w[i], w[i + 1]
            if n1 == n2 and not c1 and c2:
                del w[i : i + 2]
                break
        else:
            return tuple(w)


def naive_height(word: Sequence) -> int:
    return sum(1 for _, c in word if not c) - sum(1 for _, c in word if c)


def naive_nonnegative(word: Sequence) -> bool:
    return all(naive_height(word[:i]) >= 0 for i in range(len(word) + 1))


def naive_is_wf(word: Sequence) -> bool:
    return not any(c for _, c in naive_reduce(word))


def naive_wf_language(words: Iterable[Sequence]) -> bool:
    return all(naive_is_wf(w) for w in words)


# -- grammars ------------------------------------------------------------------


def grammar_productions(g) -> Tuple[str, Dict[str, List[Tuple]]]:
    """``(axiom, {head: [body, ...]})`` with bodies of nonterminal names and letters.

    Accepts a raw grammar (``productions`` attribute) or a normalized one
    (rules with ``word``, ``child`` or ``left``/``right`` fields).
    """
    if hasattr(g, "productions"):
        return g.axiom, {h: [tuple(b) for b in bodies] for h, bodies in g.productions.items()}
    prods: Dict[str, List[Tuple]] = {x: [] for x in g.nonterminals}
    for rule in g.rules:
        if hasattr(rule, "word"):
            body = tuple(tuple(a) for a in rule.word)
        elif hasattr(rule, "child"):
            body = (rule.child,)
        else:
            body = (rule.left, rule.right)
        prods.setdefault(rule.head, []).append(body)
    return g.axiom, prods


@dataclass
class BoundedLanguage:
    words: FrozenSet[Tuple]
    height_bound: int
    complete: bool
    # per height h (1-based) the words of L^{<=h}, same reduction mode
    layers: Tuple[FrozenSet[Tuple], ...] = ()


def enumerate_cfg(
    g,
    h: int,
    cap: int = 20_000,
    reduced: bool = True,
    work: Optional[int] = None,
    nonterminal: Optional[str] = None,
    max_len: Optional[int] = None,
) -> BoundedLanguage:
    """``L_X^{<=h}`` by the height recurrence.

    A body's height is one more than the largest height of its nonterminals.
    With ``reduced`` the words are stored after reduction (enough for any
    question about reducts, and far fewer words).  If some ``L_Y^{<=k}`` grows
    beyond ``cap`` words, or a word longer than ``max_len`` appears, the
    result is flagged incomplete.  ``work`` bounds the number of word
    combinations tried (default ``50 * cap``), also flagging incompleteness.
    """
    budget = 50 * cap if work is None else work
    axiom, prods = grammar_productions(g)
    target = axiom if nonterminal is None else nonterminal
    norm = naive_reduce if reduced else (lambda w: tuple(tuple(a) for a in w))
    cur: Dict[str, Set[Tuple]] = {x: set() for x in prods}
    complete = True
    layers: List[FrozenSet[Tuple]] = []
    for _ in range(h):
        nxt = {x: set(ws) for x, ws in cur.items()}
        for head, bodies in prods.items():
            for body in bodies:
                parts: List[Iterable[Tuple]] = []
                ok = True
                for sym in body:
                    if isinstance(sym, str):
                        if not cur[sym]:
                            ok = False
                            break
                        parts.append(sorted(cur[sym]))
                    else:
                        parts.append([(tuple(sym),)])
                if not ok:
                    continue
                for combo in itertools.product(*parts):
                    budget -= 1
                    if budget < 0:
                        return BoundedLanguage(frozenset(nxt[target]), h, False, tuple(layers))
                    word = norm(tuple(a for piece in combo for a in piece))
                    if max_len is not None and len(word) > max_len:
                        complete = False
                        continue
                    nxt[head].add(word)
                    if len(nxt[head]) > cap:
                        return BoundedLanguage(frozenset(nxt[target]), h, False, tuple(layers))
        cur = nxt
        layers.append(frozenset(cur[target]))
    return BoundedLanguage(frozenset(cur[target]), h, complete, tuple(layers))


# -- suffixes --------------------------------------------------------------------


def _common_suffix(x: Sequence, y: Sequence) -> Tuple:
    n = 0
    while n < len(x) and n < len(y) and x[len(x) - 1 - n] == y[len(y) - 1 - n]:
        n += 1
    return tuple(x[len(x) - n :])


def naive_lcs(words: Iterable[Sequence]) -> Optional[Tuple]:
    """Longest common suffix by pairwise scan; ``None`` for no words (top)."""
    out: Optional[Tuple] = None
    for w in words:
        out = tuple(w) if out is None else _common_suffix(out, w)
    return out


def naive_primitive_root(word: Sequence) -> Tuple:
    word = tuple(word)
    for d in range(1, len(word) + 1):
        if all(word[i] == word[i % d] for i in range(len(word))):
            if len(word) % d == 0:
                return word[:d]
    return word


def naive_lcsext(words: Iterable[Sequence]):
    """``lcsext`` of a finite language.

    Returns ``("top",)``, ``("finite", word)`` or ``("omega", p)`` meaning the
    left-infinite word ``...ppp`` with ``p`` primitive.  Each ``z^~w`` is
    unrolled to ``2 * max|z|`` letters: two periodic words with periods of
    length ``p, q <= m`` that agree on ``p + q`` letters agree everywhere.
    """
    words = {tuple(w) for w in words}
    if not words:
        return ("top",)
    r = naive_lcs(words)
    zs = [w[: len(w) - len(r)] for w in words if len(w) > len(r)]
    if not zs:
        return ("top",)
    m = max(len(z) for z in zs)
    length = 2 * m + 1
    unrolled = []
    for z in zs:
        k = length // len(z) + 1
        unrolled.append((z * k)[-length:])
    common = naive_lcs(unrolled)
    if len(common) == length:
        return ("omega", naive_primitive_root(zs[0]))
    return ("finite", common)


def naive_sig(words: Iterable[Sequence]):
    words = {tuple(w) for w in words}
    lcs = naive_lcs(words)
    return (("top",) if lcs is None else ("finite", lcs), naive_lcsext(words))


def brute_tsn(words: Iterable[Sequence]) -> FrozenSet[Tuple]:
    """First subset of size at most 3 (by size, then sorted order) with the same summary."""
    words = sorted({tuple(w) for w in words}, key=lambda w: (len(w), w))
    target = naive_sig(words)
    for k in range(0, min(3, len(words)) + 1):
        for sub in itertools.combinations(words, k):
            if naive_sig(sub) == target:
                return frozenset(sub)
    raise AssertionError("no sublanguage of size <= 3 has the same summary")


# -- trees and transducers ----------------------------------------------------------


def enumerate_trees(alphabet: Dict[str, int], depth: int) -> List:
    """All trees of depth at most ``depth`` as ``(symbol, children)`` pairs, smallest first."""
    by_depth: List[List] = []
    for d in range(1, depth + 1):
        lower = [t for layer in by_depth for t in layer]
        prev = by_depth[-1] if by_depth else []
        layer = []
        for f, rank in sorted(alphabet.items()):
            if rank == 0:
                if d == 1:
                    layer.append((f, ()))
                continue
            for kids in itertools.product(lower, repeat=rank):
                if any(k in prev for k in kids):
                    layer.append((f, tuple(kids)))
        by_depth.append(layer)

    def size(t) -> int:
        return 1 + sum(size(c) for c in t[1])

    out = [t for layer in by_depth for t in layer]
    return sorted(out, key=lambda t: (size(t), repr(t)))


def naive_eval(m, q: str, t) -> Tuple:
    """``[[q]](t)`` unreduced: paste the rule bodies, then reduce once."""

    def raw(state: str, node) -> List:
        out: List = []
        symbol, kids = node[0], node[1]
        for it in m.rules[(state, symbol)]:
            if hasattr(it, "var"):
                out.extend(raw(it.state, kids[it.var]))
            else:
                out.append(tuple(it))
        return out

    return naive_reduce(raw(q, t))


def naive_run(m, t) -> Tuple:
    out: List = []
    for it in m.axiom:
        if hasattr(it, "var"):
            out.extend(naive_eval(m, it.state, t))
        else:
            out.append(tuple(it))
    return naive_reduce(out)
