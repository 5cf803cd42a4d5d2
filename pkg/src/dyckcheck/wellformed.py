"""Deciding whether every word of a context-free language reduces to openers only.

The pipeline, for a normalized grammar with ``N`` nonterminals:

1. every constant must be weakly well-formed (a factor ``a b'`` never cancels);
2. the prefix language must be nonnegative (tropical Kleene iteration, then
   Bellman-Ford on the pumping graph);
3. for each nonterminal ``X`` an SLP for ``r_X``, the shortest opener word
   that makes ``r_X L_X`` well-formed;
4. the tables ``T_X^{<=h}``, at most three reduced words summarizing
   ``rd(r_X L_X^{<=h})``, are iterated until their summaries stop changing
   or height ``4N + 1`` is reached.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .brackets import Word, format_word, from_parts, height, reduce, split_wwf
from .grammar import (
    Binary,
    Const,
    Grammar,
    RawGrammar,
    Unit,
    involute_grammar,
    normalize,
    prefix_grammar,
    trim,
)
from .slp import (
    DEFAULT_CAP,
    EMPTY as SLP_EMPTY,
    NotWeaklyWellFormed,
    Slp,
    SlpOverflow,
    ends_with,
    leaf,
    wwf_combine,
)
from .summary import EMPTY as EMPTY_SIG, Summary, sig_of_finite, tsn

__all__ = [
    "WF",
    "NOT_WF",
    "RESOURCE_LIMIT",
    "BALANCED",
    "NOT_BALANCED",
    "INF",
    "min_heights",
    "NonnegResult",
    "check_nonnegative",
    "DescentConflict",
    "DescentInfo",
    "compute_descent",
    "Violation",
    "HeightTable",
    "ResourceExceeded",
    "iterate_heights",
    "WfResult",
    "decide_well_formed",
    "BalancedResult",
    "decide_balanced_cfg",
]

WF = "WF"
NOT_WF = "NotWF"
RESOURCE_LIMIT = "ResourceLimit"
BALANCED = "Balanced"
NOT_BALANCED = "NotBalanced"

INF = float("inf")

Names = Tuple[str, ...]
Table = Dict[str, Optional[FrozenSet[Names]]]


class ResourceExceeded(Exception):
    """A configured limit (height, word length, letter cap) was hit."""


# -- nonnegativity -----------------------------------------------------------


def min_heights(g: Grammar, rounds: Optional[int] = None) -> Dict[str, float]:
    """``F^rounds(inf)``: the least height of a word of ``L_X^{<=rounds}``.

    Heights live in the tropical semiring (min, +) with ``inf`` for "no word
    yet".  ``rounds`` defaults to the number of nonterminals.
    """
    rounds = g.size if rounds is None else rounds

    value: Dict[str, float] = {x: INF for x in g.nonterminals}
    for _ in range(rounds):
        nxt = dict.fromkeys(g.nonterminals, INF)
        for rule in g.rules:
            if isinstance(rule, Const):
                cand = height(rule.word)
            elif isinstance(rule, Unit):
                cand = value[rule.child]
            else:
                cand = value[rule.left] + value[rule.right]
            if cand < nxt[rule.head]:
                nxt[rule.head] = cand
        if nxt == value:
            break
        value = nxt
    return value


@dataclass
class NonnegResult:
    nonnegative: bool
    min_height: float  # least height among words of derivation height <= N
    cycle: Optional[List[str]] = None  # nonterminals of a negative pumping cycle


def check_nonnegative(g: Grammar, axiom: Optional[str] = None) -> NonnegResult:
    """Is every word of ``g`` from ``axiom`` nonnegative (all prefixes height >= 0)?

    ``g`` should already be prefix-closed (see :func:`grammar.prefix_closure`).
    """
    axiom = g.axiom if axiom is None else axiom
    if not g.rules:
        return NonnegResult(True, INF)
    f = min_heights(g)
    if f[axiom] < 0:
        return NonnegResult(False, f[axiom])
    edges: List[Tuple[str, str, float]] = []
    for rule in g.rules:
        if isinstance(rule, Binary):
            edges.append((rule.head, rule.right, f[rule.left]))
            edges.append((rule.head, rule.left, f[rule.right]))
        elif isinstance(rule, Unit):
            edges.append((rule.head, rule.child, 0))
    edges = [e for e in edges if e[2] != INF]
    dist: Dict[str, float] = dict.fromkeys(g.nonterminals, INF)
    pred: Dict[str, str] = {}
    dist[axiom] = 0
    changed_at = None
    for _ in range(len(g.nonterminals)):
        changed_at = None
        for src, dst, w in edges:
            if dist[src] + w < dist[dst]:
                dist[dst] = dist[src] + w
                pred[dst] = src
                changed_at = dst
        if changed_at is None:
            return NonnegResult(True, f[axiom])
    # still relaxing after |V| rounds: walk back into the cycle
    node = changed_at
    for _ in range(len(g.nonterminals)):
        node = pred[node]
    cycle = [node]
    cur = pred[node]
    while cur != node:
        cycle.append(cur)
        cur = pred[cur]
    cycle.reverse()
    return NonnegResult(False, f[axiom], cycle)


# -- descent -----------------------------------------------------------------


class DescentConflict(Exception):
    """Two reachable descents are incomparable, so no ``r_X`` can exist."""

    def __init__(self, nonterminal: str, message: str):
        super().__init__(f"{nonterminal}: {message}")
        self.nonterminal = nonterminal


Pair = Tuple[Slp, Slp]


@dataclass
class DescentInfo:
    """``r_X`` per nonterminal, as SLPs over opener names; ``d_X = |r_X|``."""

    r: Dict[str, Slp]

    def d(self, x: str) -> int:
        return self.r[x].length

    def word(self, x: str, cap: int = DEFAULT_CAP) -> Names:
        return self.r[x].expand(cap)


def _best(head: str, cands: Sequence[Pair], cap: int) -> Pair:
    # the largest descent u0 wins; every other (ui, vi) is rewritten as
    # u0' (u0 with ui removed from its end) followed by vi
    u0 = max((c[0] for c in cands), key=lambda s: s.length)
    best_v: Optional[Slp] = None
    for u, v in cands:
        if not ends_with(u0, u, cap):
            raise DescentConflict(head, "descents are not suffixes of one another")
        norm = u0.slice(0, u0.length - u.length) + v
        if best_v is None or norm.length < best_v.length:
            best_v = norm
    return u0, best_v


def compute_descent(g: Grammar, cap: int = DEFAULT_CAP) -> DescentInfo:
    """Maximal-descent pairs over the prefix grammar, unfolded by height.

    Raises :class:`DescentConflict` when the grammar cannot be well-formed
    and :class:`SlpOverflow` when an overlap check exceeds ``cap``.
    """
    gp, pname = prefix_grammar(g)
    current: Dict[str, Pair] = {}
    for rule in gp.rules:
        if isinstance(rule, Const):
            parts = split_wwf(rule.word)
            if parts is None:
                raise DescentConflict(rule.head, f"constant {format_word(rule.word)} is not weakly well-formed")
            cand = (leaf(parts[0]), leaf(parts[1]))
            prev = current.get(rule.head)
            current[rule.head] = cand if prev is None else _best(rule.head, [prev, cand], cap)
    for _ in range(len(gp.nonterminals)):
        nxt: Dict[str, List[Pair]] = {x: [p] for x, p in current.items()}
        for rule in gp.rules:
            if isinstance(rule, Unit):
                if rule.child in current:
                    nxt.setdefault(rule.head, []).append(current[rule.child])
            elif isinstance(rule, Binary):
                if rule.left in current and rule.right in current:
                    try:
                        pair = wwf_combine(current[rule.left], current[rule.right], cap)
                    except NotWeaklyWellFormed as exc:
                        raise DescentConflict(rule.head, str(exc)) from None
                    nxt.setdefault(rule.head, []).append(pair)
        current = {x: _best(x, cands, cap) for x, cands in nxt.items()}
    # X^p has no words when L_X = {eps}; the descent is then zero
    return DescentInfo({x: current[pname[x]][0] if pname[x] in current else SLP_EMPTY for x in g.nonterminals})


# -- height iteration --------------------------------------------------------


@dataclass
class Violation:
    nonterminal: str
    height: int
    rule: str
    stage: str  # "constant", "bridge" or "cancel"
    witness: Word  # reduced word containing a closer

    def __str__(self):
        return f"{self.rule} at height {self.height} ({self.stage}): {format_word(self.witness)}"


@dataclass
class HeightTable:
    """``rows[h - 1][X]`` is ``T_X^{<=h}``; ``None`` marks an empty ``L_X^{<=h}``."""

    nonterminals: Tuple[str, ...]
    rows: List[Table] = field(default_factory=list)
    violation: Optional[Violation] = None
    converged_at: Optional[int] = None
    max_word_len: int = 0

    @property
    def height(self) -> int:
        return len(self.rows)

    def entry(self, x: str, h: int) -> Optional[FrozenSet[Names]]:
        return self.rows[h - 1][x]

    def sig(self, x: str, h: int) -> Summary:
        words = self.entry(x, h)
        return EMPTY_SIG if words is None else sig_of_finite(words)


def _names_to_word(names: Names) -> Word:
    return from_parts((), names)


def _cancel(word: Names, r: Names) -> Optional[Names]:
    """``rd(word r')`` when it is an opener word, else ``None``."""
    n = len(r)
    if n > len(word) or word[len(word) - n:] != r:
        return None
    return word[: len(word) - n]


def _witness(word: Names, r: Names) -> Word:
    return reduce(_names_to_word(word) + from_parts(r, ()))


def _sigs(row: Table) -> Dict[str, Summary]:
    return {x: (EMPTY_SIG if w is None else sig_of_finite(w)) for x, w in row.items()}


def iterate_heights(
    g: Grammar,
    descent: DescentInfo,
    h_max: Optional[int] = None,
    cap: int = DEFAULT_CAP,
    max_word_len: Optional[int] = None,
    stop_on_fixpoint: bool = True,
) -> HeightTable:
    """Compute ``T_X^{<=h}`` for ``h = 1 .. h_max`` (default ``4N + 1``).

    Stops at the first violation, or as soon as no summary changed in one
    step (the update only depends on summaries, so nothing can change later).
    """
    h_max = 4 * g.size + 1 if h_max is None else h_max
    try:
        r = {x: descent.word(x, cap) for x in g.nonterminals}
    except SlpOverflow as exc:
        raise ResourceExceeded(str(exc)) from None
    by_head = {x: g.rules_of(x) for x in g.nonterminals}
    table = HeightTable(tuple(g.nonterminals))

    def note(word: Names) -> None:
        table.max_word_len = max(table.max_word_len, len(word))
        if max_word_len is not None and len(word) > max_word_len:
            raise ResourceExceeded(f"word of length {len(word)} exceeds --max-word-len {max_word_len}")

    def fail(x: str, h: int, rule, stage: str, witness: Word) -> HeightTable:
        table.violation = Violation(x, h, str(rule), stage, witness)
        return table

    prev: Optional[Table] = None
    prev_sigs: Optional[Dict[str, Summary]] = None
    for h in range(1, h_max + 1):
        row: Table = {}
        for x in g.nonterminals:
            rx = r[x]
            words = set(prev[x]) if prev and prev[x] is not None else set()
            for rule in by_head[x]:
                if isinstance(rule, Const):
                    if prev is not None:
                        continue  # already part of T_X^{<=h-1}
                    u, v = split_wwf(rule.word)
                    base = _cancel(rx, u)
                    if base is None:
                        return fail(x, h, rule, "constant", reduce(_names_to_word(rx) + rule.word))
                    words.add(base + v)
                    note(base + v)
                    continue
                if prev is None:
                    continue
                first = rule.child if isinstance(rule, Unit) else rule.left
                if prev[first] is None or (isinstance(rule, Binary) and prev[rule.right] is None):
                    continue
                bridge = _cancel(rx, r[first])
                if bridge is None:
                    return fail(x, h, rule, "bridge", _witness(rx, r[first]))
                for w in sorted(prev[first]):
                    mid = bridge + w
                    note(mid)
                    if isinstance(rule, Unit):
                        words.add(mid)
                        continue
                    rz = r[rule.right]
                    left = _cancel(mid, rz)
                    if left is None:
                        return fail(x, h, rule, "cancel", _witness(mid, rz))
                    for w2 in prev[rule.right]:
                        note(left + w2)
                        words.add(left + w2)
            row[x] = tsn(words) if words else None
        table.rows.append(row)
        sigs = _sigs(row)
        if stop_on_fixpoint and prev_sigs is not None and sigs == prev_sigs:
            table.converged_at = h - 1
            return table
        prev, prev_sigs = row, sigs
    return table


# -- decisions ---------------------------------------------------------------


@dataclass
class WfResult:
    verdict: str
    reason: str
    grammar: Grammar
    evidence: Dict[str, object] = field(default_factory=dict)
    descent: Optional[DescentInfo] = None
    table: Optional[HeightTable] = None
    counters: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == WF


def _prepare(g: Union[Grammar, RawGrammar]) -> Grammar:
    return normalize(g) if isinstance(g, RawGrammar) else trim(g)


def decide_well_formed(
    g: Union[Grammar, RawGrammar],
    max_height: Optional[int] = None,
    max_word_len: Optional[int] = None,
    cap: int = DEFAULT_CAP,
) -> WfResult:
    """WF, NotWF (with evidence) or ResourceLimit."""
    start = time.perf_counter()
    g = _prepare(g)
    n = g.size
    bound = 4 * n + 1

    def done(verdict, reason, **kw) -> WfResult:
        res = WfResult(verdict, reason, g, **kw)
        res.counters.setdefault("nonterminals", n)
        res.counters.setdefault("height_bound", bound)
        res.counters["seconds"] = round(time.perf_counter() - start, 6)
        return res

    if g.is_empty():
        return done(WF, "empty language")
    for rule in g.rules:
        if isinstance(rule, Const) and split_wwf(rule.word) is None:
            return done(NOT_WF, "constant not weakly well-formed",
                        evidence={"nonterminal": rule.head, "rule": str(rule), "witness": format_word(rule.word)})

    gp, pname = prefix_grammar(g)
    nonneg = check_nonnegative(gp.with_axiom(pname[g.axiom]))
    if not nonneg.nonnegative:
        ev: Dict[str, object] = {"min_height": nonneg.min_height}
        if nonneg.cycle:
            ev["negative_cycle"] = " -> ".join(nonneg.cycle)
        return done(NOT_WF, "negative prefix", evidence=ev)

    try:
        descent = compute_descent(g, cap)
    except DescentConflict as exc:
        return done(NOT_WF, "descent conflict", evidence={"nonterminal": exc.nonterminal, "detail": str(exc)})
    except SlpOverflow as exc:
        return done(RESOURCE_LIMIT, str(exc))
    if descent.d(g.axiom) > 0:
        return done(NOT_WF, "axiom descends below zero", descent=descent,
                    evidence={"descent": descent.d(g.axiom)})

    limit = bound if max_height is None else min(bound, max_height)
    try:
        table = iterate_heights(g, descent, limit, cap, max_word_len)
    except ResourceExceeded as exc:
        return done(RESOURCE_LIMIT, str(exc), descent=descent)
    counters = {"max_height": table.height, "max_word_len": table.max_word_len}
    if table.violation is not None:
        v = table.violation
        return done(NOT_WF, "violation", descent=descent, table=table, counters=counters,
                    evidence={"nonterminal": v.nonterminal, "height": v.height, "rule": v.rule,
                              "stage": v.stage, "witness": format_word(v.witness)})
    if table.converged_at is not None:
        counters["converged_at"] = table.converged_at
        return done(WF, "converged", descent=descent, table=table, counters=counters)
    if limit < bound:
        return done(RESOURCE_LIMIT, f"no convergence within --max-height {limit}",
                    descent=descent, table=table, counters=counters)
    return done(NOT_WF, "no convergence", descent=descent, table=table, counters=counters,
                evidence={"height": bound})


@dataclass
class BalancedResult:
    verdict: str
    forward: WfResult
    backward: Optional[WfResult]

    @property
    def failing(self) -> Optional[WfResult]:
        for res in (self.forward, self.backward):
            if res is not None and res.verdict != WF:
                return res
        return None


def decide_balanced_cfg(g: Union[Grammar, RawGrammar], **limits) -> BalancedResult:
    """Balanced iff the language and its involution are both well-formed."""
    g = _prepare(g)
    fwd = decide_well_formed(g, **limits)
    if fwd.verdict != WF:
        verdict = NOT_BALANCED if fwd.verdict == NOT_WF else RESOURCE_LIMIT
        return BalancedResult(verdict, fwd, None)
    bwd = decide_well_formed(involute_grammar(g), **limits)
    if bwd.verdict == WF:
        return BalancedResult(BALANCED, fwd, bwd)
    return BalancedResult(NOT_BALANCED if bwd.verdict == NOT_WF else RESOURCE_LIMIT, fwd, bwd)
