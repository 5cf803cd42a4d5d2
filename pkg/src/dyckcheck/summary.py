"""Language summaries ``sig(L) = (lcs(L), lcsext(L))``.

``lcsext(L)`` is the longest (possibly left-infinite) word ``e`` such that
prepending words to ``L`` can extend the common suffix by suffixes of ``e``.
Two languages with the same summary behave alike under union and
concatenation, so every finite language can be shrunk to at most three of
its words (:func:`tsn`) without changing anything the well-formedness check
looks at.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Sequence, Tuple

from .ulp import (
    TOP,
    Finite,
    SuffixElem,
    append,
    format_elem,
    lcs2,
    lcs_set,
    omega,
    strip_suffix,
    suffix_le,
)

__all__ = ["Summary", "EMPTY", "sig_of_finite", "sig_union", "sig_concat", "tsn", "word_key"]

Words = Iterable[Tuple]


@dataclass(frozen=True)
class Summary:
    lcs: SuffixElem
    ext: SuffixElem

    def __str__(self):
        return f"({format_elem(self.lcs)}, {format_elem(self.ext)})"

    @property
    def empty(self) -> bool:
        return self.lcs is TOP


EMPTY = Summary(TOP, TOP)


def word_key(word: Sequence):
    """Shortest first, then lexicographic; the deterministic tie-break."""
    return (len(word), tuple(word))


def _lcs_words(words: Iterable[Tuple]) -> SuffixElem:
    return lcs_set(Finite(tuple(w)) for w in words)


def sig_of_finite(words: Words) -> Summary:
    words = {tuple(w) for w in words}
    if not words:
        return EMPTY
    common = _lcs_words(words)
    n = len(common.word)
    ext = lcs_set(omega(w[: len(w) - n]) for w in words if len(w) > n)
    return Summary(common, ext)


def sig_union(s: Summary, t: Summary) -> Summary:
    if s.lcs is TOP:
        return t
    if t.lcs is TOP:
        return s
    r, r2 = s.lcs, t.lcs
    if suffix_le(r2, r):
        s, t = t, s
        r, r2 = r2, r
    if not suffix_le(r, r2):
        return Summary(lcs2(r, r2), Finite())
    # r2 = delta r.  The extension coming from the longer side is
    # lcs(delta^~w, E') delta: words of t reach r only through delta.
    delta = r2.word[: len(r2.word) - len(r.word)]
    from_t = append(lcs2(omega(delta), t.ext), delta)
    return Summary(r, lcs2(s.ext, from_t))


def sig_concat(s: Summary, t: Summary) -> Summary:
    if s.lcs is TOP or t.lcs is TOP:
        return EMPTY
    r, e = s.lcs, s.ext
    r2, e2 = t.lcs, t.ext
    if not suffix_le(r, e2):
        return Summary(append(lcs2(r, e2), r2.word), Finite())
    if e2 is TOP:
        return Summary(append(r, r2.word), e)
    delta = strip_suffix(e2, r.word)
    return Summary(append(r, r2.word), lcs2(e, delta))


def tsn(words: Words) -> FrozenSet[Tuple]:
    """A sublanguage of at most three words with the same summary.

    Among the admissible choices the shortest, then lexicographically least,
    words are taken.
    """
    words = sorted({tuple(w) for w in words}, key=word_key)
    if len(words) <= 2:
        return frozenset(words)
    common = _lcs_words(words)
    n = len(common.word)
    if common.word in words:
        rest = [w for w in words if w != common.word]
        ext = lcs_set(omega(w[: len(w) - n]) for w in rest)
        x = rest[0]
        x_root = omega(x[: len(x) - n])
        for y in rest:
            if lcs2(x_root, omega(y[: len(y) - n])) == ext:
                return frozenset((common.word, x, y))
        raise AssertionError("no lcsext witness found")
    x = words[0]
    for y in words[1:]:
        if _lcs_words((x, y)) == common:
            return frozenset((x, y))
    raise AssertionError("no lcs witness found")

