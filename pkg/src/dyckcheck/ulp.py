"""Longest common suffixes over finite and ultimately left-periodic words.

Values live in ``Σ* ∪ {p^~w u} ∪ {TOP}`` ordered by the suffix order:
``x <= y`` iff ``x`` is a suffix of ``y``.  ``p^~w u`` denotes the left-infinite
word ``...pppu``.  ``TOP`` sits above everything and is the lcs of nothing.

Letters are arbitrary hashable symbols; words are tuples.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce as _fold
from typing import Iterable, Sequence, Tuple, Union

__all__ = [
    "Finite",
    "Ulp",
    "TOP",
    "SuffixElem",
    "canonicalize",
    "omega",
    "primitive_root",
    "lcs2",
    "lcs_set",
    "suffix_le",
    "append",
    "strip_suffix",
    "letters_from_right",
    "format_elem",
    "parse_elem",
]


@dataclass(frozen=True)
class Finite:
    word: Tuple = ()

    def __len__(self):
        return len(self.word)


@dataclass(frozen=True)
class Ulp:
    """``period^~w core``, kept canonical by :func:`canonicalize`."""

    period: Tuple
    core: Tuple = ()


class _Top:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()

SuffixElem = Union[Finite, Ulp, _Top]


def primitive_root(word: Sequence) -> Tuple:
    """Shortest ``p`` with ``word = p^k``."""
    word = tuple(word)
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def canonicalize(period: Sequence, core: Sequence = ()) -> SuffixElem:
    """Normal form of ``period^~w core``.

    The period becomes primitive, and letters of the core that merely continue
    the period are folded into it: ``(a b)^~w a b x`` is ``(a b)^~w x`` and
    ``(a b)^~w a`` is ``(b a)^~w``.  An empty period gives ``TOP``.
    """
    period, core = tuple(period), tuple(core)
    if not period:
        return TOP
    period = primitive_root(period)
    while core and core[0] == period[0]:
        period = period[1:] + period[:1]
        core = core[1:]
    return Ulp(period, core)


def omega(word: Sequence) -> SuffixElem:
    """``word^~w``; TOP for the empty word."""
    return canonicalize(word, ())


def letters_from_right(x: SuffixElem):
    """Yield the letters of ``x`` right to left (forever for an ``Ulp``)."""
    if isinstance(x, Finite):
        yield from reversed(x.word)
    elif isinstance(x, Ulp):
        yield from reversed(x.core)
        while True:
            yield from reversed(x.period)
    else:
        raise ValueError("TOP has no letters")


def _bound(x: SuffixElem, y: SuffixElem) -> int:
    # two distinct ultimately periodic words differ within
    # max(preperiods) + p + q - gcd(p, q) letters
    if isinstance(x, Finite):
        return len(x.word) if not isinstance(y, Finite) else min(len(x.word), len(y.word))
    if isinstance(y, Finite):
        return len(y.word)
    p, q = len(x.period), len(y.period)
    return max(len(x.core), len(y.core)) + p + q - math.gcd(p, q)


def lcs2(x: SuffixElem, y: SuffixElem) -> SuffixElem:
    """Infimum of ``x`` and ``y`` in the suffix order."""
    if x is TOP:
        return y
    if y is TOP or x == y:
        return x
    common = []
    for _, a, b in zip(range(_bound(x, y)), letters_from_right(x), letters_from_right(y)):
        if a != b:
            break
        common.append(a)
    common.reverse()
    return Finite(tuple(common))


def lcs_set(elems: Iterable[SuffixElem]) -> SuffixElem:
    return _fold(lcs2, elems, TOP)


def suffix_le(x: SuffixElem, y: SuffixElem) -> bool:
    return lcs2(x, y) == x


def append(x: SuffixElem, word: Sequence) -> SuffixElem:
    """Right concatenation ``x · word`` with a finite word."""
    word = tuple(word)
    if x is TOP:
        return TOP
    if isinstance(x, Finite):
        return Finite(x.word + word)
    return canonicalize(x.period, x.core + word)


def strip_suffix(x: SuffixElem, suffix: Sequence) -> SuffixElem:
    """The ``d`` with ``x = d · suffix``; requires ``suffix`` to be a suffix of ``x``."""
    suffix = tuple(suffix)
    n = len(suffix)
    if x is TOP or n == 0:
        return x
    if isinstance(x, Finite):
        if n > len(x.word) or x.word[len(x.word) - n:] != suffix:
            raise ValueError(f"{suffix} is not a suffix of {format_elem(x)}")
        return Finite(x.word[: len(x.word) - n])
    core = x.core
    if len(core) < n:
        k = -(-(n - len(core)) // len(x.period))
        core = x.period * k + core
    if core[len(core) - n:] != suffix:
        raise ValueError(f"{suffix} is not a suffix of {format_elem(x)}")
    return canonicalize(x.period, core[: len(core) - n])


def _join(word: Sequence) -> str:
    if not word:
        return "_"
    letters = [str(a) for a in word]
    if all(len(a) == 1 for a in letters):
        return "".join(letters)
    return " ".join(letters)


def format_elem(x: SuffixElem) -> str:
    if x is TOP:
        return "TOP"
    if isinstance(x, Finite):
        return _join(x.word)
    core = "" if not x.core else " " + _join(x.core)
    return f"({_join(x.period)})^~w{core}"


_ULP = re.compile(r"^\s*\((?P<period>[^)]*)\)\s*\^~w(?P<core>.*)$")


def _split_letters(text: str) -> Tuple[str, ...]:
    text = text.strip()
    if not text or text == "_":
        return ()
    if any(ch.isspace() for ch in text):
        return tuple(tok for tok in text.split() if tok != "_")
    return tuple(text)


def parse_elem(text: str) -> SuffixElem:
    """Inverse of :func:`format_elem`.

    Letters are whitespace-separated tokens; a chunk without whitespace is
    read one character per letter, so ``(ab)^~w`` and ``(a b)^~w`` agree.
    """
    if text.strip() == "TOP":
        return TOP
    m = _ULP.match(text)
    if m:
        period = _split_letters(m.group("period"))
        if not period:
            raise ValueError("empty period: write TOP instead")
        return canonicalize(period, _split_letters(m.group("core")))
    if "(" in text or ")" in text or "^" in text:
        raise ValueError(f"cannot parse suffix element {text!r}")
    return Finite(_split_letters(text))
