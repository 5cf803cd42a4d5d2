"""Words over paired brackets and their reduction in the free involutive monoid.

An opening bracket is written as a plain identifier (``a``); its closing
partner is the same identifier followed by an apostrophe (``a'``).  The empty
word is written ``_``.

Only ``a a'`` cancels.  ``a' a`` is already reduced: this is the one-sided
rewrite system, not the free group.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

__all__ = [
    "Letter",
    "Word",
    "BracketAlphabet",
    "WordSyntaxError",
    "opener",
    "closer",
    "parse_word",
    "format_word",
    "reduce",
    "height",
    "involute",
    "is_nonnegative",
    "is_wwf",
    "is_wf",
    "split_wwf",
    "from_parts",
    "positive_part",
]

EMPTY_TOKEN = "_"
_IDENT = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.]*$")


class WordSyntaxError(ValueError):
    pass


class Letter(NamedTuple):
    name: str
    close: bool = False

    def __str__(self) -> str:
        return self.name + "'" if self.close else self.name

    def flipped(self) -> "Letter":
        return Letter(self.name, not self.close)


Word = Tuple[Letter, ...]


def opener(name: str) -> Letter:
    return Letter(name, False)


def closer(name: str) -> Letter:
    return Letter(name, True)


@dataclass(frozen=True)
class BracketAlphabet:
    """The opening brackets; closers are implied, one per opener."""

    openers: Tuple[str, ...]

    def __post_init__(self):
        if not self.openers:
            raise ValueError("bracket alphabet must not be empty")
        if len(set(self.openers)) != len(self.openers):
            raise ValueError(f"duplicate brackets in {self.openers}")
        for name in self.openers:
            if not _IDENT.match(name):
                raise ValueError(f"invalid bracket name {name!r}")

    def __contains__(self, name: object) -> bool:
        return name in self.openers

    def letters(self) -> Tuple[Letter, ...]:
        return tuple(opener(a) for a in self.openers) + tuple(closer(a) for a in self.openers)

    def word(self, text: str) -> Word:
        return parse_word(text, self)

    def check(self, word: Iterable[Letter]) -> None:
        for letter in word:
            if letter.name not in self.openers:
                raise WordSyntaxError(f"letter {letter} is not over brackets {' '.join(self.openers)}")


def parse_token(token: str) -> Letter:
    if token.endswith("'"):
        name, close = token[:-1], True
    else:
        name, close = token, False
    if not _IDENT.match(name):
        raise WordSyntaxError(f"invalid bracket token {token!r}")
    return Letter(name, close)


def parse_word(text: str, alphabet: Optional[BracketAlphabet] = None) -> Word:
    """Parse ``"a a b' c"``; ``_`` tokens denote the empty word and are dropped."""
    letters = tuple(parse_token(tok) for tok in text.split() if tok != EMPTY_TOKEN)
    if alphabet is not None:
        alphabet.check(letters)
    return letters


def format_word(word: Sequence[Letter]) -> str:
    if not word:
        return EMPTY_TOKEN
    return " ".join(str(letter) for letter in word)


def reduce(word: Iterable[Letter]) -> Word:
    """Cancel every factor ``a a'`` until none is left.

    One stack pass: a closer pops the stack only when the top is its own
    opener.  Anything else (a different opener, a closer, nothing) means the
    closer stays forever.
    """
    stack: list = []
    for letter in word:
        if letter.close and stack and not stack[-1].close and stack[-1].name == letter.name:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def height(word: Iterable[Letter]) -> int:
    return sum(-1 if letter.close else 1 for letter in word)


def involute(word: Sequence[Letter]) -> Word:
    return tuple(letter.flipped() for letter in reversed(word))


def is_nonnegative(word: Iterable[Letter]) -> bool:
    level = 0
    for letter in word:
        level += -1 if letter.close else 1
        if level < 0:
            return False
    return True


def split_wwf(word: Iterable[Letter]) -> Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """Return ``(u, v)`` with ``rd(word) = u' v`` (``u'`` the involution of ``u``).

    Both components are tuples of opener names.  ``None`` when the reduct is
    not of the form closers-then-openers.
    """
    reduced = reduce(word)
    i = 0
    while i < len(reduced) and reduced[i].close:
        i += 1
    rest = reduced[i:]
    if any(letter.close for letter in rest):
        return None
    # the closer block b' a' is the involution of the opener word a b
    negative = tuple(letter.name for letter in reversed(reduced[:i]))
    return negative, tuple(letter.name for letter in rest)


def from_parts(negative: Sequence[str], positive: Sequence[str]) -> Word:
    """Inverse of :func:`split_wwf`."""
    return tuple(closer(a) for a in reversed(negative)) + tuple(opener(a) for a in positive)


def is_wwf(word: Iterable[Letter]) -> bool:
    return split_wwf(word) is not None


def is_wf(word: Iterable[Letter]) -> bool:
    return not any(letter.close for letter in reduce(word))


def positive_part(word: Sequence[Letter]) -> Tuple[str, ...]:
    """Names of an opener-only word; raises if a closer is present."""
    if any(letter.close for letter in word):
        raise ValueError(f"{format_word(word)} contains a closing bracket")
    return tuple(letter.name for letter in word)
