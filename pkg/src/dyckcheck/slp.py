"""Straight-line programs: DAG-shaped grammars that denote a single word.

Nodes are immutable and share children freely, so ``n`` squarings of a leaf
take ``n + 1`` nodes while the denoted word has length ``2**n``.  Lengths are
exact Python integers and never require expansion.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Tuple

__all__ = [
    "Slp",
    "Leaf",
    "Concat",
    "Slice",
    "SlpOverflow",
    "NotWeaklyWellFormed",
    "DEFAULT_CAP",
    "leaf",
    "EMPTY",
    "power_of_two",
    "wwf_combine",
    "drop_suffix",
    "ends_with",
]

DEFAULT_CAP = 10**6


class SlpOverflow(Exception):
    """Expansion would exceed the letter cap."""

    def __init__(self, length: int, cap: int):
        super().__init__(f"word of length {length} exceeds the cap of {cap} letters")
        self.length = length
        self.cap = cap


class NotWeaklyWellFormed(Exception):
    """Combining two pairs produced a factor ``a b'`` that never cancels."""


class Slp:
    __slots__ = ("length",)
    length: int

    def __add__(self, other: "Slp") -> "Slp":
        if not isinstance(other, Slp):
            return NotImplemented
        if other.length == 0:
            return self
        if self.length == 0:
            return other
        return Concat(self, other)

    def slice(self, start: int, end: int) -> "Slp":
        if not 0 <= start <= end <= self.length:
            raise IndexError(f"slice [{start}:{end}] out of range for length {self.length}")
        if start == 0 and end == self.length:
            return self
        if start == end:
            return EMPTY
        if isinstance(self, Slice):
            return Slice(self.child, self.start + start, self.start + end)
        return Slice(self, start, end)

    def expand(self, cap: int = DEFAULT_CAP) -> Tuple:
        """The denoted word, or :class:`SlpOverflow` if it is longer than ``cap``."""
        if self.length > cap:
            raise SlpOverflow(self.length, cap)
        out: List = []
        stack: List[Tuple[Slp, int, int]] = [(self, 0, self.length)]
        while stack:
            node, start, end = stack.pop()
            if start >= end:
                continue
            if isinstance(node, Leaf):
                out.extend(node.word[start:end])
            elif isinstance(node, Slice):
                stack.append((node.child, node.start + start, node.start + end))
            else:
                split = node.left.length
                # right half pushed first so the left half is emitted first
                stack.append((node.right, max(start - split, 0), end - split))
                stack.append((node.left, start, min(end, split)))
        return tuple(out)

    def nodes(self) -> List["Slp"]:
        """Distinct nodes in child-before-parent order."""
        order: List[Slp] = []
        seen: Dict[int, Slp] = {}
        stack: List[Tuple[Slp, bool]] = [(self, False)]
        while stack:
            node, done = stack.pop()
            if id(node) in seen:
                continue
            if done:
                seen[id(node)] = node
                order.append(node)
                continue
            stack.append((node, True))
            for child in node._children():
                if id(child) not in seen:
                    stack.append((child, False))
        return order

    def dump(self) -> str:
        """One node per line: ``<idx>: LEAF <tokens> | CAT <l> <r> | SLICE <c> <s> <e>``."""
        order = self.nodes()
        index = {id(n): i for i, n in enumerate(order)}
        lines = []
        for i, node in enumerate(order):
            if isinstance(node, Leaf):
                body = " ".join(str(a) for a in node.word) or "_"
                lines.append(f"{i}: LEAF {body}")
            elif isinstance(node, Concat):
                lines.append(f"{i}: CAT {index[id(node.left)]} {index[id(node.right)]}")
            else:
                lines.append(f"{i}: SLICE {index[id(node.child)]} {node.start} {node.end}")
        return "\n".join(lines)

    def _children(self) -> Tuple["Slp", ...]:
        return ()

    def __repr__(self):
        return f"<{type(self).__name__} length={self.length}>"


class Leaf(Slp):
    __slots__ = ("word",)

    def __init__(self, word: Iterable):
        self.word = tuple(word)
        self.length = len(self.word)


class Concat(Slp):
    __slots__ = ("left", "right")

    def __init__(self, left: Slp, right: Slp):
        self.left = left
        self.right = right
        self.length = left.length + right.length

    def _children(self):
        return (self.left, self.right)


class Slice(Slp):
    __slots__ = ("child", "start", "end")

    def __init__(self, child: Slp, start: int, end: int):
        if not 0 <= start <= end <= child.length:
            raise IndexError(f"slice [{start}:{end}] out of range for length {child.length}")
        self.child = child
        self.start = start
        self.end = end
        self.length = end - start

    def _children(self):
        return (self.child,)


EMPTY = Leaf(())


def leaf(word: Iterable) -> Slp:
    return Leaf(word)


def power_of_two(base: Slp, n: int) -> Slp:
    """``base`` squared ``n`` times, denoting ``base ** (2 ** n)``."""
    node = base
    for _ in range(n):
        node = Concat(node, node)
    return node


def ends_with(word: Slp, suffix: Slp, cap: int = DEFAULT_CAP) -> bool:
    """Compare only the overlapping tail; the rest is never expanded."""
    if suffix.length > word.length:
        return False
    tail = word.slice(word.length - suffix.length, word.length)
    return tail.expand(cap) == suffix.expand(cap)


def drop_suffix(word: Slp, n: int) -> Slp:
    return word.slice(0, word.length - n)


Pair = Tuple[Slp, Slp]


def wwf_combine(x: Pair, y: Pair, cap: int = DEFAULT_CAP) -> Pair:
    """Reduce ``u' v r' s`` for ``x = (u, v)`` and ``y = (r, s)``.

    Each pair ``(u, v)`` stands for the reduced word ``u' v``: the involution
    of the opener word ``u`` followed by the opener word ``v``.  The middle
    ``v r'`` cancels only if one of ``v``, ``r`` is a suffix of the other.
    """
    u, v = x
    r, s = y
    if v.length >= r.length:
        if not ends_with(v, r, cap):
            raise NotWeaklyWellFormed("positive part does not end with the cancelled descent")
        return u, drop_suffix(v, r.length) + s
    if not ends_with(r, v, cap):
        raise NotWeaklyWellFormed("descent does not end with the preceding positive part")
    return drop_suffix(r, v.length) + u, s
