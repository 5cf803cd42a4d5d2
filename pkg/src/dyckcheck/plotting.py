"""Figures for height-iteration runs (matplotlib, file output only)."""
from __future__ import annotations

import os
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .ulp import TOP, Finite  # noqa: E402

__all__ = ["suffix_length", "trajectory", "plot_trajectory"]


def suffix_length(x) -> Optional[float]:
    """Length of a finite suffix value; ``inf`` for a periodic one, ``None`` for TOP."""
    if x is TOP:
        return None
    if isinstance(x, Finite):
        return len(x.word)
    return float("inf")


def trajectory(table, nonterminals: Optional[Sequence[str]] = None) -> Dict[str, List[Optional[float]]]:
    """Per nonterminal, the lcs length of ``T_X^{<=h}`` for ``h = 1 .. height``."""
    names = list(nonterminals or table.nonterminals)
    return {x: [suffix_length(table.sig(x, h).lcs) for h in range(1, table.height + 1)] for x in names}


def plot_trajectory(table, path: str, title: str = "", nonterminals: Optional[Sequence[str]] = None) -> str:
    """Write a PNG with one lcs-length curve per nonterminal; returns ``path``."""
    data = trajectory(table, nonterminals)
    heights = list(range(1, table.height + 1))
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, ys in data.items():
        pts = [(h, y) for h, y in zip(heights, ys) if y is not None and y != float("inf")]
        if not pts:
            continue
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, label=name)
    if table.violation is not None:
        ax.axvline(table.violation.height, color="red", ls="--", lw=1, label=f"violation at {table.violation.nonterminal}")
    if table.converged_at is not None:
        ax.axvline(table.converged_at, color="green", ls=":", lw=1, label="converged")
    ax.set_xlabel("derivation height h")
    ax.set_ylabel("|lcs(T_X^{<=h})|")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
