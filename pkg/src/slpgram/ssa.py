"""Reduction of SLP q-gram counting to one weighted string.

Every q-gram occurrence of the text is owned by exactly one derivation-tree
node: the deepest node whose span covers it, which is always a pair rule
whose child seam the gram crosses.  The boundary window of a pair rule
(last q-1 characters of its left child plus first q-1 of its right child)
therefore holds each owned gram exactly once, and counting all windows with
per-rule occurrence weights equals counting on the full text.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .slp import ConsistencyError, Expander, SlpGrammar, SlpMetrics
from .suffix import WeightedText


@dataclass(frozen=True)
class BoundaryWindow:
    variable: int
    content: bytes
    weight: int


def _window(exp: Expander, lengths: list[int], left: int, right: int, q: int) -> bytes:
    return exp.suffix(left, min(q - 1, lengths[left])) + exp.prefix(right, min(q - 1, lengths[right]))


def boundary_window(g: SlpGrammar, m: SlpMetrics, q: int, i: int) -> BoundaryWindow:
    """Window of pair rule i, weighted by its derivation-tree occurrences."""
    if q < 2:
        raise ValueError("q must be at least 2")
    rule = g.rule(i)
    if rule.is_terminal:
        raise ValueError(f"rule {i} is a terminal; only pair rules have windows")
    exp = Expander(g, m.lengths)
    return BoundaryWindow(i, _window(exp, m.lengths, rule.left, rule.right, q), m.occurrences[i])


def build_ssa_text(g: SlpGrammar, m: SlpMetrics, q: int) -> WeightedText:
    """Concatenate the windows of all long-enough pair rules.

    Windows appear in ascending rule index.  Within each window the first
    q-1 positions weigh zero (grams ending there straddle the previous
    window) and the rest weigh the rule's occurrence count, so bridge grams
    created by the concatenation are never counted.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    lefts, rights = g._arrays
    lengths = m.lengths
    occurrences = m.occurrences
    exp = Expander(g, lengths)
    parts: list[bytes] = []
    run_weights: list[int] = []
    run_lengths: list[int] = []
    for i in range(1, g.n + 1):
        r = rights[i]
        if r < 0 or lengths[i] < q:
            continue
        size = min(q - 1, lengths[lefts[i]]) + min(q - 1, lengths[r])
        if size < q:
            raise ConsistencyError(f"window of rule {i} is shorter than q")
        parts.append(_window(exp, lengths, lefts[i], r, q))
        run_weights += [0, occurrences[i]]
        run_lengths += [q - 1, size - (q - 1)]
    text = b"".join(parts)
    weights = np.repeat(run_weights, run_lengths) if parts else np.zeros(0, dtype=np.int64)
    return WeightedText(text, weights, q)
