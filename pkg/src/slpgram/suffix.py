"""Suffix arrays, LCP arrays, and the weighted q-gram counting engine.

Every counting pipeline in this package reduces its input to one
:class:`WeightedText` and feeds it through :func:`weighted_qgram_counts`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class WeightedText:
    """A byte string where each position carries the weight of the q-gram
    ending there.

    ``end_weights[p]`` (0-based) belongs to the gram ``text[p - gram + 1 : p + 1]``;
    the first ``gram - 1`` positions cannot end a gram and must weigh zero.
    """

    text: bytes
    end_weights: np.ndarray
    gram: int

    def __post_init__(self) -> None:
        if self.gram < 1:
            raise ValueError("gram length must be at least 1")
        weights = np.asarray(self.end_weights, dtype=np.int64)
        object.__setattr__(self, "end_weights", weights)
        if weights.shape != (len(self.text),):
            raise ValueError("end_weights must hold one entry per text position")
        if weights[: self.gram - 1].any():
            raise ValueError(f"no q-gram can end before position {self.gram}")


@dataclass(frozen=True)
class QGramReport:
    """Distinct q-grams of a string with their total weights.

    Each entry is ``(end, weight)``: ``end`` is the 1-based end position of
    the gram's earliest occurrence in the source string, so its bytes are
    ``source[end - gram : end]``.  Entries are in gram byte order and only
    grams with positive total weight appear.
    """

    entries: list[tuple[int, int]]
    gram: int
    source_length: int

    @property
    def total_weight(self) -> int:
        return sum(w for _, w in self.entries)

    def materialize(self, source: bytes) -> dict[bytes, int]:
        """Resolve entries into gram bytes using the string they refer to."""
        return {source[end - self.gram : end]: w for end, w in self.entries}


def _suffix_array(data: np.ndarray) -> np.ndarray:
    """0-based suffix array by prefix doubling over numpy rank arrays."""
    n = data.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = data.astype(np.int64)
    step = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - step] = rank[step:]
        order = np.lexsort((second, rank))
        first_sorted = rank[order]
        second_sorted = second[order]
        changed = np.empty(n, dtype=np.int64)
        changed[0] = 0
        changed[1:] = (first_sorted[1:] != first_sorted[:-1]) | (
            second_sorted[1:] != second_sorted[:-1]
        )
        fresh = np.cumsum(changed)
        if fresh[-1] == n - 1:
            return order
        rank = np.empty(n, dtype=np.int64)
        rank[order] = fresh
        step *= 2


def _lcp_array(text: bytes, sa: list[int]) -> list[int]:
    # Kasai's amortized O(n) scan over text order.
    n = len(text)
    rank = [0] * n
    for position, start in enumerate(sa):
        rank[start] = position
    lcp = [0] * n
    match = 0
    for start in range(n):
        r = rank[start]
        if r == 0:
            match = 0
            continue
        other = sa[r - 1]
        while start + match < n and other + match < n and text[start + match] == text[other + match]:
            match += 1
        lcp[r] = match
        if match:
            match -= 1
    return lcp


def build_suffix_array(text: bytes) -> list[int]:
    """1-based suffix start positions in ascending lexicographic order."""
    data = np.frombuffer(bytes(text), dtype=np.uint8)
    return [p + 1 for p in _suffix_array(data).tolist()]


def build_lcp_array(text: bytes, sa: list[int]) -> list[int]:
    """``lcp[0] = 0``; ``lcp[k]`` compares sorted suffixes k-1 and k."""
    if len(sa) != len(text):
        raise ValueError("suffix array length does not match the text")
    return _lcp_array(bytes(text), [p - 1 for p in sa])


def weighted_qgram_counts(wt: WeightedText) -> QGramReport:
    """Group equal q-grams of the text and total their end weights.

    Gram start positions are sorted through the suffix array; a group ends
    wherever the adjacent LCP drops below q.  Groups whose total weight is
    zero (grams that exist only as concatenation bridges) are dropped.
    """
    q = wt.gram
    z = wt.text
    n = len(z)
    if n < q:
        return QGramReport([], q, n)
    sa = _suffix_array(np.frombuffer(z, dtype=np.uint8))
    lcp = np.array(_lcp_array(z, sa.tolist()), dtype=np.int64)
    mask = sa <= n - q
    starts = sa[mask]
    if starts.size == 0:
        return QGramReport([], q, n)
    group_ids = np.cumsum(lcp < q)[mask]
    cuts = np.r_[0, np.flatnonzero(group_ids[1:] != group_ids[:-1]) + 1]
    weights = wt.end_weights[starts + q - 1]
    totals = np.add.reduceat(weights, cuts)
    first = np.minimum.reduceat(starts, cuts)
    entries = [(int(p) + q, int(w)) for p, w in zip(first, totals) if w > 0]
    return QGramReport(entries, q, n)
