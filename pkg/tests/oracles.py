"""Brute-force reference computations that the package is measured against.

Everything here favors obviousness over speed and shares no code with the
implementations under test.
"""

from collections import Counter


def naive_suffix_array(text: bytes) -> list[int]:
    return sorted(range(1, len(text) + 1), key=lambda p: text[p - 1 :])


def naive_lcp_array(text: bytes, sa: list[int]) -> list[int]:
    def common(a: bytes, b: bytes) -> int:
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        return k

    return [0] + [
        common(text[sa[k - 1] - 1 :], text[sa[k] - 1 :]) for k in range(1, len(sa))
    ]


def sliding_histogram(text: bytes, q: int) -> dict[bytes, int]:
    return dict(Counter(text[i : i + q] for i in range(len(text) - q + 1)))


def derivation_occurrences(g) -> list[int]:
    """Count rule labels by walking the actual derivation tree node by node."""
    counts = [0] * (g.n + 1)
    stack = [g.n]
    while stack:
        i = stack.pop()
        counts[i] += 1
        rule = g.rule(i)
        if not rule.is_terminal:
            stack.append(rule.left)
            stack.append(rule.right)
    return counts


def deepest_outer_marks(g, lengths: list[int], q: int):
    """(leftmost, rightmost) marks by literal descent along the outer paths."""
    leftmost: list[int | None] = [None] * (g.n + 1)
    rightmost: list[int | None] = [None] * (g.n + 1)
    for i in range(1, g.n + 1):
        if lengths[i] < q:
            continue
        cur = i
        while not g.rule(cur).is_terminal and lengths[g.rule(cur).left] >= q:
            cur = g.rule(cur).left
        leftmost[i] = cur
        cur = i
        while not g.rule(cur).is_terminal and lengths[g.rule(cur).right] >= q:
            cur = g.rule(cur).right
        rightmost[i] = cur
    return leftmost, rightmost
