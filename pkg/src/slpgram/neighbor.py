"""Right-neighbor graph over SLP rules and its flattened weighted trie.

Consecutive q-gram occurrences of the text are owned by rules that overlap
in q-1 characters, so emitting each owning rule's fresh characters once,
ordered along a spanning traversal of the neighbor graph, reproduces every
gram of the text while skipping the characters shared between repeated
rules.  The traversal output is kept as a flat weighted string: one body
per branch, prefixed by q-1 zero-weighted context characters copied from
the parent path so grams crossing a branch point still read correctly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .slp import ConsistencyError, Expander, QMarks, SlpGrammar, SlpMetrics
from .suffix import WeightedText

CSV_HEADER = "q,sum_ti,trie_size,dup,flattened_len,edges,vertices"


@dataclass(frozen=True)
class NeighborGraph:
    """Rules long enough to own a q-gram, with owner-to-next-owner edges."""

    q: int
    vertices: frozenset[int]
    edges: list[tuple[int, int]]


def build_neighbor_graph(g: SlpGrammar, m: SlpMetrics, qm: QMarks) -> NeighborGraph:
    """Edges follow the two successor cases of a pair rule.

    When a rule's right child is long enough, its unique successor is the
    deepest left mark under that child; otherwise the rule is the unique
    successor of the deepest right mark over its left child.  The union is
    a structural superset of the true successor relation and keeps every
    vertex reachable from the text's first owner.
    """
    lefts, rights = g._arrays
    lengths = m.lengths
    vertices = frozenset(i for i in range(1, g.n + 1) if lengths[i] >= qm.q)
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for i in range(1, g.n + 1):
        r = rights[i]
        if r < 0:
            continue
        successor = qm.leftmost[r]
        if successor is not None:
            edge = (i, successor)
            if edge not in seen:
                seen.add(edge)
                edges.append(edge)
        predecessor = qm.rightmost[lefts[i]]
        if predecessor is not None:
            edge = (predecessor, i)
            if edge not in seen:
                seen.add(edge)
                edges.append(edge)
    return NeighborGraph(qm.q, vertices, edges)


@dataclass(frozen=True, eq=False)
class TrieSegment:
    """One emitted branch: zero-weighted left context, then body characters
    whose runs carry the owning rule's occurrence count.

    ``runs`` lists (rule, length) in body order; rule 0 marks the q-1
    leading characters of the whole text, which no rule owns.
    """

    context: bytes
    body: bytes
    runs: list[tuple[int, int]]
    body_weights: np.ndarray


@dataclass(frozen=True, eq=False)
class FlattenedTrie:
    q: int
    segments: list[TrieSegment]
    body_total: int
    branch_count: int

    @property
    def flattened_length(self) -> int:
        return self.body_total + sum(len(seg.context) for seg in self.segments)

    def to_weighted_text(self) -> WeightedText:
        if not self.segments:
            return WeightedText(b"", np.zeros(0, dtype=np.int64), self.q)
        text = b"".join(seg.context + seg.body for seg in self.segments)
        chunks = []
        for seg in self.segments:
            if seg.context:
                chunks.append(np.zeros(len(seg.context), dtype=np.int64))
            chunks.append(seg.body_weights)
        return WeightedText(text, np.concatenate(chunks), self.q)


def flatten_neighbor_trie(
    g: SlpGrammar, m: SlpMetrics, qm: QMarks, graph: NeighborGraph
) -> FlattenedTrie:
    """Depth-first emission of every vertex's fresh characters.

    A chain of unique successors becomes one branch body, extracted as a
    prefix of the chain head's right child (the accumulated fresh characters
    always form such a prefix).  When a chain ends at a rule with a short
    right child, each unvisited successor starts a new branch carrying the
    last q-1 characters of the parent path as context; chains ending on an
    already visited unique successor spawn nothing.  Child order is
    ascending rule index and the walk uses an explicit stack, so the output
    is deterministic and path depth cannot overflow recursion.
    """
    q = qm.q
    lengths = m.lengths
    if m.text_length < q:
        return FlattenedTrie(q, [], 0, 0)
    lefts, rights = g._arrays
    occurrences = m.occurrences
    leftmost = qm.leftmost
    adjacency: dict[int, list[int]] = {}
    for a, b in graph.edges:
        adjacency.setdefault(a, []).append(b)
    for targets in adjacency.values():
        targets.sort()
    exp = Expander(g, lengths)
    visited = bytearray(g.n + 1)
    start = leftmost[g.n]
    segments: list[TrieSegment] = []
    body_total = 0
    # Frame (0, b"") stands for the dummy head whose right child is `start`
    # and whose q-1 label characters open the text.
    stack: list[tuple[int, bytes]] = [(0, b"")]
    while stack:
        head, context = stack.pop()
        if head:
            if visited[head]:
                continue
            k = head
            source = rights[head]
            take = 0
            runs: list[tuple[int, int]] = []
        else:
            k = start
            source = start
            take = q - 1
            runs = [(0, q - 1)]
        while True:
            label = min(q - 1, lengths[lefts[k]]) + min(q - 1, lengths[rights[k]]) - (q - 1)
            take += label
            runs.append((k, label))
            visited[k] = 1
            successor_root = rights[k]
            if lengths[successor_root] < q:
                break
            nxt = leftmost[successor_root]
            if visited[nxt]:
                break
            k = nxt
        if take > lengths[source]:
            raise ConsistencyError("chain would emit past its source rule")
        body = exp.prefix(source, take)
        weights = np.repeat(
            [occurrences[v] if v else 0 for v, _ in runs],
            [length for _, length in runs],
        ).astype(np.int64)
        segments.append(TrieSegment(context, body, runs, weights))
        body_total += take
        tail = (context + body)[-(q - 1):]
        for child in reversed(adjacency.get(k, ())):
            if not visited[child]:
                stack.append((child, tail))
    return FlattenedTrie(q, segments, body_total, len(segments) - 1)


@dataclass(frozen=True)
class DupStats:
    """Size accounting for one gram length; mirrors the stats CSV columns."""

    q: int
    sum_ti: int
    trie_size: int
    dup: int
    flattened_len: int
    edge_count: int
    vertex_count: int

    def csv_row(self) -> str:
        return (
            f"{self.q},{self.sum_ti},{self.trie_size},{self.dup},"
            f"{self.flattened_len},{self.edge_count},{self.vertex_count}"
        )


def compute_dup_stats(
    g: SlpGrammar,
    m: SlpMetrics,
    qm: QMarks,
    trie: FlattenedTrie,
    graph: NeighborGraph | None = None,
) -> DupStats:
    """Window totals, measured trie size, and the redundancy count.

    ``dup`` totals, over every vertex, the fresh characters saved by each
    derivation-tree occurrence beyond the first.  Whenever the text hosts a
    q-gram at all, the measured body total must equal text length minus
    ``dup``; disagreement means an implementation bug, not bad input.
    """
    q = qm.q
    if graph is None:
        graph = build_neighbor_graph(g, m, qm)
    lefts, rights = g._arrays
    lengths = m.lengths
    occurrences = m.occurrences
    sum_ti = 0
    dup = 0
    for i in graph.vertices:
        window = min(q - 1, lengths[lefts[i]]) + min(q - 1, lengths[rights[i]])
        sum_ti += window
        dup += (occurrences[i] - 1) * (window - (q - 1))
    trie_size = trie.body_total
    if m.text_length >= q and trie_size != m.text_length - dup:
        raise ConsistencyError(
            f"measured trie size {trie_size} != text length {m.text_length} minus dup {dup}"
        )
    return DupStats(
        q, sum_ti, trie_size, dup, trie.flattened_length, len(graph.edges), len(graph.vertices)
    )
