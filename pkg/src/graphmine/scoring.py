"""Per-document edge scoring and the summed final score.

score(e, d) = tf_idf(e, d) * coverage(e, d) * confidence(e, d), and the
final score of an edge is the plain sum of score(e, d) over the retrieved
document set (zero contribution from documents lacking the edge).

Factor definitions, each an isolated pure function so it can be swapped
independently:

* tf(e, d)  = freq(e, d) / num_statement_extractions(d)
* idf(e)    = ln(1 + N / df(e)) -- smoothed, never zero
* coverage  = mean over both endpoints of (last - first + 1) / num_sentences
* confidence = max extraction confidence of the edge in d
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import EdgeAbsent
from .index import InvertedIndex
from .ingestion import DocumentGraph, EdgeKey

__all__ = [
    "EdgeKey",
    "EdgeScore",
    "tf_idf",
    "coverage",
    "confidence",
    "score",
    "fscore",
]


@dataclass(frozen=True)
class EdgeScore:
    edge: EdgeKey
    fscore: float
    supporting_docs: frozenset[int]


def _stats(edge: EdgeKey, graph: DocumentGraph):
    stats = graph.edges.get(edge)
    if stats is None:
        raise EdgeAbsent(f"edge {edge.as_tuple()} not present in document {graph.doc_id}")
    return stats


def tf_idf(edge: EdgeKey, graph: DocumentGraph, ix: InvertedIndex) -> float:
    stats = _stats(edge, graph)
    df = ix.edge_df.get(edge, 0)
    if df < 1:
        raise EdgeAbsent(f"edge {edge.as_tuple()} unknown to the index")
    tf = stats.freq / graph.num_statement_extractions
    idf = math.log(1.0 + ix.total_docs / df)
    return tf * idf


def coverage(edge: EdgeKey, graph: DocumentGraph) -> float:
    _stats(edge, graph)

    def span_fraction(entity_id: str) -> float:
        first, last = graph.entity_first_last[entity_id]
        return (last - first + 1) / graph.num_sentences

    return (span_fraction(edge.subject_id) + span_fraction(edge.object_id)) / 2.0


def confidence(edge: EdgeKey, graph: DocumentGraph) -> float:
    return _stats(edge, graph).max_confidence


def score(edge: EdgeKey, graph: DocumentGraph, ix: InvertedIndex) -> float:
    """Product of the three factors; exactly 0 when the edge is absent."""
    if edge not in graph.edges:
        return 0.0
    return tf_idf(edge, graph, ix) * coverage(edge, graph) * confidence(edge, graph)


def fscore(
    edge: EdgeKey,
    docs: Iterable[tuple[int, DocumentGraph]],
    ix: InvertedIndex,
) -> EdgeScore:
    """Sum of per-document scores over ``docs`` ((ordinal, graph) pairs).

    Accumulation runs in ascending ordinal order so the floating-point sum
    is identical no matter how callers produced the document list.
    """
    total = 0.0
    supporting = []
    for ordinal, graph in sorted(docs, key=lambda pair: pair[0]):
        value = score(edge, graph, ix)
        if value > 0.0:
            total += value
            supporting.append(ordinal)
    return EdgeScore(edge=edge, fscore=total, supporting_docs=frozenset(supporting))
