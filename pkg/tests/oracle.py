"""Naive reference implementations used as oracles.

Everything here is deliberately quadratic and index-free: translation scans
every synonym, retrieval scans every document, scoring recomputes each
factor from the raw mention/statement lists. The production query path must
agree with these within 1e-9 per edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class OracleDoc:
    """Raw per-document material captured at generation time."""

    source: str
    doc_id: str
    num_sentences: int
    mentions: list[tuple[str, int]]  # (entity_id, sentence_idx)
    statements: list[tuple[str, str, str, int, float]]  # (s, p, o, sentence, conf)

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.doc_id)


def canonical(subject: str, predicate: str, obj: str) -> tuple[str, str, str]:
    if predicate == "associated" and obj < subject:
        subject, obj = obj, subject
    return (subject, predicate, obj)


def translate(entities: list[tuple[str, list[str]]], keyword: str) -> set[str]:
    terms = keyword.lower().split()
    return {
        eid
        for eid, synonyms in entities
        if any(all(t in syn.lower() for t in terms) for syn in synonyms)
    }


def entities_in_doc(doc: OracleDoc) -> set[str]:
    present = {eid for eid, _ in doc.mentions}
    for s, _, o, _, _ in doc.statements:
        present.add(s)
        present.add(o)
    return present


def doc_edges(doc: OracleDoc) -> dict[tuple[str, str, str], tuple[int, float]]:
    """Canonical edge -> (freq, max confidence), re-aggregated from raw
    statements."""
    edges: dict[tuple[str, str, str], tuple[int, float]] = {}
    for s, p, o, _, conf in doc.statements:
        key = canonical(s, p, o)
        freq, best = edges.get(key, (0, 0.0))
        edges[key] = (freq + 1, max(best, conf))
    return edges


def first_last(doc: OracleDoc) -> dict[str, tuple[int, int]]:
    spans: dict[str, tuple[int, int]] = {}

    def observe(eid: str, sentence: int) -> None:
        if eid in spans:
            lo, hi = spans[eid]
            spans[eid] = (min(lo, sentence), max(hi, sentence))
        else:
            spans[eid] = (sentence, sentence)

    for eid, sentence in doc.mentions:
        observe(eid, sentence)
    for s, _, o, sentence, _ in doc.statements:
        observe(s, sentence)
        observe(o, sentence)
    return spans


def doc_score(
    doc: OracleDoc,
    edge: tuple[str, str, str],
    total_docs: int,
    df: int,
) -> float:
    edges = doc_edges(doc)
    if edge not in edges:
        return 0.0
    freq, best_conf = edges[edge]
    tf = freq / len(doc.statements)
    idf = math.log(1.0 + total_docs / df)
    spans = first_last(doc)
    cov = 0.0
    for endpoint in (edge[0], edge[2]):
        lo, hi = spans[endpoint]
        cov += (hi - lo + 1) / doc.num_sentences
    cov /= 2.0
    return tf * idf * cov * best_conf


def mine(
    docs: list[OracleDoc],
    entities: list[tuple[str, list[str]]],
    keywords: list[str],
) -> tuple[dict[tuple[str, str, str], float], list[tuple[str, str, str]], set[str], list[tuple[str, str]]]:
    """Returns (edge -> fscore, ranked edge list, searched ids, retrieved keys)."""
    per_keyword_docs = []
    searched: set[str] = set()
    for kw in keywords:
        ids = translate(entities, kw)
        assert ids, f"oracle keyword {kw!r} untranslatable"
        searched |= ids
        per_keyword_docs.append(
            {doc.key for doc in docs if entities_in_doc(doc) & ids}
        )
    retrieved_keys = set.intersection(*per_keyword_docs)
    retrieved = sorted(
        (doc for doc in docs if doc.key in retrieved_keys), key=lambda d: d.key
    )

    total_docs = len(docs)
    df: dict[tuple[str, str, str], int] = {}
    for doc in docs:
        for edge in doc_edges(doc):
            df[edge] = df.get(edge, 0) + 1

    scores: dict[tuple[str, str, str], float] = {}
    for doc in retrieved:
        for edge in doc_edges(doc):
            if edge[0] in searched or edge[2] in searched:
                value = doc_score(doc, edge, total_docs, df[edge])
                if value > 0.0:
                    scores[edge] = scores.get(edge, 0.0) + value

    ranked = sorted(scores, key=lambda e: (-scores[e], e[0], e[1], e[2]))
    return scores, ranked, searched, sorted(retrieved_keys)


def intersect_naive(lists: list[list[int]]) -> list[int]:
    result = set(lists[0])
    for lst in lists[1:]:
        result &= set(lst)
    return sorted(result)
