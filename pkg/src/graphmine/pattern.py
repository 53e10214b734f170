"""Narrative pattern mining.

Pipeline per query: translate every keyword to entity ids, union each
keyword's postings, intersect the per-keyword document sets, apply result
filters, then accumulate per-document scores for every edge incident to a
searched entity. Edges are ranked by summed score (descending, determinate
tie-break) and capped per searched concept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import NoKeywords, UnknownEdge, UntranslatableKeyword
from .index import DocFilter, InvertedIndex, apply_filter, docs_for_keyword, intersect
from .ingestion import CorpusStore, DocumentGraph, EdgeKey
from .scoring import EdgeScore, score
from .vocabulary import EntityType, Vocabulary

SCHEMA_VERSION = 1
DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class PatternQuery:
    keywords: tuple[str, ...]
    doc_filter: DocFilter = field(default_factory=DocFilter)
    top_k_per_concept: int = DEFAULT_TOP_K
    visible_types: frozenset[EntityType] | None = None


@dataclass(frozen=True)
class PatternNode:
    entity_id: str
    entity_type: EntityType
    display_name: str
    is_searched: bool


@dataclass(frozen=True)
class NarrativePattern:
    searched_entities: frozenset[str]
    nodes: tuple[PatternNode, ...]
    edges: tuple[EdgeScore, ...]
    retrieved_doc_count: int


def _rank_key(item: tuple[EdgeKey, float]):
    edge, total = item
    return (-total, edge.subject_id, edge.predicate, edge.object_id)


def _retrieve(
    query: PatternQuery, vocab: Vocabulary, ix: InvertedIndex
) -> tuple[list[int], set[str]]:
    """Translate keywords, intersect their document sets, filter.

    Returns (retrieved ordinals, searched entity ids). A keyword matching
    no entity is a hard error carrying nearby vocabulary terms.
    """
    if not query.keywords:
        raise NoKeywords()
    searched: set[str] = set()
    doc_lists: list[list[int]] = []
    for keyword in query.keywords:
        entity_ids = vocab.translate_keyword(keyword)
        if not entity_ids:
            raise UntranslatableKeyword(keyword, _nearest_terms(vocab, keyword))
        searched |= entity_ids
        doc_lists.append(docs_for_keyword(ix, entity_ids))
    retrieved = intersect(doc_lists)
    retrieved = apply_filter(ix, retrieved, query.doc_filter)
    return retrieved, searched


def _nearest_terms(vocab: Vocabulary, keyword: str, limit: int = 5) -> list[str]:
    """Best-effort "did you mean" terms for an untranslatable keyword:
    retry progressively shorter prefixes until anything matches."""
    text = keyword.strip()
    for cut in range(len(text), 0, -1):
        prefix = text[:cut].strip()
        if not prefix:
            continue
        matches = vocab.suggest(prefix, limit)
        if matches:
            seen: list[str] = []
            for synonym, _ in matches:
                if synonym not in seen:
                    seen.append(synonym)
            return seen
    return []


def _doc_graphs(
    ordinals: list[int], ix: InvertedIndex, store: CorpusStore
) -> list[tuple[int, DocumentGraph]]:
    pairs = []
    for ordinal in ordinals:
        entry = ix.doc_table[ordinal]
        pairs.append((ordinal, store.graph(entry.source, entry.doc_id)))
    return pairs


def mine_pattern(
    query: PatternQuery,
    vocab: Vocabulary,
    ix: InvertedIndex,
    store: CorpusStore,
) -> NarrativePattern:
    """Mine the ranked interaction pattern around the searched entities.

    Only edges with a searched endpoint are scored; each searched entity
    keeps its ``top_k_per_concept`` best incident edges and the pattern is
    the union of those selections in global rank order. An empty document
    intersection yields an empty pattern, not an error.
    """
    if query.top_k_per_concept < 1:
        raise ValueError("top_k_per_concept must be >= 1")
    retrieved, searched = _retrieve(query, vocab, ix)

    totals: dict[EdgeKey, float] = {}
    supporting: dict[EdgeKey, list[int]] = {}
    # Ascending ordinal order keeps float accumulation deterministic.
    for ordinal, graph in _doc_graphs(retrieved, ix, store):
        for edge in graph.edges:
            if edge.subject_id in searched or edge.object_id in searched:
                value = score(edge, graph, ix)
                if value > 0.0:
                    totals[edge] = totals.get(edge, 0.0) + value
                    supporting.setdefault(edge, []).append(ordinal)

    ranked = sorted(totals.items(), key=_rank_key)

    selected: set[EdgeKey] = set()
    for entity_id in searched:
        kept = 0
        for edge, _ in ranked:
            if kept >= query.top_k_per_concept:
                break
            if entity_id in (edge.subject_id, edge.object_id):
                selected.add(edge)
                kept += 1

    edges = tuple(
        EdgeScore(edge=edge, fscore=total, supporting_docs=frozenset(supporting[edge]))
        for edge, total in ranked
        if edge in selected
    )

    # Nodes are the endpoints of the listed edges; searched entities with
    # no surviving incident edge are not drawn (clients show an explicit
    # empty state when the whole pattern is empty).
    node_ids: set[str] = set()
    for edge_score in edges:
        node_ids.add(edge_score.edge.subject_id)
        node_ids.add(edge_score.edge.object_id)
    nodes = tuple(
        _node_for(entity_id, vocab, searched) for entity_id in sorted(node_ids)
    )

    return NarrativePattern(
        searched_entities=frozenset(searched),
        nodes=nodes,
        edges=edges,
        retrieved_doc_count=len(retrieved),
    )


def _node_for(entity_id: str, vocab: Vocabulary, searched: set[str]) -> PatternNode:
    entity = vocab.get(entity_id)
    # Imported statements may reference ids outside the vocabulary.
    return PatternNode(
        entity_id=entity_id,
        entity_type=entity.entity_type if entity else EntityType.OTHER,
        display_name=entity.preferred_name if entity else entity_id,
        is_searched=entity_id in searched,
    )


def edge_documents(
    edge: EdgeKey,
    query: PatternQuery,
    vocab: Vocabulary,
    ix: InvertedIndex,
    store: CorpusStore,
) -> list[tuple[int, float]]:
    """Supporting documents of ``edge`` within the query's full retrieved
    set (the whole query context, not just the edge's endpoints), ordered
    by per-document score descending, ties by ascending ordinal."""
    retrieved, _ = _retrieve(query, vocab, ix)
    scored = []
    for ordinal, graph in _doc_graphs(retrieved, ix, store):
        value = score(edge, graph, ix)
        if value > 0.0:
            scored.append((ordinal, value))
    if not scored:
        raise UnknownEdge()
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


@dataclass(frozen=True)
class DocumentRecord:
    ordinal: int
    source: str
    doc_id: str
    title: str
    publication_date: object  # datetime.date | None
    classes: tuple[str, ...]


def result_documents(
    query: PatternQuery,
    vocab: Vocabulary,
    ix: InvertedIndex,
    store: CorpusStore,
) -> list[DocumentRecord]:
    """The intersected, filtered document set: newest first, ties by
    (source, doc_id), undated documents last."""
    retrieved, _ = _retrieve(query, vocab, ix)
    records = []
    for ordinal in retrieved:
        entry = ix.doc_table[ordinal]
        meta = store.meta(entry.source, entry.doc_id)
        records.append(
            DocumentRecord(
                ordinal=ordinal,
                source=meta.source,
                doc_id=meta.doc_id,
                title=meta.title,
                publication_date=meta.publication_date,
                classes=meta.classes,
            )
        )
    records.sort(
        key=lambda r: (
            r.publication_date is None,
            -r.publication_date.toordinal() if r.publication_date else 0,
            r.source,
            r.doc_id,
        )
    )
    return records


# --- serialization ----------------------------------------------------------

def pattern_to_dict(pattern: NarrativePattern) -> dict:
    """Stable-order plain-dict form of a pattern; fscore rounded to six
    decimals. Serializing the same pattern always yields identical bytes."""
    return {
        "schema_version": SCHEMA_VERSION,
        "retrieved_doc_count": pattern.retrieved_doc_count,
        "searched_entities": sorted(pattern.searched_entities),
        "nodes": [
            {
                "id": node.entity_id,
                "type": node.entity_type.value,
                "name": node.display_name,
                "is_searched": node.is_searched,
            }
            for node in pattern.nodes
        ],
        "edges": [
            {
                "subject": es.edge.subject_id,
                "predicate": es.edge.predicate,
                "object": es.edge.object_id,
                "fscore": round(es.fscore, 6),
                "supporting_doc_count": len(es.supporting_docs),
            }
            for es in pattern.edges
        ],
    }


def pattern_to_json(pattern: NarrativePattern) -> str:
    return json.dumps(pattern_to_dict(pattern), ensure_ascii=False, separators=(",", ":"))
