"""Inverted entity -> document index with edge document frequencies.

Documents get dense internal ordinals (assigned by sorted (source, doc_id))
so retrieval and scoring loop over small integers; the doc table restores
external identifiers at the presentation boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .errors import CorruptIndex, InvalidDateRange, NoKeywords
from .ingestion import CorpusStore, EdgeKey

INDEX_MAGIC = "graphmine-index"
INDEX_VERSION = 1


@dataclass(frozen=True)
class DocEntry:
    source: str
    doc_id: str
    publication_date: date | None
    classes: tuple[str, ...]


@dataclass(frozen=True)
class DocFilter:
    """Optional result refinements; absent dimensions match everything."""

    sources: frozenset[str] | None = None
    classes: frozenset[str] | None = None
    date_from: date | None = None
    date_to: date | None = None

    def is_empty(self) -> bool:
        return (
            self.sources is None
            and self.classes is None
            and self.date_from is None
            and self.date_to is None
        )


class InvertedIndex:
    def __init__(
        self,
        postings: dict[str, list[int]],
        doc_table: list[DocEntry],
        edge_df: dict[EdgeKey, int],
    ):
        self.postings = postings
        self.doc_table = doc_table
        self.edge_df = edge_df
        self._ordinal_by_key = {
            (entry.source, entry.doc_id): ordinal
            for ordinal, entry in enumerate(doc_table)
        }

    @property
    def total_docs(self) -> int:
        return len(self.doc_table)

    def ordinal(self, source: str, doc_id: str) -> int:
        return self._ordinal_by_key[(source, doc_id)]

    def postings_for(self, entity_id: str) -> list[int]:
        return self.postings.get(entity_id, [])


def build_index(store: CorpusStore) -> InvertedIndex:
    """Index every document graph: an entity's postings hold the ordinals
    of all documents that mention it; edge_df counts the distinct documents
    containing each edge."""
    doc_table: list[DocEntry] = []
    postings: dict[str, list[int]] = {}
    edge_df: dict[EdgeKey, int] = {}
    for ordinal, key in enumerate(store.keys()):
        meta = store.meta(*key)
        doc_table.append(
            DocEntry(
                source=meta.source,
                doc_id=meta.doc_id,
                publication_date=meta.publication_date,
                classes=meta.classes,
            )
        )
        graph = store.graph(*key)
        for entity_id in graph.entity_first_last:
            postings.setdefault(entity_id, []).append(ordinal)
        for edge in graph.edges:
            edge_df[edge] = edge_df.get(edge, 0) + 1
    return InvertedIndex(postings=postings, doc_table=doc_table, edge_df=edge_df)


def docs_for_keyword(ix: InvertedIndex, entity_ids: set[str]) -> list[int]:
    """Union of the postings of all translated entity ids, ascending."""
    if not entity_ids:
        return []
    lists = [ix.postings_for(eid) for eid in entity_ids]
    lists = [lst for lst in lists if lst]
    if not lists:
        return []
    if len(lists) == 1:
        return list(lists[0])
    merged: set[int] = set()
    for lst in lists:
        merged.update(lst)
    return sorted(merged)


def _intersect_pair(a: list[int], b: list[int]) -> list[int]:
    out: list[int] = []
    i = j = 0
    len_a, len_b = len(a), len(b)
    while i < len_a and j < len_b:
        ai, bj = a[i], b[j]
        if ai == bj:
            out.append(ai)
            i += 1
            j += 1
        elif ai < bj:
            i += 1
        else:
            j += 1
    return out


def intersect(lists: list[list[int]]) -> list[int]:
    """Documents present in every input list.

    Merge-based k-way intersection, folding from the smallest list so the
    working set only ever shrinks. Zero input lists is an error: "match
    all documents" must stay distinguishable from an empty query.
    """
    if not lists:
        raise NoKeywords()
    ordered = sorted(lists, key=len)
    result = list(ordered[0])
    for other in ordered[1:]:
        if not result:
            break
        result = _intersect_pair(result, other)
    return result


def apply_filter(ix: InvertedIndex, docs: list[int], f: DocFilter) -> list[int]:
    """Keep documents matching every present filter dimension. Documents
    without a publication date never match a date constraint."""
    if f.date_from is not None and f.date_to is not None and f.date_from > f.date_to:
        raise InvalidDateRange(f"from {f.date_from} is after to {f.date_to}")
    if f.is_empty():
        return list(docs)
    kept = []
    for ordinal in docs:
        entry = ix.doc_table[ordinal]
        if f.sources is not None and entry.source not in f.sources:
            continue
        if f.classes is not None and not f.classes.intersection(entry.classes):
            continue
        if f.date_from is not None or f.date_to is not None:
            pub = entry.publication_date
            if pub is None:
                continue
            if f.date_from is not None and pub < f.date_from:
                continue
            if f.date_to is not None and pub > f.date_to:
                continue
        kept.append(ordinal)
    return kept


def save_index(ix: InvertedIndex, path: str | Path) -> None:
    payload = {
        "magic": INDEX_MAGIC,
        "version": INDEX_VERSION,
        "total_docs": ix.total_docs,
        "doc_table": [
            [
                entry.source,
                entry.doc_id,
                entry.publication_date.isoformat() if entry.publication_date else None,
                list(entry.classes),
            ]
            for entry in ix.doc_table
        ],
        "postings": {eid: ix.postings[eid] for eid in sorted(ix.postings)},
        "edge_df": [
            [k.subject_id, k.predicate, k.object_id, df]
            for k, df in sorted(ix.edge_df.items(), key=lambda kv: kv[0].as_tuple())
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)
        fh.write("\n")


def load_index(path: str | Path) -> InvertedIndex:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"invalid JSON: {exc.msg}") from None
    if not isinstance(payload, dict):
        raise CorruptIndex("payload is not an object")
    if payload.get("magic") != INDEX_MAGIC:
        raise CorruptIndex("bad magic header")
    if payload.get("version") != INDEX_VERSION:
        raise CorruptIndex(f"unsupported version {payload.get('version')!r}")
    try:
        doc_table = [
            DocEntry(
                source=source,
                doc_id=doc_id,
                publication_date=date.fromisoformat(pub) if pub else None,
                classes=tuple(classes),
            )
            for source, doc_id, pub, classes in payload["doc_table"]
        ]
        postings = {eid: list(lst) for eid, lst in payload["postings"].items()}
        edge_df = {
            EdgeKey(s, p, o): df for s, p, o, df in payload["edge_df"]
        }
        total_docs = payload["total_docs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(str(exc)) from None
    if total_docs != len(doc_table):
        raise CorruptIndex("total_docs does not match doc_table length")
    for eid, lst in postings.items():
        if any(b <= a for a, b in zip(lst, lst[1:])):
            raise CorruptIndex(f"postings for {eid} not strictly ascending")
        if lst and (lst[0] < 0 or lst[-1] >= total_docs):
            raise CorruptIndex(f"postings for {eid} out of range")
    return InvertedIndex(postings=postings, doc_table=doc_table, edge_df=edge_df)
