"""Document ingestion: sentence segmentation, dictionary entity linking,
sentence co-occurrence statement extraction and per-document graph assembly.

Each document becomes its own small graph; graphs are never merged across
documents so that every statement keeps the context it was extracted from.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from datetime import date
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorruptStore, DuplicateDocument, MalformedRecord
from .vocabulary import Vocabulary

# Co-occurrence extraction marks a weak association; imported statements
# (externally extracted, e.g. grammar-based tooling) carry their own
# confidence and are loaded verbatim.
COOCCURRENCE_PREDICATE = "associated"
DEFAULT_COOCCURRENCE_CONFIDENCE = 0.3

# Predicates without direction; their edge keys are endpoint-ordered so one
# pair of entities never produces two distinct keys.
SYMMETRIC_PREDICATES = frozenset({COOCCURRENCE_PREDICATE})

_TERMINATORS = ".!?"

STORE_MAGIC = "graphmine-store"
STORE_VERSION = 1


class ExtractionMethod(str, Enum):
    COOCCURRENCE = "Cooccurrence"
    IMPORTED = "Imported"


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    source: str
    title: str
    body: str
    publication_date: date | None = None
    classes: tuple[str, ...] = ()


@dataclass(frozen=True)
class EntityMention:
    entity_id: str
    sentence_idx: int
    start: int  # half-open char offsets into the document text
    end: int
    surface: str


@dataclass(frozen=True)
class EdgeKey:
    subject_id: str
    predicate: str
    object_id: str

    @staticmethod
    def canonical(subject_id: str, predicate: str, object_id: str) -> "EdgeKey":
        if predicate in SYMMETRIC_PREDICATES and object_id < subject_id:
            subject_id, object_id = object_id, subject_id
        return EdgeKey(subject_id, predicate, object_id)

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.subject_id, self.predicate, self.object_id)


@dataclass(frozen=True)
class Statement:
    subject_id: str
    predicate: str
    object_id: str
    sentence_idx: int
    confidence: float
    method: ExtractionMethod

    def edge_key(self) -> EdgeKey:
        return EdgeKey.canonical(self.subject_id, self.predicate, self.object_id)


@dataclass(frozen=True)
class EdgeStats:
    freq: int
    max_confidence: float


@dataclass
class DocumentGraph:
    doc_id: str
    source: str
    num_sentences: int
    num_statement_extractions: int
    edges: dict[EdgeKey, EdgeStats]
    mentions: list[EntityMention]
    entity_first_last: dict[str, tuple[int, int]]


def document_text(doc: RawDocument) -> str:
    """Canonical text a document is processed over; mention offsets point
    into this string."""
    return f"{doc.title}\n{doc.body}"


def segment_sentences(text: str) -> list[tuple[str, tuple[int, int]]]:
    """Split ``text`` into (sentence, char range) pairs.

    Boundary rule: a sentence ends after '.', '!' or '?' when followed by
    whitespace or end-of-text; text without a terminator is one sentence.
    Ranges are trimmed to the non-whitespace extent of each sentence.
    """
    sentences: list[tuple[str, tuple[int, int]]] = []
    n = len(text)

    def emit(seg_start: int, seg_end: int) -> None:
        start, end = seg_start, seg_end
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            sentences.append((text[start:end], (start, end)))

    seg_start = 0
    for i, ch in enumerate(text):
        if ch in _TERMINATORS and (i + 1 == n or text[i + 1].isspace()):
            emit(seg_start, i + 1)
            seg_start = i + 1
    emit(seg_start, n)
    return sentences


def document_sentences(doc: RawDocument) -> list[tuple[str, tuple[int, int]]]:
    """Sentences of title and body over the combined document text.

    The title is segmented on its own so an unterminated title never fuses
    with the body's first sentence.
    """
    sentences = segment_sentences(doc.title)
    offset = len(doc.title) + 1  # the joining "\n"
    for sent, (start, end) in segment_sentences(doc.body):
        sentences.append((sent, (start + offset, end + offset)))
    return sentences


def _token_bounded(lowered_text: str, start: int, end: int) -> bool:
    if start > 0 and lowered_text[start - 1].isalnum() and lowered_text[start].isalnum():
        return False
    if end < len(lowered_text) and lowered_text[end - 1].isalnum() and lowered_text[end].isalnum():
        return False
    return True


def link_entities(doc: RawDocument, vocab: Vocabulary) -> list[EntityMention]:
    """Dictionary linking: case-insensitive, token-bounded synonym matches
    over the document text. Overlaps resolve longest-match-first, ties by
    earlier position then smaller entity id."""
    text = document_text(doc)
    lowered = text.lower()
    sentences = document_sentences(doc)
    if not sentences:
        return []
    sentence_starts = [span[0] for _, span in sentences]

    candidates: list[tuple[int, int, str]] = []
    for entity in vocab:
        for syn in {s.lower() for s in entity.synonyms}:
            if not syn:
                continue
            pos = lowered.find(syn)
            while pos != -1:
                end = pos + len(syn)
                if _token_bounded(lowered, pos, end):
                    candidates.append((pos, end, entity.id))
                pos = lowered.find(syn, pos + 1)

    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0], c[2]))
    taken: list[tuple[int, int]] = []
    accepted: list[tuple[int, int, str]] = []
    for start, end, entity_id in candidates:
        if any(start < t_end and t_start < end for t_start, t_end in taken):
            continue
        taken.append((start, end))
        accepted.append((start, end, entity_id))

    mentions = []
    for start, end, entity_id in sorted(accepted):
        sentence_idx = max(0, bisect_right(sentence_starts, start) - 1)
        mentions.append(
            EntityMention(
                entity_id=entity_id,
                sentence_idx=sentence_idx,
                start=start,
                end=end,
                surface=text[start:end],
            )
        )
    return mentions


def extract_cooccurrence_statements(
    mentions: Iterable[EntityMention],
    confidence: float = DEFAULT_COOCCURRENCE_CONFIDENCE,
) -> list[Statement]:
    """One statement per unordered pair of distinct entities mentioned in
    the same sentence; k co-occurring sentences yield k statements."""
    by_sentence: dict[int, set[str]] = {}
    for mention in mentions:
        by_sentence.setdefault(mention.sentence_idx, set()).add(mention.entity_id)
    statements = []
    for sentence_idx in sorted(by_sentence):
        for subject_id, object_id in combinations(sorted(by_sentence[sentence_idx]), 2):
            statements.append(
                Statement(
                    subject_id=subject_id,
                    predicate=COOCCURRENCE_PREDICATE,
                    object_id=object_id,
                    sentence_idx=sentence_idx,
                    confidence=confidence,
                    method=ExtractionMethod.COOCCURRENCE,
                )
            )
    return statements


def build_document_graph(
    doc: RawDocument,
    mentions: list[EntityMention],
    statements: list[Statement],
) -> DocumentGraph:
    edges: dict[EdgeKey, EdgeStats] = {}
    for st in statements:
        key = st.edge_key()
        prev = edges.get(key)
        if prev is None:
            edges[key] = EdgeStats(freq=1, max_confidence=st.confidence)
        else:
            edges[key] = EdgeStats(
                freq=prev.freq + 1,
                max_confidence=max(prev.max_confidence, st.confidence),
            )

    first_last: dict[str, tuple[int, int]] = {}

    def observe(entity_id: str, sentence_idx: int) -> None:
        prev = first_last.get(entity_id)
        if prev is None:
            first_last[entity_id] = (sentence_idx, sentence_idx)
        else:
            first_last[entity_id] = (
                min(prev[0], sentence_idx),
                max(prev[1], sentence_idx),
            )

    for mention in mentions:
        observe(mention.entity_id, mention.sentence_idx)
    # Imported statements may reference entities without mention records;
    # their sentence index keeps the endpoint span defined.
    for st in statements:
        observe(st.subject_id, st.sentence_idx)
        observe(st.object_id, st.sentence_idx)

    return DocumentGraph(
        doc_id=doc.doc_id,
        source=doc.source,
        num_sentences=len(document_sentences(doc)),
        num_statement_extractions=len(statements),
        edges=edges,
        mentions=mentions,
        entity_first_last=first_last,
    )


@dataclass(frozen=True)
class DocumentMeta:
    """What the store keeps about a document besides its graph."""

    doc_id: str
    source: str
    title: str
    publication_date: date | None
    classes: tuple[str, ...]

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.doc_id)


class CorpusStore:
    """All ingested documents: metadata plus one graph per document.

    Immutable once ingestion finishes; reads are safe from any number of
    threads.
    """

    def __init__(self) -> None:
        self._meta: dict[tuple[str, str], DocumentMeta] = {}
        self._graphs: dict[tuple[str, str], DocumentGraph] = {}
        self.vocabulary_file: str | None = None

    def add(self, meta: DocumentMeta, graph: DocumentGraph) -> None:
        if meta.key in self._meta:
            raise DuplicateDocument(meta.source, meta.doc_id)
        self._meta[meta.key] = meta
        self._graphs[meta.key] = graph

    def __len__(self) -> int:
        return len(self._meta)

    def keys(self) -> list[tuple[str, str]]:
        return sorted(self._meta)

    def meta(self, source: str, doc_id: str) -> DocumentMeta:
        return self._meta[(source, doc_id)]

    def graph(self, source: str, doc_id: str) -> DocumentGraph:
        return self._graphs[(source, doc_id)]

    def graphs(self) -> Iterator[DocumentGraph]:
        for key in self.keys():
            yield self._graphs[key]

    @property
    def num_statement_extractions(self) -> int:
        return sum(g.num_statement_extractions for g in self._graphs.values())

    @property
    def sources(self) -> list[str]:
        return sorted({source for source, _ in self._meta})

    @property
    def classes(self) -> list[str]:
        return sorted({c for meta in self._meta.values() for c in meta.classes})


def _parse_date(value, line_number: int) -> date | None:
    if value is None or value == "":
        return None
    try:
        return date.fromisoformat(value)
    except (TypeError, ValueError):
        raise MalformedRecord(
            line_number, f"publication_date {value!r} is not an ISO-8601 date"
        ) from None


def _parse_annotations(record: dict, line_number: int) -> tuple[list[EntityMention], list[Statement]]:
    annotations = record["annotations"]
    if not isinstance(annotations, dict):
        raise MalformedRecord(line_number, "annotations must be an object")
    mentions = []
    for m in annotations.get("mentions", []):
        try:
            mentions.append(
                EntityMention(
                    entity_id=m["entity_id"],
                    sentence_idx=int(m["sentence_idx"]),
                    start=int(m["start"]),
                    end=int(m["end"]),
                    surface=m.get("surface", ""),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(line_number, f"bad mention: {exc}") from None
    statements = []
    for s in annotations.get("statements", []):
        try:
            confidence = float(s["confidence"])
            statement = Statement(
                subject_id=s["subject"],
                predicate=s["predicate"],
                object_id=s["object"],
                sentence_idx=int(s["sentence_idx"]),
                confidence=confidence,
                method=ExtractionMethod.IMPORTED,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(line_number, f"bad statement: {exc}") from None
        if statement.subject_id == statement.object_id:
            raise MalformedRecord(line_number, "statement subject equals object")
        if not 0.0 < confidence <= 1.0:
            raise MalformedRecord(
                line_number, f"confidence {confidence} outside (0, 1]"
            )
        statements.append(statement)
    return mentions, statements


def _parse_document(record: dict, line_number: int) -> RawDocument:
    for field_name in ("doc_id", "source", "title", "body"):
        if field_name not in record:
            raise MalformedRecord(line_number, f"missing field {field_name!r}")
    doc_id = record["doc_id"]
    source = record["source"]
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_number, "doc_id must be a non-empty string")
    if not isinstance(source, str) or not source:
        raise MalformedRecord(line_number, "source must be a non-empty string")
    classes = record.get("classes", [])
    if not isinstance(classes, list) or not all(isinstance(c, str) for c in classes):
        raise MalformedRecord(line_number, "classes must be a list of strings")
    return RawDocument(
        doc_id=doc_id,
        source=source,
        title=str(record["title"]),
        body=str(record["body"]),
        publication_date=_parse_date(record.get("publication_date"), line_number),
        classes=tuple(classes),
    )


def ingest_document(
    doc: RawDocument,
    vocab: Vocabulary,
    cooccurrence_confidence: float = DEFAULT_COOCCURRENCE_CONFIDENCE,
) -> DocumentGraph:
    """Run segment -> link -> extract -> build for one document."""
    mentions = link_entities(doc, vocab)
    statements = extract_cooccurrence_statements(mentions, cooccurrence_confidence)
    return build_document_graph(doc, mentions, statements)


def ingest_corpus(
    docs_path: str | Path,
    vocab: Vocabulary,
    cooccurrence_confidence: float = DEFAULT_COOCCURRENCE_CONFIDENCE,
) -> CorpusStore:
    """Ingest a JSONL corpus file into a CorpusStore.

    Records carrying an ``annotations`` object bypass extraction: their
    mentions and statements are loaded verbatim (method Imported).
    """
    store = CorpusStore()
    with open(docs_path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_number, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise MalformedRecord(line_number, "record must be an object")
            doc = _parse_document(record, line_number)
            if "annotations" in record:
                mentions, statements = _parse_annotations(record, line_number)
                graph = build_document_graph(doc, mentions, statements)
            else:
                graph = ingest_document(doc, vocab, cooccurrence_confidence)
            meta = DocumentMeta(
                doc_id=doc.doc_id,
                source=doc.source,
                title=doc.title,
                publication_date=doc.publication_date,
                classes=doc.classes,
            )
            store.add(meta, graph)
    return store


# --- persistence -----------------------------------------------------------

def _graph_record(meta: DocumentMeta, graph: DocumentGraph) -> dict:
    return {
        "doc_id": meta.doc_id,
        "source": meta.source,
        "title": meta.title,
        "publication_date": meta.publication_date.isoformat()
        if meta.publication_date
        else None,
        "classes": list(meta.classes),
        "num_sentences": graph.num_sentences,
        "num_statement_extractions": graph.num_statement_extractions,
        "edges": [
            [k.subject_id, k.predicate, k.object_id, v.freq, v.max_confidence]
            for k, v in sorted(graph.edges.items(), key=lambda kv: kv[0].as_tuple())
        ],
        "mentions": [
            [m.entity_id, m.sentence_idx, m.start, m.end, m.surface]
            for m in graph.mentions
        ],
        "entity_first_last": {
            eid: list(span) for eid, span in sorted(graph.entity_first_last.items())
        },
    }


def save_store(store: CorpusStore, path: str | Path) -> None:
    """Persist a store as a directory: manifest.json + graphs.jsonl."""
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "magic": STORE_MAGIC,
        "version": STORE_VERSION,
        "num_documents": len(store),
        "num_statement_extractions": store.num_statement_extractions,
        "sources": store.sources,
        "classes": store.classes,
    }
    (directory / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    with open(directory / "graphs.jsonl", "w", encoding="utf-8") as fh:
        for source, doc_id in store.keys():
            record = _graph_record(store.meta(source, doc_id), store.graph(source, doc_id))
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def load_store(path: str | Path) -> CorpusStore:
    directory = Path(path)
    manifest_path = directory / "manifest.json"
    graphs_path = directory / "graphs.jsonl"
    if not manifest_path.exists() or not graphs_path.exists():
        raise CorruptStore(f"{directory} is not a corpus store directory")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptStore(f"manifest: {exc.msg}") from None
    if manifest.get("magic") != STORE_MAGIC:
        raise CorruptStore("bad magic header")
    if manifest.get("version") != STORE_VERSION:
        raise CorruptStore(f"unsupported version {manifest.get('version')!r}")

    store = CorpusStore()
    with open(graphs_path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                meta = DocumentMeta(
                    doc_id=record["doc_id"],
                    source=record["source"],
                    title=record["title"],
                    publication_date=date.fromisoformat(record["publication_date"])
                    if record["publication_date"]
                    else None,
                    classes=tuple(record["classes"]),
                )
                graph = DocumentGraph(
                    doc_id=record["doc_id"],
                    source=record["source"],
                    num_sentences=record["num_sentences"],
                    num_statement_extractions=record["num_statement_extractions"],
                    edges={
                        EdgeKey(s, p, o): EdgeStats(freq=freq, max_confidence=conf)
                        for s, p, o, freq, conf in record["edges"]
                    },
                    mentions=[
                        EntityMention(eid, sidx, start, end, surface)
                        for eid, sidx, start, end, surface in record["mentions"]
                    ],
                    entity_first_last={
                        eid: (span[0], span[1])
                        for eid, span in record["entity_first_last"].items()
                    },
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CorruptStore(f"graphs.jsonl line {line_number}: {exc}") from None
            store.add(meta, graph)
    if len(store) != manifest.get("num_documents"):
        raise CorruptStore("manifest document count does not match graphs file")
    return store
