"""graphmine: entity-centric exploratory search over per-document
statement graphs.

Typical flow: load a vocabulary, ingest a corpus into a store, build the
inverted index, then mine ranked interaction patterns around searched
entities.
"""

from .errors import (
    CorruptIndex,
    CorruptStore,
    DuplicateDocument,
    DuplicateEntityId,
    EdgeAbsent,
    EmptyKeyword,
    GraphMineError,
    InvalidDateRange,
    MalformedRecord,
    NoKeywords,
    UnknownEdge,
    UntranslatableKeyword,
)
from .index import (
    DocEntry,
    DocFilter,
    InvertedIndex,
    apply_filter,
    build_index,
    docs_for_keyword,
    intersect,
    load_index,
    save_index,
)
from .ingestion import (
    CorpusStore,
    DocumentGraph,
    DocumentMeta,
    EdgeKey,
    EdgeStats,
    EntityMention,
    ExtractionMethod,
    RawDocument,
    Statement,
    build_document_graph,
    extract_cooccurrence_statements,
    ingest_corpus,
    ingest_document,
    link_entities,
    load_store,
    save_store,
    segment_sentences,
)
from .pattern import (
    DocumentRecord,
    NarrativePattern,
    PatternNode,
    PatternQuery,
    edge_documents,
    mine_pattern,
    pattern_to_dict,
    pattern_to_json,
    result_documents,
)
from .scoring import EdgeScore, confidence, coverage, fscore, score, tf_idf
from .vocabulary import (
    TYPE_COLORS,
    Entity,
    EntityType,
    Vocabulary,
    load_vocabulary,
)

__version__ = "0.1.0"
