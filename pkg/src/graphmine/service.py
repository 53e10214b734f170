"""HTTP API over a loaded (vocabulary, index, store) snapshot.

All endpoints are read-only; the snapshot is loaded once at startup and
never mutated, so requests can run concurrently without coordination.
Errors always carry a structured body: {"code", "message", "detail"}.
"""

from __future__ import annotations

import json
from datetime import date

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import GraphMineError, InvalidDateRange
from .index import DocFilter, InvertedIndex
from .ingestion import CorpusStore, EdgeKey
from .pattern import (
    SCHEMA_VERSION,
    PatternQuery,
    edge_documents,
    mine_pattern,
    pattern_to_json,
    result_documents,
)
from .vocabulary import TYPE_COLORS, Vocabulary

_STATUS_BY_CODE = {
    "NO_KEYWORDS": 400,
    "UNTRANSLATABLE_KEYWORD": 422,
    "INVALID_DATE_RANGE": 400,
    "UNKNOWN_EDGE": 404,
    "INTERNAL": 500,
}


def _split_list_param(raw: str) -> list[str]:
    return [piece.strip() for piece in raw.split("|") if piece.strip()]


def _parse_date_param(raw: str, name: str) -> date | None:
    if not raw:
        return None
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise InvalidDateRange(f"{name} {raw!r} is not an ISO-8601 date") from None


def _parse_filter(sources: str, classes: str, date_from: str, date_to: str) -> DocFilter:
    src = _split_list_param(sources)
    cls = _split_list_param(classes)
    return DocFilter(
        sources=frozenset(src) if src else None,
        classes=frozenset(cls) if cls else None,
        date_from=_parse_date_param(date_from, "from"),
        date_to=_parse_date_param(date_to, "to"),
    )


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, ensure_ascii=False, separators=(",", ":")),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(vocab: Vocabulary, ix: InvertedIndex, store: CorpusStore) -> FastAPI:
    app = FastAPI(title="graphmine", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(GraphMineError)
    async def domain_error_handler(_: Request, exc: GraphMineError) -> JSONResponse:
        return _json_response(
            {"code": exc.code, "message": exc.message, "detail": exc.detail},
            status_code=_STATUS_BY_CODE.get(exc.code, 500),
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(
        _: Request, exc: RequestValidationError
    ) -> JSONResponse:
        # The error enumeration has no code for malformed parameters;
        # report INTERNAL with a client status so the body stays structured.
        return _json_response(
            {
                "code": "INTERNAL",
                "message": "invalid request parameters",
                "detail": {"errors": [str(e.get("msg", e)) for e in exc.errors()]},
            },
            status_code=400,
        )

    def make_query(
        keywords: str, top_k: int, sources: str, classes: str, date_from: str, date_to: str
    ) -> PatternQuery:
        keyword_list = _split_list_param(keywords)
        doc_filter = _parse_filter(sources, classes, date_from, date_to)
        return PatternQuery(
            keywords=tuple(keyword_list),
            doc_filter=doc_filter,
            top_k_per_concept=top_k,
        )

    @app.get("/suggest")
    def suggest(q: str = "", limit: int = 10) -> Response:
        if not q.strip():
            items: list[dict] = []
        else:
            items = [
                {
                    "synonym": synonym,
                    "entity_id": entity_id,
                    "entity_type": vocab.entity(entity_id).entity_type.value,
                }
                for synonym, entity_id in vocab.suggest(q, max(1, limit))
            ]
        return _json_response({"schema_version": SCHEMA_VERSION, "suggestions": items})

    @app.get("/pattern")
    def pattern(
        keywords: str = "",
        top_k: int = 5,
        sources: str = "",
        classes: str = "",
        date_from: str = "",
        date_to: str = "",
    ) -> Response:
        query = make_query(keywords, top_k, sources, classes, date_from, date_to)
        mined = mine_pattern(query, vocab, ix, store)
        return Response(content=pattern_to_json(mined), media_type="application/json")

    @app.get("/edge_docs")
    def edge_docs(
        subject: str,
        predicate: str,
        object: str,
        keywords: str = "",
        sources: str = "",
        classes: str = "",
        date_from: str = "",
        date_to: str = "",
    ) -> Response:
        query = make_query(keywords, 5, sources, classes, date_from, date_to)
        edge = EdgeKey(subject, predicate, object)
        ranked = edge_documents(edge, query, vocab, ix, store)
        documents = []
        for ordinal, doc_score in ranked:
            entry = ix.doc_table[ordinal]
            meta = store.meta(entry.source, entry.doc_id)
            documents.append(
                {
                    "doc_id": meta.doc_id,
                    "source": meta.source,
                    "title": meta.title,
                    "publication_date": meta.publication_date.isoformat()
                    if meta.publication_date
                    else None,
                    "score": round(doc_score, 6),
                }
            )
        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "edge": {"subject": subject, "predicate": predicate, "object": object},
                "documents": documents,
            }
        )

    @app.get("/documents")
    def documents(
        keywords: str = "",
        sources: str = "",
        classes: str = "",
        date_from: str = "",
        date_to: str = "",
        offset: int = 0,
        count: int = 20,
    ) -> Response:
        query = make_query(keywords, 5, sources, classes, date_from, date_to)
        records = result_documents(query, vocab, ix, store)
        page = records[max(0, offset) : max(0, offset) + max(0, count)]
        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "total": len(records),
                "documents": [
                    {
                        "doc_id": r.doc_id,
                        "source": r.source,
                        "title": r.title,
                        "publication_date": r.publication_date.isoformat()
                        if r.publication_date
                        else None,
                        "classes": list(r.classes),
                    }
                    for r in page
                ],
            }
        )

    @app.get("/meta")
    def meta() -> Response:
        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "colors": {t.value: color for t, color in TYPE_COLORS.items()},
                "sources": store.sources,
                "classes": store.classes,
                "total_docs": ix.total_docs,
            }
        )

    return app
