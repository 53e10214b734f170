"""Error taxonomy shared by all modules.

Every exception carries a stable ``code`` so the CLI and the HTTP service
can report structured, non-cryptic errors. Codes exposed over the API are
limited to: NO_KEYWORDS, UNTRANSLATABLE_KEYWORD, INVALID_DATE_RANGE,
UNKNOWN_EDGE and INTERNAL.
"""

from __future__ import annotations

from typing import Any


class GraphMineError(Exception):
    """Base class for all domain errors."""

    code = "INTERNAL"

    def __init__(self, message: str, detail: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class MalformedRecord(GraphMineError):
    """A line of an input file could not be parsed."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(
            f"line {line_number}: {reason}",
            detail={"line": line_number, "reason": reason},
        )
        self.line_number = line_number


class DuplicateEntityId(GraphMineError):
    def __init__(self, entity_id: str):
        super().__init__(
            f"duplicate entity id: {entity_id}", detail={"entity_id": entity_id}
        )
        self.entity_id = entity_id


class DuplicateDocument(GraphMineError):
    def __init__(self, source: str, doc_id: str):
        super().__init__(
            f"duplicate document: ({source}, {doc_id})",
            detail={"source": source, "doc_id": doc_id},
        )
        self.source = source
        self.doc_id = doc_id


class EmptyKeyword(GraphMineError):
    code = "NO_KEYWORDS"

    def __init__(self):
        super().__init__("keyword is empty after trimming whitespace")


class NoKeywords(GraphMineError):
    code = "NO_KEYWORDS"

    def __init__(self):
        super().__init__("at least one keyword is required")


class UntranslatableKeyword(GraphMineError):
    """A keyword matched no entity in the vocabulary.

    Carries the offending keyword plus nearby vocabulary terms so callers
    can present actionable feedback instead of a bare failure.
    """

    code = "UNTRANSLATABLE_KEYWORD"

    def __init__(self, keyword: str, suggestions: list[str] | None = None):
        suggestions = suggestions or []
        msg = f"keyword {keyword!r} matches no entity in the vocabulary"
        if suggestions:
            msg += "; did you mean: " + ", ".join(suggestions)
        super().__init__(
            msg, detail={"keyword": keyword, "suggestions": suggestions}
        )
        self.keyword = keyword
        self.suggestions = suggestions


class InvalidDateRange(GraphMineError):
    code = "INVALID_DATE_RANGE"


class EdgeAbsent(GraphMineError):
    """An edge-level factor was requested for an edge the document lacks."""


class UnknownEdge(GraphMineError):
    code = "UNKNOWN_EDGE"

    def __init__(self, message: str = "edge has no supporting documents under this query"):
        super().__init__(message)


class CorruptIndex(GraphMineError):
    def __init__(self, reason: str):
        super().__init__(f"corrupt index: {reason}", detail={"reason": reason})


class CorruptStore(GraphMineError):
    def __init__(self, reason: str):
        super().__init__(f"corrupt corpus store: {reason}", detail={"reason": reason})
