"""Entity vocabulary: typed entities with synonyms, keyword translation
and autocomplete suggestion.

Translation rule: a keyword is split into whitespace-delimited terms and an
entity matches when at least one of its synonyms contains *every* term as a
case-insensitive substring. Matching is substring-based on purpose so that
partial words ("melli") already narrow down to the intended concepts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DuplicateEntityId, EmptyKeyword, MalformedRecord


class EntityType(str, Enum):
    DRUG = "Drug"
    DISEASE = "Disease"
    TARGET = "Target"
    SPECIES = "Species"
    METHOD = "Method"
    DOSAGE_FORM = "DosageForm"
    HEALTH_STATUS = "HealthStatus"
    OTHER = "Other"


# One display color per entity type, shared by every surface (CLI report,
# HTTP /meta, web client) so the coloring stays consistent system-wide.
TYPE_COLORS: dict[EntityType, str] = {
    EntityType.DRUG: "#d7191c",
    EntityType.DISEASE: "#2b83ba",
    EntityType.TARGET: "#fdae61",
    EntityType.SPECIES: "#abdda4",
    EntityType.METHOD: "#984ea3",
    EntityType.DOSAGE_FORM: "#ff7f00",
    EntityType.HEALTH_STATUS: "#66c2a5",
    EntityType.OTHER: "#999999",
}


@dataclass(frozen=True)
class Entity:
    """A vocabulary concept. ``synonyms`` always includes the preferred name."""

    id: str
    preferred_name: str
    entity_type: EntityType
    synonyms: tuple[str, ...]


def _terms(text: str) -> list[str]:
    return text.lower().split()


class Vocabulary:
    """Immutable entity dictionary with a token index for fast lookup.

    The token index maps each lowercase whitespace-token of every synonym to
    the entity ids using it. A query term (which never contains whitespace)
    occurs as a substring of a synonym exactly when it occurs inside one of
    the synonym's tokens, so candidate entities can be gathered from the
    token table before the per-synonym check.
    """

    def __init__(self, entities: Iterable[Entity]):
        self._by_id: dict[str, Entity] = {}
        self._lowered: dict[str, tuple[str, ...]] = {}
        self._token_index: dict[str, set[str]] = {}
        for entity in entities:
            if entity.id in self._by_id:
                raise DuplicateEntityId(entity.id)
            self._by_id[entity.id] = entity
            lowered = tuple(s.lower() for s in entity.synonyms)
            self._lowered[entity.id] = lowered
            for syn in lowered:
                for token in syn.split():
                    self._token_index.setdefault(token, set()).add(entity.id)

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._by_id

    def __iter__(self) -> Iterator[Entity]:
        return iter(self._by_id.values())

    def entity(self, entity_id: str) -> Entity:
        return self._by_id[entity_id]

    def get(self, entity_id: str) -> Entity | None:
        return self._by_id.get(entity_id)

    def _candidates(self, terms: list[str]) -> set[str]:
        """Entity ids whose synonyms contain each term somewhere (superset
        of the real matches; terms may hit different synonyms)."""
        result: set[str] | None = None
        for term in terms:
            ids: set[str] = set()
            for token, token_ids in self._token_index.items():
                if term in token:
                    ids |= token_ids
            result = ids if result is None else result & ids
            if not result:
                return set()
        return result or set()

    def _synonym_matches(self, entity_id: str, terms: list[str]) -> bool:
        return any(
            all(term in syn for term in terms) for syn in self._lowered[entity_id]
        )

    def translate_keyword(self, keyword: str) -> set[str]:
        """Entity ids having at least one synonym that contains every
        whitespace-delimited term of ``keyword`` as a substring."""
        terms = _terms(keyword)
        if not terms:
            raise EmptyKeyword()
        return {
            eid
            for eid in self._candidates(terms)
            if self._synonym_matches(eid, terms)
        }

    def suggest(self, partial: str, limit: int) -> list[tuple[str, str]]:
        """Up to ``limit`` (synonym, entity id) pairs matching ``partial``
        under the translation rule, shortest synonyms first so broader
        concepts surface before their specializations."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        terms = _terms(partial)
        if not terms:
            return []
        matches: list[tuple[str, str]] = []
        for eid in self._candidates(terms):
            entity = self._by_id[eid]
            for syn, low in zip(entity.synonyms, self._lowered[eid]):
                if all(term in low for term in terms):
                    matches.append((syn, eid))
        matches.sort(key=lambda pair: (len(pair[0]), pair[0], pair[1]))
        return matches[:limit]


def _parse_entity(record: dict, line_number: int) -> Entity:
    for field in ("id", "preferred_name", "entity_type", "synonyms"):
        if field not in record:
            raise MalformedRecord(line_number, f"missing field {field!r}")
    entity_id = record["id"]
    name = record["preferred_name"]
    if not isinstance(entity_id, str) or not entity_id:
        raise MalformedRecord(line_number, "id must be a non-empty string")
    if not isinstance(name, str) or not name.strip():
        raise MalformedRecord(line_number, "preferred_name must be a non-empty string")
    try:
        entity_type = EntityType(record["entity_type"])
    except ValueError:
        raise MalformedRecord(
            line_number, f"unknown entity_type {record['entity_type']!r}"
        ) from None
    raw_synonyms = record["synonyms"]
    if not isinstance(raw_synonyms, list):
        raise MalformedRecord(line_number, "synonyms must be a list")
    synonyms: list[str] = []
    for syn in raw_synonyms:
        if not isinstance(syn, str):
            raise MalformedRecord(line_number, "synonyms must be strings")
        syn = syn.strip()
        if syn and syn not in synonyms:
            synonyms.append(syn)
    # The preferred name is always searchable.
    if name not in synonyms:
        synonyms.insert(0, name)
    return Entity(
        id=entity_id,
        preferred_name=name,
        entity_type=entity_type,
        synonyms=tuple(synonyms),
    )


def load_vocabulary(path: str | Path) -> Vocabulary:
    """Load a vocabulary from a UTF-8 JSONL file, one entity per line."""
    entities: list[Entity] = []
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_number, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise MalformedRecord(line_number, "record must be an object")
            entities.append(_parse_entity(record, line_number))
    return Vocabulary(entities)
