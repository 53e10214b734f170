import json
import random
from datetime import date

import pytest

import graphmine as gm
from graphmine.ingestion import document_sentences

from .conftest import (
    AMPK,
    DIABETES,
    DIABETES_T1,
    DIABETES_T2,
    FIXTURES,
    GLUCOSE,
    HUMANS,
    METFORMIN,
)


def edge(s, o, predicate="associated"):
    return gm.EdgeKey.canonical(s, predicate, o)


class TestSegmentation:
    def test_two_terminated_clauses(self):
        got = gm.segment_sentences("A treats B. C binds D.")
        assert [s for s, _ in got] == ["A treats B.", "C binds D."]

    def test_empty_text(self):
        assert gm.segment_sentences("") == []

    def test_no_terminator(self):
        got = gm.segment_sentences("No terminator here")
        assert got == [("No terminator here", (0, 18))]

    def test_terminator_needs_following_whitespace(self):
        got = gm.segment_sentences("pH 7.4 is neutral. Next one!")
        assert [s for s, _ in got] == ["pH 7.4 is neutral.", "Next one!"]

    def test_ranges_trimmed_and_ordered(self):
        text = "  First one.   Second?  "
        got = gm.segment_sentences(text)
        assert [s for s, _ in got] == ["First one.", "Second?"]
        for sentence, (start, end) in got:
            assert text[start:end] == sentence
        starts = [span[0] for _, span in got]
        assert starts == sorted(starts)

    def test_whitespace_only(self):
        assert gm.segment_sentences("   \n  ") == []

    def test_title_is_own_sentence_block(self):
        doc = gm.RawDocument("x", "s", "Short title without period", "Body one. Body two.")
        sentences = [s for s, _ in document_sentences(doc)]
        assert sentences == ["Short title without period", "Body one.", "Body two."]


class TestLinking:
    def test_longest_match_wins(self, t3_vocab):
        doc = gm.RawDocument(
            "x", "s", "", "Metformin treats diabetes mellitus type 2."
        )
        mentions = gm.link_entities(doc, t3_vocab)
        assert [(m.entity_id, m.sentence_idx) for m in mentions] == [
            (METFORMIN, 0),
            (DIABETES_T2, 0),
        ]

    def test_surfaces_and_spans(self, t3_vocab):
        doc = gm.RawDocument("x", "s", "", "Metformin treats diabetes mellitus type 2.")
        text = gm.ingestion.document_text(doc)
        for m in gm.link_entities(doc, t3_vocab):
            assert text[m.start : m.end] == m.surface

    def test_no_vocabulary_term(self, t3_vocab):
        doc = gm.RawDocument("x", "s", "", "Nothing to see here at all")
        assert gm.link_entities(doc, t3_vocab) == []

    def test_two_occurrences_one_sentence(self, t3_vocab):
        doc = gm.RawDocument("x", "s", "", "Metformin with metformin again.")
        mentions = gm.link_entities(doc, t3_vocab)
        assert [m.entity_id for m in mentions] == [METFORMIN, METFORMIN]
        assert {m.sentence_idx for m in mentions} == {0}

    def test_token_boundary_blocks_partial_word(self, t3_vocab):
        # "human" must not match inside "humankind"; "humans" matches "Humans".
        doc = gm.RawDocument("x", "s", "", "For humankind and humans alike.")
        mentions = gm.link_entities(doc, t3_vocab)
        assert [(m.entity_id, m.surface) for m in mentions] == [(HUMANS, "humans")]

    def test_hyphen_prefix_still_bounded(self, t3_vocab):
        # Longest match: the "non-..." synonym beats its embedded suffix.
        doc = gm.RawDocument("x", "s", "", "A non-insulin-dependent diabetes case.")
        mentions = gm.link_entities(doc, t3_vocab)
        assert [m.entity_id for m in mentions] == [DIABETES_T2]
        assert mentions[0].surface == "non-insulin-dependent diabetes"

    def test_case_insensitive(self, t3_vocab):
        doc = gm.RawDocument("x", "s", "", "METFORMIN AND GLUCOPHAGE.")
        mentions = gm.link_entities(doc, t3_vocab)
        assert [m.entity_id for m in mentions] == [METFORMIN, METFORMIN]


class TestCooccurrence:
    def test_single_pair(self):
        mentions = [
            gm.EntityMention(METFORMIN, 0, 0, 9, "Metformin"),
            gm.EntityMention(AMPK, 0, 20, 24, "AMPK"),
        ]
        statements = gm.extract_cooccurrence_statements(mentions)
        assert len(statements) == 1
        st = statements[0]
        assert (st.subject_id, st.predicate, st.object_id) == (AMPK, "associated", METFORMIN)
        assert st.confidence == 0.3
        assert st.method is gm.ExtractionMethod.COOCCURRENCE

    def test_single_entity_sentence(self):
        mentions = [gm.EntityMention(METFORMIN, 0, 0, 9, "Metformin")]
        assert gm.extract_cooccurrence_statements(mentions) == []

    def test_same_entity_twice(self):
        mentions = [
            gm.EntityMention(METFORMIN, 0, 0, 9, "Metformin"),
            gm.EntityMention(METFORMIN, 0, 15, 24, "metformin"),
        ]
        assert gm.extract_cooccurrence_statements(mentions) == []

    def test_pair_count_per_sentence(self):
        rng = random.Random(7)
        for _ in range(30):
            n = rng.randint(0, 6)
            ids = [f"E{i}" for i in range(n)]
            mentions = [gm.EntityMention(eid, 0, i * 5, i * 5 + 3, eid) for i, eid in enumerate(ids)]
            statements = gm.extract_cooccurrence_statements(mentions)
            assert len(statements) == n * (n - 1) // 2

    def test_k_sentences_yield_k_statements(self):
        mentions = []
        for sentence in range(3):
            mentions.append(gm.EntityMention("A", sentence, 0, 1, "a"))
            mentions.append(gm.EntityMention("B", sentence, 2, 3, "b"))
        statements = gm.extract_cooccurrence_statements(mentions)
        assert len(statements) == 3
        assert {st.sentence_idx for st in statements} == {0, 1, 2}

    def test_custom_confidence(self):
        mentions = [
            gm.EntityMention("A", 0, 0, 1, "a"),
            gm.EntityMention("B", 0, 2, 3, "b"),
        ]
        statements = gm.extract_cooccurrence_statements(mentions, confidence=0.7)
        assert statements[0].confidence == 0.7


class TestBuildGraph:
    def test_same_edge_aggregates(self):
        doc = gm.RawDocument("x", "s", "", "one. two.")
        statements = [
            gm.Statement("A", "associated", "B", 0, 0.3, gm.ExtractionMethod.COOCCURRENCE),
            gm.Statement("A", "associated", "B", 1, 0.3, gm.ExtractionMethod.COOCCURRENCE),
        ]
        graph = gm.build_document_graph(doc, [], statements)
        stats = graph.edges[edge("A", "B")]
        assert stats.freq == 2
        assert stats.max_confidence == 0.3
        assert graph.num_statement_extractions == 2

    def test_no_statements(self):
        doc = gm.RawDocument("x", "s", "t", "b")
        graph = gm.build_document_graph(doc, [], [])
        assert graph.edges == {}
        assert graph.num_statement_extractions == 0

    def test_entity_first_last(self):
        doc = gm.RawDocument("x", "s", "", "a. b. c. d.")
        mentions = [
            gm.EntityMention("A", 0, 0, 1, "a"),
            gm.EntityMention("A", 3, 9, 10, "d"),
        ]
        graph = gm.build_document_graph(doc, mentions, [])
        assert graph.entity_first_last["A"] == (0, 3)
        assert graph.num_sentences == 4

    def test_extraction_count_matches_freq_sum(self, t3_store):
        for graph in t3_store.graphs():
            assert sum(st.freq for st in graph.edges.values()) == graph.num_statement_extractions

    def test_endpoints_always_spanned(self, t3_store):
        for graph in t3_store.graphs():
            for key in graph.edges:
                assert key.subject_id in graph.entity_first_last
                assert key.object_id in graph.entity_first_last
            for first, last in graph.entity_first_last.values():
                assert first <= last


class TestIngestT3:
    def test_three_documents(self, t3_store):
        assert len(t3_store) == 3
        assert t3_store.sources == ["PubMed"]

    def test_d1_graph(self, t3_store):
        g = t3_store.graph("PubMed", "D1")
        assert g.num_sentences == 4
        assert g.num_statement_extractions == 5
        assert g.edges[edge(AMPK, METFORMIN)] == gm.EdgeStats(2, 0.3)
        assert g.edges[edge(DIABETES_T2, METFORMIN)] == gm.EdgeStats(1, 0.3)
        assert g.edges[edge(AMPK, HUMANS)] == gm.EdgeStats(1, 0.3)
        assert g.edges[edge(HUMANS, METFORMIN)] == gm.EdgeStats(1, 0.3)
        assert len(g.edges) == 4
        assert g.entity_first_last[METFORMIN] == (0, 2)
        assert g.entity_first_last[AMPK] == (0, 2)
        assert g.entity_first_last[DIABETES_T2] == (1, 1)
        assert g.entity_first_last[HUMANS] == (2, 2)
        assert g.entity_first_last[GLUCOSE] == (3, 3)

    def test_d2_graph(self, t3_store):
        g = t3_store.graph("PubMed", "D2")
        assert g.num_sentences == 3
        assert g.num_statement_extractions == 1
        assert g.edges == {edge(DIABETES_T2, METFORMIN): gm.EdgeStats(1, 0.3)}
        assert g.entity_first_last[DIABETES_T2] == (0, 1)
        assert g.entity_first_last[METFORMIN] == (1, 1)
        assert g.entity_first_last[DIABETES] == (2, 2)

    def test_d3_graph(self, t3_store):
        g = t3_store.graph("PubMed", "D3")
        assert g.num_sentences == 3
        assert g.edges == {edge(AMPK, DIABETES_T1): gm.EdgeStats(1, 0.3)}
        assert g.entity_first_last[DIABETES_T1] == (0, 2)

    def test_determinism(self, t3_vocab, t3_store):
        again = gm.ingest_corpus(FIXTURES / "corpus.jsonl", t3_vocab)
        assert again.keys() == t3_store.keys()
        for key in again.keys():
            assert again.graph(*key) == t3_store.graph(*key)
            assert again.meta(*key) == t3_store.meta(*key)

    def test_duplicate_document(self, t3_vocab, tmp_path):
        line = json.dumps(
            {"doc_id": "D1", "source": "S", "title": "t.", "body": "b."}
        )
        path = tmp_path / "c.jsonl"
        path.write_text(line + "\n" + line + "\n")
        with pytest.raises(gm.DuplicateDocument):
            gm.ingest_corpus(path, t3_vocab)

    def test_malformed_line(self, t3_vocab, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"doc_id": "D1", "source": "S", "title": "t.", "body": "b."}\nnope\n')
        with pytest.raises(gm.MalformedRecord) as exc:
            gm.ingest_corpus(path, t3_vocab)
        assert exc.value.line_number == 2

    def test_imported_annotations_passthrough(self, t3_vocab, tmp_path):
        record = {
            "doc_id": "X1",
            "source": "Trials",
            "title": "Imported.",
            "body": "One sentence. Two sentence.",
            "annotations": {
                "mentions": [
                    {"entity_id": METFORMIN, "sentence_idx": 0, "start": 0, "end": 8},
                    {"entity_id": AMPK, "sentence_idx": 1, "start": 14, "end": 17},
                ],
                "statements": [
                    {
                        "subject": METFORMIN,
                        "predicate": "activates",
                        "object": AMPK,
                        "sentence_idx": 1,
                        "confidence": 0.9,
                    }
                ],
            },
        }
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(record) + "\n")
        store = gm.ingest_corpus(path, t3_vocab)
        g = store.graph("Trials", "X1")
        key = gm.EdgeKey(METFORMIN, "activates", AMPK)
        assert g.edges[key] == gm.EdgeStats(1, 0.9)
        # Directional predicate: endpoint order preserved as given.
        assert key.subject_id == METFORMIN

    def test_imported_bad_confidence(self, t3_vocab, tmp_path):
        record = {
            "doc_id": "X1",
            "source": "S",
            "title": "t.",
            "body": "b.",
            "annotations": {
                "statements": [
                    {"subject": "A", "predicate": "p", "object": "B",
                     "sentence_idx": 0, "confidence": 1.5}
                ]
            },
        }
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(record) + "\n")
        with pytest.raises(gm.MalformedRecord):
            gm.ingest_corpus(path, t3_vocab)


class TestStoreRoundTrip:
    def test_save_load_equal(self, t3_store, tmp_path):
        gm.save_store(t3_store, tmp_path / "store")
        loaded = gm.load_store(tmp_path / "store")
        assert loaded.keys() == t3_store.keys()
        for key in loaded.keys():
            assert loaded.graph(*key) == t3_store.graph(*key)
            assert loaded.meta(*key) == t3_store.meta(*key)
        assert loaded.num_statement_extractions == t3_store.num_statement_extractions

    def test_load_missing_dir(self, tmp_path):
        with pytest.raises(gm.CorruptStore):
            gm.load_store(tmp_path / "nothing")

    def test_load_corrupt_graphs(self, t3_store, tmp_path):
        gm.save_store(t3_store, tmp_path / "store")
        (tmp_path / "store" / "graphs.jsonl").write_text('{"broken": true}\n')
        with pytest.raises(gm.CorruptStore):
            gm.load_store(tmp_path / "store")

    def test_date_preserved(self, t3_store, tmp_path):
        gm.save_store(t3_store, tmp_path / "store")
        loaded = gm.load_store(tmp_path / "store")
        assert loaded.meta("PubMed", "D1").publication_date == date(2021, 5, 10)
