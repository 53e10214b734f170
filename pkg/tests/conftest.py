from pathlib import Path

import pytest

import graphmine as gm

FIXTURES = Path(__file__).parent / "fixtures" / "t3"

METFORMIN = "MESH:D008687"
DIABETES = "MESH:D003920"
DIABETES_T1 = "MESH:D003922"
DIABETES_T2 = "MESH:D003924"
AMPK = "GENE:5562"
HUMANS = "MESH:D006801"
GLUCOSE = "MESH:D005947"


@pytest.fixture(scope="session")
def t3_vocab() -> gm.Vocabulary:
    return gm.load_vocabulary(FIXTURES / "vocabulary.jsonl")


@pytest.fixture(scope="session")
def t3_store(t3_vocab) -> gm.CorpusStore:
    return gm.ingest_corpus(FIXTURES / "corpus.jsonl", t3_vocab)


@pytest.fixture(scope="session")
def t3_index(t3_store) -> gm.InvertedIndex:
    return gm.build_index(t3_store)
