from pathlib import Path

import pytest

from cbvr import build_weight_matrix, ingest_corpus

DATA_DIR = Path(__file__).parent / "data"
DEMO_DIR = Path(__file__).parent.parent / "demos" / "corpus"


@pytest.fixture(scope="session")
def hashnum_xml() -> bytes:
    """Concept-shots sample in the legacy #Num/seqNum attribute spelling."""
    return (DATA_DIR / "concept_shots_hashnum.xml").read_bytes()


@pytest.fixture(scope="session")
def fnum_xml() -> bytes:
    """Concept-shots sample in the plain fNum/segNum attribute spelling."""
    return (DATA_DIR / "concept_shots_fnum.xml").read_bytes()


@pytest.fixture(scope="session")
def contexts_xml() -> bytes:
    return (DATA_DIR / "contexts_sample.xml").read_bytes()


@pytest.fixture(scope="session")
def demo_files() -> dict[str, bytes]:
    return {
        "concepts": (DEMO_DIR / "concepts.xml").read_bytes(),
        "contexts": (DEMO_DIR / "contexts.xml").read_bytes(),
        "lexicon": (DEMO_DIR / "lexicon.tsv").read_bytes(),
        "qrels": (DEMO_DIR / "qrels.tsv").read_bytes(),
    }


@pytest.fixture(scope="session")
def demo_corpus(demo_files):
    """(index, lexicon, report) built from the bundled demo corpus."""
    return ingest_corpus(
        demo_files["concepts"], demo_files["contexts"], demo_files["lexicon"]
    )


@pytest.fixture(scope="session")
def demo_index(demo_corpus):
    return demo_corpus[0]


@pytest.fixture(scope="session")
def demo_lexicon(demo_corpus):
    return demo_corpus[1]


@pytest.fixture(scope="session")
def demo_matrix(demo_index):
    return build_weight_matrix(demo_index)
