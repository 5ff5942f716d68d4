import random
from pathlib import Path

import pytest

from riddleforge.classify import classify_corpus
from riddleforge.datastore import build_datastore
from riddleforge.embedding import HashedProjectionEmbedder
from riddleforge.triples import (Triple, assemble_triple, build_lookup,
                                 ingest_triples_file)

DATA = Path(__file__).parent / "data"
WORKED_EXAMPLE_TSV = DATA / "worked_example" / "triples.tsv"

# Pins for the checked-in fixture corpus; the classification outcome is
# frozen against exactly these.
WORKED_EXAMPLE_DIMENSION = 1024
WORKED_EXAMPLE_EMBED_SEED = 0
WORKED_EXAMPLE_K = 5

WORKED_EXAMPLE_TOPIC_MARKERS = {"guard your house", "bark", "loyal friend", "a bone"}
WORKED_EXAMPLE_EASY_STRING = "I can guard your house. I can bark. I am a loyal friend. Who am I ?"


@pytest.fixture(scope="session")
def worked_example_triples():
    triples, report = ingest_triples_file(WORKED_EXAMPLE_TSV, "tsv")
    assert not report.malformed and not report.skipped
    return triples


@pytest.fixture(scope="session")
def worked_example_lookup(worked_example_triples):
    lookup, warnings = build_lookup(worked_example_triples)
    assert not warnings
    return lookup


@pytest.fixture(scope="session")
def worked_example_datastore(worked_example_triples):
    provider = HashedProjectionEmbedder(dimension=WORKED_EXAMPLE_DIMENSION,
                                        seed=WORKED_EXAMPLE_EMBED_SEED)
    return build_datastore(worked_example_triples, provider)


@pytest.fixture(scope="session")
def worked_example_classified(worked_example_lookup, worked_example_datastore):
    return classify_corpus(worked_example_lookup, worked_example_datastore, k=WORKED_EXAMPLE_K)


def synthetic_corpus(n_concepts: int = 50, triples_per_concept: int = 8,
                     shared_fraction: float = 0.3, seed: int = 1234
                     ) -> list[Triple]:
    """A corpus mixing concept-exclusive and cross-concept properties.

    Property strings never contain concept names, so the corpora are safe
    for leak scans as well.
    """
    rng = random.Random(seed)
    relations = ["is a", "has", "can", "is related to", "likes"]
    shared_pool = [f"shared trait number {i}" for i in range(20)]
    triples = []
    for c in range(n_concepts):
        concept = f"concept{c:02d}"
        for t in range(triples_per_concept):
            if rng.random() < shared_fraction:
                prop = rng.choice(shared_pool)
            else:
                prop = f"exclusive trait {c:02d} {t}"
            relation = rng.choice(relations)
            try:
                triples.append(assemble_triple(concept, relation, prop))
            except ValueError:
                continue
    # content-derived ids collapse duplicate rows; keep unique ones only
    seen, unique = set(), []
    for tr in triples:
        if tr.id not in seen:
            seen.add(tr.id)
            unique.append(tr)
    return unique
