import numpy as np
import pytest

from riddleforge.datastore import (Datastore, DatastoreEntry, DatastoreError,
                                   build_datastore, get_concept)
from riddleforge.embedding import (EmbeddingError, HashedProjectionEmbedder,
                                   PrecomputedEmbedder)
from riddleforge.triples import assemble_triple

from conftest import synthetic_corpus


@pytest.fixture(scope="module")
def small_corpus():
    return synthetic_corpus(n_concepts=6, triples_per_concept=5, seed=99)


@pytest.fixture(scope="module")
def small_datastore(small_corpus):
    return build_datastore(small_corpus, HashedProjectionEmbedder(dimension=64, seed=2))


class TestBuildDatastore:
    def test_one_entry_per_triple(self, worked_example_triples, worked_example_datastore):
        assert len(worked_example_datastore) == len(worked_example_triples)
        dog_entries = [e for e in worked_example_datastore.entries
                       if e.concept_id == "dog"]
        assert len(dog_entries) == 13

    def test_empty_corpus_rejected(self):
        with pytest.raises(DatastoreError):
            build_datastore([], HashedProjectionEmbedder())

    def test_single_triple_any_query_returns_it(self):
        triple = assemble_triple("dog", "can", "bark")
        ds = build_datastore([triple], HashedProjectionEmbedder(dimension=32))
        result = ds.query_context("I have gills", k=5)
        assert [n.entry.triple_id for n in result.neighbors] == [triple.id]
        assert result.short_result

    def test_unit_norm_enforced(self):
        bad = DatastoreEntry(vector=np.array([1.0, 1.0]), property="p",
                             concept_id="c", triple_id="t")
        with pytest.raises(DatastoreError):
            Datastore([bad], provider=None)

    def test_dimension_mismatch_rejected(self):
        a = DatastoreEntry(np.array([1.0, 0.0]), "p", "c", "t1")
        b = DatastoreEntry(np.array([1.0, 0.0, 0.0]), "q", "c", "t2")
        with pytest.raises(DatastoreError):
            Datastore([a, b], provider=None)

    def test_stored_vectors_unit_norm(self, small_datastore):
        for entry in small_datastore.entries:
            assert abs(np.linalg.norm(entry.vector) - 1.0) < 1e-6

    def test_file_provider_missing_ids_is_hard_error(self, small_corpus):
        provider = PrecomputedEmbedder({small_corpus[0].id: np.array([1.0, 0.0])})
        with pytest.raises(EmbeddingError) as err:
            build_datastore(small_corpus, provider)
        assert "missing" in str(err.value)


class TestQueries:
    def test_distances_non_decreasing(self, small_datastore):
        result = small_datastore.query_context("I am related to shared trait number 1", k=8)
        distances = [n.distance for n in result.neighbors]
        assert distances == sorted(distances)

    def test_kdtree_equals_linear_method(self, small_datastore, small_corpus):
        for triple in small_corpus[::3]:
            a = small_datastore.query_for_triple(triple.id, k=5)
            b = small_datastore.query_vector(small_datastore.vector_of(triple.id),
                                             k=5, exclude=(triple.id,),
                                             method="linear")
            assert [n.entry.triple_id for n in a.neighbors] == \
                [n.entry.triple_id for n in b.neighbors]

    def test_exclude_honored(self, small_datastore, small_corpus):
        ids = {t.id for t in small_corpus[:4]}
        result = small_datastore.query_context("I can hop", k=10, exclude=ids)
        assert not ids.intersection(n.entry.triple_id for n in result.neighbors)

    def test_self_excluded_by_default(self, small_datastore, small_corpus):
        triple = small_corpus[0]
        result = small_datastore.query_for_triple(triple.id, k=5)
        assert triple.id not in [n.entry.triple_id for n in result.neighbors]
        included = small_datastore.query_for_triple(triple.id, k=5,
                                                    include_self=True)
        first = included.neighbors[0]
        assert first.entry.triple_id == triple.id
        assert first.distance == pytest.approx(0.0, abs=1e-9)

    def test_short_result_flag(self, small_datastore):
        result = small_datastore.query_context("I can hop", k=10_000)
        assert result.short_result
        assert len(result.neighbors) == len(small_datastore)

    def test_euclidean_rank_equals_cosine_rank(self, small_datastore):
        # On unit vectors d^2 = 2 - 2 cos, so both orderings must agree.
        query = small_datastore.provider.embed_text("I am related to shared trait number 3")
        result = small_datastore.query_vector(query, k=12)
        cosines = [float(query @ n.entry.vector) for n in result.neighbors]
        assert cosines == sorted(cosines, reverse=True)

    def test_max_distance_cutoff(self, small_corpus):
        ds = build_datastore(small_corpus,
                             HashedProjectionEmbedder(dimension=64, seed=2),
                             max_distance=0.5)
        triple = small_corpus[0]
        result = ds.query_for_triple(triple.id, k=5)
        assert all(n.distance <= 0.5 for n in result.neighbors)

    def test_get_concept_round_trip(self, small_datastore, small_corpus):
        from collections import Counter
        stored = Counter(get_concept(e) for e in small_datastore.entries)
        expected = Counter(t.concept_id for t in small_corpus)
        assert stored == expected
