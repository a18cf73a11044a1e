import io

import numpy as np
import pytest

from cbvr import (
    Concept,
    CorpusValidationError,
    InvalidCorpusError,
    Shot,
    UnknownIdError,
    build_corpus_index,
    build_weight_matrix,
    combined_weight,
    global_weight,
    local_weight,
    write_weight_records,
)

from .synth import brute_force_weights, build_from_annotations, random_annotations


class TestLocalWeight:
    def test_values(self):
        assert local_weight(10, 10) == 1.0
        assert local_weight(0, 10) == 0.0
        assert local_weight(4, 10) == 0.4

    def test_zero_total_rejected(self):
        with pytest.raises(InvalidCorpusError):
            local_weight(0, 0)

    def test_count_above_total_rejected(self):
        with pytest.raises(CorpusValidationError):
            local_weight(11, 10)

    def test_range(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(1, 50))
            nb = int(rng.integers(0, n + 1))
            assert 0.0 <= local_weight(nb, n) <= 1.0


class TestGlobalWeight:
    def test_values(self):
        assert global_weight(1, 1, 1) == 1.0
        assert global_weight(4, 5, 10) == 0.08

    def test_similar_count_floored_at_one(self):
        # A concept with no context siblings keeps a non-zero weight.
        assert global_weight(0, 5, 10) == 0.02
        assert global_weight(0, 5, 10) == global_weight(1, 5, 10)

    def test_zero_denominators_rejected(self):
        with pytest.raises(InvalidCorpusError):
            global_weight(1, 0, 1)
        with pytest.raises(InvalidCorpusError):
            global_weight(1, 1, 0)

    def test_decreases_with_video_frequency(self):
        # Holding the other inputs fixed, more videos containing the
        # concept means a strictly lower weight.
        values = [global_weight(3, 4, n) for n in range(1, 30)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestCombinedWeight:
    def test_values(self):
        assert combined_weight(0.0, 123.0) == 0.0
        assert combined_weight(1.0, 0.37) == 0.37
        assert combined_weight(0.4, 0.08) == pytest.approx(0.032, rel=1e-12)

    def test_preconditions(self):
        with pytest.raises(CorpusValidationError):
            combined_weight(1.5, 1.0)
        with pytest.raises(CorpusValidationError):
            combined_weight(0.5, -0.1)


class TestBuildWeightMatrix:
    def test_single_video_single_concept(self):
        concepts = [Concept(1, "A", (Shot("v1_1", 1), Shot("v1_2", 2)))]
        index, _, _ = build_corpus_index(concepts)
        matrix = build_weight_matrix(index)
        entry = matrix.entries[("v1", 1)]
        assert (entry.p1, entry.p2, entry.p) == (1.0, 1.0, 1.0)

    def test_sparsity(self):
        concepts = [
            Concept(1, "A", (Shot("v1_1", 1),)),
            Concept(2, "B", (Shot("v2_1", 1),)),
        ]
        index, _, _ = build_corpus_index(concepts)
        matrix = build_weight_matrix(index)
        assert ("v1", 2) not in matrix.entries
        assert matrix.weight("v1", 2) == 0.0

    def test_oracle_equivalence_small(self):
        rng = np.random.default_rng(17)
        annotations, context_sets, sidecar = random_annotations(rng)
        index = build_from_annotations(annotations, context_sets, sidecar)
        matrix = build_weight_matrix(index)
        expected = brute_force_weights(annotations, context_sets, sidecar)
        assert set(matrix.entries) == set(expected)
        for key, (p1, p2, p) in expected.items():
            entry = matrix.entries[key]
            assert entry.p1 == pytest.approx(p1, rel=1e-9)
            assert entry.p2 == pytest.approx(p2, rel=1e-9)
            assert entry.p == pytest.approx(p, rel=1e-9)

    def test_combined_consistency(self, demo_matrix):
        for entry in demo_matrix.iter_entries():
            assert entry.p == pytest.approx(entry.p1 * entry.p2, rel=1e-12)
            assert 0.0 <= entry.p1 <= 1.0
            assert entry.p2 > 0.0

    def test_determinism(self, demo_index):
        a = build_weight_matrix(demo_index)
        b = build_weight_matrix(demo_index)
        assert a == b
        assert np.array_equal(a.dense, b.dense)


class TestVideoVector:
    def test_shape_and_zeros(self, demo_matrix):
        for vid in demo_matrix.video_ids:
            vector = demo_matrix.video_vector(vid)
            assert vector.shape == (len(demo_matrix.concept_ids),)
        vector = demo_matrix.video_vector("shot107")
        by_concept = dict(zip(demo_matrix.concept_ids, vector))
        assert by_concept[1] == 0.0  # no anchorperson shots in that video
        assert by_concept[5] > 0.0

    def test_matches_entries(self, demo_matrix):
        vector = demo_matrix.video_vector("shot101")
        for j, cid in enumerate(demo_matrix.concept_ids):
            assert vector[j] == demo_matrix.weight("shot101", cid)

    def test_unknown_video(self, demo_matrix):
        with pytest.raises(UnknownIdError):
            demo_matrix.video_vector("ghost")


def test_export_records(demo_matrix):
    buffer = io.StringIO()
    count = write_weight_records(demo_matrix, buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "video_id\tconcept_id\tp1\tp2\tp"
    assert count == len(demo_matrix.entries) == len(lines) - 1
    vid, cid, p1, p2, p = lines[1].split("\t")
    entry = demo_matrix.entries[(vid, int(cid))]
    assert (float(p1), float(p2), float(p)) == (entry.p1, entry.p2, entry.p)
