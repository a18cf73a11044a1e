"""Concept-in-video weights and the video x concept weight matrix.

Each (concept, video) pair with at least one annotated shot gets three
numbers: a local weight (fraction of the video's shots carrying the
concept), a collection-level weight (similar-concept count over the
product of the video's concept count and the concept's video frequency)
and their product, the combined weight used for ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

from .corpus import CorpusIndex
from .errors import CorpusValidationError, InvalidCorpusError, UnknownIdError


def local_weight(nb_shots_cv: int, n_total_shots: int) -> float:
    """Fraction of a video's shots that carry the concept. Always in [0, 1]."""
    if n_total_shots < 1:
        raise InvalidCorpusError("video has no shots; local weight undefined")
    if nb_shots_cv < 0 or nb_shots_cv > n_total_shots:
        raise CorpusValidationError(
            f"shot count {nb_shots_cv} outside [0, {n_total_shots}]"
        )
    return nb_shots_cv / n_total_shots


def global_weight(
    nb_similar: int, nb_concepts_in_video: int, n_videos_with_concept: int
) -> float:
    """Collection-level weight of a concept occurrence.

    A concept with no context siblings would weigh zero and vanish from
    retrieval entirely, so the similar-concept count is floored at 1;
    isolated concepts stay retrievable.
    """
    if nb_concepts_in_video < 1 or n_videos_with_concept < 1:
        raise InvalidCorpusError("global weight needs non-zero denominators")
    if nb_similar < 0:
        raise CorpusValidationError(f"negative similar-concept count {nb_similar}")
    effective = max(nb_similar, 1)
    return effective / (nb_concepts_in_video * n_videos_with_concept)


def combined_weight(p1: float, p2: float) -> float:
    if not 0.0 <= p1 <= 1.0:
        raise CorpusValidationError(f"local weight {p1} outside [0, 1]")
    if p2 < 0.0:
        raise CorpusValidationError(f"global weight {p2} is negative")
    return p1 * p2


@dataclass(frozen=True)
class ConceptVideoWeight:
    concept_id: int
    video_id: str
    p1: float  # local weight
    p2: float  # collection-level weight
    p: float   # combined weight, p1 * p2


class WeightMatrix:
    """Sparse per-(video, concept) weights plus a dense ranking view.

    Row and column orderings are sorted and stable across rebuilds; an
    entry exists exactly when the concept occurs in the video.
    """

    def __init__(
        self,
        video_ids: tuple[str, ...],
        concept_ids: tuple[int, ...],
        entries: dict[tuple[str, int], ConceptVideoWeight],
    ):
        self.video_ids = video_ids
        self.concept_ids = concept_ids
        self.entries = entries
        self._row_of = {vid: i for i, vid in enumerate(video_ids)}
        self._col_of = {cid: j for j, cid in enumerate(concept_ids)}
        dense = np.zeros((len(video_ids), len(concept_ids)), dtype=np.float64)
        for (vid, cid), entry in entries.items():
            dense[self._row_of[vid], self._col_of[cid]] = entry.p
        self.dense = dense
        self.row_norms = np.sqrt((dense * dense).sum(axis=1))

    def video_vector(self, video_id: str) -> np.ndarray:
        """Dense weight vector over the whole concept universe (0 = absent)."""
        try:
            row = self._row_of[video_id]
        except KeyError:
            raise UnknownIdError("video", video_id) from None
        return self.dense[row].copy()

    def weight(self, video_id: str, concept_id: int) -> float:
        entry = self.entries.get((video_id, concept_id))
        return entry.p if entry is not None else 0.0

    def __contains__(self, video_id: str) -> bool:
        return video_id in self._row_of

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeightMatrix)
            and self.video_ids == other.video_ids
            and self.concept_ids == other.concept_ids
            and self.entries == other.entries
        )

    def iter_entries(self) -> Iterator[ConceptVideoWeight]:
        """Entries in (video_id, concept_id) order."""
        for vid in self.video_ids:
            for cid in self.concept_ids:
                entry = self.entries.get((vid, cid))
                if entry is not None:
                    yield entry


def build_weight_matrix(index: CorpusIndex) -> WeightMatrix:
    """Compute every concept-in-video weight of the index. Deterministic."""
    entries: dict[tuple[str, int], ConceptVideoWeight] = {}
    for concept_id in index.sorted_concept_ids():
        concept = index.concepts[concept_id]
        per_video: dict[str, int] = {}
        for shot in concept.shots:
            per_video[shot.video_id] = per_video.get(shot.video_id, 0) + 1
        if not per_video:
            continue
        nb_similar = len(index.similar_concepts(concept_id))
        n_videos = len(index.videos_of_concept(concept_id))
        for video_id in sorted(per_video):
            video = index.videos[video_id]
            p1 = local_weight(per_video[video_id], video.total_shots)
            p2 = global_weight(nb_similar, len(video.concept_ids), n_videos)
            entries[(video_id, concept_id)] = ConceptVideoWeight(
                concept_id=concept_id,
                video_id=video_id,
                p1=p1,
                p2=p2,
                p=combined_weight(p1, p2),
            )
    return WeightMatrix(index.sorted_video_ids(), index.sorted_concept_ids(), entries)


WEIGHT_EXPORT_HEADER = "video_id\tconcept_id\tp1\tp2\tp"


def write_weight_records(matrix: WeightMatrix, stream: IO[str]) -> int:
    """Write one TSV record per matrix entry; returns the record count."""
    stream.write(WEIGHT_EXPORT_HEADER + "\n")
    count = 0
    for entry in matrix.iter_entries():
        stream.write(
            f"{entry.video_id}\t{entry.concept_id}\t{entry.p1!r}\t{entry.p2!r}\t{entry.p!r}\n"
        )
        count += 1
    return count
