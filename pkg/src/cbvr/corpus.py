"""In-memory model of the three-level corpus hierarchy.

The hierarchy has a contextual level (groups of semantically similar
concepts), a conceptual level (labels attached to shots by an upstream
detector) and a raw-data level (videos and their shots). A CorpusIndex is
immutable after construction and safe for unlimited concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import UnknownIdError


def video_of_shot(shot_id: str) -> str:
    """Derive the video id from a shot id.

    Shot ids follow "<video>_<ordinal>"; the video is everything before the
    final underscore. A shot id with no underscore is its own video.
    """
    prefix, _, tail = shot_id.rpartition("_")
    return prefix if prefix else tail


@dataclass(frozen=True)
class Shot:
    """One annotated video segment. shot_id is opaque, e.g. "shot1176_10"."""

    shot_id: str
    seq_num: int

    @property
    def video_id(self) -> str:
        return video_of_shot(self.shot_id)


@dataclass(frozen=True)
class Concept:
    concept_id: int
    name: str
    shots: tuple[Shot, ...] = ()


@dataclass(frozen=True)
class Context:
    """A named group of concepts with per-concept membership weights.

    Context numbers are display metadata and may repeat across contexts;
    contexts are keyed by name.
    """

    num: int
    name: str
    members: tuple[tuple[int, float], ...] = ()

    def member_ids(self) -> frozenset[int]:
        return frozenset(cid for cid, _ in self.members)


@dataclass(frozen=True)
class Video:
    video_id: str
    total_shots: int
    concept_ids: frozenset[int] = frozenset()


class ContextMembership(NamedTuple):
    num: int
    name: str
    weight: float


@dataclass(frozen=True)
class CorpusIndex:
    """Cross-linked view of concepts, contexts and videos.

    concept_to_videos and video_to_concepts are exact transposes of each
    other; both are derived from the concepts' shot lists at build time.
    """

    concepts: Mapping[int, Concept] = field(default_factory=dict)
    contexts: tuple[Context, ...] = ()
    videos: Mapping[str, Video] = field(default_factory=dict)
    concept_to_videos: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    video_to_concepts: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def concept(self, concept_id: int) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise UnknownIdError("concept", concept_id) from None

    def concept_by_name(self, name: str) -> Concept | None:
        folded = name.casefold()
        for concept in self.concepts.values():
            if concept.name.casefold() == folded:
                return concept
        return None

    def video(self, video_id: str) -> Video:
        try:
            return self.videos[video_id]
        except KeyError:
            raise UnknownIdError("video", video_id) from None

    def videos_of_concept(self, concept_id: int) -> tuple[str, ...]:
        """Distinct video ids carrying the concept, sorted by video_id."""
        self.concept(concept_id)
        return self.concept_to_videos.get(concept_id, ())

    def concepts_of_video(self, video_id: str) -> tuple[int, ...]:
        self.video(video_id)
        return self.video_to_concepts.get(video_id, ())

    def similar_concepts(self, concept_id: int) -> tuple[int, ...]:
        """All other concepts sharing at least one context, sorted by id.

        Shared-context membership is the operational definition of
        "semantically similar" here; it is symmetric and irreflexive.
        """
        self.concept(concept_id)
        related: set[int] = set()
        for context in self.contexts:
            members = context.member_ids()
            if concept_id in members:
                related.update(members)
        related.discard(concept_id)
        return tuple(sorted(related))

    def contexts_of_concept(self, concept_id: int) -> list[ContextMembership]:
        """Contexts listing the concept, sorted by (num, name)."""
        self.concept(concept_id)
        rows = [
            ContextMembership(context.num, context.name, weight)
            for context in self.contexts
            for cid, weight in context.members
            if cid == concept_id
        ]
        rows.sort(key=lambda m: (m.num, m.name))
        return rows

    def shot_count(self, concept_id: int, video_id: str) -> int:
        """Number of the video's shots that carry the concept."""
        concept = self.concept(concept_id)
        return sum(1 for shot in concept.shots if shot.video_id == video_id)

    def sorted_concept_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.concepts))

    def sorted_video_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.videos))


def build_inverted_maps(
    concepts: Iterable[Concept],
) -> tuple[dict[int, tuple[str, ...]], dict[str, tuple[int, ...]]]:
    """Derive the concept->videos and video->concepts maps from shot lists."""
    concept_to_videos: dict[int, set[str]] = {}
    video_to_concepts: dict[str, set[int]] = {}
    for concept in concepts:
        vids = concept_to_videos.setdefault(concept.concept_id, set())
        for shot in concept.shots:
            vid = shot.video_id
            vids.add(vid)
            video_to_concepts.setdefault(vid, set()).add(concept.concept_id)
    forward = {cid: tuple(sorted(vids)) for cid, vids in sorted(concept_to_videos.items())}
    backward = {vid: tuple(sorted(cids)) for vid, cids in sorted(video_to_concepts.items())}
    return forward, backward
