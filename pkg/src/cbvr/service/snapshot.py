"""Versioned on-disk container for an index plus its weight matrix.

Layout: one magic line ("CBVR-SNAPSHOT <version>") followed by canonical
JSON (sorted keys, stable record ordering). JSON float serialization uses
shortest round-trip repr, so weights survive a save/load cycle bitwise and
a reloaded snapshot ranks identically to the in-memory build.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..corpus import Concept, Context, CorpusIndex, Shot, Video, build_inverted_maps
from ..errors import SnapshotError
from ..ingest import Lexicon, LexiconEntry
from ..textnorm import Language
from ..weighting import ConceptVideoWeight, WeightMatrix

MAGIC = "CBVR-SNAPSHOT"
FORMAT_VERSION = 1


def dumps_snapshot(index: CorpusIndex, matrix: WeightMatrix, lexicon: Lexicon) -> bytes:
    payload = {
        "concepts": [
            {
                "id": concept.concept_id,
                "name": concept.name,
                "shots": [[shot.shot_id, shot.seq_num] for shot in concept.shots],
            }
            for _, concept in sorted(index.concepts.items())
        ],
        "contexts": [
            {"num": context.num, "name": context.name, "members": [list(m) for m in context.members]}
            for context in index.contexts
        ],
        "videos": [
            {"id": video.video_id, "total_shots": video.total_shots}
            for _, video in sorted(index.videos.items())
        ],
        "lexicon": [
            [entry.term, entry.language.value, entry.concept_id, entry.weight]
            for entry in lexicon.entries
        ],
        "matrix": {
            "video_ids": list(matrix.video_ids),
            "concept_ids": list(matrix.concept_ids),
            "entries": [
                [entry.video_id, entry.concept_id, entry.p1, entry.p2, entry.p]
                for entry in matrix.iter_entries()
            ],
        },
    }
    body = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return f"{MAGIC} {FORMAT_VERSION}\n{body}\n".encode("utf-8")


def loads_snapshot(data: bytes) -> tuple[CorpusIndex, WeightMatrix, Lexicon]:
    header, _, body = data.partition(b"\n")
    parts = header.decode("utf-8", errors="replace").split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise SnapshotError("not a cbvr snapshot (bad magic header)")
    if parts[1] != str(FORMAT_VERSION):
        raise SnapshotError(f"unsupported snapshot version {parts[1]}")
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"corrupt snapshot body: {exc}") from None

    concepts = {
        record["id"]: Concept(
            concept_id=record["id"],
            name=record["name"],
            shots=tuple(Shot(shot_id=s, seq_num=n) for s, n in record["shots"]),
        )
        for record in payload["concepts"]
    }
    contexts = tuple(
        Context(
            num=record["num"],
            name=record["name"],
            members=tuple((cid, weight) for cid, weight in record["members"]),
        )
        for record in payload["contexts"]
    )
    forward, backward = build_inverted_maps(concepts.values())
    videos = {
        record["id"]: Video(
            video_id=record["id"],
            total_shots=record["total_shots"],
            concept_ids=frozenset(backward.get(record["id"], ())),
        )
        for record in payload["videos"]
    }
    index = CorpusIndex(
        concepts=dict(sorted(concepts.items())),
        contexts=contexts,
        videos=dict(sorted(videos.items())),
        concept_to_videos=forward,
        video_to_concepts=backward,
    )
    lexicon = Lexicon(
        LexiconEntry(term, Language(lang), cid, weight)
        for term, lang, cid, weight in payload["lexicon"]
    )
    spec = payload["matrix"]
    entries = {
        (vid, cid): ConceptVideoWeight(concept_id=cid, video_id=vid, p1=p1, p2=p2, p=p)
        for vid, cid, p1, p2, p in spec["entries"]
    }
    matrix = WeightMatrix(
        video_ids=tuple(spec["video_ids"]),
        concept_ids=tuple(spec["concept_ids"]),
        entries=entries,
    )
    return index, matrix, lexicon


def write_snapshot(
    index: CorpusIndex, matrix: WeightMatrix, lexicon: Lexicon, path: str | Path
) -> None:
    Path(path).write_bytes(dumps_snapshot(index, matrix, lexicon))


def load_snapshot(path: str | Path) -> tuple[CorpusIndex, WeightMatrix, Lexicon]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}") from None
    return loads_snapshot(data)
