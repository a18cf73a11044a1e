"""Parsers for the corpus XML formats and the term lexicon.

Two XML shapes are accepted for the concept-shots file: one spells the
concept id attribute "fNum" and the item ordinal "segNum", the other
spells them "#Num" and "seqNum" and adds a ConceptName attribute. Both
parse to identical structures. Context files use decimal commas in their
Weight attributes; those are normalized to decimal points.

All parsers are pure functions over bytes. Failures are structured errors
carrying a location; recoverable oddities become warnings collected into
the IngestReport.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import Concept, Context, CorpusIndex, Shot, Video, build_inverted_maps
from .errors import CorpusParseError, CorpusValidationError
from .textnorm import Language, normalize_term, parse_language

Warning_ = tuple[str, str]  # (location, message)

# "#Num" is not a well-formed XML attribute name, but the legacy corpus
# files use it. Rewrite it to the fNum alias before handing the bytes to
# the XML parser; these files carry no text content that could collide.
_HASH_NUM_RE = re.compile(rb"#Num(?=\s*=)")


@dataclass
class IngestReport:
    concepts_parsed: int = 0
    contexts_parsed: int = 0
    shots_parsed: int = 0
    videos_indexed: int = 0
    warnings: list[Warning_] = field(default_factory=list)

    def warn(self, location: str, message: str) -> None:
        self.warnings.append((location, message))


@dataclass(frozen=True)
class LexiconRecord:
    """One parsed lexicon line, before concept names resolve to ids."""

    term: str
    language: Language
    concept_name: str
    weight: float = 1.0


@dataclass(frozen=True)
class LexiconEntry:
    """A descriptor term bound to a concept of the index."""

    term: str
    language: Language
    concept_id: int
    weight: float = 1.0


class Lexicon:
    """Resolved descriptor terms with (term, language) lookup."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self.entries: tuple[LexiconEntry, ...] = tuple(entries)
        table: dict[tuple[str, Language], list[LexiconEntry]] = {}
        for entry in self.entries:
            table.setdefault((entry.term, entry.language), []).append(entry)
        self._by_term = {key: tuple(vals) for key, vals in table.items()}

    def lookup(self, term: str, language: Language) -> tuple[LexiconEntry, ...]:
        return self._by_term.get((term, language), ())

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lexicon) and self.entries == other.entries


def _as_bytes(data: bytes | str) -> bytes:
    return data.encode("utf-8") if isinstance(data, str) else data


def _parse_xml_root(data: bytes | str, expected_root: str) -> ET.Element:
    raw = _HASH_NUM_RE.sub(b"fNum", _as_bytes(data))
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        line, column = exc.position
        raise CorpusParseError(str(exc.msg), f"line {line}, column {column}") from None
    if root.tag != expected_root:
        raise CorpusValidationError(
            f"expected root <{expected_root}>, found <{root.tag}>", "document root"
        )
    return root


def _int_attr(elem: ET.Element, names: Sequence[str], location: str) -> int:
    for name in names:
        value = elem.get(name)
        if value is not None:
            try:
                return int(value)
            except ValueError:
                raise CorpusValidationError(
                    f"attribute {name}={value!r} is not an integer", location
                ) from None
    raise CorpusValidationError(f"missing attribute {'/'.join(names)}", location)


def parse_concept_shots_xml(data: bytes | str) -> tuple[list[Concept], list[Warning_]]:
    """Parse a concept-shots file into Concepts with ordered shot lists."""
    root = _parse_xml_root(data, "concept")
    concepts: list[Concept] = []
    warnings: list[Warning_] = []
    seen_ids: dict[int, int] = {}  # concept_id -> 1-based element position

    for position, elem in enumerate(root.iter("videoFeatureExtractionFeatureResult"), start=1):
        location = f"concept element #{position}"
        concept_id = _int_attr(elem, ("fNum",), location)
        if concept_id in seen_ids:
            raise CorpusValidationError(
                f"duplicate concept id {concept_id}"
                f" (elements #{seen_ids[concept_id]} and #{position})",
                location,
            )
        seen_ids[concept_id] = position

        name = elem.get("ConceptName")
        if name is None:
            name = f"concept_{concept_id}"
            warnings.append((location, f"missing ConceptName, using placeholder {name!r}"))

        shots: list[Shot] = []
        seen_shots: set[str] = set()
        for item in elem.findall("item"):
            shot_id = item.get("shotId")
            if not shot_id:
                raise CorpusValidationError("item missing shotId", location)
            seq = _int_attr(item, ("seqNum", "segNum"), f"{location}, shot {shot_id}")
            if seq < 1:
                raise CorpusValidationError(
                    f"seqNum must be positive, got {seq}", f"{location}, shot {shot_id}"
                )
            if shot_id in seen_shots:
                warnings.append((location, f"duplicate shot {shot_id} dropped"))
                continue
            seen_shots.add(shot_id)
            shots.append(Shot(shot_id=shot_id, seq_num=seq))
        concepts.append(Concept(concept_id=concept_id, name=name, shots=tuple(shots)))
    return concepts, warnings


def parse_contexts_xml(data: bytes | str) -> tuple[list[Context], list[Warning_]]:
    """Parse a contexts file into Context records."""
    root = _parse_xml_root(data, "contextes")
    contexts: list[Context] = []
    warnings: list[Warning_] = []
    seen_names: dict[str, str] = {}

    for position, elem in enumerate(root.findall("Contexte"), start=1):
        name = elem.get("Name")
        location = f"context element #{position}" + (f" ({name})" if name else "")
        if not name:
            raise CorpusValidationError("missing Name attribute", location)
        folded = name.casefold()
        if folded in seen_names:
            raise CorpusValidationError(
                f"duplicate context name {name!r} (contexts are keyed by name)", location
            )
        seen_names[folded] = name
        num = _int_attr(elem, ("Num",), location)

        members: list[tuple[int, float]] = []
        seen_members: set[int] = set()
        for child in elem.findall("concept"):
            concept_id = _int_attr(child, ("ConceptId",), location)
            raw_weight = child.get("Weight")
            if raw_weight is None:
                raise CorpusValidationError(
                    f"member {concept_id} missing Weight", location
                )
            try:
                weight = float(raw_weight.replace(",", "."))
            except ValueError:
                raise CorpusValidationError(
                    f"member {concept_id} has non-numeric Weight {raw_weight!r}", location
                ) from None
            if not 0.0 <= weight <= 1.0:
                raise CorpusValidationError(
                    f"member {concept_id} Weight {weight} outside [0, 1]", location
                )
            if concept_id in seen_members:
                warnings.append((location, f"duplicate member {concept_id} dropped"))
                continue
            seen_members.add(concept_id)
            members.append((concept_id, weight))

        declared = elem.get("Nbrconcept")
        if declared is not None and declared.strip().isdigit():
            declared_count = int(declared)
            if declared_count != len(members):
                warnings.append(
                    (
                        location,
                        f"Nbrconcept declares {declared_count} members"
                        f" but {len(members)} are listed; actual count wins",
                    )
                )
        contexts.append(Context(num=num, name=name, members=tuple(members)))
    return contexts, warnings


def load_lexicon(data: bytes | str) -> list[LexiconRecord]:
    """Parse the lexicon TSV: language TAB term TAB concept_name [TAB weight].

    Terms are normalized before storage so that they compare equal to
    normalized query tokens. Blank lines and '#' comments are skipped.
    """
    text = _as_bytes(data).decode("utf-8")
    records: list[LexiconRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) not in (3, 4):
            raise CorpusParseError(
                f"expected 3 or 4 tab-separated fields, got {len(fields)}",
                f"line {lineno}",
            )
        try:
            language = parse_language(fields[0])
        except ValueError as exc:
            raise CorpusParseError(str(exc), f"line {lineno}") from None
        term = normalize_term(fields[1])
        if not term:
            raise CorpusParseError("empty term", f"line {lineno}")
        concept_name = fields[2].strip()
        if not concept_name:
            raise CorpusParseError("empty concept name", f"line {lineno}")
        weight = 1.0
        if len(fields) == 4 and fields[3].strip():
            try:
                weight = float(fields[3])
            except ValueError:
                raise CorpusValidationError(
                    f"non-numeric weight {fields[3]!r}", f"line {lineno}"
                ) from None
            if not 0.0 < weight <= 1.0:
                raise CorpusValidationError(
                    f"weight {weight} outside (0, 1]", f"line {lineno}"
                )
        records.append(LexiconRecord(term, language, concept_name, weight))
    return records


def load_shot_counts(data: bytes | str) -> dict[str, int]:
    """Parse the optional sidecar TSV: video_id TAB total_shots."""
    text = _as_bytes(data).decode("utf-8")
    counts: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 2:
            raise CorpusParseError(
                f"expected 2 tab-separated fields, got {len(fields)}", f"line {lineno}"
            )
        try:
            count = int(fields[1])
        except ValueError:
            raise CorpusParseError(
                f"non-integer shot count {fields[1]!r}", f"line {lineno}"
            ) from None
        if count < 1:
            raise CorpusValidationError(f"shot count must be >= 1, got {count}", f"line {lineno}")
        counts[fields[0].strip()] = count
    return counts


def build_corpus_index(
    concepts: Sequence[Concept],
    contexts: Sequence[Context] = (),
    lexicon_records: Sequence[LexiconRecord] = (),
    shot_counts: Mapping[str, int] | None = None,
) -> tuple[CorpusIndex, Lexicon, IngestReport]:
    """Cross-link parsed inputs into a validated, immutable CorpusIndex.

    Pure: the same inputs always produce an identical index. Referential
    problems (context members or lexicon names that match no concept) are
    reported as warnings and the offending records dropped, never silently.
    """
    report = IngestReport()

    seen_ids: set[int] = set()
    seen_names: dict[str, int] = {}
    for concept in concepts:
        if concept.concept_id in seen_ids:
            raise CorpusValidationError(f"duplicate concept id {concept.concept_id}")
        seen_ids.add(concept.concept_id)
        folded = concept.name.casefold()
        if folded in seen_names:
            raise CorpusValidationError(
                f"concept name {concept.name!r} collides with concept"
                f" {seen_names[folded]} after case-folding"
            )
        seen_names[folded] = concept.concept_id

    concept_map = {c.concept_id: c for c in sorted(concepts, key=lambda c: c.concept_id)}

    # Videos: n defaults to the number of distinct shot ids observed for the
    # video; the sidecar may only raise it (a smaller value would put the
    # per-video concept fraction above 1).
    observed: dict[str, set[str]] = {}
    for concept in concept_map.values():
        for shot in concept.shots:
            observed.setdefault(shot.video_id, set()).add(shot.shot_id)
    shot_counts = dict(shot_counts or {})
    for video_id in shot_counts:
        if video_id not in observed:
            report.warn("shot-count sidecar", f"unknown video {video_id!r} ignored")
    forward, backward = build_inverted_maps(concept_map.values())
    videos: dict[str, Video] = {}
    for video_id in sorted(observed):
        seen = len(observed[video_id])
        total = shot_counts.get(video_id, seen)
        if total < seen:
            raise CorpusValidationError(
                f"sidecar count {total} for video {video_id!r} is below the"
                f" {seen} distinct shots observed"
            )
        videos[video_id] = Video(
            video_id=video_id,
            total_shots=total,
            concept_ids=frozenset(backward.get(video_id, ())),
        )

    kept_contexts: list[Context] = []
    for context in contexts:
        members = []
        for concept_id, weight in context.members:
            if concept_id not in concept_map:
                report.warn(
                    f"context {context.name!r}",
                    f"member {concept_id} matches no concept; dropped",
                )
                continue
            members.append((concept_id, weight))
        kept_contexts.append(Context(num=context.num, name=context.name, members=tuple(members)))

    name_to_id = {c.name.casefold(): c.concept_id for c in concept_map.values()}
    entries: list[LexiconEntry] = []
    seen_entries: set[tuple[str, Language, int]] = set()
    for record in lexicon_records:
        concept_id = name_to_id.get(record.concept_name.casefold())
        if concept_id is None:
            report.warn(
                "lexicon", f"term {record.term!r} references unknown concept"
                f" {record.concept_name!r}; entry dropped"
            )
            continue
        key = (record.term, record.language, concept_id)
        if key in seen_entries:
            report.warn(
                "lexicon",
                f"duplicate entry ({record.term!r}, {record.language.value},"
                f" {record.concept_name!r}); first occurrence wins",
            )
            continue
        seen_entries.add(key)
        entries.append(LexiconEntry(record.term, record.language, concept_id, record.weight))

    index = CorpusIndex(
        concepts=concept_map,
        contexts=tuple(kept_contexts),
        videos=videos,
        concept_to_videos=forward,
        video_to_concepts=backward,
    )
    report.concepts_parsed = len(concept_map)
    report.contexts_parsed = len(kept_contexts)
    report.shots_parsed = sum(len(c.shots) for c in concept_map.values())
    report.videos_indexed = len(videos)
    return index, Lexicon(entries), report


def ingest_corpus(
    concepts_xml: bytes | str,
    contexts_xml: bytes | str | None = None,
    lexicon_tsv: bytes | str | None = None,
    shot_counts_tsv: bytes | str | None = None,
) -> tuple[CorpusIndex, Lexicon, IngestReport]:
    """Parse all corpus inputs and build the index, merging parser warnings."""
    concepts, warnings = parse_concept_shots_xml(concepts_xml)
    contexts: list[Context] = []
    if contexts_xml is not None:
        contexts, context_warnings = parse_contexts_xml(contexts_xml)
        warnings.extend(context_warnings)
    records = load_lexicon(lexicon_tsv) if lexicon_tsv is not None else []
    counts = load_shot_counts(shot_counts_tsv) if shot_counts_tsv is not None else None
    index, lexicon, report = build_corpus_index(concepts, contexts, records, counts)
    report.warnings = warnings + report.warnings
    return index, lexicon, report


def concept_shots_to_xml(concepts: Iterable[Concept]) -> bytes:
    """Serialize concepts in the canonical (fNum/seqNum) spelling."""
    root = ET.Element("concept")
    for concept in concepts:
        elem = ET.SubElement(
            root,
            "videoFeatureExtractionFeatureResult",
            fNum=str(concept.concept_id),
            ConceptName=concept.name,
        )
        for shot in concept.shots:
            ET.SubElement(elem, "item", seqNum=str(shot.seq_num), shotId=shot.shot_id)
    ET.indent(root)
    return ET.tostring(root, encoding="UTF-8", xml_declaration=True)


def contexts_to_xml(contexts: Iterable[Context]) -> bytes:
    """Serialize contexts; weights use decimal points and round-trip exactly."""
    root = ET.Element("contextes")
    for context in contexts:
        elem = ET.SubElement(
            root,
            "Contexte",
            Num=str(context.num),
            Name=context.name,
            Nbrconcept=str(len(context.members)),
        )
        for concept_id, weight in context.members:
            ET.SubElement(elem, "concept", ConceptId=str(concept_id), Weight=repr(weight))
    ET.indent(root)
    return ET.tostring(root, encoding="UTF-8", xml_declaration=True)
