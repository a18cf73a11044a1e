"""Free-text queries to concept candidates to a confirmed query vector.

The pipeline has three stages: normalize() tokenizes and weights the raw
text, match_concepts() scores every concept whose lexicon descriptors
overlap the tokens, and confirm() turns the user's chosen candidates into
the concept weight vector that retrieval ranks against.

Mixed-script queries work term by term: each token is matched against the
lexicon under its own script's language, so English and Arabic terms can
share one query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import CorpusIndex
from .errors import EmptyQueryError, UnknownIdError
from .ingest import Lexicon
from .textnorm import Language, bundled_stopwords, detect_language, parse_language, tokenize


@dataclass(frozen=True)
class NormalizedQuery:
    original: str
    language: Language
    tokens: tuple[str, ...]
    term_weights: Mapping[str, float]  # equal shares per token, summed per term


@dataclass(frozen=True)
class ConceptCandidate:
    concept_id: int
    name: str
    score: float
    matched_terms: tuple[str, ...]
    context_boost: float  # max membership weight across contexts; informational


@dataclass(frozen=True)
class ConceptQueryVector:
    """Non-negative weights over concept ids; absent concepts read as 0."""

    weights: Mapping[int, float] = field(default_factory=dict)

    def weight(self, concept_id: int) -> float:
        return self.weights.get(concept_id, 0.0)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(cid for cid, w in self.weights.items() if w > 0.0))

    def scaled(self, factor: float) -> "ConceptQueryVector":
        return ConceptQueryVector({cid: w * factor for cid, w in self.weights.items()})

    def to_dense(self, concept_ids: Sequence[int]) -> np.ndarray:
        out = np.zeros(len(concept_ids), dtype=np.float64)
        for j, cid in enumerate(concept_ids):
            w = self.weights.get(cid)
            if w:
                out[j] = w
        return out


def zero_vector() -> ConceptQueryVector:
    return ConceptQueryVector({})


def normalize(
    text: str,
    language_hint: Language | str | None = None,
    stopwords: Mapping[Language, Iterable[str]] | None = None,
) -> NormalizedQuery:
    """Tokenize, normalize and stopword-filter a query; weight terms equally.

    The query-level language comes from the hint when given, otherwise from
    script detection (any Arabic codepoint marks the query Arabic). Each
    token is filtered against the stopword list of its own script.
    """
    stripped = text.strip()
    if not stripped:
        raise EmptyQueryError("query text is empty")
    table = stopwords if stopwords is not None else bundled_stopwords()
    if language_hint is not None:
        language = parse_language(language_hint)
    else:
        language = detect_language(stripped)

    tokens = [
        t for t in tokenize(stripped) if t not in table.get(detect_language(t), ())
    ]
    if not tokens:
        raise EmptyQueryError("every query token was removed as a stopword")

    share = 1.0 / len(tokens)
    weights: dict[str, float] = {}
    for token in tokens:
        weights[token] = weights.get(token, 0.0) + share
    return NormalizedQuery(
        original=text,
        language=language,
        tokens=tuple(tokens),
        term_weights=weights,
    )


def match_concepts(
    query: NormalizedQuery, lexicon: Lexicon, index: CorpusIndex
) -> list[ConceptCandidate]:
    """Score concepts by descriptor overlap with the query terms.

    score(c) = sum over matched terms t of term_weight(t) * descriptor
    weight of (t, c). Zero-score concepts are excluded; ordering is total
    (score descending, then concept id ascending).
    """
    scores: dict[int, float] = {}
    matched: dict[int, list[str]] = {}
    for term, term_weight in query.term_weights.items():
        for entry in lexicon.lookup(term, detect_language(term)):
            scores[entry.concept_id] = (
                scores.get(entry.concept_id, 0.0) + term_weight * entry.weight
            )
            matched.setdefault(entry.concept_id, []).append(term)

    boosts: dict[int, float] = {}
    for context in index.contexts:
        for cid, weight in context.members:
            boosts[cid] = max(boosts.get(cid, 0.0), weight)

    candidates = [
        ConceptCandidate(
            concept_id=cid,
            name=index.concepts[cid].name if cid in index.concepts else f"concept_{cid}",
            score=score,
            matched_terms=tuple(sorted(set(matched[cid]))),
            context_boost=boosts.get(cid, 0.0),
        )
        for cid, score in scores.items()
        if score > 0.0
    ]
    candidates.sort(key=lambda c: (-c.score, c.concept_id))
    return candidates


def confirm(
    candidates: Sequence[ConceptCandidate], chosen: Iterable[int]
) -> ConceptQueryVector:
    """Build the query vector from the user's chosen candidate concepts.

    Chosen candidate scores are renormalized to sum to 1 so that later
    feedback steps shift weights of a consistent magnitude.
    """
    chosen_ids = set(chosen)
    if not chosen_ids:
        raise EmptyQueryError("no concepts chosen")
    by_id = {c.concept_id: c for c in candidates}
    invalid = sorted(cid for cid in chosen_ids if cid not in by_id)
    if invalid:
        raise UnknownIdError("candidate concept", invalid)
    total = sum(by_id[cid].score for cid in chosen_ids)
    return ConceptQueryVector({cid: by_id[cid].score / total for cid in sorted(chosen_ids)})
