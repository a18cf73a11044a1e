"""Cosine ranking over the weight matrix and the relevance feedback loop.

Ranking is scale-invariant: cosine normalizes both vectors, so only the
direction of the query matters. Feedback keeps three vectors per session:
the confirmed initial query, the previous iteration's query, and their
per-concept combination nudged by +/- alpha according to how strongly each
concept separates the videos judged relevant from those judged irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, UnknownIdError
from .query import ConceptQueryVector, zero_vector
from .weighting import WeightMatrix

DEFAULT_ALPHA = 0.2


@dataclass(frozen=True)
class ScoreContribution:
    concept_id: int
    query_weight: float
    video_weight: float
    product: float


@dataclass(frozen=True)
class RankedResult:
    video_id: str
    similarity: float
    rank: int
    contributions: tuple[ScoreContribution, ...]


class Label(str, Enum):
    RELEVANT = "relevant"
    IRRELEVANT = "irrelevant"


@dataclass(frozen=True)
class Judgment:
    video_id: str
    label: Label


@dataclass(frozen=True)
class FeedbackState:
    """Query vectors across feedback iterations.

    At iteration 0 the feedback vector is zero and current equals the
    initial query. Each apply_feedback() step shifts the previous current
    vector into p_fb and recomputes current from initial + p_fb +/- alpha.
    """

    p_initial: ConceptQueryVector
    alpha: float = DEFAULT_ALPHA
    iteration: int = 0
    p_fb: ConceptQueryVector = field(default_factory=zero_vector)
    current: ConceptQueryVector = field(default_factory=zero_vector)


def initial_state(p_initial: ConceptQueryVector, alpha: float = DEFAULT_ALPHA) -> FeedbackState:
    return FeedbackState(
        p_initial=p_initial,
        alpha=alpha,
        iteration=0,
        p_fb=zero_vector(),
        current=ConceptQueryVector(dict(p_initial.weights)),
    )


def _cosine_dense(q: np.ndarray, v: np.ndarray) -> float:
    qn = float(np.sqrt(np.dot(q, q)))
    vn = float(np.sqrt(np.dot(v, v)))
    if qn == 0.0 or vn == 0.0:
        return 0.0
    return float(np.dot(q, v)) / (qn * vn)


def cosine(
    query: ConceptQueryVector, video: np.ndarray, concept_ids: Sequence[int]
) -> float:
    """Cosine similarity between a query vector and one dense video vector.

    Both sides must live over the same concept universe; a query weight on
    a concept outside it means the query and matrix come from different
    corpora.
    """
    if len(video) != len(concept_ids):
        raise DimensionMismatchError(
            f"video vector has {len(video)} entries for {len(concept_ids)} concepts"
        )
    known = set(concept_ids)
    stray = [cid for cid, w in query.weights.items() if w and cid not in known]
    if stray:
        raise DimensionMismatchError(
            f"query weights reference concepts outside the matrix: {sorted(stray)}"
        )
    return _cosine_dense(query.to_dense(concept_ids), np.asarray(video, dtype=np.float64))


def rank(
    query: ConceptQueryVector, matrix: WeightMatrix, limit: int
) -> list[RankedResult]:
    """Top videos by cosine similarity; zero-similarity videos are excluded.

    Ties break by ascending video id, so the ordering is deterministic.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if not matrix.video_ids:
        return []
    known = set(matrix.concept_ids)
    stray = [cid for cid, w in query.weights.items() if w and cid not in known]
    if stray:
        raise DimensionMismatchError(
            f"query weights reference concepts outside the matrix: {sorted(stray)}"
        )

    q = query.to_dense(matrix.concept_ids)
    qn = float(np.sqrt(np.dot(q, q)))
    if qn == 0.0:
        return []
    dots = matrix.dense @ q
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = np.where(matrix.row_norms > 0.0, dots / (matrix.row_norms * qn), 0.0)

    scored = [
        (float(sims[i]), vid)
        for i, vid in enumerate(matrix.video_ids)
        if sims[i] > 0.0
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))

    results = []
    for position, (sim, vid) in enumerate(scored[:limit], start=1):
        row = matrix.video_vector(vid)
        contributions = tuple(
            ScoreContribution(
                concept_id=cid,
                query_weight=float(q[j]),
                video_weight=float(row[j]),
                product=float(q[j] * row[j]),
            )
            for j, cid in enumerate(matrix.concept_ids)
            if q[j] != 0.0 and row[j] != 0.0
        )
        results.append(
            RankedResult(video_id=vid, similarity=sim, rank=position, contributions=contributions)
        )
    return results


def explain(result: RankedResult) -> list[tuple[int, float, float, float]]:
    """Per-concept (id, query weight, video weight, product) rows.

    The products sum to the unnormalized dot product behind the score.
    """
    return [
        (c.concept_id, c.query_weight, c.video_weight, c.product)
        for c in result.contributions
    ]


def apply_feedback(
    state: FeedbackState, judgments: Iterable[Judgment], matrix: WeightMatrix
) -> FeedbackState:
    """Advance the feedback recurrence by one iteration.

    The previous current vector becomes the feedback vector. Per concept,
    the shift direction compares the concept's mean weight over videos
    judged relevant against its mean over videos judged irrelevant: higher
    gets +alpha, lower gets -alpha, equal (or absent from every judged
    video) gets no shift. Results are clamped at zero so the vector stays
    non-negative and cosine keeps its [0, 1] range.

    Within one submission the last judgment per video wins.
    """
    by_video: dict[str, Label] = {}
    for judgment in judgments:
        by_video[judgment.video_id] = judgment.label
    if not by_video:
        raise ValueError("judgments must be non-empty")
    unknown = sorted(vid for vid in by_video if vid not in matrix)
    if unknown:
        raise UnknownIdError("video", unknown)

    relevant = [vid for vid, label in by_video.items() if label is Label.RELEVANT]
    irrelevant = [vid for vid, label in by_video.items() if label is Label.IRRELEVANT]

    def mean_vector(video_ids: list[str]) -> np.ndarray:
        if not video_ids:
            return np.zeros(len(matrix.concept_ids), dtype=np.float64)
        rows = np.stack([matrix.video_vector(vid) for vid in video_ids])
        return rows.mean(axis=0)

    signs = np.sign(mean_vector(relevant) - mean_vector(irrelevant))

    p_fb = ConceptQueryVector(dict(state.current.weights))
    support = set(state.p_initial.support()) | set(p_fb.support())
    support.update(
        cid for j, cid in enumerate(matrix.concept_ids) if signs[j] != 0.0
    )
    col_of = {cid: j for j, cid in enumerate(matrix.concept_ids)}

    weights: dict[int, float] = {}
    for cid in sorted(support):
        sign = float(signs[col_of[cid]]) if cid in col_of else 0.0
        value = state.p_initial.weight(cid) + p_fb.weight(cid) + sign * state.alpha
        if value > 0.0:
            weights[cid] = value
    return replace(
        state,
        iteration=state.iteration + 1,
        p_fb=p_fb,
        current=ConceptQueryVector(weights),
    )
