"""Precision/recall evaluation and simulated feedback sessions.

A session starts from a confirmed query vector, ranks the corpus, has an
oracle user judge the top results against a ground-truth relevant set,
applies feedback, and repeats. Each iteration's precision/recall curve is
recorded so improvements across iterations can be plotted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import CorpusParseError
from .query import ConceptQueryVector
from .retrieval import (
    DEFAULT_ALPHA,
    FeedbackState,
    Judgment,
    Label,
    apply_feedback,
    initial_state,
    rank,
)
from .weighting import WeightMatrix


@dataclass(frozen=True)
class QrelSet:
    query_id: str
    relevant: frozenset[str]


@dataclass(frozen=True)
class PRPoint:
    recall: float
    precision: float
    rank_cutoff: int


def precision_at(ranking: Sequence[str], qrels: QrelSet, k: int) -> float:
    if k < 1 or k > len(ranking):
        raise ValueError(f"k={k} outside [1, {len(ranking)}]")
    hits = sum(1 for vid in ranking[:k] if vid in qrels.relevant)
    return hits / k


def recall_at(ranking: Sequence[str], qrels: QrelSet, k: int) -> float:
    if not qrels.relevant:
        raise ValueError("qrels has no relevant videos")
    if k < 1 or k > len(ranking):
        raise ValueError(f"k={k} outside [1, {len(ranking)}]")
    hits = sum(1 for vid in ranking[:k] if vid in qrels.relevant)
    return hits / len(qrels.relevant)


def pr_curve(ranking: Sequence[str], qrels: QrelSet) -> list[PRPoint]:
    """One point per rank where a relevant video appears, ordered by recall."""
    if not ranking:
        raise ValueError("ranking is empty")
    if not qrels.relevant:
        raise ValueError("qrels has no relevant videos")
    points = []
    hits = 0
    for cutoff, vid in enumerate(ranking, start=1):
        if vid in qrels.relevant:
            hits += 1
            points.append(
                PRPoint(
                    recall=hits / len(qrels.relevant),
                    precision=hits / cutoff,
                    rank_cutoff=cutoff,
                )
            )
    return points


@dataclass(frozen=True)
class IterationOutcome:
    iteration: int
    ranking: tuple[str, ...]
    curve: tuple[PRPoint, ...]


def run_feedback_session(
    query: ConceptQueryVector,
    matrix: WeightMatrix,
    qrels: QrelSet,
    iterations: int,
    judge_depth: int = 60,
    alpha: float = DEFAULT_ALPHA,
) -> list[IterationOutcome]:
    """Simulate an oracle-judged feedback session.

    Per iteration the full corpus is ranked, the curve recorded, and the
    top judge_depth results judged relevant or irrelevant straight from the
    qrels before feedback is applied. With iterations=1 this is exactly a
    plain rank-and-evaluate of the initial query.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    state: FeedbackState = initial_state(query, alpha=alpha)
    outcomes: list[IterationOutcome] = []
    for step in range(iterations):
        results = rank(state.current, matrix, limit=max(len(matrix.video_ids), 1))
        ranking = tuple(r.video_id for r in results)
        curve = tuple(pr_curve(ranking, qrels)) if ranking else ()
        outcomes.append(IterationOutcome(iteration=step, ranking=ranking, curve=curve))
        if step == iterations - 1:
            break
        judged = ranking[: min(judge_depth, len(ranking))]
        if not judged:
            break
        judgments = [
            Judgment(
                video_id=vid,
                label=Label.RELEVANT if vid in qrels.relevant else Label.IRRELEVANT,
            )
            for vid in judged
        ]
        state = apply_feedback(state, judgments, matrix)
    return outcomes


def load_qrels(data: bytes | str) -> dict[str, QrelSet]:
    """Parse a qrels TSV: query_id TAB video_id TAB label (1 relevant, 0 not)."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    relevant: dict[str, set[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 3:
            raise CorpusParseError(
                f"expected 3 tab-separated fields, got {len(fields)}", f"line {lineno}"
            )
        query_id, video_id, label = (f.strip() for f in fields)
        if label not in ("0", "1"):
            raise CorpusParseError(f"label must be 0 or 1, got {label!r}", f"line {lineno}")
        relevant.setdefault(query_id, set())
        if label == "1":
            relevant[query_id].add(video_id)
    return {
        qid: QrelSet(query_id=qid, relevant=frozenset(vids))
        for qid, vids in relevant.items()
    }


CURVE_EXPORT_HEADER = "query_id\titeration\trank_cutoff\trecall\tprecision"


def write_curves(
    outcomes_by_query: Iterable[tuple[str, Sequence[IterationOutcome]]], stream: IO[str]
) -> int:
    """Write per-iteration curve records as TSV; returns the record count."""
    stream.write(CURVE_EXPORT_HEADER + "\n")
    count = 0
    for query_id, outcomes in outcomes_by_query:
        for outcome in outcomes:
            for point in outcome.curve:
                stream.write(
                    f"{query_id}\t{outcome.iteration}\t{point.rank_cutoff}"
                    f"\t{point.recall!r}\t{point.precision!r}\n"
                )
                count += 1
    return count
