"""HTTP/JSON API around one immutable index and weight matrix.

Endpoints mirror the interactive search loop: create a session from query
text, confirm candidate concepts to get the first ranking, post relevance
judgments to advance one feedback iteration. Errors cross the boundary as
structured JSON ({code, message, ...}), never as stack traces.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..corpus import CorpusIndex
from ..errors import (
    CbvrError,
    EmptyQueryError,
    SessionConflictError,
    UnknownIdError,
)
from ..ingest import Lexicon
from ..query import ConceptCandidate, confirm, match_concepts, normalize
from ..retrieval import (
    Judgment,
    Label,
    RankedResult,
    apply_feedback,
    explain,
    initial_state,
    rank,
)
from ..textnorm import Language, load_stopword_dir
from ..weighting import WeightMatrix
from .config import ServiceConfig
from .sessions import Session, SessionStore

_KEYFRAME_EXTENSIONS = (".jpg", ".jpeg", ".png")


class CreateSessionBody(BaseModel):
    text: str
    lang: str | None = None


class ConfirmBody(BaseModel):
    concept_ids: list[int]


class JudgmentBody(BaseModel):
    video_id: str
    label: str


class FeedbackBody(BaseModel):
    judgments: list[JudgmentBody]


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, **extra})


def _build_keyframe_map(index: CorpusIndex, keyframe_dir: Path | None) -> dict[str, str]:
    """video_id -> url path of the first of its shots that has an image file."""
    if keyframe_dir is None:
        return {}
    shots_by_video: dict[str, set[str]] = {}
    for concept in index.concepts.values():
        for shot in concept.shots:
            shots_by_video.setdefault(shot.video_id, set()).add(shot.shot_id)
    urls: dict[str, str] = {}
    for video_id, shot_ids in shots_by_video.items():
        for shot_id in sorted(shot_ids):
            for ext in _KEYFRAME_EXTENSIONS:
                if (keyframe_dir / f"{shot_id}{ext}").is_file():
                    urls[video_id] = f"/keyframes/{shot_id}{ext}"
                    break
            if video_id in urls:
                break
    return urls


def _candidate_json(candidate: ConceptCandidate) -> dict:
    return {
        "concept_id": candidate.concept_id,
        "name": candidate.name,
        "score": candidate.score,
        "matched_terms": list(candidate.matched_terms),
        "context_boost": candidate.context_boost,
    }


def _result_json(
    result: RankedResult, keyframes: Mapping[str, str], judged: Mapping[str, Label]
) -> dict:
    out = {
        "rank": result.rank,
        "video_id": result.video_id,
        "similarity": result.similarity,
        "explain": [
            {
                "concept_id": cid,
                "query_weight": qw,
                "video_weight": vw,
                "product": product,
            }
            for cid, qw, vw, product in explain(result)
        ],
    }
    url = keyframes.get(result.video_id)
    if url is not None:
        out["keyframe_url"] = url
    label = judged.get(result.video_id)
    if label is not None:
        out["judged"] = label.value
    return out


def _session_json(session: Session, keyframes: Mapping[str, str]) -> dict:
    return {
        "session_id": session.session_id,
        "phase": session.phase,
        "iteration": session.feedback.iteration if session.feedback else None,
        "query": {
            "original": session.query.original,
            "language": session.query.language.value,
            "tokens": list(session.query.tokens),
        },
        "candidates": [_candidate_json(c) for c in session.candidates],
        "results": [_result_json(r, keyframes, session.judged) for r in session.results],
        "history": [
            {"iteration": iteration, "video_ids": list(video_ids)}
            for iteration, video_ids in session.history
        ],
        "judged": {vid: label.value for vid, label in sorted(session.judged.items())},
    }


def create_app(
    index: CorpusIndex,
    matrix: WeightMatrix,
    lexicon: Lexicon,
    config: ServiceConfig | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="cbvr", docs_url=None, redoc_url=None)
    store = SessionStore(ttl=config.session_ttl)
    stopwords = (
        load_stopword_dir(config.stopword_dir) if config.stopword_dir is not None else None
    )
    keyframes = _build_keyframe_map(index, config.keyframe_dir)
    app.state.index = index
    app.state.matrix = matrix
    app.state.lexicon = lexicon
    app.state.sessions = store
    app.state.config = config

    @app.exception_handler(CbvrError)
    async def _handle_domain_error(request: Request, exc: CbvrError):
        if isinstance(exc, UnknownIdError) and exc.kind == "session":
            return _error(404, "unknown_session", str(exc))
        if isinstance(exc, UnknownIdError):
            return _error(422, "unknown_ids", str(exc), ids=list(exc.ids))
        if isinstance(exc, EmptyQueryError):
            return _error(422, "empty_query", str(exc))
        if isinstance(exc, SessionConflictError):
            return _error(409, "conflict", str(exc))
        return _error(422, "invalid_request", str(exc))

    @app.exception_handler(Exception)
    async def _handle_unexpected(request: Request, exc: Exception):
        # Structured body instead of a traceback; details stay in the log.
        return _error(500, "internal_error", "unexpected server error")

    def _rank_limit() -> int:
        return max(len(matrix.video_ids), 1)

    def _record_iteration(session: Session) -> None:
        assert session.feedback is not None
        results = rank(session.feedback.current, matrix, limit=_rank_limit())
        session.results = results
        session.history.append(
            (session.feedback.iteration, tuple(r.video_id for r in results))
        )

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        query = normalize(body.text, language_hint=body.lang, stopwords=stopwords)
        candidates = match_concepts(query, lexicon, index)
        session = store.create(query, candidates)
        return {
            "session_id": session.session_id,
            "language": query.language.value,
            "candidates": [_candidate_json(c) for c in candidates],
        }

    @app.post("/sessions/{session_id}/confirm")
    def confirm_concepts(session_id: str, body: ConfirmBody):
        with store.writer(session_id) as session:
            vector = confirm(session.candidates, body.concept_ids)
            session.feedback = initial_state(vector, alpha=config.alpha)
            session.judged = {}
            session.history = []
            _record_iteration(session)
            return {
                "iteration": session.feedback.iteration,
                "results": [
                    _result_json(r, keyframes, session.judged) for r in session.results
                ],
            }

    @app.post("/sessions/{session_id}/feedback")
    def post_feedback(session_id: str, body: FeedbackBody):
        with store.writer(session_id) as session:
            if session.feedback is None:
                return _error(422, "not_confirmed", "confirm concepts before judging results")
            if not body.judgments:
                return _error(422, "no_judgments", "at least one judgment is required")
            try:
                judgments = [
                    Judgment(video_id=j.video_id, label=Label(j.label))
                    for j in body.judgments
                ]
            except ValueError:
                return _error(
                    422, "bad_label", "labels must be 'relevant' or 'irrelevant'"
                )
            session.feedback = apply_feedback(session.feedback, judgments, matrix)
            for judgment in judgments:
                session.judged[judgment.video_id] = judgment.label
            _record_iteration(session)
            return {
                "iteration": session.feedback.iteration,
                "results": [
                    _result_json(r, keyframes, session.judged) for r in session.results
                ],
            }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_json(store.get(session_id), keyframes)

    @app.get("/concepts")
    def list_concepts():
        return [
            {
                "concept_id": concept.concept_id,
                "name": concept.name,
                "shot_count": len(concept.shots),
                "video_count": len(index.videos_of_concept(concept.concept_id)),
            }
            for _, concept in sorted(index.concepts.items())
        ]

    @app.get("/contexts")
    def list_contexts():
        return [
            {
                "num": context.num,
                "name": context.name,
                "members": [
                    {
                        "concept_id": cid,
                        "name": index.concepts[cid].name,
                        "weight": weight,
                    }
                    for cid, weight in context.members
                ],
            }
            for context in index.contexts
        ]

    if config.keyframe_dir is not None:
        app.mount("/keyframes", StaticFiles(directory=config.keyframe_dir), name="keyframes")
    if config.ui_dir is not None:
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")
    return app
