"""In-memory interactive sessions with TTL eviction.

Sessions are never persisted; the service stays stateless apart from this
store. Mutating operations go through writer(), which enforces the
single-writer rule: a second concurrent writer gets a conflict error
instead of blocking.
"""

from __future__ import annotations

import threading
import time
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ..errors import SessionConflictError, UnknownIdError
from ..query import ConceptCandidate, NormalizedQuery
from ..retrieval import FeedbackState, Label, RankedResult


@dataclass
class Session:
    session_id: str
    query: NormalizedQuery
    candidates: list[ConceptCandidate]
    created: float
    last_access: float
    feedback: FeedbackState | None = None
    results: list[RankedResult] = field(default_factory=list)
    history: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)
    judged: dict[str, Label] = field(default_factory=dict)  # cumulative across iterations
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def phase(self) -> str:
        if self.feedback is None:
            return "confirming_concepts"
        return "reviewing_results"


class SessionStore:
    def __init__(self, ttl: float, clock: Callable[[], float] = time.monotonic):
        self.ttl = ttl
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._guard = threading.Lock()

    def _evict_expired(self) -> None:
        now = self._clock()
        expired = [
            sid for sid, s in self._sessions.items() if now - s.last_access > self.ttl
        ]
        for sid in expired:
            del self._sessions[sid]

    def create(self, query: NormalizedQuery, candidates: list[ConceptCandidate]) -> Session:
        with self._guard:
            self._evict_expired()
            now = self._clock()
            session = Session(
                session_id=uuid.uuid4().hex,
                query=query,
                candidates=candidates,
                created=now,
                last_access=now,
            )
            self._sessions[session.session_id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._guard:
            self._evict_expired()
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownIdError("session", session_id)
            session.last_access = self._clock()
            return session

    @contextmanager
    def writer(self, session_id: str) -> Iterator[Session]:
        """Exclusive mutation scope; raises instead of waiting on a writer."""
        session = self.get(session_id)
        if not session.lock.acquire(blocking=False):
            raise SessionConflictError(
                f"session {session_id} is being updated by another request"
            )
        try:
            yield session
        finally:
            session.lock.release()

    def __len__(self) -> int:
        return len(self._sessions)
