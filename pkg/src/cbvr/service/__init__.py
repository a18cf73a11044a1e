"""Process boundary: configuration, snapshots, sessions, HTTP API, CLI."""

from .config import ServiceConfig, load_config
from .sessions import Session, SessionStore
from .snapshot import dumps_snapshot, load_snapshot, loads_snapshot, write_snapshot

__all__ = [
    "ServiceConfig",
    "load_config",
    "Session",
    "SessionStore",
    "dumps_snapshot",
    "loads_snapshot",
    "load_snapshot",
    "write_snapshot",
]
