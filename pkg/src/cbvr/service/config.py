"""Service configuration: JSON file plus CBVR_* environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from ..errors import CorpusValidationError

ENV_PREFIX = "CBVR_"


@dataclass
class ServiceConfig:
    concepts_xml: Path | None = None
    contexts_xml: Path | None = None
    lexicon: Path | None = None
    stopword_dir: Path | None = None
    shot_counts: Path | None = None
    keyframe_dir: Path | None = None
    snapshot: Path | None = None
    ui_dir: Path | None = None
    alpha: float = 0.2
    judge_depth: int = 60
    listen: str = "127.0.0.1:8000"
    session_ttl: float = 1800.0

    def validate(self) -> None:
        if self.alpha <= 0:
            raise CorpusValidationError(f"alpha must be positive, got {self.alpha}")
        if self.judge_depth < 1:
            raise CorpusValidationError(f"judge_depth must be >= 1, got {self.judge_depth}")
        if self.session_ttl <= 0:
            raise CorpusValidationError(f"session_ttl must be positive, got {self.session_ttl}")
        for name in (
            "concepts_xml",
            "contexts_xml",
            "lexicon",
            "shot_counts",
            "snapshot",
        ):
            value: Path | None = getattr(self, name)
            if value is not None and not value.is_file():
                raise CorpusValidationError(f"{name} path does not exist: {value}")
        for name in ("stopword_dir", "keyframe_dir", "ui_dir"):
            value = getattr(self, name)
            if value is not None and not value.is_dir():
                raise CorpusValidationError(f"{name} directory does not exist: {value}")

    def listen_host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        if not host or not port.isdigit():
            raise CorpusValidationError(f"listen address must be host:port, got {self.listen!r}")
        return host, int(port)


_PATH_FIELDS = {
    "concepts_xml",
    "contexts_xml",
    "lexicon",
    "stopword_dir",
    "shot_counts",
    "keyframe_dir",
    "snapshot",
    "ui_dir",
}


def _coerce(name: str, value) -> object:
    if value is None:
        return None
    if name in _PATH_FIELDS:
        return Path(value)
    if name == "alpha":
        return float(value)
    if name == "judge_depth":
        return int(value)
    if name == "session_ttl":
        return float(value)
    return str(value)


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> ServiceConfig:
    """Build a config from an optional JSON file and CBVR_* env overrides.

    Environment variable names are the uppercased field names with the
    CBVR_ prefix, e.g. CBVR_ALPHA or CBVR_CONCEPTS_XML.
    """
    env = os.environ if env is None else env
    config = ServiceConfig()
    known = {f.name for f in fields(ServiceConfig)}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorpusValidationError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise CorpusValidationError(f"config {path} must hold a JSON object")
        for key, value in raw.items():
            if key not in known:
                raise CorpusValidationError(f"unknown config key {key!r} in {path}")
            setattr(config, key, _coerce(key, value))
    for name in known:
        env_name = ENV_PREFIX + name.upper()
        if env_name in env:
            setattr(config, name, _coerce(name, env[env_name]))
    return config
