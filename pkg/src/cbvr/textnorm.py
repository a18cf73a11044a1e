"""Language detection, token normalization and stopword handling.

Both query text and lexicon terms pass through the same normalizer so that
lookups compare like with like. English tokens are case-folded; Arabic
tokens are stripped of tatweel and diacritics, alef variants are unified
and ta marbuta is mapped to ha. The normalization is idempotent: applying
it twice gives the same result as applying it once.
"""

from __future__ import annotations

import re
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping


class Language(str, Enum):
    ENGLISH = "english"
    ARABIC = "arabic"


# Arabic block plus supplement; presence of any such codepoint marks a
# token (or a whole query) as Arabic.
_ARABIC_RE = re.compile(r"[؀-ۿݐ-ݿ]")

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

_TATWEEL = "ـ"
# Harakat and Quranic annotation marks that carry no lexical identity here.
_DIACRITICS_RE = re.compile(r"[ً-ٰٟ]")
_ALEF_VARIANTS = {"آ": "ا", "أ": "ا", "إ": "ا"}
_TA_MARBUTA = "ة"
_HA = "ه"


def contains_arabic(text: str) -> bool:
    return bool(_ARABIC_RE.search(text))


def detect_language(text: str) -> Language:
    return Language.ARABIC if contains_arabic(text) else Language.ENGLISH


def normalize_arabic(text: str) -> str:
    text = text.replace(_TATWEEL, "")
    text = _DIACRITICS_RE.sub("", text)
    for variant, plain in _ALEF_VARIANTS.items():
        text = text.replace(variant, plain)
    return text.replace(_TA_MARBUTA, _HA)


def normalize_term(term: str) -> str:
    """Normalize a single token according to its script."""
    term = term.strip()
    if contains_arabic(term):
        return normalize_arabic(term)
    return term.casefold()


def tokenize(text: str) -> list[str]:
    """Split on non-word characters and normalize each token."""
    return [normalize_term(t) for t in _TOKEN_RE.findall(text)]


def parse_language(value: str | Language) -> Language:
    """Accept Language values plus the short spellings used by CLI/API."""
    if isinstance(value, Language):
        return value
    lowered = value.strip().lower()
    if lowered in ("en", "eng", "english"):
        return Language.ENGLISH
    if lowered in ("ar", "ara", "arabic"):
        return Language.ARABIC
    raise ValueError(f"unsupported language: {value!r}")


def _read_stopword_lines(text: str) -> frozenset[str]:
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        terms.add(normalize_term(line))
    return frozenset(terms)


@lru_cache(maxsize=None)
def bundled_stopwords() -> Mapping[Language, frozenset[str]]:
    """Stopword lists shipped with the package, one file per language."""
    out = {}
    for lang in Language:
        data = resources.files("cbvr").joinpath(f"data/stopwords/{lang.value}.txt")
        out[lang] = _read_stopword_lines(data.read_text(encoding="utf-8"))
    return out


def load_stopword_dir(path: str | Path) -> dict[Language, frozenset[str]]:
    """Load per-language stopword files (<language>.txt) from a directory.

    Languages without a file fall back to the bundled list.
    """
    path = Path(path)
    out: dict[Language, frozenset[str]] = dict(bundled_stopwords())
    for lang in Language:
        candidate = path / f"{lang.value}.txt"
        if candidate.is_file():
            out[lang] = _read_stopword_lines(candidate.read_text(encoding="utf-8"))
    return out


def is_stopword(token: str, stopwords: Mapping[Language, Iterable[str]] | None = None) -> bool:
    table = stopwords if stopwords is not None else bundled_stopwords()
    lang = detect_language(token)
    return token in table.get(lang, ())
