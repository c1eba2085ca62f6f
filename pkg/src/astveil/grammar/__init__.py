"""Per-language grammar bundles and their shared data files.

Each bundle exposes `parse(text) -> RawNode` and `lex(text) -> [Token]`.
Bundles hold no mutable state, so a loaded grammar is safe to share
across worker threads.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..errors import UnsupportedLanguageError
from . import c_lang, java_lang, python_lang

# directory of replacement data files (guards.json, statement_kinds.json)
DATA_DIR_ENV = "ASTVEIL_DATA_DIR"

LANGUAGES = ("python", "java", "c")

_BUNDLES = {"python": python_lang, "java": java_lang, "c": c_lang}

# leaf kinds whose text is content-bearing (masked during template synthesis)
CONTENT_LEAF_KINDS = frozenset(
    [
        "identifier",
        "type_identifier",
        "integer",
        "float",
        "string",
        "number_literal",
        "string_literal",
        "char_literal",
        "decimal_integer_literal",
        "decimal_floating_point_literal",
        "character_literal",
        "true",
        "false",
        "none",
        "null",
        "null_literal",
    ]
)

STRING_LEAF_KINDS = frozenset(["string", "string_literal", "char_literal", "character_literal"])

# structural leaves kept verbatim even when not mapped by a pattern
PUNCT_KINDS = frozenset(["(", ")", "[", "]", "{", "}", ";", ":", ",", ".", "->", "@newline"])


def get_bundle(language: str):
    if language not in _BUNDLES:
        raise UnsupportedLanguageError(f"no grammar bundle for language {language!r}")
    return _BUNDLES[language]


@lru_cache(maxsize=None)
def _load_data(name: str) -> dict:
    override_dir = os.environ.get(DATA_DIR_ENV)
    if override_dir:
        candidate = Path(override_dir) / name
        if candidate.exists():
            return json.loads(candidate.read_text(encoding="utf-8"))
    with resources.files("astveil.grammar").joinpath("data", name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def statement_kinds(language: str) -> frozenset[str]:
    data = _load_data("statement_kinds.json")
    if language not in data["languages"]:
        raise UnsupportedLanguageError(f"no statement kinds for language {language!r}")
    return frozenset(data["languages"][language])


def guard_table(language: str) -> dict:
    data = _load_data("guards.json")
    if language not in data["languages"]:
        raise UnsupportedLanguageError(f"no guard table for language {language!r}")
    return data["languages"][language]


def is_keyword_leaf(kind: str) -> bool:
    """Alphabetic leaf kinds that are reserved words rather than content."""
    return kind.isalpha() and kind.islower() and kind not in CONTENT_LEAF_KINDS
