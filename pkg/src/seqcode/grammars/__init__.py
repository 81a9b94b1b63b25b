"""Per-language grammar adapters.

Each adapter module exposes the same surface: `lex`, `parse_method`,
`iter_methods`, `method_name_leaf` and `callee_name`. New languages plug in
by adding a module here and registering it in `LANGUAGES`.
"""

from __future__ import annotations

from . import java_lang, python_lang
from .base import ExtractedMethod, Token

LANGUAGES = {
    "java": java_lang,
    "python": python_lang,
}

EXTENSIONS = {
    ".java": "java",
    ".py": "python",
}


def get_grammar(language: str):
    try:
        return LANGUAGES[language]
    except KeyError:
        raise ValueError(f"unsupported language: {language!r}") from None


__all__ = ["LANGUAGES", "EXTENSIONS", "get_grammar", "Token", "ExtractedMethod"]
