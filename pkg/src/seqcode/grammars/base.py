"""Shared pieces for the per-language grammar adapters."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Token:
    """One lexical token: kind, exact lexeme, half-open byte span."""

    kind: str
    text: str
    start: int
    end: int


@dataclass
class ExtractedMethod:
    """A method found in a source file, before it becomes a MethodRecord."""

    source: str
    name: str
    docstring: str | None
    offset: int
