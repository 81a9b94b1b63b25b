"""Code token sequences: the first input segment.

Lexes a method into its token list with comments and whitespace removed,
and locates the declared method name within the tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import grammars
from .errors import LexError
from .syntax import parse

__all__ = ["CodeTokenSeq", "tokenize_code", "LexError"]


@dataclass
class CodeTokenSeq:
    """Lexical tokens of one method plus the index of its declared name."""

    tokens: list[str]
    name_index: int

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize_code(source: str, language: str) -> CodeTokenSeq:
    """Tokenize method source. String/char literals stay single tokens;
    structural tokens (Python INDENT/DEDENT/NEWLINE) are dropped."""
    if not source or not source.strip():
        raise LexError("empty source", 0)
    grammar = grammars.get_grammar(language)
    tokens = grammar.lex(source)
    if not tokens:
        raise LexError("no tokens", 0)
    name_index = _locate_name(source, language, tokens)
    return CodeTokenSeq(tokens=[t.text for t in tokens], name_index=name_index)


def _locate_name(source: str, language: str, tokens) -> int:
    tree = parse(source, language)
    grammar = grammars.get_grammar(language)
    leaf = grammar.method_name_leaf(tree.root)
    if language == "java":
        for i, tok in enumerate(tokens):
            if tok.start == leaf.span[0] and tok.text == leaf.text:
                return i
        raise LexError(f"method name {leaf.text!r} not found in token stream", 0)
    # Python: the identifier right after the first `def` keyword.
    for i, tok in enumerate(tokens):
        if tok.kind == "keyword" and tok.text == "def":
            for j in range(i + 1, len(tokens)):
                if tokens[j].kind == "identifier":
                    if tokens[j].text != leaf.text:
                        break
                    return j
            break
    raise LexError(f"method name {leaf.text!r} not found in token stream", 0)
