"""Syntax trees for method-level source code.

A tree is made of `Node` objects: internal nodes carry a grammar kind and
ordered children, leaves additionally carry the terminal lexeme. Trees are
produced by per-language grammar adapters (see `seqcode.grammars`) and
consumed by the linearizers and the NL extractor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

__all__ = ["Node", "SyntaxTree", "parse", "ParseError"]


@dataclass
class Node:
    """One syntax tree node.

    `text` is set exactly on lexical leaves; nodes with children never carry
    text. A childless node without text can occur for empty constructs
    (e.g. an empty parameter list) and is treated as a leaf whose token
    spelling is its kind. `span` is a half-open byte range into the method
    source. `error` flags grammar-recovery nodes.
    """

    kind: str
    children: list["Node"] = field(default_factory=list)
    text: str | None = None
    span: tuple[int, int] = (0, 0)
    error: bool = False

    def __post_init__(self):
        if self.text is not None and self.children:
            raise ValueError(f"node {self.kind!r} has both text and children")

    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        """Yield nodes in pre-order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())


@dataclass
class SyntaxTree:
    """A parsed method: root node plus the source it came from."""

    language: str
    source: str
    root: Node

    def walk(self):
        return self.root.walk()


def parse(source: str, language: str) -> SyntaxTree:
    """Parse one method into a syntax tree.

    Raises ParseError when the source cannot be parsed at all; recoverable
    trouble inside statements yields `error`-flagged nodes instead.
    """
    if not source or not source.strip():
        raise ParseError("empty source", 0)
    from . import grammars

    grammar = grammars.get_grammar(language)
    root = grammar.parse_method(source)
    return SyntaxTree(language=language, source=source, root=root)
