"""Natural-language segment built from the method name and its call names.

No docstrings or comments are involved: the segment is the split method
name followed by the split names of the methods it invokes, in source
order, all lowercased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import grammars
from .errors import StructureError
from .syntax import Node, SyntaxTree

__all__ = ["NlSeq", "split_identifier", "extract_names", "build_nl"]

# Camel runs: an uppercase run keeps trailing digits and donates its last
# capital to a following lowercase word (HTTPServer -> HTTP, Server).
# Digits attach to the preceding alpha run. Unknown symbols pass through.
_SPLIT_RE = re.compile(
    r"[A-Z]+[0-9]*(?![a-z])|[A-Z][a-z0-9]*|[a-z][a-z0-9]*|[0-9]+|[^A-Za-z0-9_]+"
)


@dataclass
class NlSeq:
    """NL tokens; the first `name_subtoken_count` come from the method name."""

    tokens: list[str]
    name_subtoken_count: int

    def __len__(self) -> int:
        return len(self.tokens)


def split_identifier(identifier: str) -> list[str]:
    """Split CamelCase and snake_case into lowercase subtokens."""
    if not identifier:
        raise ValueError("empty identifier")
    parts: list[str] = []
    for piece in identifier.split("_"):
        parts.extend(m.group(0).lower() for m in _SPLIT_RE.finditer(piece))
    return parts


def extract_names(tree: SyntaxTree) -> tuple[str, list[str]]:
    """The declared method name and the called method names in source
    order, duplicates kept. Only named call expressions count; unnamed
    callees (e.g. calling a call result) are skipped."""
    grammar = grammars.get_grammar(tree.language)
    try:
        name_leaf = grammar.method_name_leaf(tree.root)
    except Exception as exc:
        raise StructureError(f"no method declaration in tree: {exc}") from exc
    calls: list[tuple[int, str]] = []
    for node in tree.walk():
        callee = grammar.callee_name(node)
        if callee is not None:
            calls.append((_callee_offset(node), callee))
    calls.sort(key=lambda item: item[0])
    return name_leaf.text, [name for _, name in calls]


def _callee_offset(node: Node) -> int:
    # position of the callee name itself, so chained calls like a.b().c()
    # order as written
    idents = [c for c in node.children if c.kind == "identifier"]
    if idents:
        return idents[-1].span[0]
    if node.children and node.children[0].kind == "attribute":
        attr = node.children[0]
        if attr.children and attr.children[-1].kind == "identifier":
            return attr.children[-1].span[0]
    return node.span[0]


def build_nl(tree: SyntaxTree) -> NlSeq:
    """split(method name) ++ split(call names), lowercased, underscore-free."""
    name, calls = extract_names(tree)
    tokens = split_identifier(name)
    count = len(tokens)
    for callee in calls:
        tokens.extend(split_identifier(callee))
    return NlSeq(tokens=tokens, name_subtoken_count=count)
