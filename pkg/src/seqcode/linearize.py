"""AST linearization: structure-based traversal and its XML-like variant.

The baseline traversal brackets every node with "(" name ... ")" name,
four tokens per node. The XML-like variant spends two tokens on internal
nodes (<kind> ... </kind>) and one on leaves, and is normally applied to
the tree pruned to expression level, so lexical terminals already present
in the code-token segment are not repeated.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .syntax import Node, SyntaxTree

__all__ = [
    "LinearizedAst",
    "sbt",
    "xsbt",
    "prune_to_expression_level",
    "load_expr_kinds",
    "is_balanced",
]


@dataclass
class LinearizedAst:
    """A linearized tree: token sequence plus the traversal variant tag."""

    tokens: list[str]
    variant: str  # "sbt" | "xsbt"

    def __len__(self) -> int:
        return len(self.tokens)


def _node_name(node: Node) -> str:
    if node.text is not None:
        return f"{node.kind}_{node.text}"
    return node.kind


def sbt(tree: SyntaxTree | Node) -> LinearizedAst:
    """Bracketed depth-first traversal: 4 tokens per node. Leaf names carry
    the terminal lexeme as kind_text."""
    root = tree.root if isinstance(tree, SyntaxTree) else tree
    tokens: list[str] = []

    def visit(node: Node):
        name = _node_name(node)
        tokens.append("(")
        tokens.append(name)
        for child in node.children:
            visit(child)
        tokens.append(")")
        tokens.append(name)

    visit(root)
    return LinearizedAst(tokens=tokens, variant="sbt")


def xsbt(tree: SyntaxTree | Node, expr_kinds: frozenset[str] | None = None) -> LinearizedAst:
    """XML-like traversal. With `expr_kinds` the tree is first pruned to
    expression level. Internal nodes emit <kind> ... </kind>; leaves emit
    the bare kind name. A tree pruned away entirely yields its root kind
    as a single token."""
    root = tree.root if isinstance(tree, SyntaxTree) else tree
    if expr_kinds is not None:
        root = prune_to_expression_level(root, expr_kinds)
    tokens: list[str] = []

    def visit(node: Node):
        if not node.children:
            tokens.append(node.kind)
            return
        tokens.append(f"<{node.kind}>")
        for child in node.children:
            visit(child)
        tokens.append(f"</{node.kind}>")

    visit(root)
    return LinearizedAst(tokens=tokens, variant="xsbt")


def prune_to_expression_level(tree: SyntaxTree | Node, expr_kinds: frozenset[str]) -> Node:
    """Keep the root-connected subtree of nodes whose kind is at or above
    expression level; lexical terminals (identifiers, literals, operators)
    fall away. Nodes of unlisted kinds survive only while they still carry
    an expression-level descendant, so the tree stays connected. If nothing
    survives, the root collapses to a single childless node."""
    root = tree.root if isinstance(tree, SyntaxTree) else tree

    kept: dict[int, bool] = {}

    def mark(node: Node) -> bool:
        flag = node.kind in expr_kinds
        for child in node.children:
            flag = mark(child) or flag
        kept[id(node)] = flag
        return flag

    def rebuild(node: Node) -> Node:
        children = [rebuild(c) for c in node.children if kept[id(c)]]
        text = node.text if not node.children else None
        return Node(kind=node.kind, children=children, text=text, span=node.span, error=node.error)

    if not mark(root):
        return Node(kind=root.kind, span=root.span, error=root.error)
    return rebuild(root)


def is_balanced(tokens: list[str]) -> bool:
    """Pushdown check that every <kind> has a matching </kind>."""
    stack: list[str] = []
    for tok in tokens:
        if tok.startswith("</") and tok.endswith(">"):
            if not stack or stack.pop() != tok[2:-1]:
                return False
        elif tok.startswith("<") and tok.endswith(">"):
            stack.append(tok[1:-1])
    return not stack


def load_expr_kinds(language: str, path: str | None = None) -> frozenset[str]:
    """Load the per-language expression-level kind set: one kind per line,
    '#' starts a comment. Defaults to the checked-in configuration."""
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = (
            resources.files("seqcode.data").joinpath(f"expr_kinds_{language}.txt").read_text("utf-8")
        )
    kinds = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            kinds.add(line)
    return frozenset(kinds)
