"""Python grammar adapter, bridging the stdlib `tokenize` and `ast` modules.

Lexing uses the standard tokenizer with structural tokens (INDENT/DEDENT/
NEWLINE) dropped; string literals, including multiline ones, stay single
tokens. Parsing builds a syntax tree from the stdlib AST with synthesized
terminal leaves for identifiers, constants and operators.
"""

from __future__ import annotations

import ast
import io
import keyword
import textwrap
import tokenize as _tokenize

from ..errors import LexError, ParseError
from ..syntax import Node
from .base import ExtractedMethod, Token

_SKIP_TOKENS = frozenset(
    [
        _tokenize.COMMENT,
        _tokenize.NL,
        _tokenize.NEWLINE,
        _tokenize.INDENT,
        _tokenize.DEDENT,
        _tokenize.ENDMARKER,
        _tokenize.ENCODING,
    ]
)


def _line_starts(source: str) -> list[int]:
    starts = [0]
    for line in source.splitlines(keepends=True):
        starts.append(starts[-1] + len(line))
    return starts


def lex(source: str) -> list[Token]:
    starts = _line_starts(source)

    def offset(pos: tuple[int, int]) -> int:
        row, col = pos
        return starts[min(row - 1, len(starts) - 1)] + col

    tokens: list[Token] = []
    try:
        for tok in _tokenize.generate_tokens(io.StringIO(source).readline):
            if tok.type in _SKIP_TOKENS or not tok.string.strip():
                continue
            if tok.type == _tokenize.NAME:
                kind = "keyword" if keyword.iskeyword(tok.string) else "identifier"
            elif tok.type == _tokenize.NUMBER:
                kind = "number"
            elif tok.type == _tokenize.STRING:
                kind = "string"
            elif tok.type == _tokenize.OP:
                kind = tok.string
            else:
                kind = "operator"
            tokens.append(Token(kind, tok.string, offset(tok.start), offset(tok.end)))
    except (_tokenize.TokenError, IndentationError, SyntaxError) as exc:
        raise LexError(f"cannot tokenize: {exc}", 0) from exc
    return tokens


# -- tree construction -------------------------------------------------------

_STMT_KINDS = {
    ast.FunctionDef: "function_definition",
    ast.AsyncFunctionDef: "function_definition",
    ast.Return: "return_statement",
    ast.Assign: "assignment",
    ast.AugAssign: "augmented_assignment",
    ast.AnnAssign: "annotated_assignment",
    ast.If: "if_statement",
    ast.While: "while_statement",
    ast.For: "for_statement",
    ast.AsyncFor: "for_statement",
    ast.With: "with_statement",
    ast.AsyncWith: "with_statement",
    ast.Try: "try_statement",
    ast.ExceptHandler: "except_clause",
    ast.Raise: "raise_statement",
    ast.Assert: "assert_statement",
    ast.Expr: "expression_statement",
    ast.Pass: "pass_statement",
    ast.Break: "break_statement",
    ast.Continue: "continue_statement",
    ast.Delete: "delete_statement",
    ast.Global: "global_statement",
    ast.Nonlocal: "nonlocal_statement",
    ast.Import: "import_statement",
    ast.ImportFrom: "import_from_statement",
    ast.ClassDef: "class_definition",
}

_EXPR_KINDS = {
    ast.Lambda: "lambda",
    ast.IfExp: "conditional_expression",
    ast.BinOp: "binary_expression",
    ast.UnaryOp: "unary_expression",
    ast.BoolOp: "boolean_expression",
    ast.Compare: "comparison",
    ast.Call: "call",
    ast.Attribute: "attribute",
    ast.Subscript: "subscript",
    ast.List: "list_expression",
    ast.Tuple: "tuple_expression",
    ast.Dict: "dict_expression",
    ast.Set: "set_expression",
    ast.ListComp: "list_comprehension",
    ast.SetComp: "set_comprehension",
    ast.DictComp: "dict_comprehension",
    ast.GeneratorExp: "generator_expression",
    ast.Starred: "starred_expression",
    ast.Await: "await_expression",
    ast.Yield: "yield_expression",
    ast.YieldFrom: "yield_from_expression",
    ast.NamedExpr: "named_expression",
    ast.JoinedStr: "formatted_string",
    ast.FormattedValue: "interpolation",
    ast.Slice: "slice",
}

_OP_TEXT = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.FloorDiv: "//",
    ast.Mod: "%", ast.Pow: "**", ast.LShift: "<<", ast.RShift: ">>",
    ast.BitOr: "|", ast.BitXor: "^", ast.BitAnd: "&", ast.MatMult: "@",
    ast.And: "and", ast.Or: "or", ast.Not: "not", ast.Invert: "~",
    ast.UAdd: "+", ast.USub: "-", ast.Eq: "==", ast.NotEq: "!=",
    ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">=",
    ast.Is: "is", ast.IsNot: "is not", ast.In: "in", ast.NotIn: "not in",
}


def _snake(name: str) -> str:
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i > 0:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


class _Builder:
    def __init__(self, source: str):
        self.source = source
        self.starts = _line_starts(source)
        self.lines = source.splitlines(keepends=True)

    def offset(self, lineno: int, byte_col: int) -> int:
        # ast columns are utf-8 byte offsets within the line.
        line = self.lines[lineno - 1] if lineno - 1 < len(self.lines) else ""
        raw = line.encode("utf-8")[:byte_col]
        return self.starts[min(lineno - 1, len(self.starts) - 1)] + len(raw.decode("utf-8", "replace"))

    def span(self, node: ast.AST, default: tuple[int, int]) -> tuple[int, int]:
        if getattr(node, "lineno", None) is None or getattr(node, "end_lineno", None) is None:
            return default
        return (
            self.offset(node.lineno, node.col_offset),
            self.offset(node.end_lineno, node.end_col_offset),
        )

    def op_leaf(self, op: ast.AST, span: tuple[int, int]) -> Node:
        return Node(kind="operator", text=_OP_TEXT.get(type(op), _snake(type(op).__name__)), span=span)

    def ident(self, name: str, span: tuple[int, int]) -> Node:
        return Node(kind="identifier", text=name, span=span)

    def block(self, stmts: list[ast.stmt], span: tuple[int, int]) -> Node:
        children = [self.build(s, span) for s in stmts]
        first = children[0].span[0] if children else span[0]
        last = children[-1].span[1] if children else span[1]
        return Node(kind="block", children=children, span=(first, last))

    def constant_leaf(self, node: ast.Constant, span: tuple[int, int]) -> Node:
        v = node.value
        if v is True or v is False:
            return Node(kind=str(v).lower(), text=str(v), span=span)
        if v is None:
            return Node(kind="none", text="None", span=span)
        if v is Ellipsis:
            return Node(kind="ellipsis", text="...", span=span)
        if isinstance(v, int):
            return Node(kind="integer", text=str(v), span=span)
        if isinstance(v, float):
            return Node(kind="float", text=str(v), span=span)
        if isinstance(v, complex):
            return Node(kind="complex", text=str(v), span=span)
        if isinstance(v, bytes):
            return Node(kind="bytes", text=repr(v), span=span)
        return Node(kind="string", text=repr(v), span=span)

    def parameters(self, args: ast.arguments, span: tuple[int, int]) -> Node:
        children: list[Node] = []
        all_args = list(args.posonlyargs) + list(args.args)
        defaults = list(args.defaults)
        # defaults align to the tail of the positional arguments
        pad = [None] * (len(all_args) - len(defaults))
        for a, d in zip(all_args, pad + defaults):
            children.append(self.parameter(a, d, span))
        if args.vararg is not None:
            children.append(self.parameter(args.vararg, None, span))
        kw_defaults = list(args.kw_defaults)
        for a, d in zip(args.kwonlyargs, kw_defaults):
            children.append(self.parameter(a, d, span))
        if args.kwarg is not None:
            children.append(self.parameter(args.kwarg, None, span))
        return Node(kind="parameters", children=children, span=span)

    def parameter(self, a: ast.arg, default: ast.expr | None, span: tuple[int, int]) -> Node:
        pspan = self.span(a, span)
        children = [self.ident(a.arg, pspan)]
        if a.annotation is not None:
            children.append(self.build(a.annotation, pspan))
        if default is not None:
            children.append(self.build(default, pspan))
        return Node(kind="parameter", children=children, span=pspan)

    def build(self, node: ast.AST, parent_span: tuple[int, int]) -> Node:
        span = self.span(node, parent_span)

        if isinstance(node, ast.Name):
            return self.ident(node.id, span)
        if isinstance(node, ast.Constant):
            return self.constant_leaf(node, span)

        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            children = [
                self.ident(node.name, (span[0], span[0])),
                self.parameters(node.args, span),
            ]
            if node.returns is not None:
                children.append(self.build(node.returns, span))
            children.append(self.block(node.body, span))
            return Node(kind="function_definition", children=children, span=span)

        if isinstance(node, ast.Attribute):
            value = self.build(node.value, span)
            name_start = max(span[0], span[1] - len(node.attr))
            attr = self.ident(node.attr, (name_start, span[1]))
            return Node(kind="attribute", children=[value, attr], span=span)

        if isinstance(node, ast.Call):
            func = self.build(node.func, span)
            arg_children = [self.build(a, span) for a in node.args]
            for kw in node.keywords:
                kw_children = []
                if kw.arg is not None:
                    kw_children.append(self.ident(kw.arg, self.span(kw, span)))
                kw_children.append(self.build(kw.value, span))
                arg_children.append(
                    Node(kind="keyword_argument", children=kw_children, span=self.span(kw, span))
                )
            args = Node(kind="argument_list", children=arg_children, span=span)
            return Node(kind="call", children=[func, args], span=span)

        if isinstance(node, ast.BinOp):
            return Node(
                kind="binary_expression",
                children=[self.build(node.left, span), self.op_leaf(node.op, span), self.build(node.right, span)],
                span=span,
            )
        if isinstance(node, ast.UnaryOp):
            return Node(
                kind="unary_expression",
                children=[self.op_leaf(node.op, span), self.build(node.operand, span)],
                span=span,
            )
        if isinstance(node, ast.BoolOp):
            children: list[Node] = []
            for i, v in enumerate(node.values):
                if i:
                    children.append(self.op_leaf(node.op, span))
                children.append(self.build(v, span))
            return Node(kind="boolean_expression", children=children, span=span)
        if isinstance(node, ast.Compare):
            children = [self.build(node.left, span)]
            for op, comp in zip(node.ops, node.comparators):
                children.append(self.op_leaf(op, span))
                children.append(self.build(comp, span))
            return Node(kind="comparison", children=children, span=span)
        if isinstance(node, ast.AugAssign):
            op = self.op_leaf(node.op, span)
            op.text += "="
            return Node(
                kind="augmented_assignment",
                children=[self.build(node.target, span), op, self.build(node.value, span)],
                span=span,
            )

        if isinstance(node, ast.If):
            children = [self.build(node.test, span), self.block(node.body, span)]
            if node.orelse:
                children.append(
                    Node(kind="else_clause", children=[self.block(node.orelse, span)], span=span)
                )
            return Node(kind="if_statement", children=children, span=span)
        if isinstance(node, (ast.While,)):
            children = [self.build(node.test, span), self.block(node.body, span)]
            if node.orelse:
                children.append(
                    Node(kind="else_clause", children=[self.block(node.orelse, span)], span=span)
                )
            return Node(kind="while_statement", children=children, span=span)
        if isinstance(node, (ast.For, ast.AsyncFor)):
            children = [
                self.build(node.target, span),
                self.build(node.iter, span),
                self.block(node.body, span),
            ]
            if node.orelse:
                children.append(
                    Node(kind="else_clause", children=[self.block(node.orelse, span)], span=span)
                )
            return Node(kind="for_statement", children=children, span=span)
        if isinstance(node, (ast.With, ast.AsyncWith)):
            children = [self.build(item, span) for item in node.items]
            children.append(self.block(node.body, span))
            return Node(kind="with_statement", children=children, span=span)
        if isinstance(node, ast.withitem):
            children = [self.build(node.context_expr, span)]
            if node.optional_vars is not None:
                children.append(self.build(node.optional_vars, span))
            return Node(kind="with_item", children=children, span=span)
        if isinstance(node, ast.Try):
            children = [self.block(node.body, span)]
            children.extend(self.build(h, span) for h in node.handlers)
            if node.orelse:
                children.append(
                    Node(kind="else_clause", children=[self.block(node.orelse, span)], span=span)
                )
            if node.finalbody:
                children.append(
                    Node(kind="finally_clause", children=[self.block(node.finalbody, span)], span=span)
                )
            return Node(kind="try_statement", children=children, span=span)
        if isinstance(node, ast.ExceptHandler):
            children = []
            if node.type is not None:
                children.append(self.build(node.type, span))
            if node.name is not None:
                children.append(self.ident(node.name, span))
            children.append(self.block(node.body, span))
            return Node(kind="except_clause", children=children, span=span)

        if isinstance(node, (ast.Global, ast.Nonlocal)):
            kind = _STMT_KINDS[type(node)]
            return Node(
                kind=kind, children=[self.ident(n, span) for n in node.names], span=span
            )
        if isinstance(node, (ast.Import, ast.ImportFrom)):
            kind = _STMT_KINDS[type(node)]
            names = [self.ident(a.name, span) for a in node.names]
            return Node(kind=kind, children=names, span=span)
        if isinstance(node, ast.comprehension):
            children = [self.build(node.target, span), self.build(node.iter, span)]
            children.extend(self.build(c, span) for c in node.ifs)
            return Node(kind="comprehension_clause", children=children, span=span)
        if isinstance(node, ast.Lambda):
            return Node(
                kind="lambda",
                children=[self.parameters(node.args, span), self.build(node.body, span)],
                span=span,
            )

        kind = _STMT_KINDS.get(type(node)) or _EXPR_KINDS.get(type(node)) or _snake(
            type(node).__name__
        )
        children = []
        for field_name in getattr(node, "_fields", ()):
            value = getattr(node, field_name, None)
            if isinstance(value, ast.AST):
                if isinstance(value, (ast.expr_context,)):
                    continue
                children.append(self.build(value, span))
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, ast.AST) and not isinstance(item, ast.expr_context):
                        children.append(self.build(item, span))
            elif isinstance(value, str) and field_name in ("name", "attr", "module"):
                children.append(self.ident(value, span))
        return Node(kind=kind, children=children, span=span)


def parse_method(source: str) -> Node:
    """Parse source holding exactly one function definition."""
    try:
        tree = ast.parse(source)
    except SyntaxError as exc:
        raise ParseError(f"syntax error: {exc.msg}", exc.offset or 0) from exc
    defs = [n for n in tree.body if isinstance(n, (ast.FunctionDef, ast.AsyncFunctionDef))]
    if len(tree.body) != 1 or len(defs) != 1:
        raise ParseError("source is not a single function definition", 0)
    return _Builder(source).build(defs[0], (0, len(source)))


def method_name_leaf(root: Node) -> Node:
    if root.kind != "function_definition" or not root.children:
        raise ParseError("not a function definition", root.span[0])
    leaf = root.children[0]
    if leaf.kind != "identifier":
        raise ParseError("function definition without name", root.span[0])
    return leaf


def callee_name(node: Node) -> str | None:
    """For a call node, the called function's bare name (final attribute
    segment for dotted calls); None for unnamed callees like `f()()`. """
    if node.kind != "call" or not node.children:
        return None
    func = node.children[0]
    if func.kind == "identifier":
        return func.text
    if func.kind == "attribute" and func.children:
        last = func.children[-1]
        if last.kind == "identifier":
            return last.text
    return None


def iter_methods(file_text: str) -> list[ExtractedMethod]:
    """All function definitions in a file, nested ones included, in source
    order. Each is dedented so it parses standalone."""
    try:
        tree = ast.parse(file_text)
    except (SyntaxError, ValueError):
        return []
    builder = _Builder(file_text)
    found: list[ExtractedMethod] = []

    def visit(node: ast.AST):
        for child in ast.iter_child_nodes(node):
            if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef)):
                segment = ast.get_source_segment(file_text, child, padded=True)
                if segment is not None:
                    source = textwrap.dedent(segment)
                    try:
                        parse_method(source)
                    except ParseError:
                        source = None
                    if source is not None:
                        found.append(
                            ExtractedMethod(
                                source=source,
                                name=child.name,
                                docstring=ast.get_docstring(child),
                                offset=builder.offset(child.lineno, child.col_offset),
                            )
                        )
            visit(child)

    visit(tree)
    found.sort(key=lambda m: m.offset)
    return found
