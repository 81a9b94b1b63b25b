"""Java grammar adapter: hand-written lexer and method-level parser.

The lexer covers the full lexical grammar needed for method bodies
(identifiers, all literal forms, operators, comments). The parser is a
recursive-descent parser over extracted method declarations producing a
syntax tree whose terminals are the meaningful tokens (identifiers,
literals, operators, modifiers, primitive types); pure punctuation is
implied by node kinds. Statement-level errors recover into flagged
`error` nodes so one bad statement does not lose the method.
"""

from __future__ import annotations

from ..errors import LexError, ParseError
from ..syntax import Node
from .base import ExtractedMethod, Token

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

MODIFIERS = frozenset(
    "public private protected static final abstract synchronized native strictfp transient volatile default".split()
)

PRIMITIVE_TYPES = {
    "byte": "integral_type",
    "short": "integral_type",
    "int": "integral_type",
    "long": "integral_type",
    "char": "integral_type",
    "float": "floating_point_type",
    "double": "floating_point_type",
    "boolean": "boolean_type",
    "void": "void_type",
}

# Longest match first.
OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "<<", ">>",
    "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=",
    "|=", "^=", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|",
    "^", "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}", "@",
]

ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="])

# Binary operator precedence levels, loosest first. instanceof is handled
# separately at its level.
BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", ">", "<=", ">="],
    ["<<", ">>", ">>>"],
    ["+", "-"],
    ["*", "/", "%"],
]

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_DIGITS = frozenset("0123456789")
_IDENT_CONT = _IDENT_START | _DIGITS


def lex(source: str, with_comments: bool = False) -> list[Token]:
    """Tokenize Java source. Comments and whitespace are dropped unless
    `with_comments` is set, in which case comment tokens are included."""
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            i += 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            j = source.find("\n", i)
            j = n if j == -1 else j
            if with_comments:
                tokens.append(Token("line_comment", source[i:j], i, j))
            i = j
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            j = source.find("*/", i + 2)
            if j == -1:
                raise LexError("unterminated block comment", i)
            j += 2
            if with_comments:
                kind = "doc_comment" if source.startswith("/**", i) else "block_comment"
                tokens.append(Token(kind, source[i:j], i, j))
            i = j
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "identifier"
            tokens.append(Token(kind, text, i, j))
            i = j
            continue
        if ch in _DIGITS or (ch == "." and i + 1 < n and source[i + 1] in _DIGITS):
            tok = _lex_number(source, i)
            tokens.append(tok)
            i = tok.end
            continue
        if ch == '"':
            j = _scan_quoted(source, i, '"')
            tokens.append(Token("string_literal", source[i:j], i, j))
            i = j
            continue
        if ch == "'":
            j = _scan_quoted(source, i, "'")
            tokens.append(Token("character_literal", source[i:j], i, j))
            i = j
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(op, op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", i)
    return tokens


def _scan_quoted(source: str, start: int, quote: str) -> int:
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\\":
            i += 2
            continue
        if ch == quote:
            return i + 1
        if ch == "\n":
            break
        i += 1
    raise LexError("unterminated literal", start)


def _lex_number(source: str, start: int) -> Token:
    n = len(source)
    i = start
    if source.startswith(("0x", "0X"), i):
        i += 2
        while i < n and (source[i] in "0123456789abcdefABCDEF_"):
            i += 1
        if i < n and source[i] in "lL":
            i += 1
        return Token("hex_integer_literal", source[start:i], start, i)
    if source.startswith(("0b", "0B"), i):
        i += 2
        while i < n and source[i] in "01_":
            i += 1
        if i < n and source[i] in "lL":
            i += 1
        return Token("binary_integer_literal", source[start:i], start, i)
    is_float = False
    while i < n and (source[i] in _DIGITS or source[i] == "_"):
        i += 1
    if i < n and source[i] == "." and not source.startswith("..", i):
        is_float = True
        i += 1
        while i < n and (source[i] in _DIGITS or source[i] == "_"):
            i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] in "+-":
            j += 1
        if j < n and source[j] in _DIGITS:
            is_float = True
            i = j
            while i < n and source[i] in _DIGITS:
                i += 1
    if i < n and source[i] in "fFdD":
        is_float = True
        i += 1
    elif i < n and source[i] in "lL":
        i += 1
    kind = "decimal_floating_point_literal" if is_float else "decimal_integer_literal"
    return Token(kind, source[start:i], start, i)


_LITERAL_KINDS = frozenset(
    [
        "decimal_integer_literal",
        "hex_integer_literal",
        "binary_integer_literal",
        "decimal_floating_point_literal",
        "string_literal",
        "character_literal",
    ]
)

# Tokens that may legally start the operand of a cast expression. Used to
# disambiguate `(Type) expr` from parenthesized arithmetic like `(a) + b`.
_CAST_FOLLOW = frozenset(["identifier", "string_literal", "character_literal", "("]) | {
    k for k in _LITERAL_KINDS
}
_CAST_FOLLOW_KEYWORDS = frozenset(["this", "super", "new", "true", "false", "null"])


class _JavaParser:
    def __init__(self, tokens: list[Token], source_len: int):
        self.toks = tokens
        self.pos = 0
        self.end_offset = source_len

    # -- cursor helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else None

    def at(self, text: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok is not None and tok.text == text

    def at_kind(self, kind: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok is not None and tok.kind == kind

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_offset)
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            got = tok.text if tok else "<eof>"
            at = tok.start if tok else self.end_offset
            raise ParseError(f"expected {text!r}, found {got!r}", at)
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            got = tok.kind if tok else "<eof>"
            at = tok.start if tok else self.end_offset
            raise ParseError(f"expected {kind}, found {got}", at)
        return self.advance()

    def prev_end(self) -> int:
        return self.toks[self.pos - 1].end if self.pos > 0 else 0

    def here(self) -> int:
        tok = self.peek()
        return tok.start if tok else self.end_offset

    # Splits a merged ">>"/">>>" token so nested type arguments can close
    # one angle at a time.
    def close_angle(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected '>'", self.end_offset)
        if tok.text == ">":
            self.advance()
        elif tok.text in (">>", ">>>"):
            rest = tok.text[1:]
            self.toks[self.pos] = Token(rest, rest, tok.start + 1, tok.end)
        else:
            raise ParseError(f"expected '>', found {tok.text!r}", tok.start)

    # -- leaf builders -----------------------------------------------------

    def leaf(self, kind: str, tok: Token) -> Node:
        return Node(kind=kind, text=tok.text, span=(tok.start, tok.end))

    def op_leaf(self, tok: Token) -> Node:
        return Node(kind="operator", text=tok.text, span=(tok.start, tok.end))

    def node(self, kind: str, children: list[Node], start: int, error: bool = False) -> Node:
        return Node(kind=kind, children=children, span=(start, self.prev_end()), error=error)

    # -- entry -------------------------------------------------------------

    def parse_method_declaration(self) -> Node:
        start = self.here()
        children: list[Node] = []
        mods = self.parse_modifiers()
        if mods is not None:
            children.append(mods)
        if self.at("<"):
            children.append(self.parse_type_parameters())
        children.append(self.parse_type())
        name = self.expect_kind("identifier")
        children.append(self.leaf("identifier", name))
        children.append(self.parse_formal_parameters())
        if self.at("throws"):
            children.append(self.parse_throws())
        children.append(self.parse_block())
        if self.peek() is not None:
            raise ParseError("trailing tokens after method body", self.here())
        return self.node("method_declaration", children, start)

    def parse_modifiers(self) -> Node | None:
        start = self.here()
        children: list[Node] = []
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.text in MODIFIERS and tok.kind == "keyword":
                children.append(self.leaf("modifier", self.advance()))
            elif tok.text == "@":
                children.append(self.parse_annotation())
            else:
                break
        if not children:
            return None
        return self.node("modifiers", children, start)

    def parse_annotation(self) -> Node:
        start = self.here()
        self.expect("@")
        name = self.expect_kind("identifier")
        children = [self.leaf("identifier", name)]
        while self.at("."):
            self.advance()
            children.append(self.leaf("identifier", self.expect_kind("identifier")))
        if self.at("("):
            children.append(self.parse_annotation_arguments())
        return self.node("annotation", children, start)

    def parse_annotation_arguments(self) -> Node:
        # Annotation argument values are kept as a flat run of meaningful
        # terminals; their inner grammar is irrelevant downstream.
        start = self.here()
        self.expect("(")
        children: list[Node] = []
        depth = 1
        while depth > 0:
            tok = self.advance()
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
                continue
            if tok.kind == "identifier":
                children.append(self.leaf("identifier", tok))
            elif tok.kind in _LITERAL_KINDS:
                children.append(self.leaf(tok.kind, tok))
        return self.node("annotation_argument_list", children, start)

    def parse_type_parameters(self) -> Node:
        start = self.here()
        self.expect("<")
        children = []
        while True:
            name = self.expect_kind("identifier")
            param_children = [self.leaf("type_identifier", name)]
            if self.at("extends"):
                self.advance()
                param_children.append(self.parse_type())
                while self.at("&"):
                    self.advance()
                    param_children.append(self.parse_type())
            children.append(self.node("type_parameter", param_children, name.start))
            if self.at(","):
                self.advance()
                continue
            break
        self.close_angle()
        return self.node("type_parameters", children, start)

    # -- types -------------------------------------------------------------

    def parse_type(self) -> Node:
        start = self.here()
        base = self.parse_base_type()
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
            base = self.node("array_type", [base], start)
        return base

    def parse_base_type(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected type", self.end_offset)
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES:
            self.advance()
            return self.leaf(PRIMITIVE_TYPES[tok.text], tok)
        if tok.kind != "identifier":
            raise ParseError(f"expected type, found {tok.text!r}", tok.start)
        start = tok.start
        name_parts = [self.advance().text]
        while self.at(".") and self.at_kind("identifier", 1):
            self.advance()
            name_parts.append(self.advance().text)
        name_leaf = Node(
            kind="type_identifier", text=".".join(name_parts), span=(start, self.prev_end())
        )
        if self.at("<"):
            args = self.parse_type_arguments()
            return self.node("generic_type", [name_leaf, args], start)
        return name_leaf

    def parse_type_arguments(self) -> Node:
        start = self.here()
        self.expect("<")
        children: list[Node] = []
        if not (self.at(">") or self.at(">>") or self.at(">>>")):
            while True:
                if self.at("?"):
                    wc_start = self.here()
                    self.advance()
                    wc_children = []
                    if self.at("extends") or self.at("super"):
                        self.advance()
                        wc_children.append(self.parse_type())
                    children.append(self.node("wildcard", wc_children, wc_start))
                else:
                    children.append(self.parse_type())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.close_angle()
        return self.node("type_arguments", children, start)

    def looks_like_type(self) -> Node | None:
        """Speculatively parse a type; roll back and return None on failure."""
        saved = self.pos
        saved_toks = list(self.toks)
        try:
            return self.parse_type()
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return None

    # -- declaration fragments ----------------------------------------------

    def parse_formal_parameters(self) -> Node:
        start = self.here()
        self.expect("(")
        children: list[Node] = []
        if not self.at(")"):
            while True:
                children.append(self.parse_formal_parameter())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return self.node("formal_parameters", children, start)

    def parse_formal_parameter(self) -> Node:
        start = self.here()
        children: list[Node] = []
        mods = self.parse_modifiers()
        if mods is not None:
            children.append(mods)
        children.append(self.parse_type())
        kind = "formal_parameter"
        if self.at("..."):
            self.advance()
            kind = "spread_parameter"
        name = self.expect_kind("identifier")
        children.append(self.leaf("identifier", name))
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        return self.node(kind, children, start)

    def parse_throws(self) -> Node:
        start = self.here()
        self.expect("throws")
        children = [self.parse_type()]
        while self.at(","):
            self.advance()
            children.append(self.parse_type())
        return self.node("throws", children, start)

    # -- statements ----------------------------------------------------------

    def parse_block(self) -> Node:
        start = self.here()
        self.expect("{")
        children: list[Node] = []
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated block", self.end_offset)
            children.append(self.parse_statement_with_recovery())
        self.expect("}")
        return self.node("block", children, start)

    def parse_statement_with_recovery(self) -> Node:
        saved = self.pos
        saved_toks = list(self.toks)
        try:
            return self.parse_statement()
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return self.recover_statement()

    def recover_statement(self) -> Node:
        # Swallow tokens up to the next ';' at depth 0 (or a closing '}'),
        # keeping meaningful terminals under a flagged error node.
        start = self.here()
        children: list[Node] = []
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                break
            if depth == 0 and tok.text == "}":
                break
            self.advance()
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            if tok.kind == "identifier":
                children.append(self.leaf("identifier", tok))
            elif tok.kind in _LITERAL_KINDS:
                children.append(self.leaf(tok.kind, tok))
            if depth <= 0 and tok.text == ";":
                break
        if self.here() == start:  # no progress; bail out hard
            raise ParseError("cannot recover", start)
        return self.node("error", children, start, error=True)

    def parse_statement(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected statement", self.end_offset)
        if tok.text == "{":
            return self.parse_block()
        if tok.text == ";":
            self.advance()
            return Node(kind="empty_statement", span=(tok.start, tok.end))
        if tok.kind == "keyword":
            handler = {
                "if": self.parse_if,
                "while": self.parse_while,
                "do": self.parse_do,
                "for": self.parse_for,
                "return": self.parse_return,
                "break": lambda: self.parse_jump("break_statement", "break"),
                "continue": lambda: self.parse_jump("continue_statement", "continue"),
                "throw": self.parse_throw,
                "try": self.parse_try,
                "switch": self.parse_switch,
                "synchronized": self.parse_synchronized,
                "assert": self.parse_assert,
            }.get(tok.text)
            if handler is not None:
                return handler()
        if tok.kind == "identifier" and self.at(":", 1):
            start = tok.start
            label = self.leaf("identifier", self.advance())
            self.advance()
            return self.node("labeled_statement", [label, self.parse_statement()], start)
        decl = self.try_local_variable_declaration()
        if decl is not None:
            return decl
        start = self.here()
        expr = self.parse_expression()
        self.expect(";")
        return self.node("expression_statement", [expr], start)

    def try_local_variable_declaration(self) -> Node | None:
        saved = self.pos
        saved_toks = list(self.toks)
        try:
            return self.parse_local_variable_declaration()
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return None

    def parse_local_variable_declaration(self, expect_semi: bool = True) -> Node:
        start = self.here()
        children: list[Node] = []
        mods = self.parse_modifiers()
        if mods is not None:
            children.append(mods)
        children.append(self.parse_type())
        while True:
            children.append(self.parse_variable_declarator())
            if self.at(","):
                self.advance()
                continue
            break
        if expect_semi:
            self.expect(";")
        return self.node("local_variable_declaration", children, start)

    def parse_variable_declarator(self) -> Node:
        name = self.expect_kind("identifier")
        children = [self.leaf("identifier", name)]
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        if self.at("="):
            self.advance()
            if self.at("{"):
                children.append(self.parse_array_initializer())
            else:
                children.append(self.parse_expression())
        elif not (self.at(";") or self.at(",") or self.at(")") or self.at(":")):
            raise ParseError("not a declarator", self.here())
        return self.node("variable_declarator", children, name.start)

    def parse_if(self) -> Node:
        start = self.here()
        self.expect("if")
        children = [self.parse_paren_condition(), self.parse_statement()]
        if self.at("else"):
            self.advance()
            children.append(self.parse_statement())
        return self.node("if_statement", children, start)

    def parse_paren_condition(self) -> Node:
        start = self.here()
        self.expect("(")
        expr = self.parse_expression()
        self.expect(")")
        return self.node("parenthesized_expression", [expr], start)

    def parse_while(self) -> Node:
        start = self.here()
        self.expect("while")
        return self.node("while_statement", [self.parse_paren_condition(), self.parse_statement()], start)

    def parse_do(self) -> Node:
        start = self.here()
        self.expect("do")
        body = self.parse_statement()
        self.expect("while")
        cond = self.parse_paren_condition()
        self.expect(";")
        return self.node("do_statement", [body, cond], start)

    def parse_for(self) -> Node:
        start = self.here()
        self.expect("for")
        self.expect("(")
        enhanced = self.try_enhanced_for_header()
        if enhanced is not None:
            type_node, name_leaf = enhanced
            iterable = self.parse_expression()
            self.expect(")")
            body = self.parse_statement()
            return self.node(
                "enhanced_for_statement", [type_node, name_leaf, iterable, body], start
            )
        children: list[Node] = []
        if not self.at(";"):
            init = self.try_local_variable_declaration_no_semi()
            if init is None:
                init = self.parse_expression_list()
            children.append(init)
        self.expect(";")
        if not self.at(";"):
            children.append(self.parse_expression())
        self.expect(";")
        if not self.at(")"):
            children.append(self.parse_expression_list())
        self.expect(")")
        children.append(self.parse_statement())
        return self.node("for_statement", children, start)

    def try_enhanced_for_header(self) -> tuple[Node, Node] | None:
        saved = self.pos
        saved_toks = list(self.toks)
        try:
            self.parse_modifiers()
            type_node = self.parse_type()
            name = self.expect_kind("identifier")
            self.expect(":")
            return type_node, self.leaf("identifier", name)
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return None

    def try_local_variable_declaration_no_semi(self) -> Node | None:
        saved = self.pos
        saved_toks = list(self.toks)
        try:
            return self.parse_local_variable_declaration(expect_semi=False)
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return None

    def parse_expression_list(self) -> Node:
        start = self.here()
        children = [self.parse_expression()]
        while self.at(","):
            self.advance()
            children.append(self.parse_expression())
        if len(children) == 1:
            return children[0]
        return self.node("expression_list", children, start)

    def parse_return(self) -> Node:
        start = self.here()
        self.expect("return")
        children = []
        if not self.at(";"):
            children.append(self.parse_expression())
        self.expect(";")
        return self.node("return_statement", children, start)

    def parse_jump(self, kind: str, keyword: str) -> Node:
        start = self.here()
        self.expect(keyword)
        children = []
        if self.at_kind("identifier"):
            children.append(self.leaf("identifier", self.advance()))
        self.expect(";")
        return self.node(kind, children, start)

    def parse_throw(self) -> Node:
        start = self.here()
        self.expect("throw")
        expr = self.parse_expression()
        self.expect(";")
        return self.node("throw_statement", [expr], start)

    def parse_try(self) -> Node:
        start = self.here()
        self.expect("try")
        children: list[Node] = []
        if self.at("("):
            children.append(self.parse_resource_specification())
        children.append(self.parse_block())
        while self.at("catch"):
            children.append(self.parse_catch_clause())
        if self.at("finally"):
            fin_start = self.here()
            self.advance()
            children.append(self.node("finally_clause", [self.parse_block()], fin_start))
        if len(children) == 1:
            raise ParseError("try without catch or finally", start)
        return self.node("try_statement", children, start)

    def parse_resource_specification(self) -> Node:
        start = self.here()
        self.expect("(")
        children = []
        while not self.at(")"):
            decl = self.try_local_variable_declaration_no_semi()
            children.append(decl if decl is not None else self.parse_expression())
            if self.at(";"):
                self.advance()
        self.expect(")")
        return self.node("resource_specification", children, start)

    def parse_catch_clause(self) -> Node:
        start = self.here()
        self.expect("catch")
        self.expect("(")
        param_start = self.here()
        param_children: list[Node] = []
        mods = self.parse_modifiers()
        if mods is not None:
            param_children.append(mods)
        param_children.append(self.parse_type())
        while self.at("|"):
            self.advance()
            param_children.append(self.parse_type())
        name = self.expect_kind("identifier")
        param_children.append(self.leaf("identifier", name))
        param = self.node("catch_formal_parameter", param_children, param_start)
        self.expect(")")
        return self.node("catch_clause", [param, self.parse_block()], start)

    def parse_switch(self) -> Node:
        start = self.here()
        self.expect("switch")
        cond = self.parse_paren_condition()
        block_start = self.here()
        self.expect("{")
        block_children: list[Node] = []
        while not self.at("}"):
            if self.at("case"):
                lbl_start = self.here()
                self.advance()
                expr = self.parse_expression()
                self.expect(":")
                block_children.append(self.node("switch_label", [expr], lbl_start))
            elif self.at("default"):
                lbl_start = self.here()
                self.advance()
                self.expect(":")
                block_children.append(self.node("switch_label", [], lbl_start))
            else:
                block_children.append(self.parse_statement_with_recovery())
        self.expect("}")
        block = self.node("switch_block", block_children, block_start)
        return self.node("switch_statement", [cond, block], start)

    def parse_synchronized(self) -> Node:
        start = self.here()
        self.expect("synchronized")
        return self.node(
            "synchronized_statement", [self.parse_paren_condition(), self.parse_block()], start
        )

    def parse_assert(self) -> Node:
        start = self.here()
        self.expect("assert")
        children = [self.parse_expression()]
        if self.at(":"):
            self.advance()
            children.append(self.parse_expression())
        self.expect(";")
        return self.node("assert_statement", children, start)

    # -- expressions ---------------------------------------------------------

    def parse_expression(self) -> Node:
        return self.parse_assignment()

    def parse_assignment(self) -> Node:
        start = self.here()
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok is not None and tok.text in ASSIGN_OPS:
            op = self.op_leaf(self.advance())
            rhs = self.parse_assignment()
            return self.node("assignment_expression", [lhs, op, rhs], start)
        return lhs

    def parse_ternary(self) -> Node:
        start = self.here()
        cond = self.parse_lambda_or_binary()
        if self.at("?"):
            self.advance()
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_ternary()
            return self.node("ternary_expression", [cond, then, other], start)
        return cond

    def parse_lambda_or_binary(self) -> Node:
        if self.at_kind("identifier") and self.at("->", 1):
            return self.parse_lambda()
        if self.at("(") and self.lambda_params_ahead():
            return self.parse_lambda()
        return self.parse_binary(0)

    def lambda_params_ahead(self) -> bool:
        depth = 0
        i = self.pos
        while i < len(self.toks):
            text = self.toks[i].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return i + 1 < len(self.toks) and self.toks[i + 1].text == "->"
            elif text in (";", "{"):
                return False
            i += 1
        return False

    def parse_lambda(self) -> Node:
        start = self.here()
        params_start = self.here()
        param_children: list[Node] = []
        if self.at_kind("identifier"):
            param_children.append(self.leaf("identifier", self.advance()))
        else:
            self.expect("(")
            while not self.at(")"):
                saved = self.pos
                try:
                    self.parse_modifiers()
                    type_node = self.parse_type()
                    name = self.expect_kind("identifier")
                    param_children.extend([type_node, self.leaf("identifier", name)])
                except ParseError:
                    self.pos = saved
                    param_children.append(self.leaf("identifier", self.expect_kind("identifier")))
                if self.at(","):
                    self.advance()
            self.expect(")")
        params = self.node("lambda_parameters", param_children, params_start)
        self.expect("->")
        body = self.parse_block() if self.at("{") else self.parse_expression()
        return self.node("lambda_expression", [params, body], start)

    def parse_binary(self, level: int) -> Node:
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        start = self.here()
        # instanceof binds at relational level.
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok is None:
                return left
            if level == 6 and tok.text == "instanceof":
                self.advance()
                right = self.parse_type()
                left = self.node("instanceof_expression", [left, right], start)
                continue
            if tok.text in BINARY_LEVELS[level]:
                op = self.op_leaf(self.advance())
                right = self.parse_binary(level + 1)
                left = self.node("binary_expression", [left, op, right], start)
                continue
            return left

    def parse_unary(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected expression", self.end_offset)
        if tok.text in ("+", "-", "!", "~"):
            start = tok.start
            op = self.op_leaf(self.advance())
            return self.node("unary_expression", [op, self.parse_unary()], start)
        if tok.text in ("++", "--"):
            start = tok.start
            op = self.op_leaf(self.advance())
            return self.node("update_expression", [op, self.parse_unary()], start)
        cast = self.try_cast()
        if cast is not None:
            return cast
        return self.parse_postfix()

    def try_cast(self) -> Node | None:
        if not self.at("("):
            return None
        saved = self.pos
        saved_toks = list(self.toks)
        start = self.here()
        try:
            self.expect("(")
            type_node = self.parse_type()
            self.expect(")")
            nxt = self.peek()
            if nxt is None:
                raise ParseError("eof after cast", self.end_offset)
            ok = nxt.kind in _CAST_FOLLOW or (
                nxt.kind == "keyword" and nxt.text in _CAST_FOLLOW_KEYWORDS
            )
            # `(name) + x` style: only primitive casts may be followed by +/-.
            if not ok and type_node.kind in ("integral_type", "floating_point_type"):
                ok = nxt.text in ("+", "-")
            if not ok:
                raise ParseError("not a cast", nxt.start)
            operand = self.parse_unary()
            return self.node("cast_expression", [type_node, operand], start)
        except ParseError:
            self.pos = saved
            self.toks = saved_toks
            return None

    def parse_postfix(self) -> Node:
        start = self.here()
        expr = self.parse_primary()
        while True:
            if self.at("."):
                nxt = self.peek(1)
                if nxt is not None and nxt.kind == "identifier":
                    self.advance()
                    name = self.leaf("identifier", self.advance())
                    if self.at("("):
                        args = self.parse_argument_list()
                        expr = self.node("method_invocation", [expr, name, args], start)
                    else:
                        expr = self.node("field_access", [expr, name], start)
                    continue
                if nxt is not None and nxt.text == "class":
                    self.advance()
                    self.advance()
                    expr = self.node("class_literal", [expr], start)
                    continue
                raise ParseError("expected member name after '.'", self.here())
            if self.at("("):
                args = self.parse_argument_list()
                if expr.kind == "identifier":
                    expr = self.node("method_invocation", [expr, args], start)
                elif expr.kind == "field_access":
                    expr = self.node("method_invocation", [*expr.children, args], start)
                else:
                    expr = self.node("method_invocation", [expr, args], start)
                continue
            if self.at("["):
                self.advance()
                index = self.parse_expression()
                self.expect("]")
                expr = self.node("array_access", [expr, index], start)
                continue
            if self.at("::"):
                self.advance()
                tok = self.peek()
                if tok is not None and tok.text == "new":
                    self.advance()
                    name = Node(kind="identifier", text="new", span=(tok.start, tok.end))
                else:
                    name = self.leaf("identifier", self.expect_kind("identifier"))
                expr = self.node("method_reference", [expr, name], start)
                continue
            if self.at("++") or self.at("--"):
                op = self.op_leaf(self.advance())
                expr = self.node("update_expression", [expr, op], start)
                continue
            return expr

    def parse_argument_list(self) -> Node:
        start = self.here()
        self.expect("(")
        children = []
        if not self.at(")"):
            while True:
                children.append(self.parse_expression())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return self.node("argument_list", children, start)

    def parse_array_initializer(self) -> Node:
        start = self.here()
        self.expect("{")
        children = []
        while not self.at("}"):
            if self.at("{"):
                children.append(self.parse_array_initializer())
            else:
                children.append(self.parse_expression())
            if self.at(","):
                self.advance()
        self.expect("}")
        return self.node("array_initializer", children, start)

    def parse_primary(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected expression", self.end_offset)
        if tok.kind in _LITERAL_KINDS:
            self.advance()
            return self.leaf(tok.kind, tok)
        if tok.kind == "keyword":
            if tok.text in ("true", "false"):
                self.advance()
                return self.leaf(tok.text, tok)
            if tok.text == "null":
                self.advance()
                return self.leaf("null_literal", tok)
            if tok.text == "this":
                self.advance()
                return self.leaf("this", tok)
            if tok.text == "super":
                self.advance()
                return self.leaf("super", tok)
            if tok.text == "new":
                return self.parse_creation()
            if tok.text in PRIMITIVE_TYPES and self.at(".", 1):
                # e.g. int.class
                start = tok.start
                base = self.leaf(PRIMITIVE_TYPES[tok.text], self.advance())
                self.expect(".")
                self.expect("class")
                return self.node("class_literal", [base], start)
        if tok.kind == "identifier":
            self.advance()
            return self.leaf("identifier", tok)
        if tok.text == "(":
            start = tok.start
            self.advance()
            expr = self.parse_expression()
            self.expect(")")
            return self.node("parenthesized_expression", [expr], start)
        raise ParseError(f"unexpected token {tok.text!r}", tok.start)

    def parse_creation(self) -> Node:
        start = self.here()
        self.expect("new")
        type_node = self.parse_base_type()
        if self.at("["):
            children: list[Node] = [type_node]
            while self.at("[") :
                self.advance()
                if not self.at("]"):
                    children.append(self.parse_expression())
                self.expect("]")
            if self.at("{"):
                children.append(self.parse_array_initializer())
            return self.node("array_creation_expression", children, start)
        args = self.parse_argument_list()
        children = [type_node, args]
        if self.at("{"):
            children.append(self.parse_anonymous_body())
        return self.node("object_creation_expression", children, start)

    def parse_anonymous_body(self) -> Node:
        # Anonymous class bodies are kept as a flat run of meaningful
        # terminals; nested methods inside them are extracted separately at
        # corpus level.
        start = self.here()
        self.expect("{")
        children: list[Node] = []
        depth = 1
        while depth > 0:
            tok = self.peek()
            if tok is None:
                raise ParseError("unterminated class body", self.end_offset)
            self.advance()
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
                continue
            if tok.kind == "identifier":
                children.append(self.leaf("identifier", tok))
            elif tok.kind in _LITERAL_KINDS:
                children.append(self.leaf(tok.kind, tok))
        return self.node("class_body", children, start)


def parse_method(source: str) -> Node:
    tokens = lex(source)
    if not tokens:
        raise ParseError("no tokens", 0)
    return _JavaParser(tokens, len(source)).parse_method_declaration()


def method_name_leaf(root: Node) -> Node:
    """The identifier leaf holding the declared method name."""
    if root.kind != "method_declaration":
        raise ParseError("not a method declaration", root.span[0])
    for child in root.children:
        if child.kind == "identifier":
            return child
    raise ParseError("method declaration without name", root.span[0])


def callee_name(node: Node) -> str | None:
    """For a method_invocation node, the called method's bare name."""
    if node.kind != "method_invocation":
        return None
    idents = [c for c in node.children if c.kind == "identifier"]
    return idents[-1].text if idents else None


# -- file-level method extraction -------------------------------------------


def iter_methods(file_text: str) -> list[ExtractedMethod]:
    """Scan a Java file for method declarations with bodies.

    Works on the token stream: inside any type body, a parenthesized
    parameter list preceded by an identifier preceded by a type is taken as
    a method header. The candidate region is then re-parsed with the method
    grammar; candidates that fail to parse are skipped. Doc comments
    immediately preceding a method attach as its docstring.
    """
    try:
        tokens = lex(file_text, with_comments=True)
    except LexError:
        return []
    comments = {t.end: t for t in tokens if t.kind in ("doc_comment", "block_comment", "line_comment")}
    toks = [t for t in tokens if not t.kind.endswith("comment")]
    methods: list[ExtractedMethod] = []
    depth = 0
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok.text == "{":
            depth += 1
        elif tok.text == "}":
            depth -= 1
        elif depth >= 1 and tok.kind == "identifier" and _next_text(toks, i + 1) == "(":
            header_start = _scan_header_start(toks, i)
            if header_start is not None and _has_return_type(toks, header_start, i):
                close = _match_paren(toks, i + 1)
                if close is not None and _next_is_body(toks, close + 1):
                    body_open = _find_body_open(toks, close + 1)
                    body_close = _match_brace(toks, body_open)
                    if body_close is not None:
                        start_off = toks[header_start].start
                        end_off = toks[body_close].end
                        source = file_text[start_off:end_off]
                        try:
                            parse_method(source)
                        except (ParseError, LexError):
                            i += 1
                            continue
                        doc = _doc_before(comments, file_text, start_off)
                        methods.append(
                            ExtractedMethod(
                                source=source, name=tok.text, docstring=doc, offset=start_off
                            )
                        )
        i += 1
    methods.sort(key=lambda m: m.offset)
    return methods


def _next_text(toks: list[Token], i: int) -> str | None:
    return toks[i].text if i < len(toks) else None


def _scan_header_start(toks: list[Token], name_idx: int) -> int | None:
    """Walk left from the method name over the return type, generics and
    modifiers to the header's first token. Returns None when the left
    context cannot be a method header (e.g. a call or a control keyword)."""
    i = name_idx - 1
    if i < 0:
        return None
    # return type: identifier/primitive possibly with generics, arrays, dots
    depth = 0
    saw_type = False
    while i >= 0:
        t = toks[i]
        if t.text in (">", ">>", ">>>"):
            depth += t.text.count(">")
        elif t.text == "<":
            depth -= 1
            if depth < 0:
                return None
        elif depth > 0:
            pass  # inside generic args, consume anything reasonable
        elif t.text in ("]", "["):
            pass
        elif t.kind == "identifier" or (t.kind == "keyword" and t.text in PRIMITIVE_TYPES):
            saw_type = True
            if depth == 0:
                break
        elif t.text == "." :
            pass
        else:
            return None
        i -= 1
    if not saw_type or i < 0:
        return None
    type_start = i
    # skip over qualified-name dots to the start of the type
    while type_start - 2 >= 0 and toks[type_start - 1].text == "." and toks[type_start - 2].kind == "identifier":
        type_start -= 2
    # modifiers / annotations / type parameters before the type
    i = type_start - 1
    start = type_start
    while i >= 0:
        t = toks[i]
        if t.kind == "keyword" and t.text in MODIFIERS:
            start = i
            i -= 1
            continue
        if t.kind == "identifier" and i >= 1 and toks[i - 1].text == "@":
            start = i - 1
            i -= 2
            continue
        if t.text == ")":  # annotation with arguments: @Foo(...)
            open_idx = _match_paren_back(toks, i)
            if (
                open_idx is not None
                and open_idx >= 2
                and toks[open_idx - 1].kind == "identifier"
                and toks[open_idx - 2].text == "@"
            ):
                start = open_idx - 2
                i = open_idx - 3
                continue
            break
        if t.text in (">", ">>", ">>>"):  # method type parameters <T>
            j = i
            angle = 0
            while j >= 0:
                angle += toks[j].text.count(">") if toks[j].text in (">", ">>", ">>>") else 0
                angle -= 1 if toks[j].text == "<" else 0
                if toks[j].text == "<" and angle == 0:
                    break
                j -= 1
            if j >= 0 and angle == 0:
                start = j
                i = j - 1
                continue
            break
        break
    # the token before the header must be a body/member boundary
    if start - 1 >= 0 and toks[start - 1].text not in ("{", "}", ";"):
        return None
    return start


def _has_return_type(toks: list[Token], header_start: int, name_idx: int) -> bool:
    # Constructors have nothing but modifiers/annotations before the name.
    j = header_start
    while j < name_idx:
        t = toks[j]
        if t.text == "(":  # skip annotation argument lists
            close = _match_paren(toks, j)
            j = name_idx if close is None else close + 1
            continue
        if t.kind == "identifier" and not (j >= 1 and toks[j - 1].text == "@"):
            return True
        if t.kind == "keyword" and t.text in PRIMITIVE_TYPES:
            return True
        j += 1
    return False


def _match_paren(toks: list[Token], open_idx: int) -> int | None:
    depth = 0
    for i in range(open_idx, len(toks)):
        if toks[i].text == "(":
            depth += 1
        elif toks[i].text == ")":
            depth -= 1
            if depth == 0:
                return i
    return None


def _match_paren_back(toks: list[Token], close_idx: int) -> int | None:
    depth = 0
    for i in range(close_idx, -1, -1):
        if toks[i].text == ")":
            depth += 1
        elif toks[i].text == "(":
            depth -= 1
            if depth == 0:
                return i
    return None


def _next_is_body(toks: list[Token], i: int) -> bool:
    # Optional throws clause between ')' and '{'.
    while i < len(toks):
        t = toks[i]
        if t.text == "{":
            return True
        if t.text == ";":
            return False  # abstract/interface signature: no body to learn from
        if t.kind in ("identifier", "keyword") or t.text in (",", ".", "[", "]"):
            i += 1
            continue
        return False
    return False


def _find_body_open(toks: list[Token], i: int) -> int:
    while toks[i].text != "{":
        i += 1
    return i


def _match_brace(toks: list[Token], open_idx: int) -> int | None:
    depth = 0
    for i in range(open_idx, len(toks)):
        if toks[i].text == "{":
            depth += 1
        elif toks[i].text == "}":
            depth -= 1
            if depth == 0:
                return i
    return None


def _doc_before(comments: dict[int, Token], file_text: str, offset: int) -> str | None:
    # Nearest comment whose end precedes the header with only whitespace
    # (or annotations already part of the header) in between.
    best = None
    for end, tok in comments.items():
        if end <= offset and (best is None or end > best[0]):
            best = (end, tok)
    if best is None:
        return None
    end, tok = best
    if file_text[end:offset].strip() != "":
        return None
    if tok.kind != "doc_comment":
        return None
    return _clean_doc_comment(tok.text)


def _clean_doc_comment(text: str) -> str | None:
    body = text
    if body.startswith("/**"):
        body = body[3:]
    if body.endswith("*/"):
        body = body[:-2]
    lines = []
    for line in body.splitlines():
        line = line.strip()
        if line.startswith("*"):
            line = line[1:].strip()
        if line.startswith("@"):
            break  # tag section ends the prose
        if line:
            lines.append(line)
    return " ".join(lines) if lines else None
