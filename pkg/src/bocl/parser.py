"""Recursive-descent parser for invariant constraints.

Precedence, loosest to tightest: or < and < comparison < additive <
multiplicative < unary < postfix. Comparisons are non-associative, the
other binary levels associate left. Postfix covers '.' property access
and '->' collection operations; if/then/else/endif is self-delimiting
and parses as a primary.
"""

from __future__ import annotations

from .ast import (
    BooleanLiteralExp,
    CollectionOp,
    CollectionOpExp,
    ConstraintAst,
    Expr,
    IfExp,
    InfixOperator,
    IntegerLiteralExp,
    IteratorExp,
    IteratorKind,
    OperationCallExp,
    PropertyExp,
    RealLiteralExp,
    SelfExp,
    Stereotype,
    StringLiteralExp,
    UnaryExp,
    UnaryOperator,
    VariableExp,
)
from .lexer import ParseError, Token, TokenKind, tokenize
from .model import INT64_MAX

_COMPARISON_OPS = {
    "=": InfixOperator.EQ,
    "<>": InfixOperator.NE,
    "<": InfixOperator.LT,
    ">": InfixOperator.GT,
    "<=": InfixOperator.LE,
    ">=": InfixOperator.GE,
}

_ITERATOR_KINDS = {kind.value: kind for kind in IteratorKind}
_COLLECTION_OPS = {op.value: op for op in CollectionOp}

# Stereotype words the grammar recognizes but the tool does not support.
_UNSUPPORTED_STEREOTYPES = frozenset({"pre", "post", "derive", "init", "body", "def"})


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        return token

    def check(self, kind: TokenKind, text: str | None = None) -> bool:
        token = self.peek()
        return token.kind is kind and (text is None or token.text == text)

    def match(self, kind: TokenKind, text: str | None = None) -> Token | None:
        if self.check(kind, text):
            return self.advance()
        return None

    def expect(self, kind: TokenKind, text: str | None, description: str) -> Token:
        token = self.match(kind, text)
        if token is None:
            found = self.peek()
            raise ParseError(
                f"expected {description}, found {found.describe()}",
                found.line,
                found.col,
                expected=(description,),
            )
        return token


def parse_constraint(source: str) -> ConstraintAst:
    """Parse 'context ID inv [ID] : expr'; raises ParseError otherwise."""
    stream = _TokenStream(tokenize(source))
    stream.expect(TokenKind.KEYWORD, "context", "'context'")
    context = stream.expect(TokenKind.IDENT, None, "context class name").text

    token = stream.peek()
    word = token.text.lower()
    if (
        token.kind in (TokenKind.KEYWORD, TokenKind.IDENT)
        and word in _UNSUPPORTED_STEREOTYPES
    ):
        raise ParseError(
            f"unsupported stereotype '{word}': only 'inv' constraints are evaluated",
            token.line,
            token.col,
            expected=("'inv'",),
        )
    stream.expect(TokenKind.KEYWORD, "inv", "'inv'")

    name_token = stream.match(TokenKind.IDENT)
    name = name_token.text if name_token else None
    stream.expect(TokenKind.SYMBOL, ":", "':'")
    body = _parse_expr(stream)
    stream.expect(TokenKind.EOF, None, "end of input")
    return ConstraintAst(context, Stereotype.INV, name, body)


def parse_expression(source: str) -> Expr:
    """Parse a bare expression (no context header)."""
    stream = _TokenStream(tokenize(source))
    expr = _parse_expr(stream)
    stream.expect(TokenKind.EOF, None, "end of input")
    return expr


def _parse_expr(s: _TokenStream) -> Expr:
    return _parse_or(s)


def _parse_or(s: _TokenStream) -> Expr:
    left = _parse_and(s)
    while s.match(TokenKind.KEYWORD, "or"):
        left = OperationCallExp(InfixOperator.OR, left, _parse_and(s))
    return left


def _parse_and(s: _TokenStream) -> Expr:
    left = _parse_comparison(s)
    while s.match(TokenKind.KEYWORD, "and"):
        left = OperationCallExp(InfixOperator.AND, left, _parse_comparison(s))
    return left


def _parse_comparison(s: _TokenStream) -> Expr:
    left = _parse_additive(s)
    token = s.peek()
    if token.kind is TokenKind.SYMBOL and token.text in _COMPARISON_OPS:
        s.advance()
        right = _parse_additive(s)
        result = OperationCallExp(_COMPARISON_OPS[token.text], left, right)
        follow = s.peek()
        if follow.kind is TokenKind.SYMBOL and follow.text in _COMPARISON_OPS:
            raise ParseError(
                "comparison operators are non-associative; use parentheses",
                follow.line,
                follow.col,
            )
        return result
    return left


def _parse_additive(s: _TokenStream) -> Expr:
    left = _parse_multiplicative(s)
    while True:
        if s.match(TokenKind.SYMBOL, "+"):
            op = InfixOperator.ADD
        elif s.match(TokenKind.SYMBOL, "-"):
            op = InfixOperator.SUB
        else:
            return left
        left = OperationCallExp(op, left, _parse_multiplicative(s))


def _parse_multiplicative(s: _TokenStream) -> Expr:
    left = _parse_unary(s)
    while True:
        if s.match(TokenKind.SYMBOL, "*"):
            op = InfixOperator.MUL
        elif s.match(TokenKind.SYMBOL, "/"):
            op = InfixOperator.DIV
        else:
            return left
        left = OperationCallExp(op, left, _parse_unary(s))


def _parse_unary(s: _TokenStream) -> Expr:
    if s.match(TokenKind.KEYWORD, "not"):
        return UnaryExp(UnaryOperator.NOT, _parse_unary(s))
    if s.match(TokenKind.SYMBOL, "-"):
        return UnaryExp(UnaryOperator.NEG, _parse_unary(s))
    return _parse_postfix(s)


def _parse_postfix(s: _TokenStream) -> Expr:
    expr = _parse_primary(s)
    while True:
        if s.match(TokenKind.SYMBOL, "."):
            name = s.expect(TokenKind.IDENT, None, "property name").text
            expr = PropertyExp(expr, name)
        elif s.match(TokenKind.SYMBOL, "->"):
            expr = _parse_collection_call(s, expr)
        else:
            return expr


def _parse_collection_call(s: _TokenStream, source: Expr) -> Expr:
    token = s.expect(TokenKind.IDENT, None, "collection operation name")
    name = token.text
    if name in _COLLECTION_OPS:
        s.expect(TokenKind.SYMBOL, "(", "'('")
        s.expect(TokenKind.SYMBOL, ")", "')'")
        return CollectionOpExp(source, _COLLECTION_OPS[name])
    if name in _ITERATOR_KINDS:
        s.expect(TokenKind.SYMBOL, "(", "'('")
        var = s.expect(TokenKind.IDENT, None, "iterator variable name").text
        var_type = None
        if s.match(TokenKind.SYMBOL, ":"):
            var_type = s.expect(TokenKind.IDENT, None, "iterator variable type").text
        s.expect(TokenKind.SYMBOL, "|", "'|'")
        body = _parse_expr(s)
        s.expect(TokenKind.SYMBOL, ")", "')'")
        return IteratorExp(source, _ITERATOR_KINDS[name], var, var_type, body)
    known = sorted(_COLLECTION_OPS) + sorted(_ITERATOR_KINDS)
    raise ParseError(
        f"unknown collection operation '{name}'",
        token.line,
        token.col,
        expected=tuple(f"'{op}'" for op in known),
    )


def _parse_primary(s: _TokenStream) -> Expr:
    token = s.peek()
    if token.kind is TokenKind.KEYWORD:
        if token.text == "self":
            s.advance()
            return SelfExp()
        if token.text in ("true", "false"):
            s.advance()
            return BooleanLiteralExp(token.text == "true")
        if token.text == "if":
            s.advance()
            condition = _parse_expr(s)
            s.expect(TokenKind.KEYWORD, "then", "'then'")
            then_branch = _parse_expr(s)
            s.expect(TokenKind.KEYWORD, "else", "'else'")
            else_branch = _parse_expr(s)
            s.expect(TokenKind.KEYWORD, "endif", "'endif'")
            return IfExp(condition, then_branch, else_branch)
    elif token.kind is TokenKind.INT:
        s.advance()
        value = int(token.text)
        if value > INT64_MAX:
            raise ParseError(
                "integer literal out of 64-bit range", token.line, token.col
            )
        return IntegerLiteralExp(value)
    elif token.kind is TokenKind.REAL:
        s.advance()
        return RealLiteralExp(float(token.text))
    elif token.kind is TokenKind.STRING:
        s.advance()
        return StringLiteralExp(token.text)
    elif token.kind is TokenKind.IDENT:
        s.advance()
        return VariableExp(token.text)
    elif token.kind is TokenKind.SYMBOL and token.text == "(":
        s.advance()
        expr = _parse_expr(s)
        s.expect(TokenKind.SYMBOL, ")", "')'")
        return expr
    raise ParseError(
        f"expected expression, found {token.describe()}",
        token.line,
        token.col,
        expected=("expression",),
    )
