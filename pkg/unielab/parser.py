"""
Parser for the surface language, built on lark. The grammar lives in
``grammar.lark`` next to this module.
"""

import logging
from pathlib import Path
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from .exceptions import ParseError
from .surface import (Apply, Check, Constant, Define, Expr, Ident, IfExpr,
                      Lambda, MetaDecl, Numeral, PairExpr, PiType, Postulate,
                      ProdType, Proj, SourceFile, Succ)
from .types import Position

logger = logging.getLogger(__name__)

__all__ = ('GRAMMAR_FILE', 'parse', 'parseExpr')

GRAMMAR_FILE = Path(__file__).parent / 'grammar.lark'

_parser: Optional[Lark] = None


def _getParser() -> Lark:
    """ Build (once) and return the lark parser. """
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR_FILE.read_text(encoding='utf-8'), parser='lalr',
                       start=['start', 'expression'], propagate_positions=True)
    return _parser


def _position(token: Token) -> Optional[Position]:
    line = getattr(token, 'line', None)
    if line is None:
        return None
    return line, token.column


class ToSurface(Transformer):
    """ Turns a lark parse tree into `unielab.surface` nodes. """

    def start(self, children):
        return SourceFile(tuple(children))

    def expression(self, children):
        return children[0]

    def postulate(self, children):
        name, type_ = children
        return Postulate(str(name), type_, _position(name))

    def define(self, children):
        name, type_, body = children
        return Define(str(name), type_, body, _position(name))

    def meta_decl(self, children):
        name, type_ = children
        return MetaDecl(str(name), type_, _position(name))

    @v_args(meta=True)
    def check(self, meta, children):
        if len(children) == 3:
            context, term, type_ = children
        else:
            context = ()
            term, type_ = children
        position = (meta.line, meta.column) if not meta.empty else None
        return Check(tuple(context), term, type_, position)

    def context(self, children):
        return children[0]

    def binders(self, children):
        return tuple(children)

    def binder(self, children):
        name, type_ = children
        return str(name), type_

    def lam(self, children):
        *names, body = children
        for name in reversed(names):
            body = Lambda(str(name), body)
        return body

    def pi(self, children):
        binders, codomain = children
        for name, domain in reversed(binders):
            codomain = PiType(name, domain, codomain)
        return codomain

    def if_expr(self, children):
        scrutinee, name, motive, thenBranch, elseBranch = children
        return IfExpr(scrutinee, str(name), motive, thenBranch, elseBranch)

    def function_type(self, children):
        domain, codomain = children
        return PiType(None, domain, codomain)

    def prod_type(self, children):
        return ProdType(*children)

    def apply(self, children):
        return Apply(*children)

    def succ(self, children):
        return Succ(children[0])

    def fst(self, children):
        return Proj('fst', children[0])

    def snd(self, children):
        return Proj('snd', children[0])

    def pair(self, children):
        return PairExpr(*children)

    def ident(self, children):
        token = children[0]
        return Ident(str(token), _position(token))

    def number(self, children):
        return Numeral(int(children[0]))

    def set_type(self, _children):
        return Constant('Set')

    def bool_type(self, _children):
        return Constant('Bool')

    def nat_type(self, _children):
        return Constant('Nat')

    def true_term(self, _children):
        return Constant('true')

    def false_term(self, _children):
        return Constant('false')

    def zero_term(self, _children):
        return Constant('zero')


def _describe(err: UnexpectedInput) -> str:
    if isinstance(err, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(err, UnexpectedCharacters):
        return "unexpected character {!r}".format(err.char)
    token = getattr(err, 'token', None)
    if token is not None:
        if token.type == '$END':
            return "unexpected end of input"
        return "unexpected {!r}".format(str(token))
    return "syntax error"


def _run(text: str, start: str):
    try:
        tree = _getParser().parse(text, start=start)
        return ToSurface().transform(tree)
    except UnexpectedInput as err:
        line = getattr(err, 'line', None)
        column = getattr(err, 'column', None)
        if line is not None and line < 0:
            line = column = None
        raise ParseError(_describe(err), line, column) from err
    except VisitError as err:
        raise ParseError(str(err.orig_exc)) from err


def parse(text: str) -> SourceFile:
    """ Parse the text of a source file.

        :param text: The source text.
        :return: The declarations, in order.
        :raise ParseError: On a syntax error, with its line and column.
    """
    source = _run(text, 'start')
    logger.debug("parsed {} declaration(s)".format(len(source.declarations)))
    return source


def parseExpr(text: str) -> Expr:
    """ Parse a single expression. Used by tests and the renderer's
        round-trip check.
    """
    return _run(text, 'expression')
