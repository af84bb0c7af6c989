"""
The named surface syntax produced by the parser, and a renderer whose
output parses back to an equal tree. Source positions are carried along
but take no part in equality.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from .types import Position

__all__ = ('Apply', 'Check', 'Constant', 'Define', 'Declaration', 'Expr',
           'Ident', 'IfExpr', 'Lambda', 'MetaDecl', 'Numeral', 'PairExpr', 'PiType',
           'Postulate', 'ProdType', 'Proj', 'SourceFile', 'Succ', 'render')

#: The words that parse as `Constant`.
CONSTANT_WORDS = ('Set', 'Bool', 'Nat', 'true', 'false', 'zero')


# ===========================================================================
# Expressions
# ===========================================================================

@dataclass(frozen=True)
class Ident:
    name: str
    position: Optional[Position] = field(default=None, compare=False)


@dataclass(frozen=True)
class Constant:
    """ One of the built-in constants, by its keyword. """
    word: str


@dataclass(frozen=True)
class Apply:
    function: "Expr"
    argument: "Expr"


@dataclass(frozen=True)
class Lambda:
    name: str
    body: "Expr"


@dataclass(frozen=True)
class PiType:
    """ A function type; `name` is `None` for the non-dependent arrow. """
    name: Optional[str]
    domain: "Expr"
    codomain: "Expr"


@dataclass(frozen=True)
class ProdType:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class PairExpr:
    first: "Expr"
    second: "Expr"


@dataclass(frozen=True)
class IfExpr:
    """ ``if scrutinee / name. motive then thenBranch else elseBranch`` """
    scrutinee: "Expr"
    name: str
    motive: "Expr"
    thenBranch: "Expr"
    elseBranch: "Expr"


@dataclass(frozen=True)
class Succ:
    argument: "Expr"


@dataclass(frozen=True)
class Numeral:
    """ A natural number literal. """
    value: int


@dataclass(frozen=True)
class Proj:
    """ A projection; `which` is ``'fst'`` or ``'snd'``. """
    which: str
    argument: "Expr"


Expr = Union[Ident, Constant, Apply, Lambda, PiType, ProdType, PairExpr, IfExpr,
             Succ, Numeral, Proj]


# ===========================================================================
# Declarations
# ===========================================================================

@dataclass(frozen=True)
class Postulate:
    name: str
    type: Expr
    position: Optional[Position] = field(default=None, compare=False)


@dataclass(frozen=True)
class Define:
    name: str
    type: Expr
    body: Expr
    position: Optional[Position] = field(default=None, compare=False)


@dataclass(frozen=True)
class MetaDecl:
    name: str
    type: Expr
    position: Optional[Position] = field(default=None, compare=False)


@dataclass(frozen=True)
class Check:
    """ A goal: check `term` against `type` in the local `context`, a
        sequence of ``(name, type)`` pairs, outermost first.
    """
    context: Tuple[Tuple[str, Expr], ...]
    term: Expr
    type: Expr
    position: Optional[Position] = field(default=None, compare=False)


Declaration = Union[Postulate, Define, MetaDecl, Check]


@dataclass(frozen=True)
class SourceFile:
    declarations: Tuple[Declaration, ...] = ()


# ===========================================================================
# Rendering
# ===========================================================================

# Precedence levels: binders/arrows, products, applications, atoms.
_TOP, _PROD, _APP, _ATOM = range(4)


def _wrap(text: str, prec: int, level: int) -> str:
    return text if prec >= level else "({})".format(text)


def _expr(e: Expr) -> Tuple[str, int]:
    if isinstance(e, Ident):
        return e.name, _ATOM
    if isinstance(e, Constant):
        return e.word, _ATOM
    if isinstance(e, Numeral):
        return str(e.value), _ATOM
    if isinstance(e, Apply):
        return "{} {}".format(_at(e.function, _APP), _at(e.argument, _ATOM)), _APP
    if isinstance(e, Succ):
        return "suc {}".format(_at(e.argument, _ATOM)), _APP
    if isinstance(e, Proj):
        return "{} {}".format(e.which, _at(e.argument, _ATOM)), _APP
    if isinstance(e, ProdType):
        return "{} * {}".format(_at(e.left, _APP), _at(e.right, _PROD)), _PROD
    if isinstance(e, PairExpr):
        return "({}, {})".format(_at(e.first, _TOP), _at(e.second, _TOP)), _ATOM
    if isinstance(e, Lambda):
        return "\\{} -> {}".format(e.name, _at(e.body, _TOP)), _TOP
    if isinstance(e, PiType):
        if e.name is None:
            return "{} -> {}".format(_at(e.domain, _PROD), _at(e.codomain, _TOP)), _TOP
        return "({} : {}) -> {}".format(e.name, _at(e.domain, _TOP),
                                        _at(e.codomain, _TOP)), _TOP
    if isinstance(e, IfExpr):
        return "if {} / {}. {} then {} else {}".format(
            _at(e.scrutinee, _TOP), e.name, _at(e.motive, _TOP),
            _at(e.thenBranch, _TOP), _at(e.elseBranch, _TOP)), _TOP
    raise TypeError("not a surface expression: {!r}".format(e))


def _at(e: Expr, level: int) -> str:
    text, prec = _expr(e)
    return _wrap(text, prec, level)


def _declaration(d: Declaration) -> str:
    if isinstance(d, Postulate):
        return "postulate {} : {}".format(d.name, _at(d.type, _TOP))
    if isinstance(d, Define):
        return "define {} : {} = {}".format(d.name, _at(d.type, _TOP), _at(d.body, _TOP))
    if isinstance(d, MetaDecl):
        return "meta {} : {}".format(d.name, _at(d.type, _TOP))
    if isinstance(d, Check):
        context = ''.join("({} : {}) ".format(x, _at(a, _TOP)) for x, a in d.context)
        if context:
            context += "|- "
        return "check {}{} : {}".format(context, _at(d.term, _TOP), _at(d.type, _TOP))
    raise TypeError("not a declaration: {!r}".format(d))


def render(node: Union[SourceFile, Declaration, Expr]) -> str:
    """ Render a surface tree as source text.

        :param node: A source file, a declaration, or an expression.
        :return: Text that parses back to an equal tree (positions aside).
    """
    if isinstance(node, SourceFile):
        return ''.join(_declaration(d) + "\n" for d in node.declarations)
    if isinstance(node, (Postulate, Define, MetaDecl, Check)):
        return _declaration(node)
    return _at(node, _TOP)
