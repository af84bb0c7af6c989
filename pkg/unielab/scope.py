"""
Scope checking: resolve the names of a parsed file to de Bruijn variables,
top-level constants and declared meta-variables, producing core terms.

Surface redexes (e.g., ``(\\x -> x) true``) are reduced on the way, since
core terms are always β-normal.
"""

from enum import IntEnum
import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

from .exceptions import InvariantViolation, ScopeError, TypeMismatch
from .normalize import elimApp, elimFst, elimIf, elimSnd
from .surface import (Apply, Check, Constant, Define, Expr, Ident, IfExpr,
                      Lambda, MetaDecl, Numeral, PairExpr, PiType, Postulate,
                      ProdType, Proj, SourceFile, Succ)
from .syntax import (BOOL, FALSE, NAT, SET, TRUE, ZERO, Context, Def, DefEnv,
                     Lam, Meta, Neutral, Pair, Pi, Prod, Signature, Term, Var,
                     numeral, sucTower)
from .types import Definition, Position

logger = logging.getLogger(__name__)

__all__ = ('DeclKind', 'Declaration', 'ScopedFile', 'scopeCheck')

_CONSTANTS = {'Set': SET, 'Bool': BOOL, 'Nat': NAT, 'true': TRUE,
              'false': FALSE, 'zero': ZERO}


class DeclKind(IntEnum):
    """ The kinds of top-level declaration. """
    POSTULATE = 0  #: A constant with a type and no body.
    DEFINE = 1  #: A constant with a type and a body.
    META = 2  #: A named meta-variable, added to the signature.
    CHECK = 3  #: A type-checking goal.


class Declaration(NamedTuple):
    """ A scope-checked declaration.

        :ivar name: The declared name (`None` for goals).
        :ivar type: The declared type, or the goal's type (in `ctx`).
        :ivar body: A definition's body, or a goal's term (in `ctx`).
        :ivar ctx: A goal's local context.
        :ivar metaId: The signature id of a declared meta-variable.
    """
    kind: DeclKind
    name: Optional[str]
    type: Term
    body: Optional[Term] = None
    ctx: Context = Context()
    metaId: Optional[int] = None
    position: Optional[Position] = None

    @property
    def label(self) -> str:
        """ A short description for reports. """
        where = "{}:{}".format(*self.position) if self.position else "?"
        if self.kind == DeclKind.CHECK:
            return "{}: check".format(where)
        return "{}: {} {}".format(where, self.kind.name.lower(), self.name)


class ScopedFile(NamedTuple):
    """ A whole file after scope checking. `signature` holds the declared
        meta-variables; `defs` the postulates and definitions.
    """
    declarations: Tuple[Declaration, ...]
    signature: Signature
    defs: DefEnv


class _Scope:
    """ Name resolution state for one file. """

    def __init__(self, signature: Signature):
        self.signature = signature
        self.defs: DefEnv = {}
        self.metas: Dict[str, int] = {}

    def declare(self, name: str, position: Optional[Position]):
        if name in self.defs or name in self.metas:
            raise ScopeError("duplicate declaration of {}".format(name), position)

    def resolve(self, ident: Ident, names: List[str]) -> Term:
        for i, bound in enumerate(reversed(names)):
            if bound == ident.name:
                return Neutral(Var(i))
        if ident.name in self.defs:
            return Neutral(Def(ident.name))
        if ident.name in self.metas:
            return Neutral(Meta(self.metas[ident.name]))
        raise ScopeError("unresolved identifier {}".format(ident.name), ident.position)

    def term(self, e: Expr, names: List[str]) -> Term:
        """ Translate an expression whose free names are `names` (innermost
            last) or top-level.
        """
        if isinstance(e, Ident):
            return self.resolve(e, names)
        if isinstance(e, Constant):
            return _CONSTANTS[e.word]
        if isinstance(e, Apply):
            return elimApp(self.term(e.function, names), self.term(e.argument, names))
        if isinstance(e, Lambda):
            return Lam(self.term(e.body, names + [e.name]), e.name)
        if isinstance(e, PiType):
            name = e.name if e.name is not None else '_'
            return Pi(self.term(e.domain, names), self.term(e.codomain, names + [name]),
                      name)
        if isinstance(e, ProdType):
            return Prod(self.term(e.left, names), self.term(e.right, names))
        if isinstance(e, PairExpr):
            return Pair(self.term(e.first, names), self.term(e.second, names))
        if isinstance(e, Numeral):
            return numeral(e.value)
        if isinstance(e, Succ):
            count = 0
            while isinstance(e, Succ):
                count, e = count + 1, e.argument
            return sucTower(count, self.term(e, names))
        if isinstance(e, Proj):
            t = self.term(e.argument, names)
            return elimFst(t) if e.which == 'fst' else elimSnd(t)
        if isinstance(e, IfExpr):
            return elimIf(self.term(e.scrutinee, names),
                          self.term(e.motive, names + [e.name]),
                          self.term(e.thenBranch, names),
                          self.term(e.elseBranch, names), e.name)
        raise TypeError("not a surface expression: {!r}".format(e))

    def declaration(self, d) -> Declaration:
        if isinstance(d, Postulate):
            self.declare(d.name, d.position)
            type_ = self.term(d.type, [])
            self.defs[d.name] = Definition(type_)
            return Declaration(DeclKind.POSTULATE, d.name, type_, position=d.position)

        if isinstance(d, Define):
            self.declare(d.name, d.position)
            type_ = self.term(d.type, [])
            body = self.term(d.body, [])
            self.defs[d.name] = Definition(type_, body)
            return Declaration(DeclKind.DEFINE, d.name, type_, body, position=d.position)

        if isinstance(d, MetaDecl):
            self.declare(d.name, d.position)
            type_ = self.term(d.type, [])
            self.signature, metaId = self.signature.extend(type_, d.name)
            self.metas[d.name] = metaId
            return Declaration(DeclKind.META, d.name, type_, metaId=metaId,
                               position=d.position)

        if isinstance(d, Check):
            ctx = Context()
            names: List[str] = []
            for name, e in d.context:
                ctx = ctx.extend(self.term(e, names), name)
                names.append(name)
            return Declaration(DeclKind.CHECK, None, self.term(d.type, names),
                               self.term(d.term, names), ctx, position=d.position)

        raise TypeError("not a declaration: {!r}".format(d))


def scopeCheck(source: SourceFile, signature: Optional[Signature] = None) -> ScopedFile:
    """ Resolve every name in a parsed file.

        :param source: The parsed file.
        :param signature: A signature to extend with the file's meta
            declarations; a new, empty one by default.
        :return: The core declarations in order, the signature of declared
            meta-variables, and the top-level constants.
        :raise ScopeError: On an unresolved identifier or a duplicate
            declaration.
        :raise TypeMismatch: If reducing a surface redex meets an
            ill-typed elimination (e.g., applying ``true``).
    """
    scope = _Scope(signature if signature is not None else Signature())
    declarations = []
    for d in source.declarations:
        try:
            declarations.append(scope.declaration(d))
        except InvariantViolation as err:
            raise TypeMismatch("{}: {}".format(
                "{}:{}".format(*d.position) if d.position else "?", err)) from err
    logger.debug("scope checked {} declaration(s), {} meta-variable(s)".format(
        len(declarations), len(scope.signature)))
    return ScopedFile(tuple(declarations), scope.signature, scope.defs)
