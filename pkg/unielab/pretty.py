"""
Rendering of core terms, contexts and constraints as text.

Output uses the ASCII surface syntax where a construct has one. Meta-
variables print as ``?N``, variables by their binder's display name
(freshened when shadowed), and closed ``suc`` towers as numerals.
"""

from typing import List, Optional, Sequence, Tuple

from .syntax import (App, BoolType, Context, Def, FalseTerm, Fst, IfThenElse,
                     Lam, Meta, NatType, Neutral, Pair, Pi, Prod, SetType, Snd,
                     Suc, Term, TrueTerm, Var, ZeroTerm, freeVars, peelSuc)

__all__ = ('contextNames', 'showConstraint', 'showContext', 'showEquation',
           'showTerm')

# Precedence levels: binders/arrows, products, applications, atoms.
_TOP, _PROD, _APP, _ATOM = range(4)


def _fresh(name: str, names: Sequence[str]) -> str:
    if not name or name == '_':
        return '_'
    candidate = name
    i = 1
    while candidate in names:
        candidate = "{}{}".format(name, i)
        i += 1
    return candidate


def _paren(rendered: Tuple[str, int], level: int) -> str:
    text, prec = rendered
    return text if prec >= level else "({})".format(text)


def _render(t: Term, names: List[str]) -> Tuple[str, int]:
    if isinstance(t, SetType):
        return "Set", _ATOM
    if isinstance(t, BoolType):
        return "Bool", _ATOM
    if isinstance(t, NatType):
        return "Nat", _ATOM
    if isinstance(t, TrueTerm):
        return "true", _ATOM
    if isinstance(t, FalseTerm):
        return "false", _ATOM
    if isinstance(t, ZeroTerm):
        return "zero", _ATOM
    if isinstance(t, Suc):
        n, inner = peelSuc(t)
        if isinstance(inner, ZeroTerm):
            return str(n), _ATOM
        text = _paren(_render(inner, names), _ATOM)
        for _i in range(n - 1):
            text = "(suc {})".format(text)
        return "suc {}".format(text), _APP
    if isinstance(t, Pi):
        dom = _paren(_render(t.domain, names), _PROD)
        if 0 not in freeVars(t.codomain):
            cod = _render(t.codomain, names + ['_'])[0]
            return "{} -> {}".format(dom, cod), _TOP
        x = _fresh(t.name if t.name != '_' else 'x', names)
        cod = _render(t.codomain, names + [x])[0]
        dom = _render(t.domain, names)[0]
        return "({} : {}) -> {}".format(x, dom, cod), _TOP
    if isinstance(t, Lam):
        used = 0 in freeVars(t.body)
        x = _fresh('x' if used and t.name == '_' else t.name, names)
        return "\\{} -> {}".format(x, _render(t.body, names + [x])[0]), _TOP
    if isinstance(t, Prod):
        return "{} * {}".format(_paren(_render(t.left, names), _APP),
                                _paren(_render(t.right, names), _PROD)), _PROD
    if isinstance(t, Pair):
        return "({}, {})".format(_render(t.first, names)[0],
                                 _render(t.second, names)[0]), _ATOM
    if isinstance(t, Neutral):
        return _renderNeutral(t, names)
    return repr(t), _ATOM


def _renderNeutral(t: Neutral, names: List[str]) -> Tuple[str, int]:
    h = t.head
    if isinstance(h, Var):
        if 0 <= h.index < len(names):
            text = names[len(names) - 1 - h.index]
        else:
            text = "#{}".format(h.index)
    elif isinstance(h, Meta):
        text = "?{}".format(h.id)
    elif isinstance(h, Def):
        text = h.name
    else:
        text = "<{!r}>".format(h)
    cur = (text, _ATOM)
    for e in t.elims:
        if isinstance(e, App):
            cur = ("{} {}".format(_paren(cur, _APP),
                                  _paren(_render(e.argument, names), _ATOM)), _APP)
        elif isinstance(e, IfThenElse):
            x = _fresh(e.name, names)
            cur = ("if {} / {}. {} then {} else {}".format(
                _paren(cur, _PROD), x, _render(e.motive, names + [x])[0],
                _render(e.thenBranch, names)[0], _render(e.elseBranch, names)[0]), _TOP)
        elif isinstance(e, Fst):
            cur = ("fst {}".format(_paren(cur, _ATOM)), _APP)
        elif isinstance(e, Snd):
            cur = ("snd {}".format(_paren(cur, _ATOM)), _APP)
    return cur


def showTerm(t: Term, names: Optional[Sequence[str]] = None) -> str:
    """ Render a term.

        :param t: The term.
        :param names: Display names of the context's variables, outermost
            first.
    """
    return _render(t, list(names or ()))[0]


def contextNames(ctx: Context) -> List[str]:
    names: List[str] = []
    for b in ctx:
        names.append(_fresh(b.name, names) if b.name != '_' else '_')
    return names


def showContext(ctx: Context) -> str:
    """ Render a context as comma-separated ``x : A`` bindings, or ``.`` if
        it is empty.
    """
    if not len(ctx):
        return "."
    names = contextNames(ctx)
    return ", ".join("{} : {}".format(names[i], showTerm(b.type, names[:i]))
                     for i, b in enumerate(ctx))


def showConstraint(c) -> str:
    """ Render a heterogeneous constraint as
        ``<ctx> |- <t> : <A> = <u> : <B>``.
    """
    names = contextNames(c.ctx)
    return "{} |- {} : {} = {} : {}".format(
        showContext(c.ctx), showTerm(c.lhsTerm, names), showTerm(c.lhsType, names),
        showTerm(c.rhsTerm, names), showTerm(c.rhsType, names))


def showEquation(eq) -> str:
    """ Render a homogeneous equation as ``<ctx> |- <t> = <u> : <A>``. """
    names = contextNames(eq.ctx)
    return "{} |- {} = {} : {}".format(
        showContext(eq.ctx), showTerm(eq.lhs, names), showTerm(eq.rhs, names),
        showTerm(eq.type, names))
