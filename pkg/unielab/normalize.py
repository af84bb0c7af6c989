"""
Hereditary substitution, redex elimination, meta-variable substitution and
blocking-aware weak head normalisation.

Substitution re-normalises as it goes: replacing the head of a neutral term
with a canonical term eliminates the spine on the spot, so every result is
β-normal. Definitions are only unfolded by `whnf`.
"""

import logging
from typing import Dict, FrozenSet, Iterable, NamedTuple, Optional, Union

from .exceptions import InvariantViolation, ScopeError
from .syntax import (App, Def, DefEnv, Elim, FalseTerm, Fst, IfThenElse, Lam,
                     Meta, MetaSubst, Neutral, Pair, Pi, Prod, Signature, Snd,
                     Suc, Term, TrueTerm, Var, metasOf, peelSuc, shift,
                     sucTower)

logger = logging.getLogger(__name__)

__all__ = ('BlockedOn', 'MAX_STEPS', 'NotBlocked', 'Reducer', 'applyMetaSubst',
           'elimApp', 'elimFst', 'elimIf', 'elimSnd', 'elimSpine',
           'instantiate', 'renameVars', 'resolveMetaSubst', 'subst', 'whnf')

#: Maximum number of reduction steps in a single top-level operation.
MAX_STEPS = 10 ** 6


# ===========================================================================
# Blocking results
# ===========================================================================

class NotBlocked(NamedTuple):
    """ A weak head normal form with a canonical or rigid head. """
    whnf: Term

    @property
    def term(self) -> Term:
        return self.whnf

    @property
    def blocked(self) -> bool:
        return False


class BlockedOn(NamedTuple):
    """ A term whose head is an uninstantiated meta-variable. `metas` are the
        meta-variables whose instantiation could change the head.
    """
    metas: FrozenSet[int]
    stuck: Term

    @property
    def term(self) -> Term:
        return self.stuck

    @property
    def blocked(self) -> bool:
        return True


Blocked = Union[NotBlocked, BlockedOn]


# ===========================================================================
#
# ===========================================================================

class Reducer:
    """ Performs hereditary substitution and elimination, counting steps.
        One instance is used per top-level operation; running out of steps
        raises `InvariantViolation`.

        :param fuel: The number of steps allowed.
    """

    def __init__(self, fuel: int = MAX_STEPS):
        self.initialFuel = fuel
        self.fuel = fuel

    def _tick(self, cost: int = 1):
        self.fuel -= cost
        if self.fuel < 0:
            raise InvariantViolation("normalisation did not finish within {} steps"
                                     .format(self.initialFuel))

    # -----------------------------------------------------------------------
    # Eliminations
    # -----------------------------------------------------------------------

    def elimApp(self, t: Term, u: Term) -> Term:
        self._tick()
        if isinstance(t, Lam):
            return self.substVar(t.body, 0, u)
        if isinstance(t, Neutral):
            return Neutral(t.head, t.elims + (App(u),))
        raise InvariantViolation("cannot apply a non-function: {!r}".format(t))

    def elimIf(self, t: Term, motive: Term, thenBranch: Term, elseBranch: Term,
               name: str = 'x') -> Term:
        self._tick()
        if isinstance(t, TrueTerm):
            return thenBranch
        if isinstance(t, FalseTerm):
            return elseBranch
        if isinstance(t, Neutral):
            return Neutral(t.head, t.elims + (IfThenElse(motive, thenBranch, elseBranch, name),))
        raise InvariantViolation("if on a non-boolean: {!r}".format(t))

    def elimProj(self, t: Term, proj: Union[Fst, Snd]) -> Term:
        self._tick()
        if isinstance(t, Pair):
            return t.first if isinstance(proj, Fst) else t.second
        if isinstance(t, Neutral):
            return Neutral(t.head, t.elims + (proj,))
        raise InvariantViolation("projection of a non-pair: {!r}".format(t))

    def elim(self, t: Term, e: Elim) -> Term:
        if isinstance(e, App):
            return self.elimApp(t, e.argument)
        if isinstance(e, IfThenElse):
            return self.elimIf(t, e.motive, e.thenBranch, e.elseBranch, e.name)
        return self.elimProj(t, e)

    def elimSpine(self, t: Term, elims: Iterable[Elim]) -> Term:
        for e in elims:
            t = self.elim(t, e)
        return t

    # -----------------------------------------------------------------------
    # Substitution
    # -----------------------------------------------------------------------

    def _walk(self, t: Term, depth: int, resolve) -> Term:
        """ Rebuild `t`, letting `resolve(head, depth)` replace each head by
            another head or by a term. A replaced spine is eliminated.
        """
        self._tick()
        if isinstance(t, Neutral):
            elims = []
            for e in t.elims:
                if isinstance(e, App):
                    elims.append(App(self._walk(e.argument, depth, resolve)))
                elif isinstance(e, IfThenElse):
                    elims.append(IfThenElse(self._walk(e.motive, depth + 1, resolve),
                                            self._walk(e.thenBranch, depth, resolve),
                                            self._walk(e.elseBranch, depth, resolve),
                                            e.name))
                else:
                    elims.append(e)
            h = resolve(t.head, depth)
            if isinstance(h, (Var, Meta, Def)):
                return Neutral(h, tuple(elims))
            return self.elimSpine(h, elims)
        if isinstance(t, Pi):
            return Pi(self._walk(t.domain, depth, resolve),
                      self._walk(t.codomain, depth + 1, resolve), t.name)
        if isinstance(t, Lam):
            return Lam(self._walk(t.body, depth + 1, resolve), t.name)
        if isinstance(t, Prod):
            return Prod(self._walk(t.left, depth, resolve),
                        self._walk(t.right, depth, resolve))
        if isinstance(t, Pair):
            return Pair(self._walk(t.first, depth, resolve),
                        self._walk(t.second, depth, resolve))
        if isinstance(t, Suc):
            count, base = peelSuc(t)
            self._tick(count - 1)
            return sucTower(count, self._walk(base, depth, resolve))
        return t

    def substVar(self, t: Term, index: int, u: Term) -> Term:
        """ Replace variable `index` of `t` with `u`. `u` lives in the context
            of `t` with that variable removed; so does the result.
        """
        def resolve(h, depth):
            if isinstance(h, Var) and h.index >= depth:
                free = h.index - depth
                if free == index:
                    return shift(u, depth)
                if free > index:
                    return Var(h.index - 1)
            return h

        return self._walk(t, 0, resolve)

    def renameVars(self, t: Term, mapping: Dict[int, int]) -> Term:
        """ Rename the free variables of `t` by `mapping`.

            :raise ScopeError: If a free variable has no image.
        """
        def resolve(h, depth):
            if isinstance(h, Var) and h.index >= depth:
                free = h.index - depth
                if free not in mapping:
                    raise ScopeError("variable #{} escapes its scope".format(free))
                return Var(mapping[free] + depth)
            return h

        return self._walk(t, 0, resolve)

    def substMeta(self, t: Term, metaId: int, u: Term) -> Term:
        """ Replace meta-variable `metaId` in `t` with the closed term `u`. """
        def resolve(h, _depth):
            if isinstance(h, Meta) and h.id == metaId:
                return u
            return h

        return self._walk(t, 0, resolve)

    def _resolveMetas(self, theta: MetaSubst, roots: Iterable[int],
                      resolved: Dict[int, Term]):
        """ Fill `resolved` with the fully substituted value of every
            meta-variable of `theta` reachable from `roots`. Values are
            computed in dependency order, so chains of instantiations are
            followed without recursion.

            :raise InvariantViolation: If the instantiations are cyclic.
        """
        def resolve(h, _depth):
            if isinstance(h, Meta) and h.id in theta:
                return resolved[h.id]
            return h

        def cyclic(metaId):
            return InvariantViolation("cyclic meta-variable substitution at ?{}"
                                      .format(metaId))

        active = set()
        stack = [(m, False) for m in roots if m in theta]
        while stack:
            metaId, expanded = stack.pop()
            if metaId in resolved:
                continue
            if expanded:
                active.discard(metaId)
                resolved[metaId] = self._walk(theta[metaId], 0, resolve)
                continue
            if metaId in active:
                raise cyclic(metaId)
            active.add(metaId)
            stack.append((metaId, True))
            for m in metasOf(theta[metaId]):
                if m in theta and m not in resolved:
                    if m in active:
                        raise cyclic(m)
                    stack.append((m, False))

    def applyMetaSubst(self, theta: MetaSubst, t: Term,
                       resolved: Optional[Dict[int, Term]] = None) -> Term:
        """ Replace every meta-variable in the domain of `theta`, following
            instantiations that mention further instantiated meta-variables.

            :param resolved: Values already worked out for `theta`, shared
                between calls; filled in as a side effect.
        """
        if not theta:
            return t
        if resolved is None:
            resolved = {}
        self._resolveMetas(theta, metasOf(t), resolved)

        def resolve(h, _depth):
            if isinstance(h, Meta) and h.id in theta:
                return resolved[h.id]
            return h

        return self._walk(t, 0, resolve)

    def resolveMetaSubst(self, theta: MetaSubst) -> MetaSubst:
        """ The idempotent form of `theta`: every value with all the
            instantiated meta-variables in it replaced.
        """
        resolved: Dict[int, Term] = {}
        self._resolveMetas(theta, sorted(theta), resolved)
        return {k: resolved[k] for k in theta}


# ===========================================================================
# Module-level operations, each with a fresh step budget
# ===========================================================================

def subst(t: Term, head: Union[Var, Meta], u: Term) -> Term:
    """ Hereditary substitution ``t[h := u]``.

        :param t: The term to substitute into.
        :param head: A `Var` (the variable is removed from the context; `u`
            and the result live in the remaining context) or a `Meta` (`u`
            must be closed).
        :param u: The β-normal replacement.
        :return: A β-normal term.
        :raise InvariantViolation: If an ill-typed elimination is met.
    """
    if isinstance(head, Var):
        return Reducer().substVar(t, head.index, u)
    if isinstance(head, Meta):
        return Reducer().substMeta(t, head.id, u)
    raise TypeError("can only substitute for a variable or meta-variable, not {!r}"
                    .format(head))


def instantiate(body: Term, u: Term) -> Term:
    """ Substitute `u` for the innermost bound variable of `body`. """
    return Reducer().substVar(body, 0, u)


def elimApp(t: Term, u: Term) -> Term:
    """ Apply `t` to `u`: β-reduce a λ, or extend a neutral spine. """
    return Reducer().elimApp(t, u)


def elimIf(scrutinee: Term, motive: Term, thenBranch: Term, elseBranch: Term,
           name: str = 'x') -> Term:
    """ Boolean elimination: pick a branch for a literal, or build a stuck
        neutral term.
    """
    return Reducer().elimIf(scrutinee, motive, thenBranch, elseBranch, name)


def elimFst(t: Term) -> Term:
    return Reducer().elimProj(t, Fst())


def elimSnd(t: Term) -> Term:
    return Reducer().elimProj(t, Snd())


def elimSpine(t: Term, elims: Iterable[Elim]) -> Term:
    return Reducer().elimSpine(t, elims)


def renameVars(t: Term, mapping: Dict[int, int]) -> Term:
    return Reducer().renameVars(t, mapping)


def applyMetaSubst(theta: MetaSubst, t: Term) -> Term:
    """ Replace meta-variables by their instantiations in `theta`.
        Meta-variables outside its domain are left in place.
    """
    return Reducer().applyMetaSubst(theta, t)


def resolveMetaSubst(theta: MetaSubst) -> MetaSubst:
    """ Make `theta` idempotent: no value mentions a meta-variable that
        `theta` instantiates.
    """
    return Reducer().resolveMetaSubst(theta)


def whnf(sig: Optional[Signature], defs: Optional[DefEnv], t: Term,
         subst: Optional[MetaSubst] = None) -> Blocked:
    """ Reduce a term to weak head normal form.

        Instantiated meta-variables (those in `subst`) are replaced and
        definitions with bodies are unfolded until the head is canonical, a
        variable, a postulate, or an uninstantiated meta-variable.

        :param sig: The signature (unused by reduction itself; accepted so
            callers can pass their full environment).
        :param defs: Top-level definitions, for δ-unfolding.
        :param t: The term to reduce.
        :param subst: Meta-variable instantiations to respect.
        :return: `NotBlocked` for canonical and rigid terms, `BlockedOn` for
            terms headed by an uninstantiated meta-variable.
    """
    reducer = Reducer()
    defs = defs or {}
    while isinstance(t, Neutral):
        reducer._tick()
        h = t.head
        if isinstance(h, Meta):
            if subst and h.id in subst:
                t = reducer.elimSpine(subst[h.id], t.elims)
                continue
            return BlockedOn(frozenset((h.id,)), t)
        if isinstance(h, Def):
            d = defs.get(h.name)
            if d is not None and d.body is not None:
                t = reducer.elimSpine(d.body, t.elims)
                continue
        return NotBlocked(t)
    return NotBlocked(t)
