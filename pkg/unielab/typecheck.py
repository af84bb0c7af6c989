"""
The declarative system: bidirectional type checking and inference, type-
directed definitional equality with η for functions and pairs, and the
validity judgments for contexts, signatures and meta-variable
substitutions.

This is the reference the elaborator and the solver are tested against,
and the verifier used for ``--verify``. The `TypeChecker` methods raise;
the module-level functions wrap them and return a `Verdict`.
"""

import logging
from typing import Callable, Iterable, Optional

from .exceptions import BlockedError, ScopeError, TypeMismatch
from .normalize import (BlockedOn, applyMetaSubst, elimApp, elimFst, elimIf,
                        elimSnd, instantiate, whnf)
from .pretty import showTerm
from .results import Outcome, Verdict
from .syntax import (BOOL, FALSE, NAT, SET, TRUE, App, BoolType, Context, Def,
                     DefEnv, FalseTerm, Fst, Head, IfThenElse, Lam, Meta,
                     MetaSubst, NatType, Neutral, Pair, Pi, Prod, SetType,
                     Signature, Snd, Suc, Term, TrueTerm, Var, ZeroTerm, peelSuc,
                     shift, sucTower, var)

logger = logging.getLogger(__name__)

__all__ = ('TypeChecker', 'check', 'checkContext', 'checkMetaSubst',
           'checkSignature', 'convert', 'convertNeutral', 'infer')


def _combine(verdicts: Iterable[Callable[[], Verdict]]) -> Verdict:
    """ Run comparisons in order. A NO wins outright; otherwise any BLOCKED
        result is reported with the union of the blocking metas.
    """
    metas = set()
    for thunk in verdicts:
        v = thunk()
        if v.outcome == Outcome.NO:
            return v
        if v.outcome == Outcome.BLOCKED:
            metas.update(v.metas)
    if metas:
        return Verdict.blockedOn(metas)
    return Verdict.yes()


class TypeChecker:
    """ Checking, inference and conversion under a fixed signature,
        definitions environment and (optionally) meta-variable substitution.
        Instantiated meta-variables are seen through; uninstantiated ones are
        typed by the signature.

        :param sig: The signature typing meta-variables.
        :param defs: Top-level postulates and definitions.
        :param subst: Meta-variable instantiations to respect.
    """

    def __init__(self, sig: Signature, defs: Optional[DefEnv] = None,
                 subst: Optional[MetaSubst] = None):
        self.sig = sig
        self.defs = defs or {}
        self.subst = subst or {}

    # -----------------------------------------------------------------------
    # Helpers
    # -----------------------------------------------------------------------

    def norm(self, t: Term) -> Term:
        """ Apply the substitution, if there is one. """
        return applyMetaSubst(self.subst, t) if self.subst else t

    def reduce(self, t: Term):
        return whnf(self.sig, self.defs, t, self.subst)

    def shape(self, t: Term) -> Term:
        """ Weak head normal form of a type whose shape a rule needs.

            :raise BlockedError: If a meta-variable hides the shape.
        """
        r = self.reduce(t)
        if isinstance(r, BlockedOn):
            raise BlockedError(r.metas, "type {} is blocked".format(showTerm(r.stuck)))
        return r.whnf

    def headType(self, ctx: Context, head: Head) -> Term:
        """ The type of a neutral term's head.

            :raise ScopeError: For unknown variables, metas or constants.
        """
        if isinstance(head, Var):
            return self.norm(ctx.lookupVar(head.index))
        if isinstance(head, Meta):
            return self.norm(self.sig.typeOf(head.id))
        if isinstance(head, Def):
            if head.name not in self.defs:
                raise ScopeError("unknown constant {}".format(head.name))
            return self.defs[head.name].type
        raise TypeError("not a head: {!r}".format(head))

    def _mismatch(self, ctx: Context, t: Term, expected: str) -> TypeMismatch:
        return TypeMismatch("{} is not {}".format(showTerm(t, ctx.names), expected))

    # -----------------------------------------------------------------------
    # Checking and inference
    # -----------------------------------------------------------------------

    def checkTerm(self, ctx: Context, t: Term, ty: Term):
        """ Check ``Γ ⊢ t : A``.

            :raise TypeMismatch: If the judgment does not hold.
            :raise BlockedError: If a meta-variable hides a needed shape.
        """
        if isinstance(t, Neutral):
            actual = self.inferTerm(ctx, t)
            v = self.convertTerm(ctx, actual, ty, SET)
            if v.outcome == Outcome.NO:
                raise TypeMismatch("{} has type {}, expected {}".format(
                    showTerm(t, ctx.names), showTerm(actual, ctx.names),
                    showTerm(ty, ctx.names)))
            if v.outcome == Outcome.BLOCKED:
                raise BlockedError(v.metas)
            return

        a = self.shape(ty)

        if isinstance(t, (SetType, BoolType, NatType)):
            if not isinstance(a, SetType):
                raise self._mismatch(ctx, a, "Set, the type of {}".format(showTerm(t)))
        elif isinstance(t, (TrueTerm, FalseTerm)):
            if not isinstance(a, BoolType):
                raise self._mismatch(ctx, a, "Bool, the type of {}".format(showTerm(t)))
        elif isinstance(t, ZeroTerm):
            if not isinstance(a, NatType):
                raise self._mismatch(ctx, a, "Nat, the type of zero")
        elif isinstance(t, Suc):
            if not isinstance(a, NatType):
                raise self._mismatch(ctx, a, "Nat, the type of a successor")
            self.checkTerm(ctx, peelSuc(t)[1], NAT)
        elif isinstance(t, Pi):
            if not isinstance(a, SetType):
                raise self._mismatch(ctx, a, "Set, the type of a function type")
            self.checkTerm(ctx, t.domain, SET)
            self.checkTerm(ctx.extend(t.domain, t.name), t.codomain, SET)
        elif isinstance(t, Prod):
            if not isinstance(a, SetType):
                raise self._mismatch(ctx, a, "Set, the type of a pair type")
            self.checkTerm(ctx, t.left, SET)
            self.checkTerm(ctx, t.right, SET)
        elif isinstance(t, Lam):
            if not isinstance(a, Pi):
                raise self._mismatch(ctx, a, "a function type")
            self.checkTerm(ctx.extend(a.domain, t.name), t.body, a.codomain)
        elif isinstance(t, Pair):
            if not isinstance(a, Prod):
                raise self._mismatch(ctx, a, "a pair type")
            self.checkTerm(ctx, t.first, a.left)
            self.checkTerm(ctx, t.second, a.right)
        else:
            raise TypeMismatch("not a term: {!r}".format(t))

    def inferTerm(self, ctx: Context, n: Neutral) -> Term:
        """ Infer the type of a neutral term.

            :raise ScopeError: If the head is not in scope.
            :raise TypeMismatch: If an elimination does not fit the type.
        """
        if not isinstance(n, Neutral):
            raise TypeMismatch("cannot infer the type of {}".format(showTerm(n, ctx.names)))
        ty = self.headType(ctx, n.head)
        prefix: Term = Neutral(n.head)
        for e in n.elims:
            a = self.shape(ty)
            if isinstance(e, App):
                if not isinstance(a, Pi):
                    raise self._mismatch(ctx, a, "a function type, so {} cannot be applied"
                                         .format(showTerm(prefix, ctx.names)))
                self.checkTerm(ctx, e.argument, a.domain)
                ty = instantiate(a.codomain, e.argument)
                prefix = elimApp(prefix, e.argument)
            elif isinstance(e, IfThenElse):
                if not isinstance(a, BoolType):
                    raise self._mismatch(ctx, a, "Bool, so {} cannot be scrutinised"
                                         .format(showTerm(prefix, ctx.names)))
                self.checkTerm(ctx.extend(BOOL, e.name), e.motive, SET)
                self.checkTerm(ctx, e.thenBranch, instantiate(e.motive, TRUE))
                self.checkTerm(ctx, e.elseBranch, instantiate(e.motive, FALSE))
                ty = instantiate(e.motive, prefix)
                prefix = elimIf(prefix, e.motive, e.thenBranch, e.elseBranch, e.name)
            elif isinstance(e, (Fst, Snd)):
                if not isinstance(a, Prod):
                    raise self._mismatch(ctx, a, "a pair type, so {} cannot be projected"
                                         .format(showTerm(prefix, ctx.names)))
                ty = a.left if isinstance(e, Fst) else a.right
                prefix = elimFst(prefix) if isinstance(e, Fst) else elimSnd(prefix)
            else:
                raise TypeMismatch("not an elimination: {!r}".format(e))
        return ty

    # -----------------------------------------------------------------------
    # Definitional equality
    # -----------------------------------------------------------------------

    def convertTerm(self, ctx: Context, t: Term, u: Term, ty: Term) -> Verdict:
        """ Type-directed conversion ``Γ ⊢ t ≡ u : A``, with η for functions
            and pairs. Three-valued.
        """
        t, u = self.norm(t), self.norm(u)
        if t == u:
            return Verdict.yes()

        rty = self.reduce(ty)
        if isinstance(rty, BlockedOn):
            rt, ru = self.reduce(t), self.reduce(u)
            if (isinstance(rt.term, Neutral) and isinstance(ru.term, Neutral)
                    and not rt.blocked and not ru.blocked):
                v = self.convertNeutral(ctx, rt.term, ru.term)
                return Verdict(v.outcome, v.reason, v.metas)
            return Verdict.blockedOn(rty.metas)
        a = rty.whnf

        if isinstance(a, Pi):
            inner = ctx.extend(a.domain, a.name)
            return self.convertTerm(inner, elimApp(shift(t, 1), var(0)),
                                    elimApp(shift(u, 1), var(0)), a.codomain)
        if isinstance(a, Prod):
            return _combine((
                lambda: self.convertTerm(ctx, elimFst(t), elimFst(u), a.left),
                lambda: self.convertTerm(ctx, elimSnd(t), elimSnd(u), a.right)))

        rt, ru = self.reduce(t), self.reduce(u)
        if rt.blocked or ru.blocked:
            if (isinstance(rt.term, Neutral) and isinstance(ru.term, Neutral)
                    and rt.term.head == ru.term.head):
                v = self.convertNeutral(ctx, rt.term, ru.term)
                if v:
                    return Verdict.yes()
            return Verdict.blockedOn(getattr(rt, 'metas', frozenset())
                                     | getattr(ru, 'metas', frozenset()))
        t, u = rt.whnf, ru.whnf
        if t == u:
            return Verdict.yes()

        if isinstance(t, Neutral) and isinstance(u, Neutral):
            v = self.convertNeutral(ctx, t, u)
            return Verdict(v.outcome, v.reason, v.metas)

        if isinstance(a, SetType):
            if isinstance(t, Pi) and isinstance(u, Pi):
                return _combine((
                    lambda: self.convertTerm(ctx, t.domain, u.domain, SET),
                    lambda: self.convertTerm(ctx.extend(t.domain, t.name),
                                             t.codomain, u.codomain, SET)))
            if isinstance(t, Prod) and isinstance(u, Prod):
                return _combine((
                    lambda: self.convertTerm(ctx, t.left, u.left, SET),
                    lambda: self.convertTerm(ctx, t.right, u.right, SET)))
        elif isinstance(a, NatType):
            if isinstance(t, Suc) and isinstance(u, Suc):
                n, tBase = peelSuc(t)
                m, uBase = peelSuc(u)
                k = min(n, m)
                return self.convertTerm(ctx, sucTower(n - k, tBase),
                                        sucTower(m - k, uBase), NAT)

        return Verdict.no("{} ≠ {}".format(showTerm(t, ctx.names), showTerm(u, ctx.names)))

    def convertNeutral(self, ctx: Context, n: Neutral, m: Neutral) -> Verdict:
        """ Compare two neutral terms: equal heads, then equal spines
            pointwise, typing each argument by the left-hand prefix.

            :return: A `Verdict`; a YES carries the common type as `value`.
        """
        if n.head != m.head or len(n.elims) != len(m.elims):
            return Verdict.no("{} ≠ {}".format(showTerm(n, ctx.names), showTerm(m, ctx.names)))
        try:
            ty = self.headType(ctx, n.head)
        except ScopeError as err:
            return Verdict.no(str(err))

        prefix: Term = Neutral(n.head)
        metas = set()
        for e1, e2 in zip(n.elims, m.elims):
            if type(e1) is not type(e2):
                return Verdict.no("{} ≠ {}".format(showTerm(n, ctx.names),
                                                  showTerm(m, ctx.names)))
            r = self.reduce(ty)
            if isinstance(r, BlockedOn):
                return Verdict.blockedOn(metas | r.metas)
            a = r.whnf
            if isinstance(e1, App):
                if not isinstance(a, Pi):
                    return Verdict.no("{} is not a function".format(showTerm(prefix, ctx.names)))
                v = self.convertTerm(ctx, e1.argument, e2.argument, a.domain)
                if v.outcome == Outcome.NO:
                    return v
                metas.update(v.metas)
                ty = instantiate(a.codomain, e1.argument)
                prefix = elimApp(prefix, e1.argument)
            elif isinstance(e1, IfThenElse):
                if not isinstance(a, BoolType):
                    return Verdict.no("{} is not a boolean".format(showTerm(prefix, ctx.names)))
                motive = e1.motive
                v = _combine((
                    lambda: self.convertTerm(ctx.extend(BOOL, e1.name), motive, e2.motive, SET),
                    lambda: self.convertTerm(ctx, e1.thenBranch, e2.thenBranch,
                                             instantiate(motive, TRUE)),
                    lambda: self.convertTerm(ctx, e1.elseBranch, e2.elseBranch,
                                             instantiate(motive, FALSE))))
                if v.outcome == Outcome.NO:
                    return v
                metas.update(v.metas)
                ty = instantiate(motive, prefix)
                prefix = elimIf(prefix, motive, e1.thenBranch, e1.elseBranch, e1.name)
            else:
                if not isinstance(a, Prod):
                    return Verdict.no("{} is not a pair".format(showTerm(prefix, ctx.names)))
                if isinstance(e1, Fst):
                    ty, prefix = a.left, elimFst(prefix)
                else:
                    ty, prefix = a.right, elimSnd(prefix)
        if metas:
            return Verdict.blockedOn(metas)
        return Verdict.yes(ty)


# ===========================================================================
# Module-level judgments
# ===========================================================================

def _judge(fn, *args) -> Verdict:
    try:
        result = fn(*args)
    except TypeMismatch as err:
        return Verdict.no(str(err))
    except BlockedError as err:
        return Verdict.blockedOn(err.metas)
    return Verdict.yes(result)


def check(sig: Signature, defs: Optional[DefEnv], ctx: Context, t: Term, ty: Term,
          subst: Optional[MetaSubst] = None) -> Verdict:
    """ Check ``Σ; Γ ⊢ t : A``.

        :return: YES, NO with a reason, or BLOCKED when a meta-variable hides
            the shape of a type a rule needs.
        :raise ScopeError: If a variable, meta or constant is not in scope.
    """
    tc = TypeChecker(sig, defs, subst)
    return _judge(tc.checkTerm, ctx, tc.norm(t), tc.norm(ty))


def infer(sig: Signature, defs: Optional[DefEnv], ctx: Context, n: Term,
          subst: Optional[MetaSubst] = None) -> Verdict:
    """ Infer the type of the neutral term `n`; a YES carries it as `value`.

        :raise ScopeError: If the head is not in scope.
    """
    tc = TypeChecker(sig, defs, subst)
    return _judge(tc.inferTerm, ctx, tc.norm(n))


def convert(sig: Signature, defs: Optional[DefEnv], ctx: Context, t: Term, u: Term,
            ty: Term, subst: Optional[MetaSubst] = None) -> Verdict:
    """ Decide ``Γ ⊢ t ≡ u : A``. Both sides are assumed to have type `ty`. """
    return TypeChecker(sig, defs, subst).convertTerm(ctx, t, u, ty)


def convertNeutral(sig: Signature, defs: Optional[DefEnv], ctx: Context, n: Neutral,
                   m: Neutral, subst: Optional[MetaSubst] = None) -> Verdict:
    """ Compare two neutral terms; a YES carries their type as `value`. """
    tc = TypeChecker(sig, defs, subst)
    return tc.convertNeutral(ctx, tc.norm(n), tc.norm(m))


def checkContext(sig: Signature, ctx: Context, defs: Optional[DefEnv] = None,
                 subst: Optional[MetaSubst] = None) -> Verdict:
    """ Check that every binding's type is a type in the bindings before it.
    """
    for i, binding in enumerate(ctx):
        try:
            v = check(sig, defs, ctx.prefix(i), binding.type, SET, subst)
        except ScopeError as err:
            v = Verdict.no(str(err))
        if not v:
            return v._replace(reason="context entry {}: {}".format(binding.name, v.reason))
    return Verdict.yes()


def checkSignature(sig: Signature, defs: Optional[DefEnv] = None) -> Verdict:
    """ Check that every meta-variable's type is a closed type in the
        signature before it.
    """
    empty = Context()
    for metaId, info in sig.items():
        try:
            v = check(sig.prefix(metaId), defs, empty, info.type, SET)
        except ScopeError as err:
            v = Verdict.no(str(err))
        if not v:
            return v._replace(reason="?{}: {}".format(metaId, v.reason))
    return Verdict.yes()


def checkMetaSubst(target: Signature, theta: MetaSubst, source: Signature,
                   defs: Optional[DefEnv] = None) -> Verdict:
    """ Check ``Ξ ⊢ θ : Σ``: every meta-variable of `source` is mapped to a
        closed term of its (substituted) type under `target`. Meta-variables
        `theta` leaves alone must be in `target`.

        :param target: The signature Ξ the instantiations live in.
        :param theta: The substitution.
        :param source: The signature Σ whose meta-variables are instantiated.
    """
    empty = Context()
    for metaId, info in source.items():
        t = applyMetaSubst(theta, Neutral(Meta(metaId)))
        ty = applyMetaSubst(theta, info.type)
        try:
            v = check(target, defs, empty, t, ty, theta)
        except ScopeError as err:
            v = Verdict.no(str(err))
        if not v:
            name = info.name or "?{}".format(metaId)
            return v._replace(reason="{} := {}: {}".format(name, showTerm(t), v.reason))
    return Verdict.yes()
