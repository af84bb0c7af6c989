"""
Elaboration: compile a type-checking problem into an extended signature, a
well-typed approximation of the term, and heterogeneous unification
constraints, in a single traversal.

Every rule follows one recipe. Subterms are elaborated first, against fresh
meta-variables standing for the types the rule does not know yet. The rule
then builds its term from the elaborated subterms, adds one more meta-
variable of the expected type to stand for the result, and emits a
constraint equating the built term (at its own type) with that meta-
variable (at the expected type). The result constraint comes first, then
the subterms' constraints from left to right.
"""

import logging
from typing import List, NamedTuple, Optional, Tuple

from .exceptions import ScopeError, TypeMismatch
from .normalize import elimApp, elimFst, elimIf, elimSnd, instantiate
from .results import Verdict
from .syntax import (BOOL, FALSE, NAT, SET, TRUE, App, BoolType, Context, Def,
                     DefEnv, FalseTerm, Fst, IfThenElse, Lam, Meta, NatType,
                     Neutral, Pair, Pi, Prod, SetType, Signature, Snd, Suc,
                     Term, TrueTerm, Var, ZeroTerm, peelSuc, termSize)
from . import typecheck

logger = logging.getLogger(__name__)

__all__ = ('Constraint', 'ElabOutput', 'Elaborator', 'checkConstraint',
           'elaborateCheck', 'elaborateInfer', 'elaborateType', 'freshMeta',
           'uselessElaboration')


# ===========================================================================
#
# ===========================================================================

class Constraint(NamedTuple):
    """ A heterogeneous equation ``Γ ⊢ t : A = u : B``. It is well formed
        when ``Γ ⊢ t : A`` and ``Γ ⊢ u : B``; the two types need not be
        equal yet.
    """
    ctx: Context
    lhsTerm: Term
    lhsType: Term
    rhsTerm: Term
    rhsType: Term

    def __str__(self):
        from .pretty import showConstraint
        return showConstraint(self)


class ElabOutput(NamedTuple):
    """ The result of elaborating one term.

        :ivar signature: The input signature, extended with fresh metas.
        :ivar term: The elaborated term.
        :ivar constraints: The constraints, in emission order.
        :ivar inferredType: The type of `term` (inference mode only).
        :ivar freshMetas: Ids of the meta-variables this call created.
    """
    signature: Signature
    term: Term
    constraints: Tuple[Constraint, ...]
    inferredType: Optional[Term] = None
    freshMetas: Tuple[int, ...] = ()


class Elaborator:
    """ Elaborates terms, threading the signature through one traversal.
        The `signature` attribute grows as meta-variables are created.

        :param signature: The starting signature.
        :param defs: Top-level postulates and definitions.
    """

    def __init__(self, signature: Signature, defs: Optional[DefEnv] = None):
        self.signature = signature
        self.defs = defs or {}
        self.created: List[int] = []

    def freshMeta(self, ctx: Context, type: Term) -> Term:
        """ Add a meta-variable of type ``Γ → A`` and return it applied to
            every variable of Γ, a term of type `A` in Γ.
        """
        self.signature, metaId = self.signature.extend(ctx.telescope(type))
        self.created.append(metaId)
        return Neutral(Meta(metaId), tuple(App(v) for v in ctx.variables()))

    def _result(self, ctx: Context, built: Term, builtType: Term, expected: Term,
                sub: List[Constraint]) -> Tuple[Term, List[Constraint]]:
        alpha = self.freshMeta(ctx, expected)
        return alpha, [Constraint(ctx, built, builtType, alpha, expected)] + sub

    # -----------------------------------------------------------------------
    # Checking mode
    # -----------------------------------------------------------------------

    def check(self, ctx: Context, t: Term, expected: Term) -> Tuple[Term, List[Constraint]]:
        """ Elaborate `t` against `expected`.

            :return: The elaborated term (always the result meta-variable
                applied to the context) and the constraints.
            :raise ScopeError: If `t` mentions anything out of scope.
        """
        if isinstance(t, (SetType, BoolType, NatType)):
            return self._result(ctx, t, SET, expected, [])

        if isinstance(t, (TrueTerm, FalseTerm)):
            return self._result(ctx, t, BOOL, expected, [])

        if isinstance(t, ZeroTerm):
            return self._result(ctx, t, NAT, expected, [])

        if isinstance(t, Suc):
            return self._checkSucs(ctx, t, expected)

        if isinstance(t, Pi):
            dom, sub1 = self.check(ctx, t.domain, SET)
            cod, sub2 = self.check(ctx.extend(dom, t.name), t.codomain, SET)
            return self._result(ctx, Pi(dom, cod, t.name), SET, expected, sub1 + sub2)

        if isinstance(t, Prod):
            left, sub1 = self.check(ctx, t.left, SET)
            right, sub2 = self.check(ctx, t.right, SET)
            return self._result(ctx, Prod(left, right), SET, expected, sub1 + sub2)

        if isinstance(t, Lam):
            beta = self.freshMeta(ctx, SET)
            inner = ctx.extend(beta, t.name)
            gamma = self.freshMeta(inner, SET)
            body, sub = self.check(inner, t.body, gamma)
            return self._result(ctx, Lam(body, t.name), Pi(beta, gamma, t.name),
                                expected, sub)

        if isinstance(t, Pair):
            beta = self.freshMeta(ctx, SET)
            gamma = self.freshMeta(ctx, SET)
            first, sub1 = self.check(ctx, t.first, beta)
            second, sub2 = self.check(ctx, t.second, gamma)
            return self._result(ctx, Pair(first, second), Prod(beta, gamma),
                                expected, sub1 + sub2)

        if isinstance(t, Neutral):
            n, ty, sub = self.infer(ctx, t)
            return self._result(ctx, n, ty, expected, sub)

        raise TypeMismatch("cannot elaborate {!r}".format(t))

    def _checkSucs(self, ctx: Context, t: Suc, expected: Term) -> Tuple[Term, List[Constraint]]:
        """ Elaborate a chain of `Suc` nodes in a loop, innermost first. The
            metas and constraints are those of elaborating one `Suc` at a
            time.
        """
        count, base = peelSuc(t)
        pred, sub = self.check(ctx, base, NAT)
        chain: List[Constraint] = []
        for i in range(count):
            ty = expected if i == count - 1 else NAT
            alpha = self.freshMeta(ctx, ty)
            chain.append(Constraint(ctx, Suc(pred), NAT, alpha, ty))
            pred = alpha
        chain.reverse()
        return pred, chain + sub

    # -----------------------------------------------------------------------
    # Inference mode
    # -----------------------------------------------------------------------

    def headType(self, ctx: Context, head) -> Term:
        if isinstance(head, Var):
            return ctx.lookupVar(head.index)
        if isinstance(head, Meta):
            return self.signature.typeOf(head.id)
        if isinstance(head, Def):
            if head.name not in self.defs:
                raise ScopeError("unknown constant {}".format(head.name))
            return self.defs[head.name].type
        raise TypeMismatch("not a head: {!r}".format(head))

    def infer(self, ctx: Context, n: Neutral) -> Tuple[Term, Term, List[Constraint]]:
        """ Elaborate a neutral term, inferring its type.

            :return: The elaborated term, its type, and the constraints.
        """
        if not isinstance(n, Neutral):
            raise TypeMismatch("cannot infer the type of {!r}".format(n))
        if not n.elims:
            return n, self.headType(ctx, n.head), []

        prefix = Neutral(n.head, n.elims[:-1])
        last = n.elims[-1]

        if isinstance(last, App):
            beta = self.freshMeta(ctx, SET)
            gamma = self.freshMeta(ctx.extend(beta), SET)
            # The argument's metas are numbered before the function's.
            arg, sub2 = self.check(ctx, last.argument, beta)
            fn, sub1 = self.check(ctx, prefix, Pi(beta, gamma))
            return elimApp(fn, arg), instantiate(gamma, arg), sub1 + sub2

        if isinstance(last, IfThenElse):
            motive, sub1 = self.check(ctx.extend(BOOL, last.name), last.motive, SET)
            scrutinee, sub2 = self.check(ctx, prefix, BOOL)
            thenB, sub3 = self.check(ctx, last.thenBranch, instantiate(motive, TRUE))
            elseB, sub4 = self.check(ctx, last.elseBranch, instantiate(motive, FALSE))
            term = elimIf(scrutinee, motive, thenB, elseB, last.name)
            return term, instantiate(motive, scrutinee), sub1 + sub2 + sub3 + sub4

        if isinstance(last, (Fst, Snd)):
            beta = self.freshMeta(ctx, SET)
            gamma = self.freshMeta(ctx, SET)
            pair, sub = self.check(ctx, prefix, Prod(beta, gamma))
            if isinstance(last, Fst):
                return elimFst(pair), beta, sub
            return elimSnd(pair), gamma, sub

        raise TypeMismatch("not an elimination: {!r}".format(last))

    def output(self, term: Term, constraints: List[Constraint],
               inferredType: Optional[Term] = None) -> ElabOutput:
        return ElabOutput(self.signature, term, tuple(constraints), inferredType,
                          tuple(self.created))


# ===========================================================================
# Module-level operations
# ===========================================================================

def freshMeta(sig: Signature, ctx: Context, type: Term) -> Tuple[Signature, Term]:
    """ Extend `sig` with a meta-variable ``α : Γ → A``.

        :return: The new signature and ``α Γ``.
    """
    elab = Elaborator(sig)
    term = elab.freshMeta(ctx, type)
    return elab.signature, term


def elaborateCheck(sig: Signature, defs: Optional[DefEnv], ctx: Context, t: Term,
                   type: Term) -> ElabOutput:
    """ Elaborate ``Σ; Γ ⊢ t : A``.

        :param sig: The starting signature.
        :param defs: Top-level postulates and definitions.
        :param ctx: The context `t` lives in.
        :param t: The term to elaborate.
        :param type: The expected type; may mention meta-variables.
        :return: The extended signature, the elaborated term (of type
            `type`), and the constraints.
        :raise ScopeError: If a variable or meta-variable is out of scope.
    """
    elab = Elaborator(sig, defs)
    term, constraints = elab.check(ctx, t, type)
    logger.debug("elaborated {} node(s): {} meta(s), {} constraint(s)".format(
        termSize(t), len(elab.created), len(constraints)))
    return elab.output(term, constraints)


def elaborateInfer(sig: Signature, defs: Optional[DefEnv], ctx: Context,
                   n: Neutral) -> ElabOutput:
    """ Elaborate a neutral term, inferring its type.

        :return: An `ElabOutput` whose `inferredType` is set.
    """
    elab = Elaborator(sig, defs)
    term, ty, constraints = elab.infer(ctx, n)
    return elab.output(term, constraints, ty)


def elaborateType(sig: Signature, defs: Optional[DefEnv], ctx: Context,
                  type: Term) -> ElabOutput:
    """ Elaborate a type, i.e., elaborate it against `Set`. """
    return elaborateCheck(sig, defs, ctx, type, SET)


def uselessElaboration(sig: Signature, ctx: Context, t: Term, type: Term) -> ElabOutput:
    """ The trivial elaboration: one meta-variable for the term, one for its
        unknown type, and a single constraint equating `t` with the former.
        The constraint is generally not well formed, and the solver can make
        no use of the structure of `t`. Kept as a baseline for comparison.
    """
    elab = Elaborator(sig)
    alpha = elab.freshMeta(ctx, type)
    beta = elab.freshMeta(ctx, SET)
    return elab.output(alpha, [Constraint(ctx, alpha, type, t, beta)])


def checkConstraint(sig: Signature, defs: Optional[DefEnv], c: Constraint,
                    subst=None) -> Verdict:
    """ Check that a constraint is well formed: each side has its type. """
    try:
        lhs = typecheck.check(sig, defs, c.ctx, c.lhsTerm, c.lhsType, subst)
        if not lhs:
            return lhs._replace(reason="left side: " + lhs.reason)
        rhs = typecheck.check(sig, defs, c.ctx, c.rhsTerm, c.rhsType, subst)
        if not rhs:
            return rhs._replace(reason="right side: " + rhs.reason)
    except ScopeError as err:
        return Verdict.no(str(err))
    return Verdict.yes()
