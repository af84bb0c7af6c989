"""
A dynamic pattern-unification solver.

Each heterogeneous constraint ``Γ ⊢ t : A = u : B`` is split into a type
equation ``Γ ⊢ A = B : Set`` and a term equation ``Γ ⊢ t = u : A``; the
term equation is only looked at once the type equation is solved. The
solver pops equations from a FIFO queue and simplifies them:

* η-expansion at function and pair types;
* decomposition of rigid-rigid equations with matching heads;
* Miller-pattern instantiation when one side is a meta-variable applied to
  distinct bound variables;
* postponement (sleeping) when a meta-variable blocks progress. Sleeping
  equations are woken when one of their blocking meta-variables is
  instantiated.

Meta-variables whose type ends in a product are η-expanded into pairs of
fresh meta-variables eagerly, so the two components can be solved
independently.
"""

from collections import deque
from enum import IntEnum
import logging
from typing import (Callable, Deque, Dict, FrozenSet, Iterable, List,
                    NamedTuple, Optional, Sequence, Set, Tuple, Union)

from .elaborate import Constraint, freshMeta
from .exceptions import InvariantViolation, ScopeError
from .normalize import (BlockedOn, applyMetaSubst, elimApp, elimFst, elimSnd,
                        instantiate, renameVars, resolveMetaSubst, whnf)
from .pretty import contextNames, showEquation, showTerm
from .results import Verdict
from .syntax import (BOOL, FALSE, NAT, SET, TRUE, App, Context, Def, DefEnv,
                     Fst, IfThenElse, Lam, Meta, MetaSubst, Neutral, Pair, Pi,
                     Prod, Signature, Snd, Suc, Term, Var, metasOf, peelSuc,
                     shift, sucTower, var)
from .typecheck import checkMetaSubst, convert

logger = logging.getLogger(__name__)

__all__ = ('ConstraintStore', 'DEFAULT_MAX_STEPS', 'EntryState', 'Failed',
           'HomogeneousEq', 'Residual', 'SolveResult', 'Solved', 'Solver',
           'Stuck', 'etaExpandMeta', 'solveAll', 'split', 'verifySolution')

#: Default bound on the number of equations popped by one `solveAll` call.
DEFAULT_MAX_STEPS = 10000


# ===========================================================================
# Equations and the constraint store
# ===========================================================================

class HomogeneousEq(NamedTuple):
    """ An equation ``Γ ⊢ lhs = rhs : type``. `guard` is the store id of an
        entry that must be solved before this one is considered.
    """
    ctx: Context
    lhs: Term
    rhs: Term
    type: Term
    guard: Optional[int] = None

    def __str__(self):
        return showEquation(self)


class EntryState(IntEnum):
    """ The life cycle of a constraint store entry.
    """
    ACTIVE = 0  #: Queued for simplification.
    SLEEPING = 1  #: Postponed until a blocking meta-variable is instantiated.
    WAITING = 2  #: Its guard is not solved yet.
    DECOMPOSED = 3  #: Replaced by subgoals; solved once they all are.
    SOLVED = 4  #: Discharged.


class Entry:
    """ One equation in the store, with its bookkeeping.

        :ivar parent: Id of the entry this one is a subgoal of.
        :ivar pending: Number of unsolved subgoals (decomposed entries).
        :ivar blockers: The meta-variables a sleeping entry waits for.
        :ivar repack: Whether this is a term equation whose guard is the
            matching type equation. Such entries are reported together with
            their guard if left unsolved.
    """

    __slots__ = ('id', 'eq', 'parent', 'children', 'pending', 'state',
                 'blockers', 'repack')

    def __init__(self, entryId: int, eq: HomogeneousEq, parent: Optional[int] = None,
                 repack: bool = False):
        self.id = entryId
        self.eq = eq
        self.parent = parent
        self.children: List[int] = []
        self.pending = 0
        self.state = EntryState.ACTIVE
        self.blockers: FrozenSet[int] = frozenset()
        self.repack = repack

    def __repr__(self):
        return "<Entry {} {} {}>".format(self.id, self.state.name, self.eq)


class ConstraintStore:
    """ The solver's mutable state: every entry by id, the queue of active
        entries, sleeping entries indexed by blocking meta-variable, entries
        waiting on their guards, and the log of solved equations.
    """

    def __init__(self):
        self.entries: Dict[int, Entry] = {}
        self.active: Deque[int] = deque()
        self.sleeping: Dict[int, Set[int]] = {}
        self.waiting: Dict[int, List[int]] = {}
        self.solved: List[HomogeneousEq] = []

    def __len__(self):
        return len(self.entries)

    def add(self, eq: HomogeneousEq, parent: Optional[int] = None,
            repack: bool = False) -> int:
        """ Add an equation. It is queued, or waits if its guard is unsolved.

            :return: The new entry's id.
        """
        entry = Entry(len(self.entries), eq, parent, repack)
        self.entries[entry.id] = entry
        if parent is not None:
            self.entries[parent].children.append(entry.id)
        if eq.guard is not None and self.entries[eq.guard].state != EntryState.SOLVED:
            entry.state = EntryState.WAITING
            self.waiting.setdefault(eq.guard, []).append(entry.id)
        else:
            self.active.append(entry.id)
        return entry.id

    def markSolved(self, entryId: int):
        """ Discharge an entry: log it, release the entries guarded on it,
            and discharge its parent if this was the last pending subgoal.
        """
        entry = self.entries[entryId]
        entry.state = EntryState.SOLVED
        entry.blockers = frozenset()
        self.solved.append(entry.eq)
        for w in self.waiting.pop(entryId, ()):
            waiter = self.entries[w]
            if waiter.state == EntryState.WAITING:
                waiter.state = EntryState.ACTIVE
                self.active.append(w)
        if entry.parent is not None:
            parent = self.entries[entry.parent]
            parent.pending -= 1
            if parent.pending == 0:
                self.markSolved(parent.id)

    def decompose(self, entryId: int, goals: Sequence["Subgoal"]) -> List[int]:
        """ Replace an entry by subgoals. A subgoal's `after` names the
            index of an earlier sibling it is guarded on.

            :return: The ids of the new entries, in order.
        """
        entry = self.entries[entryId]
        entry.state = EntryState.DECOMPOSED
        entry.pending = len(goals)
        ids: List[int] = []
        for goal in goals:
            guard = ids[goal.after] if goal.after is not None else None
            ids.append(self.add(goal.eq._replace(guard=guard), entryId, goal.repack))
        if not goals:
            self.markSolved(entryId)
        return ids

    def sleep(self, entryId: int, metas: Iterable[int]):
        entry = self.entries[entryId]
        entry.state = EntryState.SLEEPING
        entry.blockers = frozenset(metas)
        for m in entry.blockers:
            self.sleeping.setdefault(m, set()).add(entryId)

    def wake(self, metaId: int) -> List[int]:
        """ Move every entry sleeping on `metaId` to the back of the queue.

            :return: The ids of the woken entries.
        """
        woken = sorted(self.sleeping.pop(metaId, ()))
        for i in woken:
            entry = self.entries[i]
            for m in entry.blockers:
                if m != metaId and m in self.sleeping:
                    self.sleeping[m].discard(i)
            entry.blockers = frozenset()
            entry.state = EntryState.ACTIVE
            self.active.append(i)
        return woken

    def unsolved(self) -> List[Entry]:
        return [e for e in self.entries.values() if e.state != EntryState.SOLVED]


# ===========================================================================
# Simplification steps
# ===========================================================================

class Trivial(NamedTuple):
    """ The equation holds as it stands. """
    reason: str = "equal"


class Subgoal(NamedTuple):
    eq: HomogeneousEq
    after: Optional[int] = None
    repack: bool = False


class Subgoals(NamedTuple):
    """ The equation holds iff all of `goals` do. `components` is set when a
        product type equation is split; it gives the left-hand product's
        component types.
    """
    goals: Tuple[Subgoal, ...]
    components: Optional[Tuple[Term, Term]] = None


class Mismatch(NamedTuple):
    """ The equation can never hold. `lhs` and `rhs` are the two sides that
        could not be made equal, as printed in the trace.
    """
    diagnostic: str
    lhs: str = ""
    rhs: str = ""


class Instantiated(NamedTuple):
    metaId: int
    body: Term


Step = Union[Trivial, Subgoals, Mismatch, Instantiated, BlockedOn]


# ===========================================================================
# Results
# ===========================================================================

class Residual(NamedTuple):
    """ An unsolved constraint, and the meta-variables blocking it. """
    constraint: Constraint
    blockers: FrozenSet[int]

    def __str__(self):
        return "{}  -- blocked on {{{}}}".format(
            self.constraint, ', '.join('?{}'.format(m) for m in sorted(self.blockers)))


class Solved(NamedTuple):
    """ Every constraint was discharged. """
    subst: MetaSubst
    signature: Signature
    solved: Tuple[HomogeneousEq, ...] = ()


class Stuck(NamedTuple):
    """ Some constraints remain, postponed on uninstantiated meta-variables
        (or the step limit was reached; see `diagnostic`).
    """
    subst: MetaSubst
    signature: Signature
    residuals: Tuple[Residual, ...]
    diagnostic: str = ""
    solved: Tuple[HomogeneousEq, ...] = ()


class Failed(NamedTuple):
    """ An equation was found that no instantiation can satisfy. """
    diagnostic: str
    subst: MetaSubst
    signature: Signature
    solved: Tuple[HomogeneousEq, ...] = ()


SolveResult = Union[Solved, Stuck, Failed]


# ===========================================================================
# Helpers
# ===========================================================================

#: Occurrence strengths, as returned by `_occurrence`.
_ABSENT, _FLEXIBLE, _RIGID = range(3)


def _isFlex(t: Term) -> bool:
    """ Is `t` a meta-variable applied to a spine of applications? """
    return (isinstance(t, Neutral) and isinstance(t.head, Meta)
            and all(isinstance(e, App) for e in t.elims))


def _children(t: Term) -> Tuple[Term, ...]:
    if isinstance(t, Pi):
        return t.domain, t.codomain
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, Prod):
        return t.left, t.right
    if isinstance(t, Pair):
        return t.first, t.second
    if isinstance(t, Suc):
        return (peelSuc(t)[1],)
    return ()


def _occurrence(metaId: int, t: Term, defs: DefEnv, rigid: bool = True) -> int:
    """ How `metaId` occurs in `t`. An occurrence is flexible when it is
        inside the spine of another meta-variable or of a definition that
        can unfold, since an instantiation or unfolding may discard it.
    """
    if isinstance(t, Neutral):
        h = t.head
        found = _ABSENT
        if isinstance(h, Meta) and h.id == metaId:
            found = _RIGID if rigid else _FLEXIBLE
        unfoldable = isinstance(h, Def) and h.name in defs and defs[h.name].body is not None
        inner = rigid and not isinstance(h, Meta) and not unfoldable
        for e in t.elims:
            if isinstance(e, App):
                parts = (e.argument,)
            elif isinstance(e, IfThenElse):
                parts = (e.motive, e.thenBranch, e.elseBranch)
            else:
                parts = ()
            for p in parts:
                found = max(found, _occurrence(metaId, p, defs, inner))
        return found
    return max((_occurrence(metaId, c, defs, rigid) for c in _children(t)),
               default=_ABSENT)


def _peel(defs: DefEnv, subst: MetaSubst, type: Term) -> Tuple[Context, Term, bool]:
    """ Strip the Π-binders off a closed type.

        :return: The binders as a context, the remaining type (in weak head
            normal form), and whether that type is blocked.
    """
    ctx = Context()
    while True:
        w = whnf(None, defs, type, subst)
        if w.blocked or not isinstance(w.term, Pi):
            return ctx, w.term, w.blocked
        ctx = ctx.extend(w.term.domain, w.term.name)
        type = w.term.codomain


def _etaExpand(signature: Signature, defs: DefEnv, subst: MetaSubst, metaId: int,
               pairsOnly: bool) -> Tuple[Signature, Optional[Term]]:
    ctx, tail, _blocked = _peel(defs, subst, applyMetaSubst(subst, signature.typeOf(metaId)))
    if isinstance(tail, Prod):
        signature, left = freshMeta(signature, ctx, tail.left)
        signature, right = freshMeta(signature, ctx, tail.right)
        body: Term = Pair(left, right)
    elif len(ctx) and not pairsOnly:
        signature, body = freshMeta(signature, ctx, tail)
    else:
        return signature, None
    for b in reversed(ctx.bindings):
        body = Lam(body, b.name)
    return signature, body


# ===========================================================================
# Module-level operations
# ===========================================================================

def split(c: Constraint) -> Tuple[HomogeneousEq, HomogeneousEq]:
    """ Split a heterogeneous constraint into a type equation and a term
        equation at the left-hand type. The store guards the term equation
        on the type equation when both are added.

        :param c: A well-formed constraint ``Γ ⊢ t : A = u : B``.
        :return: ``Γ ⊢ A = B : Set`` and ``Γ ⊢ t = u : A``.
    """
    typeEq = HomogeneousEq(c.ctx, c.lhsType, c.rhsType, SET)
    termEq = HomogeneousEq(c.ctx, c.lhsTerm, c.rhsTerm, c.lhsType)
    return typeEq, termEq


def etaExpandMeta(signature: Signature, metaId: int, defs: Optional[DefEnv] = None,
                  subst: Optional[MetaSubst] = None) -> Tuple[Signature, Optional[Term]]:
    """ Build the η-expansion of a meta-variable.

        A meta-variable whose type ends in a product ``Γ → A × B`` expands to
        ``λΓ. (β Γ, γ Γ)`` for fresh ``β : Γ → A`` and ``γ : Γ → B``. One of
        function type ``Γ → C`` expands to ``λΓ. α' Γ`` for a fresh ``α'``.

        :param signature: The signature holding `metaId`.
        :param metaId: The meta-variable to expand.
        :param defs: Top-level definitions.
        :param subst: Current instantiations.
        :return: The extended signature and the expansion, or `None` (and
            the signature unchanged) if the type is a base type.
    """
    return _etaExpand(signature, defs or {}, subst or {}, metaId, pairsOnly=False)


# ===========================================================================
#
# ===========================================================================

class Solver:
    """ Solves a set of constraints by instantiating meta-variables.
        Instantiations are never retracted.

        :param signature: The signature the constraints live in.
        :param defs: Top-level postulates and definitions.
        :param subst: Instantiations made earlier, to continue from.
        :param maxSteps: The maximum number of equations to pop.
        :param trace: A callable receiving one line per solver event.
    """

    def __init__(self, signature: Signature, defs: Optional[DefEnv] = None,
                 subst: Optional[MetaSubst] = None, maxSteps: int = DEFAULT_MAX_STEPS,
                 trace: Optional[Callable[[str], None]] = None):
        self.signature = signature
        self.defs = defs or {}
        self.subst: MetaSubst = dict(subst or {})
        self.maxSteps = maxSteps
        self.trace = trace
        self.store = ConstraintStore()
        self.steps = 0
        self._candidates: Set[int] = set()
        self._known = 0
        self._expanding = False

    def _emit(self, line: str):
        logger.debug(line)
        if self.trace:
            self.trace(line)

    def apply(self, t: Term) -> Term:
        return applyMetaSubst(self.subst, t)

    def reduce(self, t: Term):
        return whnf(self.signature, self.defs, t, self.subst)

    def _show(self, ctx: Context, t: Term) -> str:
        return showTerm(t, contextNames(ctx))

    def _applied(self, eq: HomogeneousEq) -> HomogeneousEq:
        return HomogeneousEq(eq.ctx.map(self.apply), self.apply(eq.lhs),
                             self.apply(eq.rhs), self.apply(eq.type), eq.guard)

    # -----------------------------------------------------------------------
    # Instantiation
    # -----------------------------------------------------------------------

    def instantiate(self, metaId: int, body: Term):
        """ Record ``?metaId := body`` and wake the equations waiting for it.
        """
        if metaId in self.subst:
            raise InvariantViolation("?{} is already instantiated".format(metaId))
        self.subst[metaId] = body
        self._emit("SOLVE ?{} := {}".format(metaId, showTerm(body)))
        woken = self.store.wake(metaId)
        if woken:
            self._emit("WAKE ?{} ({} constraints)".format(metaId, len(woken)))
        self._expandProducts()

    def etaExpandMeta(self, metaId: int) -> Optional[Term]:
        """ η-expand and instantiate a meta-variable of function or product
            type (see `unielab.unify.etaExpandMeta`).

            :return: The expansion, or `None` for a base type.
        """
        self.signature, body = _etaExpand(self.signature, self.defs, self.subst,
                                          metaId, pairsOnly=False)
        if body is not None:
            self.instantiate(metaId, body)
        return body

    def _expandProducts(self):
        """ Expand every uninstantiated meta-variable whose type ends in a
            product. Repeated until nothing changes, as instantiating one
            can reveal the product type of another. Meta-variables whose
            type is known not to be a product are not looked at again.
        """
        if self._expanding:
            return
        self._expanding = True
        try:
            changed = True
            while changed:
                changed = False
                self._candidates.update(range(self._known, len(self.signature)))
                self._known = len(self.signature)
                for metaId in sorted(self._candidates):
                    if metaId in self.subst:
                        self._candidates.discard(metaId)
                        continue
                    _ctx, tail, blocked = _peel(self.defs, self.subst,
                                                self.apply(self.signature.typeOf(metaId)))
                    if blocked:
                        continue
                    self._candidates.discard(metaId)
                    if not isinstance(tail, Prod):
                        continue
                    self.signature, body = _etaExpand(self.signature, self.defs,
                                                      self.subst, metaId, pairsOnly=True)
                    logger.debug("η-expanding ?{} into a pair".format(metaId))
                    self.instantiate(metaId, body)
                    changed = True
        finally:
            self._expanding = False

    # -----------------------------------------------------------------------
    # Simplification
    # -----------------------------------------------------------------------

    def simplify(self, eq: HomogeneousEq) -> Step:
        """ Take one step on an equation whose guard is discharged.

            :return: `Trivial` if it holds, `Subgoals` to replace it with,
                `Instantiated` if a meta-variable solves it, `Mismatch` if it
                never holds, or `BlockedOn` to postpone it.
        """
        ctx = eq.ctx.map(self.apply)
        lhs, rhs, ty = self.apply(eq.lhs), self.apply(eq.rhs), self.apply(eq.type)
        if lhs == rhs:
            return Trivial()

        tyW = self.reduce(ty)
        if not tyW.blocked:
            if isinstance(tyW.term, Pi):
                x = var(0)
                inner = ctx.extend(tyW.term.domain, tyW.term.name)
                return Subgoals((Subgoal(HomogeneousEq(
                    inner, elimApp(shift(lhs, 1), x), elimApp(shift(rhs, 1), x),
                    tyW.term.codomain)),))
            if isinstance(tyW.term, Prod):
                return Subgoals((
                    Subgoal(HomogeneousEq(ctx, elimFst(lhs), elimFst(rhs), tyW.term.left)),
                    Subgoal(HomogeneousEq(ctx, elimSnd(lhs), elimSnd(rhs), tyW.term.right))))

        l, r = self.reduce(lhs), self.reduce(rhs)
        if l.term == r.term:
            return Trivial("equal after unfolding")

        lFlex, rFlex = _isFlex(l.term), _isFlex(r.term)
        if lFlex and rFlex and l.term.head == r.term.head:
            return BlockedOn(frozenset((l.term.head.id,)), l.term)
        if lFlex or rFlex:
            attempts = []
            if lFlex:
                attempts.append((l.term, r.term))
            if rFlex:
                attempts.append((r.term, l.term))
            metas: Set[int] = set()
            for flex, other in attempts:
                step = self.trySolve(ctx, flex, other)
                if not isinstance(step, BlockedOn):
                    return step
                metas |= step.metas
            return BlockedOn(frozenset(metas), l.term)

        if l.blocked or r.blocked:
            metas = set()
            for side in (l, r):
                if side.blocked:
                    metas |= side.metas
            return BlockedOn(frozenset(metas), l.term)

        if tyW.blocked and not (isinstance(l.term, Neutral) and isinstance(r.term, Neutral)):
            return BlockedOn(tyW.metas, ty)

        return self._decompose(ctx, l.term, r.term, tyW.term)

    def _mismatch(self, ctx: Context, l: Term, r: Term) -> Mismatch:
        ls, rs = self._show(ctx, l), self._show(ctx, r)
        return Mismatch("{} ≠ {}".format(ls, rs), ls, rs)

    def _decompose(self, ctx: Context, l: Term, r: Term, ty: Term) -> Step:
        if isinstance(l, Neutral) and isinstance(r, Neutral):
            return self._decomposeSpines(ctx, l, r)
        if isinstance(l, Pi) and isinstance(r, Pi):
            return Subgoals((
                Subgoal(HomogeneousEq(ctx, l.domain, r.domain, SET)),
                Subgoal(HomogeneousEq(ctx.extend(l.domain, l.name), l.codomain,
                                      r.codomain, SET), after=0)))
        if isinstance(l, Prod) and isinstance(r, Prod):
            return Subgoals((Subgoal(HomogeneousEq(ctx, l.left, r.left, SET)),
                             Subgoal(HomogeneousEq(ctx, l.right, r.right, SET))),
                            components=(l.left, l.right))
        if isinstance(l, Suc) and isinstance(r, Suc):
            n, lBase = peelSuc(l)
            m, rBase = peelSuc(r)
            k = min(n, m)
            return Subgoals((Subgoal(HomogeneousEq(ctx, sucTower(n - k, lBase),
                                                   sucTower(m - k, rBase), NAT)),))
        return self._mismatch(ctx, l, r)

    def _headType(self, ctx: Context, head) -> Term:
        if isinstance(head, Var):
            return ctx.lookupVar(head.index)
        if isinstance(head, Def) and head.name in self.defs:
            return self.defs[head.name].type
        raise ScopeError("no type for head {!r}".format(head))

    def _decomposeSpines(self, ctx: Context, l: Neutral, r: Neutral) -> Step:
        """ Equate two rigid neutral terms argument by argument. Each
            argument equation is guarded on the one before it, since its
            type mentions the earlier arguments.
        """
        if l.head != r.head or len(l.elims) != len(r.elims):
            return self._mismatch(ctx, l, r)
        ty = self._headType(ctx, l.head)
        prefix = Neutral(l.head)
        goals: List[Subgoal] = []

        def last() -> Optional[int]:
            return len(goals) - 1 if goals else None

        for e1, e2 in zip(l.elims, r.elims):
            w = self.reduce(ty)
            if w.blocked:
                return BlockedOn(w.metas, ty)
            shape = w.term
            if isinstance(e1, App) and isinstance(e2, App) and isinstance(shape, Pi):
                goals.append(Subgoal(HomogeneousEq(ctx, e1.argument, e2.argument,
                                                   shape.domain), after=last()))
                ty = instantiate(shape.codomain, e1.argument)
            elif isinstance(e1, IfThenElse) and isinstance(e2, IfThenElse):
                motive = len(goals)
                goals.append(Subgoal(HomogeneousEq(ctx.extend(BOOL, e1.name), e1.motive,
                                                   e2.motive, SET), after=last()))
                goals.append(Subgoal(HomogeneousEq(ctx, e1.thenBranch, e2.thenBranch,
                                                   instantiate(e1.motive, TRUE)),
                                     after=motive))
                goals.append(Subgoal(HomogeneousEq(ctx, e1.elseBranch, e2.elseBranch,
                                                   instantiate(e1.motive, FALSE)),
                                     after=motive))
                ty = instantiate(e1.motive, prefix)
            elif isinstance(e1, Fst) and isinstance(e2, Fst) and isinstance(shape, Prod):
                ty = shape.left
            elif isinstance(e1, Snd) and isinstance(e2, Snd) and isinstance(shape, Prod):
                ty = shape.right
            else:
                return self._mismatch(ctx, l, r)
            prefix = Neutral(prefix.head, prefix.elims + (e1,))

        if not goals:
            return Trivial()
        return Subgoals(tuple(goals))

    def trySolve(self, ctx: Context, flex: Neutral, other: Term) -> Step:
        """ Solve ``α x₁ … xₖ = other`` by ``α := λx₁ … xₖ. other``.

            :param ctx: The context of the equation.
            :param flex: The meta-variable side, θ-applied.
            :param other: The other side, θ-applied.
            :return: `Instantiated`; `Mismatch` if `α` occurs rigidly in
                `other`; otherwise `BlockedOn`. A spine that is not made of
                distinct variables, a flexible occurrence, and a variable
                of `other` outside the spine all postpone.
        """
        metaId = flex.head.id
        args = [e.argument for e in flex.elims]
        blockers = {metaId}
        indices: List[int] = []
        for a in args:
            if (not isinstance(a, Neutral) or not isinstance(a.head, Var) or a.elims
                    or a.head.index in indices):
                for b in args:
                    blockers |= metasOf(b)
                return BlockedOn(frozenset(blockers), flex)
            indices.append(a.head.index)

        occurs = _occurrence(metaId, other, self.defs)
        if occurs == _RIGID:
            ls, rs = self._show(ctx, flex), self._show(ctx, other)
            return Mismatch("occurs check: ?{} occurs in {}".format(metaId, rs), ls, rs)
        if occurs == _FLEXIBLE:
            return BlockedOn(frozenset(blockers | metasOf(other)), flex)

        k = len(indices)
        try:
            body = renameVars(other, {i: k - 1 - p for p, i in enumerate(indices)})
        except ScopeError:
            return BlockedOn(frozenset(blockers | metasOf(other)), flex)
        names = ctx.names
        for i in reversed(indices):
            body = Lam(body, names[len(names) - 1 - i])
        return Instantiated(metaId, body)

    # -----------------------------------------------------------------------
    # Main loop
    # -----------------------------------------------------------------------

    def _splitProducts(self, entryId: int, ids: List[int], components: Tuple[Term, Term]):
        """ Replace each term equation guarded on a just-split product type
            equation by its two projections, each guarded on the matching
            component equation.
        """
        kept = []
        for w in self.store.waiting.pop(entryId, []):
            waiter = self.store.entries[w]
            if waiter.state != EntryState.WAITING or not waiter.repack:
                kept.append(w)
                continue
            eq = waiter.eq
            lhs, rhs = self.apply(eq.lhs), self.apply(eq.rhs)
            waiter.state = EntryState.DECOMPOSED
            waiter.pending = 2
            self.store.add(HomogeneousEq(eq.ctx, elimFst(lhs), elimFst(rhs), components[0],
                                         ids[0]), parent=w, repack=True)
            self.store.add(HomogeneousEq(eq.ctx, elimSnd(lhs), elimSnd(rhs), components[1],
                                         ids[1]), parent=w, repack=True)
        if kept:
            self.store.waiting[entryId] = kept

    def solve(self, constraints: Iterable[Constraint]) -> SolveResult:
        """ Run the solver to a fixed point.

            :param constraints: Well-formed heterogeneous constraints.
            :return: `Solved`, `Stuck` or `Failed`.
        """
        for c in constraints:
            typeEq, termEq = split(c)
            guard = self.store.add(typeEq)
            self.store.add(termEq._replace(guard=guard), repack=True)
        logger.debug("solving {} equation(s) over {} meta-variable(s)".format(
            len(self.store), len(self.signature)))
        self._expandProducts()

        while self.store.active:
            entryId = self.store.active.popleft()
            entry = self.store.entries[entryId]
            if entry.state != EntryState.ACTIVE:
                continue
            if self.steps >= self.maxSteps:
                self.store.active.appendleft(entryId)
                logger.warning("step limit of {} reached".format(self.maxSteps))
                return self._stuck("step limit reached")
            self.steps += 1
            self._emit("POP")
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("popped {}".format(self._applied(entry.eq)))

            step = self.simplify(entry.eq)
            if isinstance(step, Trivial):
                self.store.markSolved(entryId)
            elif isinstance(step, Instantiated):
                self.instantiate(step.metaId, step.body)
                self.store.markSolved(entryId)
            elif isinstance(step, Subgoals):
                ids = self.store.decompose(entryId, step.goals)
                if step.components is not None:
                    self._splitProducts(entryId, ids, step.components)
            elif isinstance(step, Mismatch):
                self._emit("FAIL {} ≠ {}".format(step.lhs, step.rhs))
                logger.debug("failed after {} step(s)".format(self.steps))
                return Failed(step.diagnostic, self._finalSubst(), self.signature,
                              tuple(self.store.solved))
            else:
                if not step.metas:
                    raise InvariantViolation("postponed without a blocking meta-variable")
                self._emit("POSTPONE on {{{}}}".format(
                    ','.join('?{}'.format(m) for m in sorted(step.metas))))
                self.store.sleep(entryId, step.metas)

        logger.debug("solver finished after {} step(s)".format(self.steps))
        if self.store.unsolved():
            return self._stuck("")
        return Solved(self._finalSubst(), self.signature, tuple(self.store.solved))

    # -----------------------------------------------------------------------
    # Reporting
    # -----------------------------------------------------------------------

    def _finalSubst(self) -> MetaSubst:
        return resolveMetaSubst(self.subst)

    def _blockersOf(self, entryId: int, covered: Set[int]) -> FrozenSet[int]:
        entry = self.store.entries[entryId]
        covered.add(entryId)
        if entry.state == EntryState.SLEEPING:
            found = set(entry.blockers)
        elif entry.state == EntryState.WAITING:
            found = set(self._blockersOf(entry.eq.guard, covered))
        elif entry.state == EntryState.DECOMPOSED:
            found = set()
            for c in entry.children:
                if self.store.entries[c].state != EntryState.SOLVED:
                    found |= self._blockersOf(c, covered)
        else:
            found = set()
        blockers = frozenset(m for m in found if m not in self.subst)
        if not blockers and entry.state != EntryState.SOLVED:
            blockers = self._metasIn(entry.eq)
        return blockers

    def _metasIn(self, eq: HomogeneousEq) -> FrozenSet[int]:
        """ The uninstantiated meta-variables an equation mentions. """
        eq = self._applied(eq)
        found = metasOf(eq.lhs) | metasOf(eq.rhs) | metasOf(eq.type)
        for b in eq.ctx:
            found |= metasOf(b.type)
        return frozenset(m for m in found if m not in self.subst)

    def _residuals(self) -> List[Residual]:
        """ Report what is left as heterogeneous constraints. A term equation
            still waiting on its type equation is reported as one constraint
            with the type equation's sides as its types.
        """
        residuals = []
        covered: Set[int] = set()
        entries = [self.store.entries[i] for i in sorted(self.store.entries)]
        for e in entries:
            if e.state != EntryState.WAITING or not e.repack:
                continue
            g = self.store.entries[e.eq.guard]
            blockers = self._blockersOf(g.id, covered) or self._metasIn(e.eq)
            covered.add(e.id)
            eq, typeEq = self._applied(e.eq), self._applied(g.eq)
            residuals.append(Residual(Constraint(eq.ctx, eq.lhs, typeEq.lhs, eq.rhs,
                                                 typeEq.rhs), blockers))
        for e in entries:
            if e.id in covered or e.state in (EntryState.SOLVED, EntryState.DECOMPOSED):
                continue
            blockers = self._blockersOf(e.id, covered)
            eq = self._applied(e.eq)
            residuals.append(Residual(Constraint(eq.ctx, eq.lhs, eq.type, eq.rhs, eq.type),
                                      blockers))
        return residuals

    def _stuck(self, diagnostic: str) -> Stuck:
        return Stuck(self._finalSubst(), self.signature, tuple(self._residuals()),
                     diagnostic, tuple(self.store.solved))


def solveAll(signature: Signature, constraints: Iterable[Constraint],
             defs: Optional[DefEnv] = None, subst: Optional[MetaSubst] = None,
             maxSteps: int = DEFAULT_MAX_STEPS,
             trace: Optional[Callable[[str], None]] = None) -> SolveResult:
    """ Solve heterogeneous constraints.

        :param signature: The signature the constraints live in.
        :param constraints: Well-formed constraints.
        :param defs: Top-level postulates and definitions.
        :param subst: Instantiations from an earlier call, to continue from.
        :param maxSteps: Bound on the number of equations popped.
        :param trace: Called with one line per solver event.
        :return: `Solved`, `Stuck` or `Failed`. Every result carries the
            (idempotent) substitution and the final signature, which
            extends `signature` with any meta-variables created by
            η-expansion.
    """
    return Solver(signature, defs, subst, maxSteps, trace).solve(constraints)


def verifySolution(result: SolveResult, signature: Signature,
                   constraints: Sequence[Constraint],
                   defs: Optional[DefEnv] = None) -> Verdict:
    """ Re-check a solver result with the declarative checker.

        Checks that the substitution is well-typed, that every equation in
        the solved log holds, and, for a `Solved` result, that both the
        types and the terms of every original constraint are convertible.

        :return: A YES `Verdict`, or a NO explaining the first failure.
    """
    theta = result.subst
    sig = result.signature

    def apply(t):
        return applyMetaSubst(theta, t)

    v = checkMetaSubst(sig, theta, signature, defs)
    if not v:
        return Verdict.no("ill-typed solution: {}".format(v.reason))

    for eq in result.solved:
        ctx = eq.ctx.map(apply)
        v = convert(sig, defs, ctx, apply(eq.lhs), apply(eq.rhs), apply(eq.type), theta)
        if not v and not v.blocked:
            return Verdict.no("solved equation does not hold: {}: {}".format(eq, v.reason))

    if isinstance(result, Solved):
        for c in constraints:
            ctx = c.ctx.map(apply)
            v = convert(sig, defs, ctx, apply(c.lhsType), apply(c.rhsType), SET, theta)
            if v:
                v = convert(sig, defs, ctx, apply(c.lhsTerm), apply(c.rhsTerm),
                            apply(c.lhsType), theta)
            if not v:
                return Verdict.no("constraint not solved: {}: {}".format(c, v.reason))
    return Verdict.yes()
