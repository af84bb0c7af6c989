"""
Tests of the unification solver: single simplification steps, the
constraint store, η-expansion of meta-variables, and whole runs on the
worked examples.
"""

import pytest

from unielab.elaborate import Constraint, elaborateCheck
from unielab.normalize import BlockedOn
from unielab.results import Outcome
from unielab.syntax import (BOOL, FALSE, NAT, SET, TRUE, ZERO, App, Context,
                            Lam, Neutral, Pair, Pi, Prod, Signature, Var,
                            metaApp, numeral, sucTower, var)
from unielab.unify import (ConstraintStore, EntryState, Failed, HomogeneousEq,
                           Instantiated, Mismatch, Solved, Solver, Stuck,
                           Subgoal, Subgoals, Trivial, etaExpandMeta, solveAll,
                           split, verifySolution)

from .generators import addProblem, pairProblem, trueProblem


def _elaborated(problem):
    p = problem()
    out = elaborateCheck(p.signature, p.defs, p.ctx, p.term, p.type)
    return p, out


# ===========================================================================
# Splitting and the store
# ===========================================================================

def test_split():
    c = Constraint(Context(), TRUE, BOOL, metaApp(0), metaApp(1))
    typeEq, termEq = split(c)
    assert typeEq == HomogeneousEq(Context(), BOOL, metaApp(1), SET)
    assert termEq == HomogeneousEq(Context(), TRUE, metaApp(0), BOOL)


def test_store_guards():
    """ A guarded entry waits until its guard is solved. """
    store = ConstraintStore()
    eq = HomogeneousEq(Context(), TRUE, TRUE, BOOL)
    a = store.add(eq)
    b = store.add(eq._replace(guard=a))
    assert store.entries[b].state == EntryState.WAITING
    assert list(store.active) == [a]

    store.active.popleft()
    store.markSolved(a)
    assert store.entries[b].state == EntryState.ACTIVE
    assert list(store.active) == [b]
    assert [e.id for e in store.unsolved()] == [b]


def test_store_sleep_and_wake():
    store = ConstraintStore()
    a = store.add(HomogeneousEq(Context(), TRUE, metaApp(3), BOOL))
    store.active.popleft()
    store.sleep(a, [3, 4])
    assert store.entries[a].state == EntryState.SLEEPING
    assert store.wake(4) == [a]
    assert store.entries[a].state == EntryState.ACTIVE
    # Woken once, and no longer indexed under the other blocker
    assert store.wake(3) == []
    assert a not in store.sleeping.get(3, ())


def test_store_decompose():
    """ A decomposed entry is solved once all its subgoals are. """
    store = ConstraintStore()
    eq = HomogeneousEq(Context(), TRUE, TRUE, BOOL)
    parent = store.add(eq)
    first, second = store.decompose(parent, (Subgoal(eq), Subgoal(eq, after=0)))
    assert store.entries[parent].state == EntryState.DECOMPOSED
    assert store.entries[second].state == EntryState.WAITING

    store.markSolved(first)
    assert store.entries[second].state == EntryState.ACTIVE
    assert store.entries[parent].state == EntryState.DECOMPOSED
    store.markSolved(second)
    assert store.entries[parent].state == EntryState.SOLVED
    assert not store.unsolved()


def test_store_decompose_nothing():
    store = ConstraintStore()
    parent = store.add(HomogeneousEq(Context(), TRUE, TRUE, BOOL))
    assert store.decompose(parent, ()) == []
    assert store.entries[parent].state == EntryState.SOLVED


# ===========================================================================
# Single steps
# ===========================================================================

def test_simplify_trivial():
    step = Solver(Signature()).simplify(HomogeneousEq(Context(), TRUE, TRUE, BOOL))
    assert isinstance(step, Trivial)


def test_simplify_eta_function():
    """ An equation at a function type is solved pointwise. """
    fType = Pi(BOOL, BOOL)
    ctx = Context().extend(fType, 'f').extend(fType, 'g')
    step = Solver(Signature()).simplify(HomogeneousEq(ctx, var(1), var(0), fType))
    assert isinstance(step, Subgoals)
    (goal,) = step.goals
    assert len(goal.eq.ctx) == 3
    assert goal.eq.lhs == Neutral(Var(2), (App(var(0)),))
    assert goal.eq.rhs == Neutral(Var(1), (App(var(0)),))
    assert goal.eq.type == BOOL


def test_simplify_eta_pair():
    ctx = Context().extend(Prod(BOOL, NAT), 'p').extend(Prod(BOOL, NAT), 'q')
    step = Solver(Signature()).simplify(HomogeneousEq(ctx, var(1), var(0), Prod(BOOL, NAT)))
    assert isinstance(step, Subgoals)
    assert [g.eq.type for g in step.goals] == [BOOL, NAT]


def test_simplify_rigid_mismatch():
    step = Solver(Signature()).simplify(HomogeneousEq(Context(), TRUE, FALSE, BOOL))
    assert step == Mismatch("true ≠ false", "true", "false")


def test_simplify_pattern():
    """ ``α x y = y`` instantiates ``α := λx y. y``. """
    sig, alpha = Signature().extend(Pi(BOOL, Pi(BOOL, BOOL)))
    ctx = Context().extend(BOOL, 'x').extend(BOOL, 'y')
    eq = HomogeneousEq(ctx, metaApp(alpha, (var(1), var(0))), var(0), BOOL)
    step = Solver(sig).simplify(eq)
    assert step == Instantiated(alpha, Lam(Lam(var(0))))


def test_simplify_non_linear_spine():
    """ ``α x x = y`` is not a pattern; it is postponed. """
    sig, alpha = Signature().extend(Pi(BOOL, Pi(BOOL, BOOL)))
    ctx = Context().extend(BOOL, 'x').extend(BOOL, 'y')
    eq = HomogeneousEq(ctx, metaApp(alpha, (var(1), var(1))), var(0), BOOL)
    step = Solver(sig).simplify(eq)
    assert isinstance(step, BlockedOn)
    assert step.metas == {alpha}


def test_simplify_variable_outside_spine():
    sig, alpha = Signature().extend(Pi(BOOL, BOOL))
    ctx = Context().extend(BOOL, 'x').extend(BOOL, 'y')
    eq = HomogeneousEq(ctx, metaApp(alpha, (var(1),)), var(0), BOOL)
    assert isinstance(Solver(sig).simplify(eq), BlockedOn)


def test_simplify_occurs_check():
    sig, alpha = Signature().extend(SET)
    step = Solver(sig).simplify(
        HomogeneousEq(Context(), metaApp(alpha), Pi(BOOL, metaApp(alpha)), SET))
    assert isinstance(step, Mismatch)
    assert step.diagnostic == "occurs check: ?0 occurs in Bool -> ?0"
    assert (step.lhs, step.rhs) == ("?0", "Bool -> ?0")


def test_simplify_successors():
    """ Matching `suc` layers are stripped in one step. """
    sig, alpha = Signature().extend(NAT)
    eq = HomogeneousEq(Context(), sucTower(3, metaApp(alpha)), numeral(5), NAT)
    step = Solver(sig).simplify(eq)
    assert isinstance(step, Subgoals)
    (goal,) = step.goals
    assert (goal.eq.lhs, goal.eq.rhs, goal.eq.type) == (metaApp(alpha), numeral(2), NAT)


def test_simplify_numerals():
    step = Solver(Signature()).simplify(HomogeneousEq(Context(), numeral(3), numeral(5), NAT))
    assert isinstance(step, Subgoals)
    (goal,) = step.goals
    assert (goal.eq.lhs, goal.eq.rhs) == (ZERO, numeral(2))


def test_simplify_flexible_occurrence():
    """ An occurrence under another meta-variable may go away; postpone. """
    sig, alpha = Signature().extend(SET)
    sig, beta = sig.extend(Pi(SET, SET))
    other = Pi(BOOL, metaApp(beta, (metaApp(alpha),)))
    step = Solver(sig).simplify(HomogeneousEq(Context(), metaApp(alpha), other, SET))
    assert isinstance(step, BlockedOn)
    assert step.metas == {alpha, beta}


# ===========================================================================
# η-expansion of meta-variables
# ===========================================================================

def test_etaExpandMeta_function():
    sig, alpha = Signature().extend(Pi(BOOL, BOOL))
    sig2, body = etaExpandMeta(sig, alpha)
    assert body == Lam(metaApp(1, (var(0),)))
    assert sig2.typeOf(1) == Pi(BOOL, BOOL)
    assert len(sig) == 1


def test_etaExpandMeta_product():
    sig, alpha = Signature().extend(Pi(NAT, Prod(BOOL, NAT)))
    sig2, body = etaExpandMeta(sig, alpha)
    assert body == Lam(Pair(metaApp(1, (var(0),)), metaApp(2, (var(0),))))
    assert sig2.typeOf(1) == Pi(NAT, BOOL)
    assert sig2.typeOf(2) == Pi(NAT, NAT)


def test_etaExpandMeta_base_type():
    sig, alpha = Signature().extend(BOOL)
    assert etaExpandMeta(sig, alpha) == (sig, None)


# ===========================================================================
# Whole runs
# ===========================================================================

def test_solve_true():
    p, out = _elaborated(trueProblem)
    lines = []
    result = solveAll(out.signature, out.constraints, p.defs, trace=lines.append)
    assert isinstance(result, Solved)
    assert result.subst == {0: TRUE}
    assert lines == ["POP",
                     "POP",
                     "SOLVE ?0 := true"]
    assert verifySolution(result, out.signature, out.constraints, p.defs)


def test_solve_add_fails():
    """ ``add x`` is a function, not a number. """
    p, out = _elaborated(addProblem)
    lines = []
    result = solveAll(out.signature, out.constraints, p.defs, trace=lines.append)
    assert isinstance(result, Failed)
    assert result.diagnostic == "Nat -> Nat ≠ Nat"
    assert lines[-1] == "FAIL Nat -> Nat ≠ Nat"
    assert "WAKE ?2 (1 constraints)" in lines
    assert verifySolution(result, out.signature, out.constraints, p.defs)


def test_solve_pair_stuck():
    """ The first component waits for `alpha`; everything else is solved. """
    p, out = _elaborated(pairProblem)
    lines = []
    result = solveAll(out.signature, out.constraints, p.defs, trace=lines.append)
    assert isinstance(result, Stuck)
    assert result.diagnostic == ""
    assert [str(r) for r in result.residuals] == \
        [". |- true : Bool = ?6 : BoolOrNat ?0  -- blocked on {?0}"]
    assert result.subst == {1: BOOL, 2: NAT, 3: TRUE, 4: ZERO,
                            5: Pair(metaApp(6), ZERO), 7: ZERO}
    assert "POSTPONE on {?0}" in lines
    assert verifySolution(result, out.signature, out.constraints, p.defs)


def test_solve_continues_from_substitution():
    """ Once `alpha` is known the pair problem is solved. """
    p, out = _elaborated(pairProblem)
    result = solveAll(out.signature, out.constraints, p.defs, subst={0: TRUE})
    assert isinstance(result, Solved)
    assert result.subst[5] == Pair(TRUE, ZERO)
    assert verifySolution(result, out.signature, out.constraints, p.defs)


def test_solve_occurs_check():
    sig, alpha = Signature().extend(SET)
    c = Constraint(Context(), metaApp(alpha), SET, Pi(BOOL, metaApp(alpha)), SET)
    result = solveAll(sig, [c])
    assert isinstance(result, Failed)
    assert result.diagnostic.startswith("occurs check")


def test_solve_occurs_check_trace():
    sig, alpha = Signature().extend(SET)
    c = Constraint(Context(), metaApp(alpha), SET, Pi(BOOL, metaApp(alpha)), SET)
    lines = []
    solveAll(sig, [c], trace=lines.append)
    assert lines[-1] == "FAIL ?0 ≠ Bool -> ?0"


def test_solve_long_numeral():
    sig, alpha = Signature().extend(NAT)
    c = Constraint(Context(), numeral(5000), NAT, metaApp(alpha), NAT)
    result = solveAll(sig, [c])
    assert isinstance(result, Solved)
    assert result.subst == {alpha: numeral(5000)}


def test_step_limit_blockers():
    """ Constraints cut short by the step limit still name their metas. """
    p, out = _elaborated(trueProblem)
    result = solveAll(out.signature, out.constraints, p.defs, maxSteps=0)
    assert isinstance(result, Stuck)
    (residual,) = result.residuals
    assert residual.blockers == {0}


def test_step_limit():
    p, out = _elaborated(addProblem)
    result = solveAll(out.signature, out.constraints, p.defs, maxSteps=1)
    assert isinstance(result, Stuck)
    assert result.diagnostic == "step limit reached"
    assert result.residuals


def test_solve_nothing():
    result = solveAll(Signature(), [])
    assert isinstance(result, Solved)
    assert result.subst == {}


def test_verifySolution_rejects_wrong_answer():
    p, out = _elaborated(trueProblem)
    forged = Solved({0: FALSE}, out.signature)
    v = verifySolution(forged, out.signature, out.constraints, p.defs)
    assert v.outcome == Outcome.NO
    assert v.reason.startswith("constraint not solved")


@pytest.mark.parametrize("maxSteps", [0, 1, 2, 5, 100])
def test_step_limit_never_fails_well_typed(maxSteps):
    """ Running out of steps leaves constraints, never a failure. """
    p, out = _elaborated(trueProblem)
    result = solveAll(out.signature, out.constraints, p.defs, maxSteps=maxSteps)
    assert not isinstance(result, Failed)
