"""
Hereditary substitution, elimination and weak head normalisation tests.
"""

import pytest

from unielab.exceptions import InvariantViolation, ScopeError
from unielab.normalize import (BlockedOn, NotBlocked, Reducer, applyMetaSubst,
                               elimApp, elimFst, elimIf, elimSnd, elimSpine,
                               instantiate, renameVars, resolveMetaSubst, subst,
                               whnf)
from unielab.syntax import (BOOL, FALSE, NAT, SET, TRUE, ZERO, App, Def,
                            IfThenElse, Lam, Meta, Neutral, Pair, Pi, Signature,
                            Snd, Suc, Var, isNormal, metaApp, numeral,
                            sucTower, var)
from unielab.types import Definition

from .generators import BOOL_OR_NAT

DEFS = {'BoolOrNat': Definition(Pi(BOOL, SET), BOOL_OR_NAT),
        'opaque': Definition(Pi(BOOL, SET))}


# ===========================================================================
# Substitution
# ===========================================================================

def test_subst_constant():
    assert subst(SET, Var(0), TRUE) == SET


def test_subst_head():
    assert subst(var(0), Var(0), TRUE) == TRUE


def test_subst_beta():
    """ Substituting a λ into the head of an application reduces it. """
    t = Neutral(Var(0), (App(TRUE),))
    assert subst(t, Var(0), Lam(var(0))) == TRUE


def test_subst_lowers_outer_variables():
    # In (y, x) with x innermost, replacing x leaves y as variable 0
    t = Pair(var(1), var(0))
    assert subst(t, Var(0), FALSE) == Pair(var(0), FALSE)


def test_subst_under_binder():
    # λz. x z, replacing x by λw. w, gives λz. z
    t = Lam(Neutral(Var(1), (App(var(0)),)))
    assert subst(t, Var(0), Lam(var(0))) == Lam(var(0))


def test_subst_meta():
    t = Pair(metaApp(0, (TRUE,)), metaApp(1))
    result = subst(t, Meta(0), Lam(elimIf(var(0), SET, NAT, BOOL)))
    assert result == Pair(NAT, metaApp(1))


def test_subst_bad_head():
    with pytest.raises(TypeError):
        subst(TRUE, Def('add'), TRUE)


def test_subst_ill_typed():
    """ Applying a boolean is an internal error, not a type error. """
    t = Neutral(Var(0), (App(TRUE),))
    with pytest.raises(InvariantViolation):
        subst(t, Var(0), FALSE)


def test_fuel():
    reducer = Reducer(fuel=2)
    with pytest.raises(InvariantViolation, match="within 2 steps"):
        reducer.substVar(Pair(Pair(var(0), var(0)), var(0)), 0, TRUE)


def test_fuel_counts_successors():
    """ A chain of successors costs one step per node. """
    with pytest.raises(InvariantViolation, match="within 100 steps"):
        Reducer(fuel=100).substVar(sucTower(200, var(0)), 0, ZERO)
    assert Reducer(fuel=202).substVar(sucTower(200, var(0)), 0, ZERO) == numeral(200)


def test_subst_long_successor_chain():
    t = sucTower(5000, var(0))
    assert subst(t, Var(0), ZERO) == numeral(5000)
    assert subst(t, Var(0), numeral(3)) == numeral(5003)


# ===========================================================================
# Eliminations
# ===========================================================================

@pytest.mark.parametrize("fn, arg, expected", [
    pytest.param(Lam(var(0)), FALSE, FALSE, id="identity"),
    pytest.param(metaApp(0), TRUE, metaApp(0, (TRUE,)), id="spine"),
    pytest.param(Lam(Neutral(Var(1), (App(var(0)),))), TRUE,
                 Neutral(Var(0), (App(TRUE),)), id="free"),
])
def test_elimApp(fn, arg, expected):
    assert elimApp(fn, arg) == expected


def test_elimApp_non_function():
    with pytest.raises(InvariantViolation):
        elimApp(BOOL, TRUE)


@pytest.mark.parametrize("scrutinee, expected", [
    pytest.param(TRUE, BOOL, id="true"),
    pytest.param(FALSE, NAT, id="false"),
    pytest.param(metaApp(0), Neutral(Meta(0), (IfThenElse(SET, BOOL, NAT),)), id="stuck"),
])
def test_elimIf(scrutinee, expected):
    assert elimIf(scrutinee, SET, BOOL, NAT) == expected


def test_elimIf_non_boolean():
    with pytest.raises(InvariantViolation):
        elimIf(ZERO, SET, BOOL, NAT)


def test_projections():
    assert elimFst(Pair(TRUE, ZERO)) == TRUE
    assert elimSnd(Pair(TRUE, ZERO)) == ZERO
    assert elimSnd(var(0)) == Neutral(Var(0), (Snd(),))
    with pytest.raises(InvariantViolation):
        elimFst(TRUE)


def test_elimSpine():
    fn = Lam(Lam(Pair(var(0), var(1))))
    assert elimSpine(fn, (App(TRUE), App(ZERO))) == Pair(ZERO, TRUE)


def test_instantiate():
    assert instantiate(Pi(var(0), var(1)), BOOL) == Pi(BOOL, BOOL)


def test_renameVars():
    t = Pair(var(0), var(2))
    assert renameVars(t, {0: 1, 2: 0}) == Pair(var(1), var(0))
    assert renameVars(Lam(Pair(var(0), var(1))), {0: 4}) == Lam(Pair(var(0), var(5)))
    with pytest.raises(ScopeError):
        renameVars(t, {0: 0})


# ===========================================================================
# Meta-variable substitution
# ===========================================================================

def test_applyMetaSubst():
    assert applyMetaSubst({0: TRUE}, metaApp(0)) == TRUE
    assert applyMetaSubst({}, metaApp(0)) == metaApp(0)
    assert applyMetaSubst({0: Lam(var(0))}, metaApp(0, (FALSE,))) == FALSE


def test_applyMetaSubst_chained():
    """ Instantiations mentioning other instantiated metas are followed. """
    theta = {0: Pair(metaApp(1), metaApp(2)), 1: TRUE}
    assert applyMetaSubst(theta, metaApp(0)) == Pair(TRUE, metaApp(2))


def test_applyMetaSubst_cycle():
    with pytest.raises(InvariantViolation):
        applyMetaSubst({0: Pair(metaApp(1), TRUE), 1: metaApp(0)}, metaApp(0))
    with pytest.raises(InvariantViolation, match=r"\?0"):
        applyMetaSubst({0: Suc(metaApp(0))}, metaApp(0))


def test_applyMetaSubst_long_chain():
    """ Each meta-variable is the successor of the one before it. """
    theta = {0: ZERO}
    for k in range(1, 5001):
        theta[k] = Suc(metaApp(k - 1))
    assert applyMetaSubst(theta, metaApp(5000)) == numeral(5000)
    assert applyMetaSubst(theta, Pair(metaApp(2), metaApp(5001))) == \
        Pair(numeral(2), metaApp(5001))


def test_resolveMetaSubst():
    theta = {0: Pair(metaApp(1), metaApp(2)), 1: TRUE, 2: Suc(metaApp(3)), 3: ZERO}
    resolved = resolveMetaSubst(theta)
    assert resolved == {0: Pair(TRUE, numeral(1)), 1: TRUE, 2: numeral(1), 3: ZERO}
    # Idempotent: nothing left to resolve
    assert resolveMetaSubst(resolved) == resolved
    assert theta[0] == Pair(metaApp(1), metaApp(2))


# ===========================================================================
# Weak head normal forms
# ===========================================================================

def test_whnf_unfolds_definitions():
    t = Neutral(Def('BoolOrNat'), (App(TRUE),))
    assert whnf(Signature(), DEFS, t) == NotBlocked(BOOL)


def test_whnf_blocked():
    """ Reduction is impeded by an uninstantiated meta-variable. """
    t = Neutral(Def('BoolOrNat'), (App(metaApp(0)),))
    result = whnf(Signature(), DEFS, t)
    assert isinstance(result, BlockedOn)
    assert result.metas == {0}
    assert result.blocked


def test_whnf_follows_substitution():
    t = Neutral(Def('BoolOrNat'), (App(metaApp(0)),))
    assert whnf(Signature(), DEFS, t, {0: FALSE}).term == NAT


def test_whnf_rigid():
    assert whnf(None, None, TRUE) == NotBlocked(TRUE)
    postulate = Neutral(Def('opaque'), (App(TRUE),))
    assert whnf(None, DEFS, postulate) == NotBlocked(postulate)
    assert not whnf(None, DEFS, var(0)).blocked


def test_results_are_normal():
    t = Lam(Neutral(Var(1), (App(Neutral(Var(1), (App(var(0)),))),)))
    result = subst(t, Var(0), Lam(Lam(var(1))))
    assert isNormal(result)
    assert result == Lam(Lam(Lam(var(2))))
