"""
Tests of the declarative checker: checking, inference, conversion, and the
validity judgments for contexts, signatures and substitutions.
"""

import pytest

from unielab.exceptions import ScopeError
from unielab.results import Outcome, Verdict
from unielab.syntax import (BOOL, FALSE, NAT, SET, TRUE, ZERO, App, Context,
                            Def, Lam, Neutral, Pair, Pi, Prod, Signature,
                            Suc, Var, arrow, metaApp, numeral, shift, sucTower,
                            var)
from unielab.typecheck import (check, checkContext, checkMetaSubst,
                               checkSignature, convert, convertNeutral, infer)
from unielab.normalize import elimApp, elimFst, elimIf, elimSnd
from unielab.types import Definition

from .generators import BOOL_OR_NAT, RandomTerms

EMPTY = Context()
SIG = Signature()
DEFS = {'BoolOrNat': Definition(arrow(BOOL, SET), BOOL_OR_NAT),
        'add': Definition(arrow(NAT, arrow(NAT, NAT)))}


# ===========================================================================
# Checking
# ===========================================================================

@pytest.mark.parametrize("term, type_", [
    pytest.param(TRUE, BOOL, id="true"),
    pytest.param(Lam(var(0)), Pi(BOOL, BOOL), id="identity"),
    pytest.param(SET, SET, id="type-in-type"),
    pytest.param(Pi(SET, Pi(var(0), var(1))), SET, id="polymorphic-identity-type"),
    pytest.param(Lam(Lam(var(0))), Pi(SET, Pi(var(0), var(1))), id="polymorphic-identity"),
    pytest.param(Pair(TRUE, numeral(2)), Prod(BOOL, NAT), id="pair"),
    pytest.param(Lam(elimIf(var(0), SET, BOOL, NAT)), arrow(BOOL, SET), id="BoolOrNat"),
    pytest.param(ZERO, Neutral(Def('BoolOrNat'), (App(FALSE),)), id="unfold"),
])
def test_check_yes(term, type_):
    assert check(SIG, DEFS, EMPTY, term, type_)


@pytest.mark.parametrize("term, type_", [
    pytest.param(TRUE, SET, id="true-is-not-a-type"),
    pytest.param(Lam(var(0)), BOOL, id="lambda-at-Bool"),
    pytest.param(Suc(TRUE), NAT, id="suc-true"),
    pytest.param(Pair(TRUE, TRUE), Prod(BOOL, NAT), id="pair"),
])
def test_check_no(term, type_):
    v = check(SIG, DEFS, EMPTY, term, type_)
    assert v.outcome == Outcome.NO
    assert v.reason


def test_check_blocked():
    """ A meta-variable hiding the shape of the type blocks checking. """
    sig, alpha = Signature().extend(BOOL)
    type_ = Neutral(Def('BoolOrNat'), (App(metaApp(alpha)),))
    v = check(sig, DEFS, EMPTY, TRUE, type_)
    assert v.blocked
    assert v.metas == {alpha}

    # ...and the substitution unblocks it
    assert check(sig, DEFS, EMPTY, TRUE, type_, {alpha: TRUE})
    assert check(sig, DEFS, EMPTY, TRUE, type_, {alpha: FALSE}).outcome == Outcome.NO


def test_check_scope():
    with pytest.raises(ScopeError):
        check(SIG, DEFS, EMPTY, var(0), BOOL)
    with pytest.raises(ScopeError):
        check(SIG, DEFS, EMPTY, metaApp(0), BOOL)


# ===========================================================================
# Inference
# ===========================================================================

def test_infer_variable():
    ctx = EMPTY.extend(BOOL, 'x')
    assert infer(SIG, DEFS, ctx, var(0)).value == BOOL


def test_infer_meta():
    sig, alpha = Signature().extend(BOOL)
    assert infer(sig, DEFS, EMPTY, metaApp(alpha)).value == BOOL


def test_infer_dependent_application():
    # f : (x : Bool) -> if x then Bool else Nat
    fType = Pi(BOOL, elimIf(var(0), SET, BOOL, NAT))
    ctx = EMPTY.extend(fType, 'f')
    v = infer(SIG, DEFS, ctx, Neutral(Var(0), (App(TRUE),)))
    assert v
    assert v.value == BOOL


def test_infer_applying_non_function():
    ctx = EMPTY.extend(NAT, 'x')
    v = infer(SIG, DEFS, ctx, Neutral(Var(0), (App(TRUE),)))
    assert v.outcome == Outcome.NO


def test_infer_postulate():
    v = infer(SIG, DEFS, EMPTY.extend(NAT, 'x'),
              Neutral(Def('add'), (App(var(0)),)))
    assert v.value == arrow(NAT, NAT)


# ===========================================================================
# Conversion
# ===========================================================================

def test_convert_eta():
    """ ``λx. f x ≡ f`` at a function type. """
    ctx = EMPTY.extend(Pi(BOOL, BOOL), 'f')
    eta = Lam(Neutral(Var(1), (App(var(0)),)))
    assert convert(SIG, DEFS, ctx, eta, var(0), Pi(BOOL, BOOL))


def test_convert_pair_eta():
    ctx = EMPTY.extend(Prod(BOOL, NAT), 'p')
    assert convert(SIG, DEFS, ctx, Pair(elimFst(var(0)), elimSnd(var(0))), var(0),
                   Prod(BOOL, NAT))


def test_convert_literals():
    assert convert(SIG, DEFS, EMPTY, TRUE, TRUE, BOOL)
    assert convert(SIG, DEFS, EMPTY, TRUE, FALSE, BOOL).outcome == Outcome.NO
    assert convert(SIG, DEFS, EMPTY, numeral(2), numeral(2), NAT)
    assert convert(SIG, DEFS, EMPTY, numeral(2), numeral(3), NAT).outcome == Outcome.NO


def test_long_numerals():
    assert check(SIG, DEFS, EMPTY, numeral(5000), NAT)
    assert convert(SIG, DEFS, EMPTY, numeral(5000), numeral(5000), NAT)
    assert convert(SIG, DEFS, EMPTY, numeral(5000), numeral(4999), NAT).outcome == Outcome.NO
    ctx = Context().extend(NAT, 'n')
    assert convert(SIG, DEFS, ctx, sucTower(3000, var(0)), sucTower(3000, var(0)), NAT)
    v = convert(SIG, DEFS, ctx, sucTower(3000, var(0)), numeral(3000), NAT)
    assert v.outcome == Outcome.NO


def test_convert_unfolds():
    boolOrNat = Neutral(Def('BoolOrNat'), (App(TRUE),))
    assert convert(SIG, DEFS, EMPTY, boolOrNat, BOOL, SET)


def test_convert_blocked():
    sig, alpha = Signature().extend(BOOL)
    v = convert(sig, DEFS, EMPTY, TRUE, metaApp(alpha), BOOL)
    assert v.outcome == Outcome.BLOCKED
    assert v.metas == {alpha}
    assert convert(sig, DEFS, EMPTY, TRUE, metaApp(alpha), BOOL, {alpha: TRUE})


def test_convertNeutral():
    ctx = EMPTY.extend(BOOL, 'x').extend(BOOL, 'y')
    assert convertNeutral(SIG, DEFS, ctx, var(1), var(1)).value == BOOL
    assert convertNeutral(SIG, DEFS, ctx, var(0), var(1)).outcome == Outcome.NO

    fType = Pi(BOOL, elimIf(var(0), SET, BOOL, NAT))
    ctx = EMPTY.extend(fType, 'f')
    ft = Neutral(Var(0), (App(TRUE),))
    assert convertNeutral(SIG, DEFS, ctx, ft, ft).value == BOOL
    ff = Neutral(Var(0), (App(FALSE),))
    assert convertNeutral(SIG, DEFS, ctx, ft, ff).outcome == Outcome.NO


@pytest.mark.parametrize("seed", range(10))
def test_eta_law(seed):
    """ Every function converts with its η-expansion. """
    gen = RandomTerms(seed)
    ctx = EMPTY
    while True:
        sample = gen.sample(4)
        if isinstance(sample.type, Pi):
            break
    f = sample.term
    eta = Lam(elimApp(shift(f, 1), var(0)))
    assert convert(SIG, {}, ctx, eta, f, sample.type)


# ===========================================================================
# Contexts, signatures, substitutions
# ===========================================================================

def test_checkContext():
    assert checkContext(SIG, EMPTY)
    assert checkContext(SIG, EMPTY.extend(SET, 'A').extend(var(0), 'a'))
    v = checkContext(SIG, EMPTY.extend(TRUE, 'x'))
    assert v.outcome == Outcome.NO
    assert 'x' in v.reason
    assert not checkContext(SIG, EMPTY.extend(var(3), 'x'))


def test_checkSignature():
    assert checkSignature(Signature())
    sig, _ = Signature().extend(SET)
    sig, _ = sig.extend(metaApp(0))
    assert checkSignature(sig)

    # A meta-variable's type may only mention earlier ones
    bad, _ = Signature().extend(metaApp(1))
    bad, _ = bad.extend(SET)
    assert not checkSignature(bad)


def test_checkMetaSubst():
    sig, alpha = Signature().extend(BOOL)
    assert checkMetaSubst(Signature(), {alpha: TRUE}, sig)
    v = checkMetaSubst(Signature(), {alpha: ZERO}, sig)
    assert v.outcome == Outcome.NO

    # An uninstantiated meta must stay in the target signature
    assert checkMetaSubst(sig, {}, sig)
    assert not checkMetaSubst(Signature(), {}, sig)


def test_verdict():
    assert Verdict.yes()
    assert not Verdict.no("nope")
    blocked = Verdict.blockedOn([1, 2])
    assert not blocked
    assert blocked.blocked
    assert blocked.metas == {1, 2}
