"""
Driver tests: whole files, their reports, output, and exit codes.
"""

from io import StringIO
import os.path

import pytest

from unielab.config import CheckerConfig
from unielab.driver import FileChecker, run, worstExitCode
from unielab.normalize import applyMetaSubst
from unielab.parser import parse
from unielab.results import ExitCode, Status
from unielab.scope import DeclKind, scopeCheck
from unielab.unify import DEFAULT_MAX_STEPS

from .golden import EXPECTED_EXIT, GOLDEN_PATHS, goldenPath


def _run(name, config=None):
    out, err = StringIO(), StringIO()
    report = run(goldenPath(name), config, out, err)
    return report, out.getvalue().splitlines(), err.getvalue().splitlines()


@pytest.mark.parametrize("path", GOLDEN_PATHS, ids=os.path.basename)
def test_exit_codes(path):
    report = run(path, out=StringIO(), err=StringIO())
    assert report.exitCode == EXPECTED_EXIT[os.path.basename(path)]


def test_ok():
    report, out, err = _run('true_bool.tog')
    assert out == ["1:1: check: ok: true"]
    assert err == []
    (entry,) = report.entries
    assert entry.status == Status.OK
    assert entry.message == "true"
    assert entry.position == (1, 1)


def test_several_goals():
    """ Every goal is reported; definitions that check are not. """
    report, out, _err = _run('identity.tog')
    assert [e.status for e in report.entries] == [Status.OK] * 4
    assert len(out) == 4
    assert out[0].startswith("4:1: check: ok: ")


def test_ill_typed():
    report, out, err = _run('add_x.tog')
    assert out == []
    assert err == ["2:1: check: ill-typed: Nat -> Nat ≠ Nat"]
    assert report.entries[0].status == Status.ILL_TYPED


def test_ill_typed_declaration():
    report, _out, err = _run('bad_postulate.tog')
    assert err == ["1:11: postulate bad: ill-typed: type: Set is not Bool, the type of true"]
    assert report.exitCode == ExitCode.ILL_TYPED


def test_stuck():
    report, out, _err = _run('pair_stuck.tog')
    assert out == ["5:1: check: stuck",
                   "  term: (?6, zero)",
                   "  . |- true : Bool = ?6 : BoolOrNat ?0  -- blocked on {?0}"]
    (entry,) = report.entries
    assert entry.status == Status.STUCK
    assert entry.message == "(?6, zero)"
    assert len(entry.residuals) == 1


def test_step_limit_pragma():
    report, out, _err = _run('step_limit.tog')
    assert out[0] == "3:1: check: stuck: step limit reached"
    assert report.exitCode == ExitCode.STUCK


def test_step_limit_overridden():
    """ An explicit option beats the file's pragma. """
    config = CheckerConfig(maxSteps=DEFAULT_MAX_STEPS, explicit=['maxSteps'])
    report, _out, _err = _run('step_limit.tog', config)
    assert report.exitCode == ExitCode.ILL_TYPED


def test_unresolved():
    path = goldenPath('unresolved.tog')
    report, out, err = _run('unresolved.tog')
    assert out == []
    assert err == ["{}: 1:13: unresolved identifier y".format(path)]
    assert report.entries[0].status == Status.SYNTAX_ERROR
    assert report.entries[0].position == (1, 13)


def test_syntax_error():
    report, _out, err = _run('syntax_error.tog')
    assert "unexpected end of input" in err[0]
    assert report.exitCode == ExitCode.ERROR


def test_bad_pragma():
    report, _out, err = _run('bad_pragma.tog')
    assert err[0].endswith("bad pragma: unknown pragma option 'frobnicate'")
    assert report.exitCode == ExitCode.ERROR


def test_missing_file(tmp_path):
    err = StringIO()
    report = run(tmp_path / "missing.tog", out=StringIO(), err=err)
    assert report.exitCode == ExitCode.ERROR
    assert "cannot read file" in err.getvalue()


def test_dumps():
    config = CheckerConfig(dumpElaboration=True, dumpSolution=True)
    _report, out, _err = _run('true_bool.tog', config)
    assert out == ["?0 : Bool",
                   ". |- true : Bool = ?0 : Bool",
                   "?0 := true",
                   "1:1: check: ok: true"]


def test_trace():
    _report, out, _err = _run('true_bool.tog', CheckerConfig(traceUnify=True))
    assert out == ["POP",
                   "POP",
                   "SOLVE ?0 := true",
                   "1:1: check: ok: true"]


def test_verify():
    """ Verification agrees with the solver on every outcome. """
    config = CheckerConfig(verify=True)
    for name in ('true_bool.tog', 'add_x.tog', 'pair_stuck.tog'):
        report, _out, err = _run(name, config)
        assert report.exitCode == EXPECTED_EXIT[name]
        assert not any("verification failed" in line for line in err)


def test_useless_elaboration():
    report, out, _err = _run('true_bool.tog', CheckerConfig(uselessElaboration=True))
    assert out == ["1:1: check: ok: true"]
    assert report.exitCode == ExitCode.OK


def test_later_goals_see_earlier_solutions(tmp_path):
    """ The substitution is threaded through the file. """
    path = tmp_path / "two.tog"
    path.write_text("meta alpha : Bool\n"
                    "define BoolOrNat : Bool -> Set = \\b -> if b / _. Set then Bool else Nat\n"
                    "postulate P : Bool -> Set\n"
                    "postulate pt : P true\n"
                    "check pt : P alpha\n"
                    "check true : BoolOrNat alpha\n", encoding='utf-8')
    out = StringIO()
    report = run(path, out=out, err=StringIO())
    assert [e.status for e in report.entries] == [Status.OK, Status.OK]
    assert out.getvalue().splitlines() == ["5:1: check: ok: pt", "6:1: check: ok: true"]


def test_earlier_goals_see_later_solutions():
    """ A stuck goal is solved again once a later goal instantiates its
        blockers, and is reported with its final result.
    """
    report, out, err = _run('cross_goal.tog')
    assert out == ["7:1: check: ok: true", "8:1: check: ok: pt"]
    assert err == []
    assert [e.status for e in report.entries] == [Status.OK, Status.OK]
    assert report.exitCode == ExitCode.OK


def test_goals_extend_the_signature():
    """ Each goal only adds meta-variables and instantiations. """
    path = goldenPath('cross_goal.tog')
    with open(path, encoding='utf-8') as f:
        scoped = scopeCheck(parse(f.read()))
    checker = FileChecker(scoped.signature, scoped.defs, CheckerConfig(), StringIO(),
                          StringIO())
    for decl in scoped.declarations:
        if decl.kind != DeclKind.CHECK:
            continue
        signature, subst = checker.signature, dict(checker.subst)
        checker.checkGoal(decl)
        assert signature.isPrefixOf(checker.signature)
        for metaId, value in subst.items():
            assert checker.subst[metaId] == applyMetaSubst(checker.subst, value)


@pytest.mark.parametrize("name", ['true_bool.tog', 'add_x.tog', 'pair_stuck.tog',
                                  'cross_goal.tog'])
def test_output_is_deterministic(name):
    config = CheckerConfig(dumpElaboration=True, dumpSolution=True, traceUnify=True)
    first = _run(name, config)
    second = _run(name, config)
    assert first[1:] == second[1:]
    assert first[1]


def test_long_numeral(tmp_path):
    path = tmp_path / "long.tog"
    path.write_text("check 5000 : Nat\n", encoding='utf-8')
    out = StringIO()
    report = run(path, CheckerConfig(maxSteps=50000), out, StringIO())
    assert out.getvalue().splitlines() == ["1:1: check: ok: 5000"]
    assert report.exitCode == ExitCode.OK


def test_internal_error(monkeypatch):
    def deep(*args, **kwargs):
        raise RecursionError("maximum recursion depth exceeded")

    monkeypatch.setattr('unielab.driver.elaborateCheck', deep)
    report, out, err = _run('true_bool.tog')
    assert out == []
    assert err == ["1:1: check: internal error: term nested too deeply"]
    assert report.entries[0].status == Status.INTERNAL_ERROR
    assert report.exitCode == ExitCode.ERROR


@pytest.mark.parametrize("codes, worst", [
    pytest.param([], ExitCode.OK, id="none"),
    pytest.param([0, 2], ExitCode.STUCK, id="stuck"),
    pytest.param([2, 1, 0], ExitCode.ILL_TYPED, id="ill-typed-beats-stuck"),
    pytest.param([1, 3, 2], ExitCode.ERROR, id="error"),
])
def test_worstExitCode(codes, worst):
    assert worstExitCode(codes) == worst
