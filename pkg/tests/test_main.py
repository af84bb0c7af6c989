"""
Command-line interface tests.
"""

import pytest

from unielab.__main__ import main

from .golden import goldenPath


def test_main_ok(capsys):
    assert main([goldenPath('true_bool.tog')]) == 0
    captured = capsys.readouterr()
    assert captured.out == "1:1: check: ok: true\n"


@pytest.mark.parametrize("names, code", [
    pytest.param(['true_bool.tog', 'pair_stuck.tog'], 2, id="stuck"),
    pytest.param(['pair_stuck.tog', 'add_x.tog'], 1, id="ill-typed-beats-stuck"),
    pytest.param(['add_x.tog', 'unresolved.tog', 'true_bool.tog'], 3, id="error-beats-all"),
])
def test_main_worst_exit_code(names, code, capsys):
    """ The exit status is the worst over all files. """
    assert main([goldenPath(n) for n in names]) == code
    capsys.readouterr()


def test_main_options(capsys):
    assert main(["--dump-solution", "--trace-unify", goldenPath('true_bool.tog')]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "SOLVE ?0 := true" in out
    assert "?0 := true" in out


def test_main_max_steps_overrides_pragma(capsys):
    assert main([goldenPath('step_limit.tog')]) == 2
    assert main(["--max-steps", "500", goldenPath('step_limit.tog')]) == 1
    capsys.readouterr()


def test_main_bad_max_steps(capsys):
    assert main(["--max-steps", "0", goldenPath('true_bool.tog')]) == 3
    assert "maxSteps must be positive" in capsys.readouterr().err


def test_main_no_files(capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
