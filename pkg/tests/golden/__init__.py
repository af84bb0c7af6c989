"""
Source files with known outcomes, for testing the driver and the
command-line interface.

The expected exit code of each file is in `EXPECTED_EXIT`, keyed by file
name.
"""
import os.path

GOLDEN_ROOT = os.path.realpath(os.path.dirname(__file__))
GOLDEN_PATHS = sorted(os.path.join(GOLDEN_ROOT, f) for f in os.listdir(GOLDEN_ROOT)
                      if f.endswith('.tog'))

EXPECTED_EXIT = {
    'true_bool.tog': 0,
    'identity.tog': 0,
    'cross_goal.tog': 0,
    'add_x.tog': 1,
    'bad_postulate.tog': 1,
    'pair_stuck.tog': 2,
    'step_limit.tog': 2,
    'syntax_error.tog': 3,
    'unresolved.tog': 3,
    'bad_pragma.tog': 3,
}


def goldenPath(name: str) -> str:
    return os.path.join(GOLDEN_ROOT, name)
