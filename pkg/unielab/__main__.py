"""
Command-line interface: check one or more ``.tog`` files.

The exit status is the worst across files: 3 for a syntax, scope or I/O
error, 1 if any goal is ill-typed, 2 if any is stuck, 0 otherwise.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .config import CheckerConfig
from .driver import run, worstExitCode
from .exceptions import ConfigError
from .results import ExitCode

logger = logging.getLogger('unielab')

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def makeParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unielab",
        description="Elaborate and check .tog files of a small dependent type theory")
    parser.add_argument("files", nargs="+", metavar="FILE",
                        help="Source files to check, in order")
    parser.add_argument("--dump-elaboration", action="store_true", default=None,
                        help="Print the meta-variables and constraints of each goal")
    parser.add_argument("--dump-solution", action="store_true", default=None,
                        help="Print the meta-variable instantiations of each goal")
    parser.add_argument("--trace-unify", action="store_true", default=None,
                        help="Print one line per solver event")
    parser.add_argument("--max-steps", type=int, default=None, metavar="N",
                        help="Bound on solver steps per goal (default: 10000)")
    parser.add_argument("--verify", action="store_true", default=None,
                        help="Re-check solutions with the declarative checker")
    parser.add_argument("--useless-elaboration", action="store_true", default=None,
                        help="Use the single-constraint baseline elaboration (debugging)")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="More log output; repeat for debug messages")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """ Run the checker.

        :param argv: Command-line arguments (default: `sys.argv[1:]`).
        :return: The exit status.
    """
    args = makeParser().parse_args(argv)
    logging.basicConfig(level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = CheckerConfig.fromArgs(args)
    except ConfigError as err:
        print("unielab: {}".format(err), file=sys.stderr)
        return int(ExitCode.ERROR)

    reports = [run(f, config) for f in args.files]
    return int(worstExitCode(r.exitCode for r in reports))


if __name__ == "__main__":
    sys.exit(main())
