"""
Checker configuration: command-line options, optionally preset per file by
a pragma comment on the first line, e.g.::

    -- unielab: max-steps=500 verify

Options given explicitly on the command line override the pragma.
"""

from argparse import Namespace
import logging
import re
from typing import Any, Dict, FrozenSet, Iterable

from .exceptions import ConfigError
from .unify import DEFAULT_MAX_STEPS

logger = logging.getLogger(__name__)

__all__ = ('CheckerConfig', 'parsePragma')

#: Matches a configuration pragma on the first line of a source file.
PRAGMA_RE = re.compile(r'^\s*--\s*unielab:(.*)$')

#: Pragma/flag spellings and the `CheckerConfig` attributes they set.
OPTION_NAMES = {
    'max-steps': 'maxSteps',
    'verify': 'verify',
    'dump-elaboration': 'dumpElaboration',
    'dump-solution': 'dumpSolution',
    'trace-unify': 'traceUnify',
    'useless-elaboration': 'uselessElaboration',
}


def parsePragma(text: str) -> Dict[str, Any]:
    """ Read the options set by a pragma on the first line of `text`.

        :param text: The source text.
        :return: A dictionary of `CheckerConfig` attribute names and values;
            empty if there is no pragma.
        :raise ConfigError: On an unknown option or a malformed value.
    """
    first = text.split('\n', 1)[0]
    match = PRAGMA_RE.match(first)
    if not match:
        return {}

    options = {}
    for word in match.group(1).split():
        key, sep, value = word.partition('=')
        attr = OPTION_NAMES.get(key)
        if attr is None:
            raise ConfigError("unknown pragma option {!r}".format(key))
        if attr == 'maxSteps':
            if not sep:
                raise ConfigError("max-steps needs a value, e.g. max-steps=500")
            try:
                options[attr] = int(value)
            except ValueError:
                raise ConfigError("bad max-steps value {!r}".format(value))
        else:
            if sep:
                raise ConfigError("{} takes no value".format(key))
            options[attr] = True
    return options


class CheckerConfig:
    """ Options controlling a checking run.

        :param maxSteps: Bound on the number of equations the solver pops
            per goal. Must be positive.
        :param verify: Re-check every solution with the declarative checker.
        :param dumpElaboration: Print the meta-variables and constraints
            produced by elaboration.
        :param dumpSolution: Print the meta-variable instantiations.
        :param traceUnify: Print a line for every solver event.
        :param uselessElaboration: Use the single-constraint baseline
            instead of the structured elaboration.
        :param explicit: Names of the options set explicitly; pragmas do not
            override these.
    """

    __slots__ = ('maxSteps', 'verify', 'dumpElaboration', 'dumpSolution',
                 'traceUnify', 'uselessElaboration', 'explicit')

    def __init__(self, maxSteps: int = DEFAULT_MAX_STEPS, verify: bool = False,
                 dumpElaboration: bool = False, dumpSolution: bool = False,
                 traceUnify: bool = False, uselessElaboration: bool = False,
                 explicit: Iterable[str] = ()):
        if isinstance(maxSteps, bool) or not isinstance(maxSteps, int):
            raise ConfigError("maxSteps must be an integer, not {!r}".format(maxSteps))
        if maxSteps <= 0:
            raise ConfigError("maxSteps must be positive (got {})".format(maxSteps))
        self.maxSteps = maxSteps
        self.verify = bool(verify)
        self.dumpElaboration = bool(dumpElaboration)
        self.dumpSolution = bool(dumpSolution)
        self.traceUnify = bool(traceUnify)
        self.uselessElaboration = bool(uselessElaboration)
        self.explicit: FrozenSet[str] = frozenset(explicit)

    def __repr__(self):
        opts = ', '.join("{}={!r}".format(k, getattr(self, k))
                         for k in OPTION_NAMES.values())
        return "<{} {}>".format(type(self).__name__, opts)

    def __eq__(self, other):
        if not isinstance(other, CheckerConfig):
            return NotImplemented
        return all(getattr(self, k) == getattr(other, k) for k in OPTION_NAMES.values())

    def asDict(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in OPTION_NAMES.values()}

    @classmethod
    def fromArgs(cls, args: Namespace) -> "CheckerConfig":
        """ Build a configuration from parsed command-line arguments.
            Arguments that are absent or `None` keep their defaults and
            remain open to pragmas.
        """
        values = {}
        for flag, attr in OPTION_NAMES.items():
            value = getattr(args, flag.replace('-', '_'), None)
            if value is not None:
                values[attr] = value
        return cls(explicit=values.keys(), **values)

    def withPragma(self, text: str) -> "CheckerConfig":
        """ Apply the pragma of a source file, if any. Explicitly set options
            are left alone.

            :raise ConfigError: If the pragma is malformed.
        """
        pragma = parsePragma(text)
        if not pragma:
            return self
        values = self.asDict()
        for attr, value in pragma.items():
            if attr not in self.explicit:
                values[attr] = value
        logger.debug("pragma options: {}".format(pragma))
        return CheckerConfig(explicit=self.explicit, **values)
