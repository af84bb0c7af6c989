"""
Exceptions raised while parsing, scope checking, type checking, elaborating
and normalising terms.
"""

from typing import FrozenSet, Iterable, Optional, Tuple

__all__ = ('BlockedError', 'ConfigError', 'ElabError', 'InvariantViolation',
           'ParseError', 'ScopeError', 'TypeMismatch')


class ElabError(Exception):
    """ Base class for checker-related exceptions. """
    @property
    def position(self) -> Optional[Tuple[int, int]]:
        """ The (line, column) the error refers to, if known. """
        pos = getattr(self, '_position', None)
        return pos


class ScopeError(LookupError, ElabError):
    """ Exception raised when a variable, meta-variable or identifier is not
        in scope, or a declaration name is reused.
    """
    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self._position = position

    def __str__(self):
        msg = self.args[0] if self.args else ''
        if self._position:
            return "{}:{}: {}".format(self._position[0], self._position[1], msg)
        return str(msg)


class TypeMismatch(ValueError, ElabError):
    """ Exception raised when a judgment definitely does not hold. """


class BlockedError(ElabError):
    """ Exception raised when a typing rule needs the shape of a type whose
        weak head normal form is impeded by uninstantiated meta-variables.

        :param metas: The ids of the blocking meta-variables.
    """
    def __init__(self, metas: Iterable[int], message: str = "blocked"):
        super().__init__(message)
        self.metas: FrozenSet[int] = frozenset(metas)

    def __str__(self):
        return "{} on {{{}}}".format(self.args[0], ', '.join(
            '?{}'.format(m) for m in sorted(self.metas)))


class InvariantViolation(RuntimeError, ElabError):
    """ Exception raised when an internal invariant breaks, e.g., hereditary
        substitution meeting an ill-typed elimination, or the normalisation
        step fuse running out.
    """


class ParseError(SyntaxError, ElabError):
    """ Exception raised when source text cannot be parsed.

        Intended to be instantiated with a message and, optionally, the line
        and column of the offending input.
    """
    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        super().__init__(message)
        self._position = (line, column) if line is not None else None

    def __str__(self):
        if self._position:
            return "{}:{}: {}".format(self._position[0], self._position[1],
                                      self.args[0])
        return str(self.args[0])


class ConfigError(ValueError, ElabError):
    """ Exception raised when checker configuration is invalid.
    """
