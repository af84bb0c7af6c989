"""
Result codes. Judgments, conversion checks, report entries and the process
exit status are all enumerations; these give the values some context.

All codes are interchangeable with `int`.
"""

from enum import IntEnum
from typing import Any, FrozenSet, Iterable, NamedTuple, Optional

__all__ = ("ExitCode", "Outcome", "Status", "Verdict")


class Outcome(IntEnum):
    """ The three-valued answer of a judgment or a conversion check.
    """
    YES = 0  #: The judgment holds.
    NO = 1  #: The judgment definitely does not hold.
    BLOCKED = 2  #: Uninstantiated meta-variables prevent a decision.


class Status(IntEnum):
    """ The outcome of a single declaration in a checked file.
    """
    OK = 0  #: Checked; all constraints solved.
    ILL_TYPED = 1  #: A declaration is ill-typed, or unification failed.
    STUCK = 2  #: Constraints remain, postponed on uninstantiated meta-variables.
    SYNTAX_ERROR = 3  #: The file could not be parsed or scope checked.
    INTERNAL_ERROR = 4  #: The checker itself gave up, e.g. on a too deeply nested term.


class ExitCode(IntEnum):
    """ Process exit status of the command-line checker. Values match the
        most severe `Status` seen, except that errors outrank ill-typedness.
    """
    OK = 0  #: Every goal checked.
    ILL_TYPED = 1  #: At least one goal is ill-typed.
    STUCK = 2  #: At least one goal is stuck, none ill-typed.
    ERROR = 3  #: Syntax, scope, I/O or internal error.

    @classmethod
    def fromStatus(cls, status: Status) -> "ExitCode":
        """ Map a report status to the corresponding exit code. """
        return {Status.OK: cls.OK,
                Status.ILL_TYPED: cls.ILL_TYPED,
                Status.STUCK: cls.STUCK,
                Status.SYNTAX_ERROR: cls.ERROR,
                Status.INTERNAL_ERROR: cls.ERROR}[status]

    @property
    def severity(self) -> int:
        """ Rank used to combine exit codes; higher is worse. """
        return (0, 2, 1, 3)[self]


# ===========================================================================
# Judgment results
# ===========================================================================

class Verdict(NamedTuple):
    """ The result of a judgment. Truthy only for `Outcome.YES`.

        `reason` explains a NO; `metas` lists the blocking meta-variables of
        a BLOCKED; `value` carries a result such as an inferred type.
    """
    outcome: Outcome
    reason: str = ''
    metas: FrozenSet[int] = frozenset()
    value: Optional[Any] = None

    def __bool__(self):
        return self.outcome == Outcome.YES

    @property
    def blocked(self) -> bool:
        return self.outcome == Outcome.BLOCKED

    @classmethod
    def yes(cls, value: Optional[Any] = None) -> "Verdict":
        return cls(Outcome.YES, value=value)

    @classmethod
    def no(cls, reason: str) -> "Verdict":
        return cls(Outcome.NO, reason)

    @classmethod
    def blockedOn(cls, metas: Iterable[int], reason: str = "blocked") -> "Verdict":
        return cls(Outcome.BLOCKED, reason, frozenset(metas))
