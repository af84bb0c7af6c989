"""
The batch driver: parse, scope check, validate declarations, then elaborate
and solve each goal in turn, threading one signature and one substitution
through the file. Goal results are printed once the whole file is checked.
"""

import logging
from pathlib import Path
import sys
from typing import (Callable, FrozenSet, List, NamedTuple, Optional, Sequence, TextIO,
                    Tuple, Union)

from .config import CheckerConfig
from .elaborate import Constraint, ElabOutput, elaborateCheck, uselessElaboration
from .exceptions import ConfigError, InvariantViolation, ParseError, ScopeError, TypeMismatch
from .normalize import applyMetaSubst
from .parser import parse
from .pretty import contextNames, showTerm
from .results import ExitCode, Status, Verdict
from .scope import DeclKind, Declaration, scopeCheck
from .syntax import SET, Context, DefEnv, MetaSubst, Signature
from .types import Filename, Position
from . import typecheck
from .unify import (Failed, Residual, Solved, SolveResult, Stuck, solveAll,
                    verifySolution)

logger = logging.getLogger(__name__)

__all__ = ('FileChecker', 'Goal', 'Report', 'ReportEntry', 'run', 'worstExitCode')


# ===========================================================================
#
# ===========================================================================

class ReportEntry(NamedTuple):
    """ The outcome of one declaration.

        :ivar status: OK, ILL_TYPED, STUCK, SYNTAX_ERROR or INTERNAL_ERROR.
        :ivar label: Where and what the declaration is.
        :ivar message: A diagnostic, or the final term of a goal.
        :ivar residuals: Unsolved constraints of a stuck goal.
        :ivar unsolved: Meta-variables of a goal left uninstantiated.
    """
    status: Status
    label: str
    message: str = ''
    residuals: Tuple[Residual, ...] = ()
    unsolved: FrozenSet[int] = frozenset()
    position: Optional[Position] = None


class Report(NamedTuple):
    """ The outcome of checking one file. Entries are in declaration order.
    """
    path: str
    entries: Tuple[ReportEntry, ...]
    exitCode: ExitCode


def worstExitCode(codes) -> ExitCode:
    """ Combine exit codes: ERROR > ILL_TYPED > STUCK > OK. """
    worst = ExitCode.OK
    for code in codes:
        if ExitCode(code).severity > worst.severity:
            worst = ExitCode(code)
    return worst


def _exitCode(entries) -> ExitCode:
    return worstExitCode(ExitCode.fromStatus(e.status) for e in entries)


class Goal(NamedTuple):
    """ A `check` declaration, its elaboration, and the latest solver result
        for its constraints.
    """
    decl: Declaration
    elab: ElabOutput
    result: SolveResult

    @property
    def revisitable(self) -> bool:
        """ Is the goal stuck on postponed constraints (rather than on the
            step limit)?
        """
        return isinstance(self.result, Stuck) and not self.result.diagnostic


class FileChecker:
    """ Checks the declarations of one scope-checked file.

        Goals share one signature and one substitution, so a later goal can
        instantiate a meta-variable an earlier goal is stuck on. Goal
        results are therefore reported once the whole file is checked, in
        declaration order, after stuck goals have been revisited.

        :param signature: The signature of declared meta-variables.
        :param defs: Top-level postulates and definitions.
        :param config: The options for this file.
        :param out: Stream for results and dumps.
        :param err: Stream for diagnostics.
    """

    def __init__(self, signature: Signature, defs: DefEnv, config: CheckerConfig,
                 out: TextIO, err: TextIO):
        self.signature = signature
        self.defs = defs
        self.config = config
        self.out = out
        self.err = err
        self.subst: MetaSubst = {}

    def _print(self, *args):
        print(*args, file=self.out)

    def _illTyped(self, decl: Declaration, message: str) -> ReportEntry:
        print("{}: ill-typed: {}".format(decl.label, message), file=self.err)
        return ReportEntry(Status.ILL_TYPED, decl.label, message, position=decl.position)

    def _internalError(self, decl: Declaration, message: str) -> ReportEntry:
        logger.error("{}: {}".format(decl.label, message))
        print("{}: internal error: {}".format(decl.label, message), file=self.err)
        return ReportEntry(Status.INTERNAL_ERROR, decl.label, message, position=decl.position)

    def _judgment(self, decl: Declaration, verdict: Verdict,
                  what: str) -> Optional[ReportEntry]:
        """ Turn a failed validation verdict into a report entry. """
        if verdict:
            return None
        if verdict.blocked:
            print("{}: {} is blocked on {}".format(decl.label, what, sorted(verdict.metas)),
                  file=self.err)
            return ReportEntry(Status.STUCK, decl.label, verdict.reason,
                               unsolved=verdict.metas, position=decl.position)
        logger.warning("{}: {}".format(decl.label, verdict.reason))
        return self._illTyped(decl, "{}: {}".format(what, verdict.reason))

    def validate(self, decl: Declaration) -> Optional[ReportEntry]:
        """ Check a postulate, definition or meta-variable declaration.

            :return: A report entry if the declaration is not well-typed,
                otherwise `None`.
        """
        empty = Context()
        failed = self._judgment(decl, typecheck.check(self.signature, self.defs, empty,
                                                      decl.type, SET, self.subst), "type")
        if failed or decl.kind != DeclKind.DEFINE:
            return failed
        return self._judgment(decl, typecheck.check(self.signature, self.defs, empty,
                                                    decl.body, decl.type, self.subst), "body")

    def _elaborate(self, decl: Declaration) -> ElabOutput:
        if self.config.uselessElaboration:
            return uselessElaboration(self.signature, decl.ctx, decl.body, decl.type)
        return elaborateCheck(self.signature, self.defs, decl.ctx, decl.body, decl.type)

    def _dumpElaboration(self, elab: ElabOutput):
        for metaId in elab.freshMetas:
            self._print("?{} : {}".format(metaId, showTerm(elab.signature.typeOf(metaId))))
        for c in elab.constraints:
            self._print(str(c))

    def _dumpSolution(self, previous):
        for metaId in sorted(self.subst):
            if metaId not in previous:
                self._print("?{} := {}".format(metaId, showTerm(self.subst[metaId])))

    def _solve(self, decl: Declaration, constraints: Sequence[Constraint]) -> SolveResult:
        """ Solve constraints living in the current signature, continuing
            from the current substitution; both are updated.
        """
        trace: Optional[Callable[[str], None]] = self._print if self.config.traceUnify else None
        previous = frozenset(self.subst)
        signature = self.signature
        result = solveAll(signature, constraints, self.defs, self.subst,
                          self.config.maxSteps, trace)
        self.signature, self.subst = result.signature, result.subst

        if self.config.verify:
            v = verifySolution(result, signature, constraints, self.defs)
            if not v:
                logger.error("{}: verification failed: {}".format(decl.label, v.reason))
                result = Failed("verification failed: {}".format(v.reason), result.subst,
                                result.signature, result.solved)

        if self.config.dumpSolution:
            self._dumpSolution(previous)
        return result

    def checkGoal(self, decl: Declaration) -> Union[Goal, ReportEntry]:
        """ Elaborate a goal and solve its constraints.

            :return: The `Goal`, or a report entry if its context or type
                does not check.
        """
        ctx = decl.ctx
        failed = (self._judgment(decl, typecheck.checkContext(self.signature, ctx, self.defs,
                                                              self.subst), "context")
                  or self._judgment(decl, typecheck.check(self.signature, self.defs, ctx,
                                                          decl.type, SET, self.subst),
                                    "goal type"))
        if failed:
            return failed

        elab = self._elaborate(decl)
        logger.info("{}: {} meta-variable(s), {} constraint(s)".format(
            decl.label, len(elab.freshMetas), len(elab.constraints)))
        if self.config.dumpElaboration:
            self._dumpElaboration(elab)

        self.signature = elab.signature
        return Goal(decl, elab, self._solve(decl, elab.constraints))

    def revisit(self, goals: List[Goal]) -> List[Goal]:
        """ Solve the residual constraints of stuck goals again whenever a
            meta-variable blocking them has since been instantiated, until
            nothing changes.

            :return: The goals with their latest results, in the same order.
        """
        goals = list(goals)
        changed = True
        while changed:
            changed = False
            for i, goal in enumerate(goals):
                if not goal.revisitable:
                    continue
                residuals = goal.result.residuals
                if not any(m in self.subst for r in residuals for m in r.blockers):
                    continue
                logger.debug("{}: solving {} residual constraint(s) again".format(
                    goal.decl.label, len(residuals)))
                try:
                    result = self._solve(goal.decl, [r.constraint for r in residuals])
                except (TypeMismatch, ScopeError, InvariantViolation) as err:
                    result = Failed(str(err), self.subst, self.signature)
                goals[i] = goal._replace(result=result)
                changed = True
        return goals

    def report(self, goal: Goal) -> ReportEntry:
        """ Print a goal's outcome and make its report entry. """
        decl, result = goal.decl, goal.result
        if isinstance(result, Failed):
            return self._illTyped(decl, result.diagnostic)

        term = showTerm(applyMetaSubst(self.subst, goal.elab.term), contextNames(decl.ctx))
        if isinstance(result, Solved):
            self._print("{}: ok: {}".format(decl.label, term))
            return ReportEntry(Status.OK, decl.label, term, position=decl.position)

        unsolved = frozenset(m for m in goal.elab.freshMetas if m not in self.subst)
        self._print("{}: stuck{}".format(decl.label, ": " + result.diagnostic
                                         if result.diagnostic else ""))
        self._print("  term: {}".format(term))
        for r in result.residuals:
            self._print("  {}".format(r))
        return ReportEntry(Status.STUCK, decl.label, term, result.residuals, unsolved,
                           decl.position)

    def check(self, declarations) -> List[ReportEntry]:
        """ Check every declaration, then report the goals.

            :return: One entry per goal and per declaration that fails to
                check, in declaration order.
        """
        entries: List[Union[Goal, ReportEntry]] = []
        for decl in declarations:
            logger.debug("checking {}".format(decl.label))
            try:
                if decl.kind == DeclKind.CHECK:
                    entries.append(self.checkGoal(decl))
                else:
                    entry = self.validate(decl)
                    if entry is not None:
                        entries.append(entry)
            except (TypeMismatch, ScopeError, InvariantViolation) as err:
                entries.append(self._illTyped(decl, str(err)))
            except RecursionError:
                entries.append(self._internalError(decl, "term nested too deeply"))

        goals = iter(self.revisit([e for e in entries if isinstance(e, Goal)]))
        return [self.report(next(goals)) if isinstance(e, Goal) else e for e in entries]


def run(path: Filename, config: Optional[CheckerConfig] = None,
        out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> Report:
    """ Check a source file.

        :param path: The ``.tog`` file to check.
        :param config: Checker options; the file's pragma may add to them.
        :param out: Stream for results and dumps (default: stdout).
        :param err: Stream for diagnostics (default: stderr).
        :return: A `Report` with one entry per goal (and per declaration
            that fails to check), and the file's exit code.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    config = config or CheckerConfig()
    name = str(path)

    def fatal(status: Status, message: str, position: Optional[Position] = None) -> Report:
        print("{}: {}".format(name, message), file=err)
        entry = ReportEntry(status, name, message, position=position)
        return Report(name, (entry,), ExitCode.fromStatus(status))

    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        return fatal(Status.SYNTAX_ERROR, "cannot read file: {}".format(e))

    try:
        config = config.withPragma(text)
        scoped = scopeCheck(parse(text))
    except (ParseError, ScopeError) as e:
        return fatal(Status.SYNTAX_ERROR, str(e), e.position)
    except ConfigError as e:
        return fatal(Status.SYNTAX_ERROR, "bad pragma: {}".format(e))
    except TypeMismatch as e:
        return fatal(Status.ILL_TYPED, str(e))
    except RecursionError:
        return fatal(Status.INTERNAL_ERROR, "internal error: input nested too deeply")

    checker = FileChecker(scoped.signature, scoped.defs, config, out, err)
    entries = checker.check(scoped.declarations)
    report = Report(name, tuple(entries), _exitCode(entries))
    logger.debug("{}: exit code {}".format(name, report.exitCode.name))
    return report
