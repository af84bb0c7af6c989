"""
An elaborating type checker for a small dependent type theory with
meta-variables. Terms are elaborated into a well-typed approximation plus
heterogeneous unification constraints, which a dynamic pattern-unification
solver then tries to discharge.
"""

import logging
logger = logging.getLogger(__name__)

from .elaborate import (Constraint, ElabOutput, Elaborator, elaborateCheck,
                        elaborateInfer, elaborateType, freshMeta)
from .exceptions import *
from .normalize import applyMetaSubst, elimApp, elimIf, instantiate, subst, whnf
from .results import ExitCode, Outcome, Status, Verdict
from .syntax import Context, Signature, termSize
from .typecheck import (check, checkContext, checkMetaSubst, checkSignature,
                        convert, convertNeutral, infer)
from .unify import Failed, Solved, Solver, Stuck, solveAll, split

# ============================================================================
#
# ============================================================================

__version__ = "0.1.0"

__all__ = ('BlockedError', 'ConfigError', 'ElabError', 'InvariantViolation',
           'ParseError', 'ScopeError', 'TypeMismatch',
           'Constraint', 'Context', 'ElabOutput', 'Elaborator', 'ExitCode',
           'Failed', 'Outcome', 'Signature', 'Solved', 'Solver', 'Status',
           'Stuck', 'Verdict',
           'applyMetaSubst', 'check', 'checkContext', 'checkMetaSubst',
           'checkSignature', 'convert', 'convertNeutral', 'elaborateCheck',
           'elaborateInfer', 'elaborateType', 'elimApp', 'elimIf', 'freshMeta',
           'infer', 'instantiate', 'solveAll', 'split', 'subst', 'termSize',
           'whnf')
