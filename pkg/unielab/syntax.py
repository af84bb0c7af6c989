"""
The term language: β-normal canonical and neutral terms over de Bruijn
indices, plus contexts, signatures, meta-variable substitutions and the
top-level definitions environment.

Terms are immutable; display names carried by binders take no part in
equality, so ``==`` is α-equivalence.
"""

from dataclasses import dataclass, field
from typing import (Callable, Dict, FrozenSet, Iterator, List, Optional, Set,
                    Tuple, Union)

from .exceptions import ScopeError
from .types import Binding, Definition, MetaInfo

__all__ = ('App', 'BoolType', 'Context', 'Def', 'DefEnv', 'Elim', 'FalseTerm',
           'Fst', 'Head', 'IfThenElse', 'Lam', 'Meta', 'MetaSubst', 'NatType',
           'Neutral', 'Pair', 'Pi', 'Prod', 'SetType', 'Signature', 'Snd',
           'Suc', 'Term', 'TrueTerm', 'Var', 'ZeroTerm',
           'BOOL', 'FALSE', 'FST', 'NAT', 'SET', 'SND', 'TRUE', 'ZERO',
           'arrow', 'extendSignature', 'findRedex', 'freeVars', 'isNormal',
           'lookupVar', 'metaApp', 'metasOf', 'numeral', 'peelSuc', 'shift',
           'sucTower', 'termSize', 'var')


# ===========================================================================
# Heads
# ===========================================================================

@dataclass(frozen=True)
class Var:
    """ A bound variable, as a de Bruijn index (0 is the innermost binder). """
    index: int


@dataclass(frozen=True)
class Meta:
    """ A meta-variable, identified by its dense signature id. """
    id: int


@dataclass(frozen=True)
class Def:
    """ A top-level postulate or definition, by name. """
    name: str


Head = Union[Var, Meta, Def]


# ===========================================================================
# Eliminations
# ===========================================================================

@dataclass(frozen=True)
class App:
    """ Function application to `argument`. """
    argument: "Term"


@dataclass(frozen=True)
class IfThenElse:
    """ Boolean elimination. The `motive` binds one variable (the
        scrutinee); `name` is that variable's display name.
    """
    motive: "Term"
    thenBranch: "Term"
    elseBranch: "Term"
    name: str = field(default='x', compare=False)


@dataclass(frozen=True)
class Fst:
    """ First projection. """


@dataclass(frozen=True)
class Snd:
    """ Second projection. """


Elim = Union[App, IfThenElse, Fst, Snd]

FST = Fst()
SND = Snd()


# ===========================================================================
# Terms
# ===========================================================================

@dataclass(frozen=True)
class SetType:
    """ The universe. `Set : Set`. """


@dataclass(frozen=True)
class BoolType:
    pass


@dataclass(frozen=True)
class TrueTerm:
    pass


@dataclass(frozen=True)
class FalseTerm:
    pass


@dataclass(frozen=True)
class NatType:
    pass


@dataclass(frozen=True)
class ZeroTerm:
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Suc:
    """ Successor. Literals become long chains of these, so equality,
        hashing and printing walk the chain in a loop.
    """
    predecessor: "Term"

    def __eq__(self, other):
        if not isinstance(other, Suc):
            return NotImplemented
        a, b = self, other
        while isinstance(a, Suc) and isinstance(b, Suc):
            if a is b:
                return True
            a, b = a.predecessor, b.predecessor
        return a == b

    def __hash__(self):
        count, base = peelSuc(self)
        return hash((Suc, count, base))

    def __repr__(self):
        count, base = peelSuc(self)
        return "Suc(" * count + repr(base) + ")" * count


@dataclass(frozen=True)
class Pi:
    """ Dependent function type; `codomain` binds one variable. """
    domain: "Term"
    codomain: "Term"
    name: str = field(default='_', compare=False)


@dataclass(frozen=True)
class Lam:
    """ λ-abstraction; `body` binds one variable. """
    body: "Term"
    name: str = field(default='x', compare=False)


@dataclass(frozen=True)
class Prod:
    """ Non-dependent pair type. """
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Pair:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Neutral:
    """ A head applied to a spine of eliminations. """
    head: Head
    elims: Tuple[Elim, ...] = ()


Term = Union[SetType, BoolType, TrueTerm, FalseTerm, NatType, ZeroTerm, Suc,
             Pi, Lam, Prod, Pair, Neutral]

SET = SetType()
BOOL = BoolType()
TRUE = TrueTerm()
FALSE = FalseTerm()
NAT = NatType()
ZERO = ZeroTerm()

#: Terms with no subterms.
CONSTANTS = (SET, BOOL, TRUE, FALSE, NAT, ZERO)

MetaSubst = Dict[int, Term]
DefEnv = Dict[str, Definition]


# ===========================================================================
# Constructors
# ===========================================================================

def var(index: int) -> Neutral:
    """ The neutral term consisting of variable `index` alone. """
    return Neutral(Var(index))


def metaApp(metaId: int, args: Tuple[Term, ...] = ()) -> Neutral:
    """ Meta-variable `metaId` applied to `args`. """
    return Neutral(Meta(metaId), tuple(App(a) for a in args))


def arrow(domain: Term, codomain: Term) -> Pi:
    """ Non-dependent function type. `codomain` is given in the same
        context as `domain` and is weakened under the binder.
    """
    return Pi(domain, shift(codomain, 1))


def numeral(n: int) -> Term:
    """ The `Suc` tower for natural number `n`. """
    return sucTower(n, ZERO)


def sucTower(count: int, base: Term) -> Term:
    """ Apply `Suc` to `base` `count` times. """
    for _i in range(count):
        base = Suc(base)
    return base


def peelSuc(t: Term) -> Tuple[int, Term]:
    """ Strip the `Suc` nodes off the top of a term.

        :return: How many there were, and what is under them.
    """
    count = 0
    while isinstance(t, Suc):
        count += 1
        t = t.predecessor
    return count, t


# ===========================================================================
# Structural queries
# ===========================================================================

def _elimSize(e: Elim) -> int:
    if isinstance(e, App):
        return 1 + termSize(e.argument)
    if isinstance(e, IfThenElse):
        return 1 + termSize(e.motive) + termSize(e.thenBranch) + termSize(e.elseBranch)
    return 1


def termSize(t: Term) -> int:
    """ Count the syntax nodes of a term. A neutral term counts one node for
        its head, plus the nodes of each elimination.

        :param t: The term to measure.
        :return: A positive count; every subterm is strictly smaller.
    """
    if isinstance(t, Neutral):
        return 1 + sum(_elimSize(e) for e in t.elims)
    if isinstance(t, (Pi,)):
        return 1 + termSize(t.domain) + termSize(t.codomain)
    if isinstance(t, Lam):
        return 1 + termSize(t.body)
    if isinstance(t, Prod):
        return 1 + termSize(t.left) + termSize(t.right)
    if isinstance(t, Pair):
        return 1 + termSize(t.first) + termSize(t.second)
    if isinstance(t, Suc):
        count, base = peelSuc(t)
        return count + termSize(base)
    return 1


def _mapElims(elims: Tuple[Elim, ...], fn: Callable[[Term, int], Term],
              depth: int) -> Tuple[Elim, ...]:
    out = []
    for e in elims:
        if isinstance(e, App):
            out.append(App(fn(e.argument, depth)))
        elif isinstance(e, IfThenElse):
            out.append(IfThenElse(fn(e.motive, depth + 1),
                                  fn(e.thenBranch, depth),
                                  fn(e.elseBranch, depth), e.name))
        else:
            out.append(e)
    return tuple(out)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """ Add `by` to every variable index at or above `cutoff`.

        :param t: The term to shift.
        :param by: The amount to shift by; may be negative.
        :param cutoff: Indices below this are bound locally and left alone.
    """
    if by == 0:
        return t

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Neutral):
            h = t.head
            if isinstance(h, Var) and h.index >= depth:
                h = Var(h.index + by)
            return Neutral(h, _mapElims(t.elims, go, depth))
        if isinstance(t, Pi):
            return Pi(go(t.domain, depth), go(t.codomain, depth + 1), t.name)
        if isinstance(t, Lam):
            return Lam(go(t.body, depth + 1), t.name)
        if isinstance(t, Prod):
            return Prod(go(t.left, depth), go(t.right, depth))
        if isinstance(t, Pair):
            return Pair(go(t.first, depth), go(t.second, depth))
        if isinstance(t, Suc):
            count, base = peelSuc(t)
            return sucTower(count, go(base, depth))
        return t

    return go(t, cutoff)


def subterms(t: Term) -> Iterator[Tuple[Term, int]]:
    """ Yield `(subterm, binderDepth)` for `t` and all its subterms,
        including terms inside eliminations.
    """
    stack = [(t, 0)]
    while stack:
        t, depth = stack.pop()
        yield t, depth
        if isinstance(t, Neutral):
            for e in t.elims:
                if isinstance(e, App):
                    stack.append((e.argument, depth))
                elif isinstance(e, IfThenElse):
                    stack.append((e.motive, depth + 1))
                    stack.append((e.thenBranch, depth))
                    stack.append((e.elseBranch, depth))
        elif isinstance(t, Pi):
            stack.append((t.domain, depth))
            stack.append((t.codomain, depth + 1))
        elif isinstance(t, Lam):
            stack.append((t.body, depth + 1))
        elif isinstance(t, Prod):
            stack.append((t.left, depth))
            stack.append((t.right, depth))
        elif isinstance(t, Pair):
            stack.append((t.first, depth))
            stack.append((t.second, depth))
        elif isinstance(t, Suc):
            stack.append((t.predecessor, depth))


def metasOf(t: Term) -> FrozenSet[int]:
    """ The ids of all meta-variables occurring in `t`. """
    return frozenset(s.head.id for s, _d in subterms(t)
                     if isinstance(s, Neutral) and isinstance(s.head, Meta))


def freeVars(t: Term) -> Set[int]:
    """ The free de Bruijn indices of `t`, relative to its own context. """
    return {s.head.index - d for s, d in subterms(t)
            if isinstance(s, Neutral) and isinstance(s.head, Var)
            and s.head.index >= d}


def findRedex(t: Term) -> Optional[str]:
    """ Scan a term for anything that is not in β-normal form, or not a
        well-built term at all.

        :return: A description of the first offending node, or `None` if
            the term is normal.
    """
    for s, _d in subterms(t):
        if not isinstance(s, (SetType, BoolType, TrueTerm, FalseTerm, NatType,
                              ZeroTerm, Suc, Pi, Lam, Prod, Pair, Neutral)):
            return "not a term: {!r}".format(s)
        if not isinstance(s, Neutral):
            continue
        h = s.head
        if not isinstance(h, (Var, Meta, Def)):
            first = s.elims[0] if s.elims else None
            if isinstance(h, Lam) and isinstance(first, App):
                return "application of a lambda"
            if isinstance(h, (TrueTerm, FalseTerm)) and isinstance(first, IfThenElse):
                return "if on a boolean literal"
            if isinstance(h, Pair) and isinstance(first, (Fst, Snd)):
                return "projection of a pair"
            return "canonical term in head position: {!r}".format(h)
        for e in s.elims:
            if not isinstance(e, (App, IfThenElse, Fst, Snd)):
                return "not an elimination: {!r}".format(e)
    return None


def isNormal(t: Term) -> bool:
    """ Is `t` a well-built β-normal term? """
    return findRedex(t) is None


# ===========================================================================
# Contexts
# ===========================================================================

class Context:
    """ An ordered list of variable bindings. Each binding's type lives in
        the context formed by the bindings before it. Immutable; `extend`
        returns a new context.
    """

    __slots__ = ('bindings',)

    def __init__(self, bindings: Tuple[Binding, ...] = ()):
        self.bindings = tuple(bindings)

    def __len__(self):
        return len(self.bindings)

    def __iter__(self):
        return iter(self.bindings)

    def __eq__(self, other):
        if not isinstance(other, Context):
            return NotImplemented
        return tuple(b.type for b in self.bindings) == tuple(b.type for b in other.bindings)

    def __hash__(self):
        return hash(tuple(b.type for b in self.bindings))

    def __repr__(self):
        return "<Context {}>".format(', '.join(b.name for b in self.bindings) or '.')

    @property
    def names(self) -> List[str]:
        return [b.name for b in self.bindings]

    def extend(self, type: Term, name: str = 'x') -> "Context":
        """ Add a binding for a new innermost variable. """
        return Context(self.bindings + (Binding(name, type),))

    def lookupVar(self, index: int) -> Term:
        """ Get the type of variable `index`, weakened to the whole context.

            :raise ScopeError: If the index is out of range.
        """
        if index < 0 or index >= len(self.bindings):
            raise ScopeError("variable #{} not in scope (context has {} entries)"
                             .format(index, len(self.bindings)))
        binding = self.bindings[len(self.bindings) - 1 - index]
        return shift(binding.type, index + 1)

    def prefix(self, length: int) -> "Context":
        return Context(self.bindings[:length])

    def map(self, fn: Callable[[Term], Term]) -> "Context":
        """ Apply `fn` to every binding's type. """
        return Context(tuple(Binding(b.name, fn(b.type)) for b in self.bindings))

    def telescope(self, type: Term) -> Term:
        """ Close `type` (which lives in this context) over every binding,
            giving the closed type Γ→A.
        """
        for b in reversed(self.bindings):
            type = Pi(b.type, type, b.name)
        return type

    def variables(self) -> Tuple[Term, ...]:
        """ The variables of this context, outermost first, as terms. """
        n = len(self.bindings)
        return tuple(var(n - 1 - i) for i in range(n))


def lookupVar(ctx: Context, index: int) -> Term:
    """ Module-level alias of :meth:`Context.lookupVar`. """
    return ctx.lookupVar(index)


# ===========================================================================
# Signatures
# ===========================================================================

class Signature:
    """ The meta-variable store: an insertion-ordered map from dense integer
        ids to closed types. Extension-only; `extend` returns a new
        signature and leaves this one unchanged.

        Extensions share storage with their prefixes. Extending a signature
        that is not the newest in its chain copies it first.
    """

    __slots__ = ('_store', '_size')

    def __init__(self, entries: Optional[List[MetaInfo]] = None):
        self._store: List[MetaInfo] = list(entries or ())
        self._size = len(self._store)

    @classmethod
    def _view(cls, store: List[MetaInfo], size: int) -> "Signature":
        sig = cls.__new__(cls)
        sig._store = store
        sig._size = size
        return sig

    def __len__(self):
        return self._size

    def __contains__(self, metaId):
        return isinstance(metaId, int) and 0 <= metaId < self._size

    def __iter__(self):
        return iter(range(self._size))

    def __repr__(self):
        return "<Signature with {} meta-variable(s)>".format(self._size)

    def extend(self, type: Term, name: Optional[str] = None) -> Tuple["Signature", int]:
        """ Add a fresh meta-variable of closed type `type`.

            :param type: The closed type of the new meta-variable.
            :param name: Optional display name (e.g., from a declaration).
            :return: The extended signature and the new id.
        """
        newId = self._size
        store = self._store
        if len(store) != self._size:
            store = store[:self._size]
        store.append(MetaInfo(type, name))
        return Signature._view(store, newId + 1), newId

    def lookup(self, metaId: int) -> MetaInfo:
        """ Get the entry for a meta-variable.

            :raise ScopeError: If `metaId` is not in this signature.
        """
        if metaId not in self:
            raise ScopeError("meta-variable ?{} not in scope".format(metaId))
        return self._store[metaId]

    def typeOf(self, metaId: int) -> Term:
        return self.lookup(metaId).type

    def items(self) -> Iterator[Tuple[int, MetaInfo]]:
        for i in range(self._size):
            yield i, self._store[i]

    def prefix(self, length: int) -> "Signature":
        """ The signature of the first `length` meta-variables. """
        return Signature._view(self._store, min(length, self._size))

    def isPrefixOf(self, other: "Signature") -> bool:
        """ Is `other` an extension of this signature? """
        if len(other) < self._size:
            return False
        return all(self._store[i] is other._store[i] or self._store[i] == other._store[i]
                   for i in range(self._size))


def extendSignature(sig: Signature, type: Term,
                    name: Optional[str] = None) -> Tuple[Signature, int]:
    """ Module-level alias of :meth:`Signature.extend`. """
    return sig.extend(type, name)
