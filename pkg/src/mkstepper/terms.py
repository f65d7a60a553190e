"""Terms, substitutions, states, and sound unification.

Terms are immutable trees built from constants, indexed logic variables,
pairs, and (only before lowering substitutes them away) named syntactic
variables. Substitutions are triangular: a bound term may itself contain
bound variables, and ``walk`` resolves the chain. Both the substitution
and the trail are persistent extension-only chains, so the many states
held in a stepping history share structure instead of copying.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional


class EngineInvariantError(Exception):
    """An internal contract was violated; never a user error."""


class Term:
    __slots__ = ()


@dataclass(frozen=True, eq=False, slots=True)
class Const(Term):
    """A symbol (str), integer, boolean, or () for the empty list."""

    value: object

    def __eq__(self, other: object) -> bool:
        # type identity matters: #t must not compare equal to 1
        return (
            isinstance(other, Const)
            and type(other.value) is type(self.value)
            and other.value == self.value
        )

    def __hash__(self) -> int:
        return hash((Const, type(self.value).__name__, self.value))


@dataclass(frozen=True, slots=True)
class Var(Term):
    """The index-th logic variable, rendered ``#(index)``."""

    index: int


@dataclass(frozen=True, slots=True)
class SVar(Term):
    """A syntactic variable; none survive in runtime states."""

    name: str


@dataclass(frozen=True, slots=True)
class Pair(Term):
    head: Term
    tail: Term


NIL = Const(())


def print_term(t: Term) -> str:
    """Render a term: constants as written, pairs in s-expression list or
    dotted notation, logic variables as ``#(n)``."""
    if isinstance(t, Const):
        v = t.value
        if v == () and isinstance(v, tuple):
            return "()"
        if v is True:
            return "#t"
        if v is False:
            return "#f"
        return str(v)
    if isinstance(t, Var):
        return f"#({t.index})"
    if isinstance(t, SVar):
        return t.name
    if isinstance(t, Pair):
        parts = []
        node: Term = t
        while isinstance(node, Pair):
            parts.append(print_term(node.head))
            node = node.tail
        if node == NIL:
            return "(" + " ".join(parts) + ")"
        return "(" + " ".join(parts) + " . " + print_term(node) + ")"
    raise EngineInvariantError(f"unprintable term: {t!r}")


class Subst:
    """Persistent association from logic-variable index to term.

    Extension-only: ``bind`` returns a new chain node and never rebinds an
    index already in the domain.
    """

    __slots__ = ("_index", "_term", "_parent", "_size")

    def __init__(self, index: Optional[int], term: Optional[Term], parent: Optional["Subst"], size: int):
        self._index = index
        self._term = term
        self._parent = parent
        self._size = size

    def bind(self, index: int, term: Term) -> "Subst":
        if self.lookup(index) is not None:
            raise EngineInvariantError(f"rebinding logic variable #({index})")
        return Subst(index, term, self, self._size + 1)

    def lookup(self, index: int) -> Optional[Term]:
        node: Optional[Subst] = self
        while node is not None and node._index is not None:
            if node._index == index:
                return node._term
            node = node._parent
        return None

    def items(self) -> tuple[tuple[int, Term], ...]:
        """Bindings in extension (chronological) order."""
        out = []
        node: Optional[Subst] = self
        while node is not None and node._index is not None:
            out.append((node._index, node._term))
            node = node._parent
        out.reverse()
        return tuple(out)

    def __len__(self) -> int:
        return self._size

    def extends(self, other: "Subst") -> bool:
        """True when this chain was built on top of ``other``."""
        node: Optional[Subst] = self
        for _ in range(self._size - other._size):
            if node is None:
                return False
            node = node._parent
        return node is other


EMPTY_SUBST = Subst(None, None, None, 0)


@dataclass(frozen=True, slots=True)
class TrailEntry:
    """One successful unification: walked sides plus the goal that did it."""

    left: Term
    right: Term
    goal_uid: int


class Trail:
    """Persistent chronological record of successful unifications."""

    __slots__ = ("_entry", "_parent", "_size")

    def __init__(self, entry: Optional[TrailEntry], parent: Optional["Trail"], size: int):
        self._entry = entry
        self._parent = parent
        self._size = size

    def append(self, entry: TrailEntry) -> "Trail":
        return Trail(entry, self, self._size + 1)

    def entries(self) -> tuple[TrailEntry, ...]:
        out = []
        node: Optional[Trail] = self
        while node is not None and node._entry is not None:
            out.append(node._entry)
            node = node._parent
        out.reverse()
        return tuple(out)

    def __len__(self) -> int:
        return self._size

    def extends(self, other: "Trail") -> bool:
        node: Optional[Trail] = self
        for _ in range(self._size - other._size):
            if node is None:
                return False
            node = node._parent
        return node is other


EMPTY_TRAIL = Trail(None, None, 0)


@dataclass(frozen=True, slots=True)
class State:
    """One branch's accumulated knowledge: substitution, next fresh index,
    trail, and the UID identifying the branch lineage."""

    subst: Subst
    counter: int
    trail: Trail
    uid: int


def walk(t: Term, theta: Subst) -> Term:
    """Resolve ``t`` through ``theta`` until it is not a bound variable."""
    while isinstance(t, Var):
        bound = theta.lookup(t.index)
        if bound is None:
            return t
        t = bound
    return t


def walk_star(t: Term, theta: Subst) -> Term:
    """Deep walk: resolve every variable occurrence inside ``t``."""
    t = walk(t, theta)
    if isinstance(t, Pair):
        return Pair(walk_star(t.head, theta), walk_star(t.tail, theta))
    return t


def occurs(index: int, t: Term, theta: Subst) -> bool:
    """True iff logic variable ``index`` occurs anywhere in walk*(t)."""
    t = walk(t, theta)
    if isinstance(t, Var):
        return t.index == index
    if isinstance(t, Pair):
        return occurs(index, t.head, theta) or occurs(index, t.tail, theta)
    return False


def unify(t1: Term, t2: Term, theta: Subst) -> tuple[Optional[Subst], tuple[Term, Term]]:
    """Sound unification with occurs check.

    Returns the minimally extended substitution (or None when no most
    general unifier exists) together with the walked pair actually
    compared, which is what the trail records.
    """
    w1 = walk(t1, theta)
    w2 = walk(t2, theta)
    return _unify(w1, w2, theta), (w1, w2)


def _unify(t1: Term, t2: Term, theta: Optional[Subst]) -> Optional[Subst]:
    if theta is None:
        return None
    t1 = walk(t1, theta)
    t2 = walk(t2, theta)
    if isinstance(t1, SVar) or isinstance(t2, SVar):
        raise EngineInvariantError("syntactic variable reached unification")
    if t1 == t2:
        return theta
    if isinstance(t1, Var):
        if occurs(t1.index, t2, theta):
            return None
        return theta.bind(t1.index, t2)
    if isinstance(t2, Var):
        if occurs(t2.index, t1, theta):
            return None
        return theta.bind(t2.index, t1)
    if isinstance(t1, Pair) and isinstance(t2, Pair):
        return _unify(t1.tail, t2.tail, _unify(t1.head, t2.head, theta))
    return None


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneously replace syntactic variables by terms."""
    if isinstance(t, SVar):
        return mapping.get(t.name, t)
    if isinstance(t, Pair):
        return Pair(subst_term(t.head, mapping), subst_term(t.tail, mapping))
    return t


def term_vars(t: Term) -> Iterator[int]:
    """Logic-variable indices in ``t``, left to right, with repeats."""
    if isinstance(t, Var):
        yield t.index
    elif isinstance(t, Pair):
        yield from term_vars(t.head)
        yield from term_vars(t.tail)


def reify(state: State, query_vars: tuple[int, ...]) -> Term:
    """Render the query variables' values with canonical names for the
    unbound ones (``_0``, ``_1``, ... in first-occurrence order).

    A single query variable reifies to its value; several reify to a
    proper list of values.
    """
    if len(query_vars) == 1:
        target: Term = Var(query_vars[0])
    else:
        target = NIL
        for index in reversed(query_vars):
            target = Pair(Var(index), target)
    value = walk_star(target, state.subst)
    names: dict[int, Term] = {}

    def rename(t: Term) -> Term:
        if isinstance(t, Var):
            if t.index not in names:
                names[t.index] = Const(f"_{len(names)}")
            return names[t.index]
        if isinstance(t, Pair):
            return Pair(rename(t.head), rename(t.tail))
        return t

    return rename(value)
