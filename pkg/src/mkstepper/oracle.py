"""Independent answer oracle: a conventional stream-based evaluator.

This deliberately shares nothing with the tree semantics beyond the
lowered goal data: goals are interpreted as functions from a state to a
lazy stream of states, substitutions are plain dicts, and unification,
walking, and reification are reimplemented here. Agreement between this
evaluator and the tree engine is therefore evidence, not tautology.

Relation unfolding is depth-bounded so divergent programs still yield a
finite (possibly incomplete) answer multiset; hitting the bound is
reported distinctly from genuine finite failure.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .goals import Call, Conj, Disj, Fresh, Goal, RelEnv, Top, UnifyGoal
from .terms import Const, Pair, SVar, Term, Var
from .tree import Program


@dataclass(frozen=True, slots=True)
class OracleAnswer:
    answers: Counter  # printed reified term -> multiplicity
    exhausted: bool   # True when the depth bound cut some branch short


class _OState:
    __slots__ = ("subst", "counter")

    def __init__(self, subst: dict[int, Term], counter: int):
        self.subst = subst
        self.counter = counter


def _walk(t: Term, subst: Mapping[int, Term]) -> Term:
    while isinstance(t, Var) and t.index in subst:
        t = subst[t.index]
    return t


def _occurs(index: int, t: Term, subst: Mapping[int, Term]) -> bool:
    t = _walk(t, subst)
    if isinstance(t, Var):
        return t.index == index
    if isinstance(t, Pair):
        return _occurs(index, t.head, subst) or _occurs(index, t.tail, subst)
    return False


def _unify(t1: Term, t2: Term, subst: dict[int, Term]) -> Optional[dict[int, Term]]:
    t1 = _walk(t1, subst)
    t2 = _walk(t2, subst)
    if isinstance(t1, Var) and isinstance(t2, Var) and t1.index == t2.index:
        return subst
    if isinstance(t1, Var):
        if _occurs(t1.index, t2, subst):
            return None
        out = dict(subst)
        out[t1.index] = t2
        return out
    if isinstance(t2, Var):
        if _occurs(t2.index, t1, subst):
            return None
        out = dict(subst)
        out[t2.index] = t1
        return out
    if isinstance(t1, Pair) and isinstance(t2, Pair):
        mid = _unify(t1.head, t2.head, subst)
        if mid is None:
            return None
        return _unify(t1.tail, t2.tail, mid)
    if isinstance(t1, Const) and isinstance(t2, Const) and t1 == t2:
        return subst
    return None


def _subst_svars(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, SVar):
        return mapping[t.name]
    if isinstance(t, Pair):
        return Pair(_subst_svars(t.head, mapping), _subst_svars(t.tail, mapping))
    return t


def _interleave(first: Iterator[_OState], second: Iterator[_OState]) -> Iterator[_OState]:
    streams = [first, second]
    while streams:
        stream = streams.pop(0)
        try:
            item = next(stream)
        except StopIteration:
            continue
        yield item
        streams.append(stream)


class _Cutoff:
    __slots__ = ("hit",)

    def __init__(self) -> None:
        self.hit = False


def _eval(goal: Goal, state: _OState, env: RelEnv, scope: Mapping[str, Term],
          depth: int, cutoff: _Cutoff) -> Iterator[_OState]:
    if isinstance(goal, Top):
        yield state
        return
    if isinstance(goal, UnifyGoal):
        left = _subst_svars(goal.left, scope)
        right = _subst_svars(goal.right, scope)
        subst = _unify(left, right, state.subst)
        if subst is not None:
            yield _OState(subst, state.counter)
        return
    if isinstance(goal, Conj):
        for mid in _eval(goal.left, state, env, scope, depth, cutoff):
            yield from _eval(goal.right, mid, env, scope, depth, cutoff)
        return
    if isinstance(goal, Disj):
        yield from _interleave(
            _eval(goal.left, state, env, scope, depth, cutoff),
            _eval(goal.right, state, env, scope, depth, cutoff),
        )
        return
    if isinstance(goal, Fresh):
        inner = dict(scope)
        counter = state.counter
        for name in goal.names:
            inner[name] = Var(counter)
            counter += 1
        yield from _eval(goal.body, _OState(state.subst, counter), env, inner, depth, cutoff)
        return
    if isinstance(goal, Call):
        if depth <= 0:
            cutoff.hit = True
            return
        rel = env[goal.name]
        args = tuple(_subst_svars(a, scope) for a in goal.args)
        call_scope = dict(zip(rel.params, args))
        yield from _eval(rel.body, state, env, call_scope, depth - 1, cutoff)
        return
    raise TypeError(f"not a goal: {goal!r}")


def _reify(state: _OState, query_vars: tuple[int, ...]) -> str:
    from .terms import NIL, print_term  # print format shared on purpose

    def deep(t: Term) -> Term:
        t = _walk(t, state.subst)
        if isinstance(t, Pair):
            return Pair(deep(t.head), deep(t.tail))
        return t

    if len(query_vars) == 1:
        target: Term = Var(query_vars[0])
    else:
        target = NIL
        for index in reversed(query_vars):
            target = Pair(Var(index), target)
    value = deep(target)
    names: dict[int, Term] = {}

    def rename(t: Term) -> Term:
        if isinstance(t, Var):
            if t.index not in names:
                names[t.index] = Const(f"_{len(names)}")
            return names[t.index]
        if isinstance(t, Pair):
            return Pair(rename(t.head), rename(t.tail))
        return t

    return print_term(rename(value))


def oracle_answers(program: Program, depth_bound: int = 64,
                   max_answers: int = 10_000) -> OracleAnswer:
    """Answer multiset for a lowered program, reified to printed terms."""
    root = program.tree
    from .tree import Leaf

    if not isinstance(root, Leaf):
        raise ValueError("oracle expects an unstarted lowered program")
    cutoff = _Cutoff()
    initial = _OState({}, 0)
    counts: Counter = Counter()
    stream = _eval(root.goal, initial, program.env, {}, depth_bound, cutoff)
    for n, state in enumerate(stream):
        if n >= max_answers:
            cutoff.hit = True
            break
        counts[_reify(state, program.query_vars)] += 1
    return OracleAnswer(counts, cutoff.hit)
