"""Transpile a checked surface program into the tagged core language.

Goal sequences and conde clauses lower to right-nested binary spines.
Every non-⊤ goal is tagged with a UID mapped to its source span; the
UID counter is shared with runtime state-UID minting so all UIDs in a
run are globally unique.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .goals import Call, Conj, Disj, Fresh, Goal, RelDef, TOP, UnifyGoal
from .reader import Span, join_spans
from .surface import (
    SCall,
    SConde,
    SFresh,
    SSucceed,
    STConst,
    STPair,
    STVar,
    STerm,
    SUnify,
    SurfaceGoal,
    SurfaceProgram,
)
from .terms import Const, EMPTY_SUBST, EMPTY_TRAIL, Pair, SVar, State, Term
from .tree import Leaf, Program, SearchTree


@dataclass(frozen=True, slots=True)
class Provenance:
    """How a state UID came to exist."""

    rule: Optional[str]  # None for the initial state
    step: int
    parent: Optional[int]


@dataclass
class SourceMap:
    goal_spans: dict[int, Span] = field(default_factory=dict)
    state_origins: dict[int, Provenance] = field(default_factory=dict)

    def goal_uids(self) -> frozenset[int]:
        return frozenset(self.goal_spans)

    def fork(self) -> "SourceMap":
        """Copy for a fresh run over the same lowered program."""
        return SourceMap(dict(self.goal_spans), dict(self.state_origins))


@dataclass(frozen=True, slots=True)
class Lowered:
    program: Program
    source_map: SourceMap
    query_count: Optional[int]  # None means all answers
    query_names: tuple[str, ...]


class LoweringError(Exception):
    """Raised on input that did not pass the static checks."""


class _Lowerer:
    def __init__(self) -> None:
        self.counter = 0
        self.spans: dict[int, Span] = {}

    def uid(self, span: Span) -> int:
        uid = self.counter
        self.counter += 1
        self.spans[uid] = span
        return uid

    def term(self, t: STerm) -> Term:
        if isinstance(t, STVar):
            return SVar(t.name)
        if isinstance(t, STConst):
            return Const(t.value)
        if isinstance(t, STPair):
            return Pair(self.term(t.head), self.term(t.tail))
        raise LoweringError(f"not a surface term: {t!r}")

    def goal(self, g: SurfaceGoal) -> Goal:
        if isinstance(g, SSucceed):
            return TOP
        if isinstance(g, SUnify):
            return UnifyGoal(self.term(g.left), self.term(g.right), self.uid(g.span))
        if isinstance(g, SCall):
            return Call(g.name, tuple(self.term(a) for a in g.args), self.uid(g.span))
        if isinstance(g, SConde):
            lowered = [(self.seq(clause), span)
                       for clause, span in zip(g.clauses, g.clause_spans)]
            goal, span = lowered[-1]
            for left, left_span in reversed(lowered[:-1]):
                span = join_spans(left_span, span)
                goal = Disj(left, goal, self.uid(span))
            return goal
        if isinstance(g, SFresh):
            body = self.seq(g.body)
            if not g.names:
                return body
            return Fresh(g.names, body, self.uid(g.span))
        raise LoweringError(f"not a surface goal: {g!r}")

    def seq(self, goals: tuple[SurfaceGoal, ...]) -> Goal:
        if not goals:
            raise LoweringError("empty goal sequence")
        lowered = [(self.goal(g), g.span) for g in goals]
        goal, span = lowered[-1]
        for left, left_span in reversed(lowered[:-1]):
            span = join_spans(left_span, span)
            goal = Conj(left, goal, self.uid(span))
        return goal


def lower(program: SurfaceProgram) -> Lowered:
    """Build the relation environment, initial tree, query variable
    indices, and source map for a checked program."""
    lo = _Lowerer()
    env: dict[str, RelDef] = {}
    for rel in program.rels:
        if rel.name in env:
            raise LoweringError(f"duplicate relation '{rel.name}'")
        env[rel.name] = RelDef(rel.params, lo.seq(rel.body))

    query = program.query
    body = lo.seq(query.body)
    root: Goal = Fresh(query.vars, body, lo.uid(query.span))

    source_map = SourceMap(goal_spans=lo.spans)
    state_uid = lo.counter
    lo.counter += 1
    source_map.state_origins[state_uid] = Provenance(rule=None, step=0, parent=None)

    initial = State(EMPTY_SUBST, 0, EMPTY_TRAIL, state_uid)
    tree: SearchTree = Leaf(root, initial)
    lowered_program = Program(
        env=env,
        tree=tree,
        uid_counter=lo.counter,
        query_vars=tuple(range(len(query.vars))),
    )
    return Lowered(lowered_program, source_map, query.count, query.vars)
