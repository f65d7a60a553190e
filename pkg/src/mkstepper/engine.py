"""Deterministic small-step reduction of search trees.

The next redex is located by a check-then-descend walk: skip the
answer-stream prefix, try the three stream-tail rules, then descend the
active spine testing each node's structural patterns before moving into
its active child. Exactly one rule can match a well-formed tree, which
the validation harness cross-checks by exhaustive enumeration.

Two rule sets share most of the catalog. The interleaving set suspends
relation calls behind delay/go wrappers that bubble to the stream tail,
flipping disjunction arrows on the way up; the depth-first set expands
relation calls in place and never interleaves.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .goals import Call, Conj, Disj, Fresh, TOP, Top, UnifyGoal, subst_goal
from .terms import (
    EngineInvariantError,
    Pair,
    State,
    SVar,
    Term,
    TrailEntry,
    Var,
    occurs,
    unify,
)
from .tree import (
    ConjG,
    Delay,
    DisjL,
    DisjR,
    EMPTY,
    Empty,
    Go,
    Leaf,
    Plus,
    Program,
    SearchTree,
    is_answer_leaf,
    pretty,
)


class Rule(enum.Enum):
    DISTR_DISJ = "DistrDisj"
    DISTR_CONJ = "DistrConj"
    LEFT_ANS_CONJ = "LeftAnsConj"
    RIGHT_ANS_CONJ = "RightAnsConj"
    ASSOC_RIGHT_LEFT = "AssocRightLeft"
    ASSOC_RIGHT_RIGHT = "AssocRightRight"
    ASSOC_LEFT_LEFT = "AssocLeftLeft"
    ASSOC_LEFT_RIGHT = "AssocLeftRight"
    SUCC_CONJ = "SuccConj"
    PRUNE_CONJ = "PruneConj"
    PRUNE_LEFT = "PruneLeft"
    PRUNE_RIGHT = "PruneRight"
    SUBST_FRESH = "SubstFresh"
    DELAY = "Delay"
    PROCEED = "Proceed"
    UNIFY_SUCC = "UnifySucc"
    UNIFY_FAIL = "UnifyFail"
    DELAY_CONJ = "DelayConj"
    DELAY_LEFT = "DelayLeft"
    DELAY_RIGHT = "DelayRight"
    INVOKE_DELAY = "InvokeDelay"
    PROMOTE_LEFT = "PromoteLeft"
    PROMOTE_RIGHT = "PromoteRight"
    EXPAND = "Expand"


_SHARED = frozenset({
    Rule.DISTR_DISJ, Rule.DISTR_CONJ,
    Rule.LEFT_ANS_CONJ, Rule.RIGHT_ANS_CONJ,
    Rule.ASSOC_RIGHT_LEFT, Rule.ASSOC_RIGHT_RIGHT,
    Rule.ASSOC_LEFT_LEFT, Rule.ASSOC_LEFT_RIGHT,
    Rule.SUCC_CONJ, Rule.PRUNE_CONJ, Rule.PRUNE_LEFT, Rule.PRUNE_RIGHT,
    Rule.SUBST_FRESH, Rule.UNIFY_SUCC, Rule.UNIFY_FAIL,
    Rule.PROMOTE_LEFT, Rule.PROMOTE_RIGHT,
})

_DELAY_MACHINERY = frozenset({
    Rule.DELAY, Rule.PROCEED,
    Rule.DELAY_CONJ, Rule.DELAY_LEFT, Rule.DELAY_RIGHT,
    Rule.INVOKE_DELAY,
})


@dataclass(frozen=True, slots=True)
class RuleSet:
    name: str
    rules: frozenset[Rule]


INTERLEAVING = RuleSet("interleaving", _SHARED | _DELAY_MACHINERY)
DFS = RuleSet("dfs", _SHARED | {Rule.EXPAND})

RULESET_NAMES = ("interleaving", "dfs")
_ALIASES = {"interleaving": INTERLEAVING, "dfs": DFS, "prolog-dfs": DFS}


class UnknownRuleSet(ValueError):
    pass


def resolve_ruleset(name: str) -> RuleSet:
    try:
        return _ALIASES[name]
    except KeyError:
        raise UnknownRuleSet(f"unknown rule set '{name}'") from None


class StuckNonTerminalError(EngineInvariantError):
    """The focus reached a node with no applicable rule while the stream
    tail is not finished; always an engine bug, never skipped silently."""


# focus-path selectors, root-first
PLUS_TAIL = "plus_tail"
ACTIVE_LEFT = "active_left"
ACTIVE_RIGHT = "active_right"
CONJ_TREE = "conj_tree"


@dataclass(frozen=True, slots=True)
class Redex:
    path: tuple[str, ...]
    node: SearchTree
    rule: Rule


@dataclass(frozen=True, slots=True)
class MintedState:
    uid: int
    parent: int
    rule: Rule


@dataclass(frozen=True, slots=True)
class TrailEvent:
    state_uid: int
    entry: TrailEntry


@dataclass(frozen=True, slots=True)
class StepEvents:
    minted_states: tuple[MintedState, ...] = ()
    trail_entries: tuple[TrailEvent, ...] = ()


def _node_rule(node: SearchTree, rs: RuleSet) -> Optional[Rule]:
    """Structural rule patterns tested at a spine node before descending."""
    rules = rs.rules
    if isinstance(node, DisjL):
        left = node.left
        if isinstance(left, Empty):
            return Rule.PRUNE_LEFT
        if isinstance(left, DisjL) and is_answer_leaf(left.left):
            return Rule.ASSOC_LEFT_LEFT
        if isinstance(left, DisjR) and is_answer_leaf(left.right):
            return Rule.ASSOC_LEFT_RIGHT
        if isinstance(left, Delay) and Rule.DELAY_LEFT in rules:
            return Rule.DELAY_LEFT
        return None
    if isinstance(node, DisjR):
        right = node.right
        if isinstance(right, Empty):
            return Rule.PRUNE_RIGHT
        if isinstance(right, DisjL) and is_answer_leaf(right.left):
            return Rule.ASSOC_RIGHT_LEFT
        if isinstance(right, DisjR) and is_answer_leaf(right.right):
            return Rule.ASSOC_RIGHT_RIGHT
        if isinstance(right, Delay) and Rule.DELAY_RIGHT in rules:
            return Rule.DELAY_RIGHT
        return None
    if isinstance(node, ConjG):
        tree = node.tree
        if is_answer_leaf(tree):
            return Rule.SUCC_CONJ
        if isinstance(tree, Empty):
            return Rule.PRUNE_CONJ
        if isinstance(tree, DisjL) and is_answer_leaf(tree.left):
            return Rule.LEFT_ANS_CONJ
        if isinstance(tree, DisjR) and is_answer_leaf(tree.right):
            return Rule.RIGHT_ANS_CONJ
        if isinstance(tree, Delay) and Rule.DELAY_CONJ in rules:
            return Rule.DELAY_CONJ
        return None
    return None


def _leaf_rule(leaf: Leaf, rs: RuleSet) -> Optional[Rule]:
    goal = leaf.goal
    if isinstance(goal, Disj):
        return Rule.DISTR_DISJ
    if isinstance(goal, Conj):
        return Rule.DISTR_CONJ
    if isinstance(goal, Fresh):
        return Rule.SUBST_FRESH
    if isinstance(goal, Call):
        if Rule.DELAY in rs.rules:
            return Rule.DELAY
        if Rule.EXPAND in rs.rules:
            return Rule.EXPAND
        return None
    if isinstance(goal, UnifyGoal):
        theta, _walked = unify(goal.left, goal.right, leaf.state.subst)
        return Rule.UNIFY_SUCC if theta is not None else Rule.UNIFY_FAIL
    return None  # Top


def locate_redex(program: Program, rs: RuleSet) -> Optional[Redex]:
    """Find the unique next redex, or None when the program is terminal."""
    path: list[str] = []
    node: SearchTree = program.tree
    while isinstance(node, Plus):
        path.append(PLUS_TAIL)
        node = node.right
    # rules that fire only at the answer-stream tail
    if isinstance(node, Delay) and Rule.INVOKE_DELAY in rs.rules:
        return Redex(tuple(path), node, Rule.INVOKE_DELAY)
    if isinstance(node, DisjL) and is_answer_leaf(node.left) \
            and Rule.PROMOTE_LEFT in rs.rules:
        return Redex(tuple(path), node, Rule.PROMOTE_LEFT)
    if isinstance(node, DisjR) and is_answer_leaf(node.right) \
            and Rule.PROMOTE_RIGHT in rs.rules:
        return Redex(tuple(path), node, Rule.PROMOTE_RIGHT)
    at_tail = True
    while True:
        rule = _node_rule(node, rs)
        if rule is not None:
            return Redex(tuple(path), node, rule)
        if isinstance(node, DisjL):
            path.append(ACTIVE_LEFT)
            node = node.left
        elif isinstance(node, DisjR):
            path.append(ACTIVE_RIGHT)
            node = node.right
        elif isinstance(node, ConjG):
            path.append(CONJ_TREE)
            node = node.tree
        elif isinstance(node, Go):
            child = node.child
            if isinstance(child, Leaf) and isinstance(child.goal, Call) \
                    and Rule.PROCEED in rs.rules:
                return Redex(tuple(path), node, Rule.PROCEED)
            raise StuckNonTerminalError(f"stuck go node: {pretty(node)}")
        elif isinstance(node, Leaf):
            rule = _leaf_rule(node, rs)
            if rule is not None:
                return Redex(tuple(path), node, rule)
            if at_tail and isinstance(node.goal, Top):
                return None  # terminal: single finished answer at the tail
            raise StuckNonTerminalError(f"stuck leaf: {pretty(node)}")
        elif isinstance(node, Empty):
            if at_tail:
                return None  # terminal: exhausted search
            raise StuckNonTerminalError("empty tree below the stream tail")
        else:
            raise StuckNonTerminalError(f"focus landed on {pretty(node)}")
        at_tail = False


def _apply(redex: Redex, env, uid_counter: int) -> tuple[SearchTree, int, StepEvents]:
    node = redex.node
    rule = redex.rule
    if rule is Rule.DISTR_DISJ:
        assert isinstance(node, Leaf) and isinstance(node.goal, Disj)
        sigma = node.state
        minted = uid_counter
        right_state = State(sigma.subst, sigma.counter, sigma.trail, minted)
        events = StepEvents(minted_states=(MintedState(minted, sigma.uid, rule),))
        return (DisjL(Leaf(node.goal.left, sigma), Leaf(node.goal.right, right_state)),
                uid_counter + 1, events)
    if rule is Rule.DISTR_CONJ:
        assert isinstance(node, Leaf) and isinstance(node.goal, Conj)
        return ConjG(Leaf(node.goal.left, node.state), node.goal.right), uid_counter, StepEvents()
    if rule is Rule.SUBST_FRESH:
        assert isinstance(node, Leaf) and isinstance(node.goal, Fresh)
        sigma = node.state
        names = node.goal.names
        mapping = {name: Var(sigma.counter + k) for k, name in enumerate(names)}
        new_state = State(sigma.subst, sigma.counter + len(names), sigma.trail, sigma.uid)
        return Leaf(subst_goal(node.goal.body, mapping), new_state), uid_counter, StepEvents()
    if rule is Rule.DELAY:
        assert isinstance(node, Leaf) and isinstance(node.goal, Call)
        return Delay(Go(node)), uid_counter, StepEvents()
    if rule in (Rule.PROCEED, Rule.EXPAND):
        leaf = node.child if isinstance(node, Go) else node
        assert isinstance(leaf, Leaf) and isinstance(leaf.goal, Call)
        rel = env.get(leaf.goal.name)
        if rel is None or len(rel.params) != len(leaf.goal.args):
            raise EngineInvariantError(f"bad relation call {leaf.goal.name}")
        body = subst_goal(rel.body, dict(zip(rel.params, leaf.goal.args)))
        return Leaf(body, leaf.state), uid_counter, StepEvents()
    if rule is Rule.UNIFY_SUCC:
        assert isinstance(node, Leaf) and isinstance(node.goal, UnifyGoal)
        sigma = node.state
        theta, (w1, w2) = unify(node.goal.left, node.goal.right, sigma.subst)
        if theta is None:
            raise EngineInvariantError("UnifySucc chosen for a failing unification")
        entry = TrailEntry(w1, w2, node.goal.uid)
        new_state = State(theta, sigma.counter, sigma.trail.append(entry), sigma.uid)
        events = StepEvents(trail_entries=(TrailEvent(sigma.uid, entry),))
        return Leaf(TOP, new_state), uid_counter, events
    if rule is Rule.UNIFY_FAIL:
        return EMPTY, uid_counter, StepEvents()
    if rule is Rule.SUCC_CONJ:
        assert isinstance(node, ConjG) and isinstance(node.tree, Leaf)
        return Leaf(node.goal, node.tree.state), uid_counter, StepEvents()
    if rule is Rule.PRUNE_CONJ:
        return EMPTY, uid_counter, StepEvents()
    if rule is Rule.PRUNE_LEFT:
        assert isinstance(node, DisjL)
        return node.right, uid_counter, StepEvents()
    if rule is Rule.PRUNE_RIGHT:
        assert isinstance(node, DisjR)
        return node.left, uid_counter, StepEvents()
    if rule is Rule.LEFT_ANS_CONJ:
        assert isinstance(node, ConjG) and isinstance(node.tree, DisjL)
        ans, rest = node.tree.left, node.tree.right
        return DisjL(ConjG(ans, node.goal), ConjG(rest, node.goal)), uid_counter, StepEvents()
    if rule is Rule.RIGHT_ANS_CONJ:
        assert isinstance(node, ConjG) and isinstance(node.tree, DisjR)
        rest, ans = node.tree.left, node.tree.right
        return DisjR(ConjG(rest, node.goal), ConjG(ans, node.goal)), uid_counter, StepEvents()
    if rule is Rule.ASSOC_RIGHT_LEFT:
        assert isinstance(node, DisjR) and isinstance(node.right, DisjL)
        s1, ans, s2 = node.left, node.right.left, node.right.right
        return DisjL(ans, DisjR(s1, s2)), uid_counter, StepEvents()
    if rule is Rule.ASSOC_RIGHT_RIGHT:
        assert isinstance(node, DisjR) and isinstance(node.right, DisjR)
        s2, s1, ans = node.left, node.right.left, node.right.right
        return DisjR(DisjR(s2, s1), ans), uid_counter, StepEvents()
    if rule is Rule.ASSOC_LEFT_LEFT:
        assert isinstance(node, DisjL) and isinstance(node.left, DisjL)
        ans, s1, s2 = node.left.left, node.left.right, node.right
        return DisjL(ans, DisjL(s1, s2)), uid_counter, StepEvents()
    if rule is Rule.ASSOC_LEFT_RIGHT:
        assert isinstance(node, DisjL) and isinstance(node.left, DisjR)
        s1, ans, s2 = node.left.left, node.left.right, node.right
        return DisjR(DisjL(s1, s2), ans), uid_counter, StepEvents()
    if rule is Rule.DELAY_CONJ:
        assert isinstance(node, ConjG) and isinstance(node.tree, Delay)
        return Delay(ConjG(node.tree.child, node.goal)), uid_counter, StepEvents()
    if rule is Rule.DELAY_LEFT:
        assert isinstance(node, DisjL) and isinstance(node.left, Delay)
        return Delay(DisjR(node.left.child, node.right)), uid_counter, StepEvents()
    if rule is Rule.DELAY_RIGHT:
        assert isinstance(node, DisjR) and isinstance(node.right, Delay)
        return Delay(DisjL(node.left, node.right.child)), uid_counter, StepEvents()
    if rule is Rule.INVOKE_DELAY:
        assert isinstance(node, Delay)
        return node.child, uid_counter, StepEvents()
    if rule in (Rule.PROMOTE_LEFT, Rule.PROMOTE_RIGHT):
        if isinstance(node, DisjL):
            ans, rest = node.left, node.right
        else:
            assert isinstance(node, DisjR)
            rest, ans = node.left, node.right
        return Plus(ans, rest), uid_counter, StepEvents()
    raise EngineInvariantError(f"unhandled rule {rule}")


def _rebuild(root: SearchTree, path: tuple[str, ...],
             replacement: SearchTree) -> SearchTree:
    # iterative: spines can be arbitrarily deep on long runs
    parents: list[SearchTree] = []
    node = root
    for sel in path:
        parents.append(node)
        if sel == PLUS_TAIL:
            assert isinstance(node, Plus)
            node = node.right
        elif sel == ACTIVE_LEFT:
            assert isinstance(node, DisjL)
            node = node.left
        elif sel == ACTIVE_RIGHT:
            assert isinstance(node, DisjR)
            node = node.right
        elif sel == CONJ_TREE:
            assert isinstance(node, ConjG)
            node = node.tree
        else:
            raise EngineInvariantError(f"bad focus selector {sel!r}")
    result = replacement
    for sel, parent in zip(reversed(path), reversed(parents)):
        if sel == PLUS_TAIL:
            result = Plus(parent.left, result)
        elif sel == ACTIVE_LEFT:
            result = DisjL(result, parent.right)
        elif sel == ACTIVE_RIGHT:
            result = DisjR(parent.left, result)
        else:
            result = ConjG(result, parent.goal)
    return result


def step(program: Program, rs: RuleSet) -> Optional[tuple[Rule, Program, StepEvents]]:
    """Apply the one located rule; None when the program is terminal."""
    redex = locate_redex(program, rs)
    if redex is None:
        return None
    replacement, uid_counter, events = _apply(redex, program.env, program.uid_counter)
    tree = _rebuild(program.tree, redex.path, replacement)
    next_program = Program(program.env, tree, uid_counter, program.query_vars)
    return redex.rule, next_program, events


def stream_tail(tree: SearchTree) -> SearchTree:
    node = tree
    while isinstance(node, Plus):
        node = node.right
    return node


def answers(program: Program) -> tuple[State, ...]:
    """Answer states in production order: the Plus-prefix answers plus the
    tail itself when it is a finished leaf."""
    out: list[State] = []
    node = program.tree
    while isinstance(node, Plus):
        if isinstance(node.left, Leaf):
            out.append(node.left.state)
        node = node.right
    if is_answer_leaf(node):
        assert isinstance(node, Leaf)
        out.append(node.state)
    return tuple(out)


def is_terminal(program: Program) -> bool:
    tail = stream_tail(program.tree)
    return isinstance(tail, Empty) or is_answer_leaf(tail)


HALT_TERMINAL = "terminal"
HALT_ANSWERS = "answers"
HALT_BUDGET = "budget"


@dataclass(frozen=True, slots=True)
class RunResult:
    program: Program
    trace: tuple[Rule, ...]
    halt: str
    events: tuple[StepEvents, ...] = field(repr=False, default=())


def run_bounded(program: Program, rs: RuleSet, max_steps: int,
                max_answers: Optional[int] = None) -> RunResult:
    """Iterate ``step`` until terminal, the answer quota is met, or the
    step budget runs out.

    The finished answer prefix is held aside while stepping and folded
    back into the returned program: no rule ever rewrites it, and
    re-walking it on every step would make long runs quadratic in the
    number of answers.
    """
    trace: list[Rule] = []
    events: list[StepEvents] = []
    finished: list[SearchTree] = []
    current = program

    def split_prefix() -> None:
        node = current.tree
        while isinstance(node, Plus):
            finished.append(node.left)
            node = node.right
        if node is not current.tree:
            _replace_tree(node)

    def _replace_tree(tree: SearchTree) -> None:
        nonlocal current
        current = Program(current.env, tree, current.uid_counter, current.query_vars)

    def reassembled() -> Program:
        tree = current.tree
        for answer in reversed(finished):
            tree = Plus(answer, tree)
        return Program(current.env, tree, current.uid_counter, current.query_vars)

    def answer_count() -> int:
        return len(finished) + (1 if is_answer_leaf(current.tree) else 0)

    split_prefix()
    while True:
        if max_answers is not None and answer_count() >= max_answers:
            return RunResult(reassembled(), tuple(trace), HALT_ANSWERS, tuple(events))
        if is_terminal(current):
            return RunResult(reassembled(), tuple(trace), HALT_TERMINAL, tuple(events))
        if len(trace) >= max_steps:
            return RunResult(reassembled(), tuple(trace), HALT_BUDGET, tuple(events))
        result = step(current, rs)
        if result is None:
            return RunResult(reassembled(), tuple(trace), HALT_TERMINAL, tuple(events))
        rule, current, ev = result
        trace.append(rule)
        events.append(ev)
        split_prefix()


# -- well-formedness ----------------------------------------------------

def well_formed(program: Program, known_goal_uids: frozenset[int]) -> tuple[str, ...]:
    """Structural invariants preserved by every rule. Returns violation
    descriptions; empty means well-formed."""
    problems: list[str] = []

    def term_ok(t: Term, counter: int, where: str) -> None:
        if isinstance(t, SVar):
            problems.append(f"syntactic variable '{t.name}' in {where}")
        elif isinstance(t, Var):
            if t.index >= counter:
                problems.append(f"#({t.index}) out of range (counter {counter}) in {where}")
        elif isinstance(t, Pair):
            term_ok(t.head, counter, where)
            term_ok(t.tail, counter, where)

    def goal_terms(goal, counter: int, bound: frozenset[str], where: str) -> None:
        if isinstance(goal, Top):
            return
        if goal.uid not in known_goal_uids:
            problems.append(f"goal uid {goal.uid} missing from source map in {where}")
        if isinstance(goal, UnifyGoal):
            _goal_term_ok(goal.left, counter, bound, where, problems)
            _goal_term_ok(goal.right, counter, bound, where, problems)
        elif isinstance(goal, Call):
            for a in goal.args:
                _goal_term_ok(a, counter, bound, where, problems)
        elif isinstance(goal, (Disj, Conj)):
            goal_terms(goal.left, counter, bound, where)
            goal_terms(goal.right, counter, bound, where)
        elif isinstance(goal, Fresh):
            goal_terms(goal.body, counter, bound | frozenset(goal.names), where)

    def state_ok(state: State, where: str) -> None:
        for index, bound_term in state.subst.items():
            if index >= state.counter:
                problems.append(f"binding of #({index}) out of range in {where}")
            term_ok(bound_term, state.counter, where)
            if occurs(index, bound_term, state.subst):
                problems.append(f"cyclic binding of #({index}) in {where}")
        for entry in state.trail.entries():
            term_ok(entry.left, state.counter, where)
            term_ok(entry.right, state.counter, where)
            if entry.goal_uid not in known_goal_uids:
                problems.append(f"trail goal uid {entry.goal_uid} unknown in {where}")

    def min_leaf_counter(node: SearchTree) -> Optional[int]:
        if isinstance(node, Leaf):
            return node.state.counter
        if isinstance(node, (DisjL, DisjR, Plus)):
            counters = [c for c in (min_leaf_counter(node.left), min_leaf_counter(node.right))
                        if c is not None]
            return min(counters) if counters else None
        if isinstance(node, ConjG):
            return min_leaf_counter(node.tree)
        if isinstance(node, (Delay, Go)):
            return min_leaf_counter(node.child)
        return None

    def walk_tree(node: SearchTree, on_stream_spine: bool, where: str) -> None:
        if isinstance(node, Empty):
            return
        if isinstance(node, Leaf):
            goal_terms(node.goal, node.state.counter, frozenset(), where)
            state_ok(node.state, where)
            return
        if isinstance(node, Plus):
            if not on_stream_spine:
                problems.append(f"Plus off the answer-stream spine at {where}")
            if not is_answer_leaf(node.left):
                problems.append(f"Plus answer child is not a finished leaf at {where}")
            walk_tree(node.left, False, where + "+L")
            walk_tree(node.right, on_stream_spine, where + "+R")
            return
        if isinstance(node, DisjL) or isinstance(node, DisjR):
            walk_tree(node.left, False, where + "<L")
            walk_tree(node.right, False, where + ">R")
            return
        if isinstance(node, ConjG):
            counter = min_leaf_counter(node.tree)
            goal_terms(node.goal, counter if counter is not None else 1 << 60,
                       frozenset(), where + "×G")
            walk_tree(node.tree, False, where + "×T")
            return
        if isinstance(node, Delay):
            if isinstance(node.child, Delay):
                problems.append(f"directly nested delay at {where}")
            walk_tree(node.child, False, where + "dl")
            return
        if isinstance(node, Go):
            if not (isinstance(node.child, Leaf) and isinstance(node.child.goal, Call)):
                problems.append(f"go wraps a non-relation-call at {where}")
            walk_tree(node.child, False, where + "go")
            return
        problems.append(f"unknown node at {where}: {node!r}")

    walk_tree(program.tree, True, "root")
    return tuple(problems)


def _goal_term_ok(t: Term, counter: int, bound: frozenset[str], where: str,
                  problems: list[str]) -> None:
    if isinstance(t, SVar):
        if t.name not in bound:
            problems.append(f"free syntactic variable '{t.name}' in {where}")
    elif isinstance(t, Var):
        if t.index >= counter:
            problems.append(f"#({t.index}) out of range (counter {counter}) in {where}")
    elif isinstance(t, Pair):
        _goal_term_ok(t.head, counter, bound, where, problems)
        _goal_term_ok(t.tail, counter, bound, where, problems)
