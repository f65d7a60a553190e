"""Semantics validation: exhaustive redex enumeration and stepwise
invariant checking.

The enumerator here is written against the rule shapes directly and
independently of the engine's check-then-descend search: it visits every
legal decomposition position (the answer-stream spine, then every active
descendant) and tests every rule pattern at each, without early exit.
Determinism holds when at most one (position, rule) pair matches and it
agrees with what the engine located.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import (
    ACTIVE_LEFT,
    ACTIVE_RIGHT,
    CONJ_TREE,
    PLUS_TAIL,
    Rule,
    RuleSet,
    locate_redex,
    step,
    well_formed,
)
from .goals import Call, Conj, Disj, Fresh, Top, UnifyGoal
from .terms import State, unify
from .tree import ConjG, Delay, DisjL, DisjR, Empty, Go, Leaf, Plus, Program, SearchTree


def _is_top_leaf(t: SearchTree) -> bool:
    return isinstance(t, Leaf) and isinstance(t.goal, Top)


def _pattern_matches(rule: Rule, node: SearchTree, at_tail: bool) -> bool:
    """Does ``rule``'s left-hand side match ``node`` in a context that the
    rule accepts? Mirrors the rule catalog, not the engine's search."""
    if rule is Rule.DISTR_DISJ:
        return isinstance(node, Leaf) and isinstance(node.goal, Disj)
    if rule is Rule.DISTR_CONJ:
        return isinstance(node, Leaf) and isinstance(node.goal, Conj)
    if rule is Rule.SUBST_FRESH:
        return isinstance(node, Leaf) and isinstance(node.goal, Fresh)
    if rule is Rule.DELAY or rule is Rule.EXPAND:
        return isinstance(node, Leaf) and isinstance(node.goal, Call)
    if rule is Rule.PROCEED:
        return isinstance(node, Go) and isinstance(node.child, Leaf) \
            and isinstance(node.child.goal, Call)
    if rule is Rule.UNIFY_SUCC:
        if not (isinstance(node, Leaf) and isinstance(node.goal, UnifyGoal)):
            return False
        theta, _ = unify(node.goal.left, node.goal.right, node.state.subst)
        return theta is not None
    if rule is Rule.UNIFY_FAIL:
        if not (isinstance(node, Leaf) and isinstance(node.goal, UnifyGoal)):
            return False
        theta, _ = unify(node.goal.left, node.goal.right, node.state.subst)
        return theta is None
    if rule is Rule.SUCC_CONJ:
        return isinstance(node, ConjG) and _is_top_leaf(node.tree)
    if rule is Rule.PRUNE_CONJ:
        return isinstance(node, ConjG) and isinstance(node.tree, Empty)
    if rule is Rule.PRUNE_LEFT:
        return isinstance(node, DisjL) and isinstance(node.left, Empty)
    if rule is Rule.PRUNE_RIGHT:
        return isinstance(node, DisjR) and isinstance(node.right, Empty)
    if rule is Rule.LEFT_ANS_CONJ:
        return isinstance(node, ConjG) and isinstance(node.tree, DisjL) \
            and _is_top_leaf(node.tree.left)
    if rule is Rule.RIGHT_ANS_CONJ:
        return isinstance(node, ConjG) and isinstance(node.tree, DisjR) \
            and _is_top_leaf(node.tree.right)
    if rule is Rule.ASSOC_RIGHT_LEFT:
        return isinstance(node, DisjR) and isinstance(node.right, DisjL) \
            and _is_top_leaf(node.right.left)
    if rule is Rule.ASSOC_RIGHT_RIGHT:
        return isinstance(node, DisjR) and isinstance(node.right, DisjR) \
            and _is_top_leaf(node.right.right)
    if rule is Rule.ASSOC_LEFT_LEFT:
        return isinstance(node, DisjL) and isinstance(node.left, DisjL) \
            and _is_top_leaf(node.left.left)
    if rule is Rule.ASSOC_LEFT_RIGHT:
        return isinstance(node, DisjL) and isinstance(node.left, DisjR) \
            and _is_top_leaf(node.left.right)
    if rule is Rule.DELAY_CONJ:
        return isinstance(node, ConjG) and isinstance(node.tree, Delay)
    if rule is Rule.DELAY_LEFT:
        return isinstance(node, DisjL) and isinstance(node.left, Delay)
    if rule is Rule.DELAY_RIGHT:
        return isinstance(node, DisjR) and isinstance(node.right, Delay)
    if rule is Rule.INVOKE_DELAY:
        return at_tail and isinstance(node, Delay)
    if rule is Rule.PROMOTE_LEFT:
        return at_tail and isinstance(node, DisjL) and _is_top_leaf(node.left)
    if rule is Rule.PROMOTE_RIGHT:
        return at_tail and isinstance(node, DisjR) and _is_top_leaf(node.right)
    raise ValueError(f"unknown rule {rule}")


def enumerate_redexes(program: Program, rs: RuleSet) -> list[tuple[tuple[str, ...], Rule]]:
    """All (position, rule) matches over every legal decomposition."""
    matches: list[tuple[tuple[str, ...], Rule]] = []
    path: list[str] = []
    node: SearchTree = program.tree
    # positions along the answer-stream spine (no rule matches a Plus, but
    # they are legal hole positions and are tested for completeness)
    while isinstance(node, Plus):
        for rule in rs.rules:
            if _pattern_matches(rule, node, at_tail=False):
                matches.append((tuple(path), rule))
        path.append(PLUS_TAIL)
        node = node.right
    at_tail = True
    while True:
        for rule in rs.rules:
            if _pattern_matches(rule, node, at_tail):
                matches.append((tuple(path), rule))
        if isinstance(node, DisjL):
            path.append(ACTIVE_LEFT)
            node = node.left
        elif isinstance(node, DisjR):
            path.append(ACTIVE_RIGHT)
            node = node.right
        elif isinstance(node, ConjG):
            path.append(CONJ_TREE)
            node = node.tree
        else:
            break
        at_tail = False
    return matches


@dataclass
class Verdict:
    ok: bool
    steps_taken: int
    failures: list[str] = field(default_factory=list)


def check_determinism(program: Program, rs: RuleSet, steps: int) -> Verdict:
    """Step up to ``steps`` times; at every intermediate state the
    exhaustive enumeration must find at most one redex, and it must be
    the one the engine locates."""
    current = program
    for n in range(steps):
        found = enumerate_redexes(current, rs)
        located = locate_redex(current, rs)
        if len(found) > 1:
            return Verdict(False, n, [f"{len(found)} redexes at step {n}: {found}"])
        if located is None:
            if found:
                return Verdict(False, n, [f"engine saw terminal but {found[0]} matches"])
            return Verdict(True, n)
        if not found:
            return Verdict(False, n, [f"engine located {located.rule} but enumeration found none"])
        if found[0] != (located.path, located.rule):
            return Verdict(False, n, [f"mismatch: engine {(located.path, located.rule)} vs {found[0]}"])
        result = step(current, rs)
        if result is None:
            return Verdict(True, n)
        _, current, _ = result
    return Verdict(True, steps)


def check_preservation(program: Program, rs: RuleSet, steps: int,
                       goal_uids: frozenset[int]) -> Verdict:
    """Step up to ``steps`` times asserting well-formedness after every
    step, plus per-lineage counter/trail/substitution monotonicity."""
    problems = well_formed(program, goal_uids)
    if problems:
        return Verdict(False, 0, [f"initial state ill-formed: {problems}"])
    current = program
    for n in range(steps):
        before = _states_by_uid(current.tree)
        result = step(current, rs)
        if result is None:
            return Verdict(True, n)
        rule, current, _ = result
        problems = well_formed(current, goal_uids)
        if problems:
            return Verdict(False, n + 1, [f"after {rule.value}: {problems}"])
        after = _states_by_uid(current.tree)
        for uid, state in after.items():
            prior = before.get(uid)
            if prior is None:
                continue
            if state.counter < prior.counter:
                return Verdict(False, n + 1, [f"counter shrank for state {uid} after {rule.value}"])
            if not state.trail.extends(prior.trail):
                return Verdict(False, n + 1, [f"trail not an extension for state {uid} after {rule.value}"])
            if not state.subst.extends(prior.subst):
                return Verdict(False, n + 1, [f"substitution not an extension for state {uid} after {rule.value}"])
    return Verdict(True, steps)


def _states_by_uid(tree: SearchTree) -> dict[int, State]:
    out: dict[int, State] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out[node.state.uid] = node.state
        elif isinstance(node, (DisjL, DisjR, Plus)):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, ConjG):
            stack.append(node.tree)
        elif isinstance(node, (Delay, Go)):
            stack.append(node.child)
    return out
