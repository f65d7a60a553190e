"""Search-tree nodes and the program container.

A search tree is empty, a goal/state leaf, a pointed disjunction whose
arrow marks the active child (DisjL activates the left, DisjR the
right), an answer-stream join (Plus), a tree-with-goal conjunction, or a
delay/go suspension wrapper. Trees are immutable; a reduction rebuilds
only the spine above the rewritten node.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .goals import Goal, RelDef, Top, goal_text
from .terms import State, print_term


@dataclass(frozen=True, slots=True)
class Empty:
    pass


EMPTY = Empty()


@dataclass(frozen=True, slots=True)
class Leaf:
    goal: Goal
    state: State


@dataclass(frozen=True, slots=True)
class DisjL:
    """Pointed disjunction ``S ← S``: the left child is active."""

    left: "SearchTree"
    right: "SearchTree"


@dataclass(frozen=True, slots=True)
class DisjR:
    """Pointed disjunction ``S → S``: the right child is active."""

    left: "SearchTree"
    right: "SearchTree"


@dataclass(frozen=True, slots=True)
class Plus:
    """Answer-stream join ``S + S``; the left child is a finished answer."""

    left: "SearchTree"
    right: "SearchTree"


@dataclass(frozen=True, slots=True)
class ConjG:
    """Conjunction ``S × G`` of a tree with a pending goal."""

    tree: "SearchTree"
    goal: Goal


@dataclass(frozen=True, slots=True)
class Delay:
    child: "SearchTree"


@dataclass(frozen=True, slots=True)
class Go:
    child: "SearchTree"


SearchTree = Union[Empty, Leaf, DisjL, DisjR, Plus, ConjG, Delay, Go]


@dataclass(frozen=True, slots=True)
class Program:
    env: Mapping[str, RelDef]
    tree: SearchTree
    uid_counter: int
    query_vars: tuple[int, ...]


def is_answer_leaf(tree: SearchTree) -> bool:
    return isinstance(tree, Leaf) and isinstance(tree.goal, Top)


def state_text(state: State) -> str:
    bindings = state.subst.items()
    if not bindings:
        theta = "∅"
    else:
        theta = " ".join(f"({i} ↦ {print_term(t)})" for i, t in bindings)
        if len(bindings) > 1:
            theta = f"({theta})"
    return f"({theta}, {state.counter})"


def pretty(tree: SearchTree) -> str:
    """One-line rendering in the engine's notation (←, →, ×, +, delay, go)."""
    if isinstance(tree, Empty):
        return "empty"
    if isinstance(tree, Leaf):
        return f"({goal_text(tree.goal)} {state_text(tree.state)})"
    if isinstance(tree, DisjL):
        return f"({pretty(tree.left)} ← {pretty(tree.right)})"
    if isinstance(tree, DisjR):
        return f"({pretty(tree.left)} → {pretty(tree.right)})"
    if isinstance(tree, Plus):
        return f"({pretty(tree.left)} + {pretty(tree.right)})"
    if isinstance(tree, ConjG):
        return f"({pretty(tree.tree)} × {goal_text(tree.goal)})"
    if isinstance(tree, Delay):
        return f"(delay {pretty(tree.child)})"
    if isinstance(tree, Go):
        return f"(go {pretty(tree.child)})"
    raise TypeError(f"not a search tree: {tree!r}")
