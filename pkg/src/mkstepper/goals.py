"""The tagged core goal language and the relation environment.

Every goal except ⊤ carries a UID assigned at transpile time; expanded
copies of a relation body keep the body's UIDs, which is what lets the
UI trace every occurrence of a source goal in the tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .terms import Term, subst_term


@dataclass(frozen=True, slots=True)
class Top:
    """The always-succeeding goal; untagged."""


TOP = Top()


@dataclass(frozen=True, slots=True)
class UnifyGoal:
    left: Term
    right: Term
    uid: int


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple[Term, ...]
    uid: int


@dataclass(frozen=True, slots=True)
class Disj:
    left: "Goal"
    right: "Goal"
    uid: int


@dataclass(frozen=True, slots=True)
class Conj:
    left: "Goal"
    right: "Goal"
    uid: int


@dataclass(frozen=True, slots=True)
class Fresh:
    names: tuple[str, ...]
    body: "Goal"
    uid: int


Goal = Union[Top, UnifyGoal, Call, Disj, Conj, Fresh]


@dataclass(frozen=True, slots=True)
class RelDef:
    params: tuple[str, ...]
    body: Goal


# ordered, fixed for the whole run
RelEnv = Mapping[str, RelDef]


def subst_goal(goal: Goal, mapping: Mapping[str, Term]) -> Goal:
    """Substitute syntactic variables by terms throughout ``goal``.

    Inner binders shadow: a Fresh that rebinds a mapped name stops the
    substitution of that name in its body. Goal UIDs are preserved.
    """
    if isinstance(goal, Top):
        return goal
    if isinstance(goal, UnifyGoal):
        return UnifyGoal(subst_term(goal.left, mapping), subst_term(goal.right, mapping), goal.uid)
    if isinstance(goal, Call):
        return Call(goal.name, tuple(subst_term(a, mapping) for a in goal.args), goal.uid)
    if isinstance(goal, Disj):
        return Disj(subst_goal(goal.left, mapping), subst_goal(goal.right, mapping), goal.uid)
    if isinstance(goal, Conj):
        return Conj(subst_goal(goal.left, mapping), subst_goal(goal.right, mapping), goal.uid)
    if isinstance(goal, Fresh):
        inner = {k: v for k, v in mapping.items() if k not in goal.names}
        return Fresh(goal.names, subst_goal(goal.body, inner), goal.uid)
    raise TypeError(f"not a goal: {goal!r}")


def goal_text(goal: Goal) -> str:
    """Compact display form using the engine's notation."""
    from .terms import print_term

    if isinstance(goal, Top):
        return "⊤"
    if isinstance(goal, UnifyGoal):
        return f"{print_term(goal.left)} ≡ {print_term(goal.right)}"
    if isinstance(goal, Call):
        return f"{goal.name}({', '.join(print_term(a) for a in goal.args)})"
    if isinstance(goal, Disj):
        return f"({goal_text(goal.left)} ∨ {goal_text(goal.right)})"
    if isinstance(goal, Conj):
        return f"({goal_text(goal.left)} ∧ {goal_text(goal.right)})"
    if isinstance(goal, Fresh):
        return f"∃ ({' '.join(goal.names)}) {goal_text(goal.body)}"
    raise TypeError(f"not a goal: {goal!r}")


def goal_uids(goal: Goal) -> set[int]:
    """All UIDs tagged onto ``goal`` and its subgoals."""
    out: set[int] = set()
    stack: list[Goal] = [goal]
    while stack:
        g = stack.pop()
        if isinstance(g, Top):
            continue
        out.add(g.uid)
        if isinstance(g, (Disj, Conj)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Fresh):
            stack.append(g.body)
    return out


def free_syntactic_vars(goal: Goal) -> set[str]:
    """Names of syntactic variables not bound by an enclosing Fresh."""
    from .terms import Pair, SVar, Term

    def term_names(t: Term) -> set[str]:
        if isinstance(t, SVar):
            return {t.name}
        if isinstance(t, Pair):
            return term_names(t.head) | term_names(t.tail)
        return set()

    if isinstance(goal, Top):
        return set()
    if isinstance(goal, UnifyGoal):
        return term_names(goal.left) | term_names(goal.right)
    if isinstance(goal, Call):
        out: set[str] = set()
        for a in goal.args:
            out |= term_names(a)
        return out
    if isinstance(goal, (Disj, Conj)):
        return free_syntactic_vars(goal.left) | free_syntactic_vars(goal.right)
    if isinstance(goal, Fresh):
        return free_syntactic_vars(goal.body) - set(goal.names)
    raise TypeError(f"not a goal: {goal!r}")
