"""Stepping sessions: zipper-backed history and snapshot serialization.

A session owns one lowered program and a zipper of snapshots. Stepping
back pushes the focus onto the forward stack, so stepping forward again
replays the cached snapshot byte-for-byte; the forward stack is cleared
only by reset or program resubmission. All snapshot JSON is canonical
(sorted keys, compact separators, no floats), which makes replay
determinism checkable as byte identity.
"""
from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass
from typing import Any, Optional

from .engine import (
    Rule,
    RuleSet,
    StepEvents,
    answers,
    is_terminal,
    locate_redex,
    resolve_ruleset,
    step,
)
from .goals import Call, Conj, Disj, Fresh, Goal, Top, UnifyGoal, goal_text
from .lower import Lowered, Provenance, SourceMap, lower
from .reader import Span
from .surface import analyze
from .terms import State, print_term, reify
from .tree import ConjG, Delay, DisjL, DisjR, Empty, Go, Leaf, Plus, Program, SearchTree

SNAPSHOT_VERSION = 1


def canonical_json(doc: Any) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


@dataclass(frozen=True)
class Snapshot:
    step: int
    rule: Optional[Rule]
    program: Program
    terminal: bool
    events: StepEvents
    doc: dict
    data: bytes


class UnknownSession(KeyError):
    pass


def _span_doc(span: Span) -> dict:
    return {
        "start": {"line": span.start_line, "col": span.start_col, "offset": span.start},
        "end": {"line": span.end_line, "col": span.end_col, "offset": span.end},
    }


def _goal_kind(goal: Goal) -> str:
    if isinstance(goal, Top):
        return "top"
    if isinstance(goal, UnifyGoal):
        return "unify"
    if isinstance(goal, Call):
        return "relcall"
    if isinstance(goal, Disj):
        return "disj"
    if isinstance(goal, Conj):
        return "conj"
    if isinstance(goal, Fresh):
        return "fresh"
    raise TypeError(f"not a goal: {goal!r}")


def _goal_doc(goal: Goal, source_map: SourceMap) -> dict:
    uid = None if isinstance(goal, Top) else goal.uid
    span = source_map.goal_spans.get(uid) if uid is not None else None
    return {
        "uid": uid,
        "kind": _goal_kind(goal),
        "text": goal_text(goal),
        "span": _span_doc(span) if span is not None else None,
    }


def _state_doc(state: State, query_vars: tuple[int, ...]) -> dict:
    return {
        "uid": state.uid,
        "counter": state.counter,
        "substitution": [
            {"var": f"#({i})", "term": print_term(t)} for i, t in state.subst.items()
        ],
        "trail": [
            {"left": print_term(e.left), "right": print_term(e.right), "goal_uid": e.goal_uid}
            for e in state.trail.entries()
        ],
        "reified": print_term(reify(state, query_vars)),
    }


_NODE_KINDS = {
    Empty: "empty", Leaf: "leaf", DisjL: "disj_left", DisjR: "disj_right",
    Plus: "plus", ConjG: "conj", Delay: "delay", Go: "go",
}

_CHILD_SELECTORS = {
    DisjL: ("active_left", None),
    DisjR: (None, "active_right"),
    Plus: (None, "plus_tail"),
}


def _node_doc(node: SearchTree, spine: Optional[tuple[str, ...]],
              source_map: SourceMap, query_vars: tuple[int, ...],
              go_marked: bool = False) -> dict:
    doc: dict[str, Any] = {
        "kind": _NODE_KINDS[type(node)],
        "flags": {"on_active_spine": spine is not None, "go_marked": go_marked},
        "children": [],
    }

    def child_spine(selector: Optional[str]) -> Optional[tuple[str, ...]]:
        if spine and selector is not None and spine[0] == selector:
            return spine[1:]
        return None

    if isinstance(node, Leaf):
        doc["goal"] = _goal_doc(node.goal, source_map)
        doc["state"] = _state_doc(node.state, query_vars)
    elif isinstance(node, (DisjL, DisjR, Plus)):
        left_sel, right_sel = _CHILD_SELECTORS[type(node)]
        doc["children"] = [
            _node_doc(node.left, child_spine(left_sel), source_map, query_vars),
            _node_doc(node.right, child_spine(right_sel), source_map, query_vars),
        ]
    elif isinstance(node, ConjG):
        doc["goal"] = _goal_doc(node.goal, source_map)
        doc["children"] = [
            _node_doc(node.tree, child_spine("conj_tree"), source_map, query_vars),
        ]
    elif isinstance(node, Delay):
        doc["children"] = [_node_doc(node.child, None, source_map, query_vars)]
    elif isinstance(node, Go):
        doc["flags"]["go_marked"] = True
        doc["children"] = [
            _node_doc(node.child, child_spine(None), source_map, query_vars, go_marked=True),
        ]
    return doc


def build_snapshot_doc(*, step_no: int, rule: Optional[Rule], program: Program,
                       ruleset: RuleSet, terminal: bool, events: StepEvents,
                       source_map: SourceMap, query_names: tuple[str, ...],
                       query_count: Optional[int]) -> dict:
    redex = None if terminal else locate_redex(program, ruleset)
    focus_path = list(redex.path) if redex is not None else []
    answer_states = answers(program)
    doc = {
        "version": SNAPSHOT_VERSION,
        "step": step_no,
        "rule": rule.value if rule is not None else None,
        "terminal": terminal,
        "ruleset": ruleset.name,
        "tree": _node_doc(program.tree, tuple(focus_path), source_map, program.query_vars),
        "answers": [_state_doc(s, program.query_vars) for s in answer_states],
        "focus_path": focus_path,
        "events": {
            "minted_state_uids": sorted(m.uid for m in events.minted_states),
            "trail_entries": [
                {
                    "state_uid": ev.state_uid,
                    "left": print_term(ev.entry.left),
                    "right": print_term(ev.entry.right),
                    "goal_uid": ev.entry.goal_uid,
                }
                for ev in events.trail_entries
            ],
        },
        "source_map": {
            "goals": {str(uid): _span_doc(span) for uid, span in source_map.goal_spans.items()},
            "states": {
                str(uid): {
                    "rule": origin.rule,
                    "step": origin.step,
                    "parent": origin.parent,
                }
                for uid, origin in source_map.state_origins.items()
            },
        },
        "query": {
            "vars": [{"index": i, "name": name} for i, name in enumerate(query_names)],
            "count": query_count,
        },
    }
    return doc


class Session:
    """One program under one rule set, with time travel."""

    def __init__(self, session_id: str, source: str, lowered: Lowered, ruleset: RuleSet):
        self.id = session_id
        self.source = source
        self.lowered = lowered
        self.ruleset = ruleset
        self.source_map = lowered.source_map.fork()
        self.lock = threading.Lock()
        self.created = time.monotonic()
        self.touched = self.created
        self.back: list[Snapshot] = []
        self.forward: list[Snapshot] = []
        self.focus = self._snapshot(0, None, lowered.program, StepEvents())

    def _quota_met(self, program: Program) -> bool:
        count = self.lowered.query_count
        return count is not None and len(answers(program)) >= count

    def _snapshot(self, step_no: int, rule: Optional[Rule], program: Program,
                  events: StepEvents) -> Snapshot:
        terminal = is_terminal(program) or self._quota_met(program)
        doc = build_snapshot_doc(
            step_no=step_no, rule=rule, program=program, ruleset=self.ruleset,
            terminal=terminal, events=events, source_map=self.source_map,
            query_names=self.lowered.query_names, query_count=self.lowered.query_count,
        )
        return Snapshot(step_no, rule, program, terminal, events, doc, canonical_json(doc))

    def step_forward(self) -> Snapshot:
        if self.forward:
            self.back.append(self.focus)
            self.focus = self.forward.pop()
            return self.focus
        if self.focus.terminal:
            return self.focus
        result = step(self.focus.program, self.ruleset)
        if result is None:
            return self.focus
        rule, program, events = result
        for minted in events.minted_states:
            self.source_map.state_origins[minted.uid] = Provenance(
                rule=minted.rule.value, step=self.focus.step + 1, parent=minted.parent)
        self.back.append(self.focus)
        self.focus = self._snapshot(self.focus.step + 1, rule, program, events)
        return self.focus

    def step_back(self) -> Snapshot:
        if self.back:
            self.forward.append(self.focus)
            self.focus = self.back.pop()
        return self.focus

    def reset(self, ruleset: Optional[RuleSet] = None) -> Snapshot:
        if ruleset is not None:
            self.ruleset = ruleset
        self.source_map = self.lowered.source_map.fork()
        self.back = []
        self.forward = []
        self.focus = self._snapshot(0, None, self.lowered.program, StepEvents())
        return self.focus


class SessionStore:
    """In-memory sessions keyed by opaque tokens, expired after idleness."""

    def __init__(self, ttl_seconds: float = 3600.0):
        self.ttl = ttl_seconds
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, source: str, ruleset_name: str) -> tuple[Optional[Session], tuple]:
        ruleset = resolve_ruleset(ruleset_name)  # raises UnknownRuleSet
        program, diags = analyze(source)
        if program is None:
            return None, diags
        lowered = lower(program)
        session = Session(secrets.token_urlsafe(16), source, lowered, ruleset)
        with self._lock:
            self._sweep()
            self._sessions[session.id] = session
        return session, ()

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._sweep()
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(session_id)
            session.touched = time.monotonic()
            return session

    def _sweep(self) -> None:
        now = time.monotonic()
        dead = [sid for sid, s in self._sessions.items() if now - s.touched > self.ttl]
        for sid in dead:
            del self._sessions[sid]
