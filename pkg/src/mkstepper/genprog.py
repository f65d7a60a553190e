"""Random surface-program generation for the validation harness.

Programs are emitted as source text and pushed through the full
read/parse/check/lower pipeline, so generation doubles as a frontend
fuzzer: anything the checker accepts must lower cleanly. With recursion
off, relation bodies may only call earlier-defined relations, so every
generated program terminates; with recursion on, self-calls are allowed
and callers must run under a step budget.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .lower import Lowered, lower
from .surface import analyze


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_depth: int = 3
    max_relations: int = 3
    max_arity: int = 2
    recursion: bool = False
    # relative weights: unify, conde, fresh, relcall, succeed
    weights: tuple[float, float, float, float, float] = (4.0, 2.0, 2.0, 2.0, 1.0)


@dataclass(frozen=True)
class GenResult:
    source: str
    lowered: Lowered


_CONSTS = ("'a", "'b", "'c", "'()", "1", "2", "#t")


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def term(self, scope: tuple[str, ...], depth: int) -> str:
        choices = ["const"]
        if scope:
            choices += ["var", "var"]
        if depth > 0:
            choices.append("pair")
        kind = self.rng.choice(choices)
        if kind == "var":
            return self.rng.choice(scope)
        if kind == "const":
            return self.rng.choice(_CONSTS)
        return "`" + self.quasi_data(scope, depth - 1)

    def quasi_data(self, scope: tuple[str, ...], depth: int) -> str:
        """Datum text inside a quasiquote: variables unquoted, constants bare."""
        choices = ["const"]
        if scope:
            choices += ["var", "var"]
        if depth > 0:
            choices.append("pair")
        kind = self.rng.choice(choices)
        if kind == "var":
            return "," + self.rng.choice(scope)
        if kind == "const":
            c = self.rng.choice(_CONSTS)
            return c[1:] if c.startswith("'") else c
        return f"({self.quasi_data(scope, depth - 1)} . {self.quasi_data(scope, depth - 1)})"

    def goal(self, scope: tuple[str, ...], rels: list[tuple[str, int]],
             depth: int, fresh_seq: list[int]) -> str:
        unify_w, conde_w, fresh_w, call_w, succeed_w = self.cfg.weights
        table = [("unify", unify_w), ("succeed", succeed_w)]
        if depth > 0:
            table += [("conde", conde_w), ("fresh", fresh_w)]
        if rels:
            table.append(("call", call_w))
        total = sum(w for _, w in table)
        pick = self.rng.uniform(0, total)
        for kind, w in table:
            pick -= w
            if pick <= 0:
                break
        if kind == "succeed":
            return "succeed"
        if kind == "unify":
            return f"(== {self.term(scope, 1)} {self.term(scope, 1)})"
        if kind == "conde":
            clauses = []
            for _ in range(self.rng.randint(2, 3)):
                goals = self.goals(scope, rels, depth - 1, fresh_seq)
                clauses.append(f"[{' '.join(goals)}]")
            return f"(conde {' '.join(clauses)})"
        if kind == "fresh":
            names = []
            for _ in range(self.rng.randint(1, 2)):
                fresh_seq[0] += 1
                names.append(f"v{fresh_seq[0]}")
            goals = self.goals(tuple(scope) + tuple(names), rels, depth - 1, fresh_seq)
            return f"(fresh ({' '.join(names)}) {' '.join(goals)})"
        name, arity = self.rng.choice(rels)
        args = " ".join(self.term(scope, 1) for _ in range(arity))
        return f"({name} {args})" if args else f"({name})"

    def goals(self, scope: tuple[str, ...], rels: list[tuple[str, int]],
              depth: int, fresh_seq: list[int]) -> list[str]:
        return [self.goal(scope, rels, depth, fresh_seq)
                for _ in range(self.rng.randint(1, 2))]

    def program(self) -> str:
        cfg = self.cfg
        rels: list[tuple[str, int]] = []
        parts: list[str] = []
        for i in range(self.rng.randint(0, cfg.max_relations)):
            name = f"r{i}"
            arity = self.rng.randint(0, cfg.max_arity)
            params = tuple(f"p{k}" for k in range(arity))
            callable_rels = rels + [(name, arity)] if cfg.recursion else list(rels)
            fresh_seq = [0]
            body = self.goals(params, callable_rels, cfg.max_depth - 1, fresh_seq)
            header = f"({name} {' '.join(params)})" if params else f"({name})"
            parts.append(f"(defrel {header} {' '.join(body)})")
            rels.append((name, arity))
        fresh_seq = [0]
        body = self.goals(("q",), rels, cfg.max_depth, fresh_seq)
        parts.append(f"(run* (q) {' '.join(body)})")
        return "\n".join(parts)


def gen_program(cfg: GenConfig) -> GenResult:
    """Generate a checked, lowered program; deterministic in the seed."""
    source = _Gen(cfg).program()
    program, diags = analyze(source)
    if program is None:
        raise AssertionError(f"generator produced a rejected program:\n{source}\n{diags}")
    return GenResult(source, lower(program))


def shrink(source: str) -> list[str]:
    """Candidate simplifications of a generated source text, largest
    first: drop a conde clause, drop a conjunct, or replace a compound
    term with a constant. Candidates that no longer check are discarded
    by the caller via ``try_analyze``."""
    candidates: list[str] = []
    forms, diags = _read_forms(source)
    if diags:
        return []
    for i in range(len(forms)):
        reduced = forms[:i] + forms[i + 1:]
        if reduced:
            candidates.append("\n".join(reduced))
    # textual clause/goal dropping: re-render with one bracketed group removed
    spans = _bracket_groups(source)
    for start, end in spans:
        candidates.append(source[:start] + source[end:])
    return candidates


def try_analyze(source: str) -> Optional[GenResult]:
    program, diags = analyze(source)
    if program is None:
        return None
    try:
        return GenResult(source, lower(program))
    except Exception:
        return None


def _read_forms(source: str) -> tuple[list[str], tuple]:
    from .reader import read

    forms, diags = read(source)
    if diags:
        return [], diags
    rendered = []
    for form in forms:
        rendered.append(source[form.span.start:form.span.end])
    return rendered, ()


def _bracket_groups(source: str) -> list[tuple[int, int]]:
    """Spans of top-level-ish [..] groups, candidates for removal."""
    out = []
    stack = []
    for i, ch in enumerate(source):
        if ch == "[":
            stack.append(i)
        elif ch == "]" and stack:
            start = stack.pop()
            out.append((start, i + 1))
    return out
