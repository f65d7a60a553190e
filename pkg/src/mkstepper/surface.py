"""Surface program recognition and static well-formedness checks.

Recognized forms: ``defrel``, ``run*`` / ``run n``, and in goal position
``==``, ``conde``, ``fresh``, ``succeed``, and relation application. Term
position accepts variables, literals, and quote/quasiquote data with
dotted pairs. The checker guarantees that every relation call resolves
with the right arity and every term variable has a binder, so lowering
never has to recover from bad input.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .reader import (
    ARITY_MISMATCH,
    BAD_FORM,
    DUPLICATE_BINDING,
    DUPLICATE_DEFINITION,
    UNBOUND_RELATION,
    UNBOUND_VARIABLE,
    Bool,
    Diagnostic,
    Num,
    SExpr,
    SList,
    Span,
    Sym,
    read,
)

KEYWORDS = frozenset({
    "defrel", "run*", "run", "conde", "fresh", "==", "succeed",
    "quote", "quasiquote", "unquote", "unquote-splicing",
})


@dataclass(frozen=True, slots=True)
class STVar:
    name: str
    span: Span


@dataclass(frozen=True, slots=True)
class STConst:
    value: object
    span: Span


@dataclass(frozen=True, slots=True)
class STPair:
    head: "STerm"
    tail: "STerm"
    span: Span


STerm = Union[STVar, STConst, STPair]


@dataclass(frozen=True, slots=True)
class SSucceed:
    span: Span


@dataclass(frozen=True, slots=True)
class SUnify:
    left: STerm
    right: STerm
    span: Span


@dataclass(frozen=True, slots=True)
class SCall:
    name: str
    name_span: Span
    args: tuple[STerm, ...]
    span: Span


@dataclass(frozen=True, slots=True)
class SConde:
    clauses: tuple[tuple["SurfaceGoal", ...], ...]
    clause_spans: tuple[Span, ...]
    span: Span


@dataclass(frozen=True, slots=True)
class SFresh:
    names: tuple[str, ...]
    name_spans: tuple[Span, ...]
    body: tuple["SurfaceGoal", ...]
    span: Span


SurfaceGoal = Union[SSucceed, SUnify, SCall, SConde, SFresh]


@dataclass(frozen=True, slots=True)
class SurfaceRel:
    name: str
    name_span: Span
    params: tuple[str, ...]
    param_spans: tuple[Span, ...]
    body: tuple[SurfaceGoal, ...]
    span: Span


@dataclass(frozen=True, slots=True)
class SurfaceQuery:
    count: Optional[int]  # None means run*
    vars: tuple[str, ...]
    var_spans: tuple[Span, ...]
    body: tuple[SurfaceGoal, ...]
    span: Span


@dataclass(frozen=True, slots=True)
class SurfaceProgram:
    rels: tuple[SurfaceRel, ...]
    query: SurfaceQuery


class _Parser:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def fail(self, message: str, span: Span, code: str = BAD_FORM) -> None:
        self.diagnostics.append(Diagnostic(code, message, span))

    # -- terms ---------------------------------------------------------

    def parse_term(self, sx: SExpr) -> Optional[STerm]:
        if isinstance(sx, Sym):
            if sx.name in KEYWORDS:
                self.fail(f"'{sx.name}' is not a term", sx.span)
                return None
            return STVar(sx.name, sx.span)
        if isinstance(sx, Num):
            return STConst(sx.value, sx.span)
        if isinstance(sx, Bool):
            return STConst(sx.value, sx.span)
        if isinstance(sx, SList) and sx.tail is None and len(sx.items) == 2 \
                and isinstance(sx.items[0], Sym):
            head = sx.items[0].name
            if head == "quote":
                return self.parse_datum(sx.items[1])
            if head == "quasiquote":
                return self.parse_quasi(sx.items[1])
            if head in ("unquote", "unquote-splicing"):
                self.fail(f"'{head}' is only legal inside quasiquote", sx.span)
                return None
        self.fail("expected a term: variable, literal, or quoted data", sx.span)
        return None

    def parse_datum(self, sx: SExpr) -> Optional[STerm]:
        if isinstance(sx, Sym):
            return STConst(sx.name, sx.span)
        if isinstance(sx, Num):
            return STConst(sx.value, sx.span)
        if isinstance(sx, Bool):
            return STConst(sx.value, sx.span)
        if isinstance(sx, SList):
            tail: Optional[STerm]
            if sx.tail is not None:
                tail = self.parse_datum(sx.tail)
            else:
                tail = STConst((), sx.span)
            for item in reversed(sx.items):
                head = self.parse_datum(item)
                if head is None or tail is None:
                    return None
                tail = STPair(head, tail, sx.span)
            return tail
        self.fail("bad quoted datum", sx.span)
        return None

    def parse_quasi(self, sx: SExpr) -> Optional[STerm]:
        if isinstance(sx, SList) and sx.tail is None and len(sx.items) == 2 \
                and isinstance(sx.items[0], Sym):
            head = sx.items[0].name
            if head == "unquote":
                return self.parse_term(sx.items[1])
            if head == "unquote-splicing":
                self.fail("unquote-splicing is not supported", sx.span)
                return None
            if head == "quasiquote":
                self.fail("nested quasiquote is not supported", sx.span)
                return None
        if isinstance(sx, SList):
            tail: Optional[STerm]
            if sx.tail is not None:
                tail = self.parse_quasi(sx.tail)
            else:
                tail = STConst((), sx.span)
            for item in reversed(sx.items):
                head = self.parse_quasi(item)
                if head is None or tail is None:
                    return None
                tail = STPair(head, tail, sx.span)
            return tail
        return self.parse_datum(sx)

    # -- goals ---------------------------------------------------------

    def parse_goal(self, sx: SExpr) -> Optional[SurfaceGoal]:
        if isinstance(sx, Sym) and sx.name == "succeed":
            return SSucceed(sx.span)
        if not isinstance(sx, SList) or sx.tail is not None or not sx.items:
            self.fail("expected a goal", sx.span if not isinstance(sx, SList) else sx.span)
            return None
        head = sx.items[0]
        if not isinstance(head, Sym):
            self.fail("goal must start with an operator or relation name", sx.span)
            return None
        if head.name == "==":
            if len(sx.items) != 3:
                self.fail("== takes exactly two terms", sx.span)
                return None
            left = self.parse_term(sx.items[1])
            right = self.parse_term(sx.items[2])
            if left is None or right is None:
                return None
            return SUnify(left, right, sx.span)
        if head.name == "conde":
            clauses = sx.items[1:]
            if not clauses:
                self.fail("conde needs at least one clause", sx.span)
                return None
            parsed: list[tuple[SurfaceGoal, ...]] = []
            spans: list[Span] = []
            ok = True
            for clause in clauses:
                if not isinstance(clause, SList) or clause.tail is not None or not clause.items:
                    self.fail("conde clause must be a non-empty goal sequence", clause.span)
                    ok = False
                    continue
                goals = self.parse_goals(clause.items)
                if goals is None:
                    ok = False
                    continue
                parsed.append(goals)
                spans.append(clause.span)
            if not ok:
                return None
            return SConde(tuple(parsed), tuple(spans), sx.span)
        if head.name == "fresh":
            if len(sx.items) < 3:
                self.fail("fresh needs a binder list and at least one goal", sx.span)
                return None
            binder = sx.items[1]
            if not isinstance(binder, SList) or binder.tail is not None:
                self.fail("fresh binder must be a list of variables", binder.span)
                return None
            names: list[str] = []
            name_spans: list[Span] = []
            for item in binder.items:
                if not isinstance(item, Sym) or item.name in KEYWORDS:
                    self.fail("fresh binder entries must be variable names", item.span)
                    return None
                names.append(item.name)
                name_spans.append(item.span)
            body = self.parse_goals(sx.items[2:])
            if body is None:
                return None
            return SFresh(tuple(names), tuple(name_spans), body, sx.span)
        if head.name in KEYWORDS:
            self.fail(f"'{head.name}' form is not allowed here", sx.span)
            return None
        args: list[STerm] = []
        for item in sx.items[1:]:
            term = self.parse_term(item)
            if term is None:
                return None
            args.append(term)
        return SCall(head.name, head.span, tuple(args), sx.span)

    def parse_goals(self, items: tuple[SExpr, ...]) -> Optional[tuple[SurfaceGoal, ...]]:
        out: list[SurfaceGoal] = []
        ok = True
        for item in items:
            goal = self.parse_goal(item)
            if goal is None:
                ok = False
            else:
                out.append(goal)
        return tuple(out) if ok else None

    # -- top level -----------------------------------------------------

    def parse_defrel(self, sx: SList) -> Optional[SurfaceRel]:
        if len(sx.items) < 3:
            self.fail("defrel needs a header and at least one goal", sx.span)
            return None
        header = sx.items[1]
        if not isinstance(header, SList) or header.tail is not None or not header.items:
            self.fail("defrel header must be (name params ...)", sx.items[1].span)
            return None
        name_sx = header.items[0]
        if not isinstance(name_sx, Sym) or name_sx.name in KEYWORDS:
            self.fail("defrel needs a relation name", name_sx.span)
            return None
        params: list[str] = []
        param_spans: list[Span] = []
        for item in header.items[1:]:
            if not isinstance(item, Sym) or item.name in KEYWORDS:
                self.fail("defrel parameters must be variable names", item.span)
                return None
            params.append(item.name)
            param_spans.append(item.span)
        body = self.parse_goals(sx.items[2:])
        if body is None:
            return None
        return SurfaceRel(name_sx.name, name_sx.span, tuple(params), tuple(param_spans), body, sx.span)

    def parse_run(self, sx: SList) -> Optional[SurfaceQuery]:
        head = sx.items[0]
        assert isinstance(head, Sym)
        count: Optional[int] = None
        rest = sx.items[1:]
        if head.name == "run":
            if not rest or not isinstance(rest[0], Num) or rest[0].value < 1:
                self.fail("run needs a positive answer count", sx.span)
                return None
            count = rest[0].value
            rest = rest[1:]
        if not rest:
            self.fail("run needs a query variable list", sx.span)
            return None
        binder = rest[0]
        if not isinstance(binder, SList) or binder.tail is not None or not binder.items:
            self.fail("query variable list must name at least one variable", binder.span)
            return None
        names: list[str] = []
        name_spans: list[Span] = []
        for item in binder.items:
            if not isinstance(item, Sym) or item.name in KEYWORDS:
                self.fail("query variables must be names", item.span)
                return None
            names.append(item.name)
            name_spans.append(item.span)
        if len(rest) < 2:
            self.fail("run needs at least one goal", sx.span)
            return None
        body = self.parse_goals(rest[1:])
        if body is None:
            return None
        return SurfaceQuery(count, tuple(names), tuple(name_spans), body, sx.span)


def parse(forms: tuple[SExpr, ...]) -> tuple[Optional[SurfaceProgram], tuple[Diagnostic, ...]]:
    """Recognize a sequence of defrels followed by exactly one query."""
    parser = _Parser()
    rels: list[SurfaceRel] = []
    query: Optional[SurfaceQuery] = None
    for sx in forms:
        if not isinstance(sx, SList) or sx.tail is not None or not sx.items \
                or not isinstance(sx.items[0], Sym):
            parser.fail("expected a defrel or run form", sx.span)
            continue
        head = sx.items[0].name
        if head == "defrel":
            if query is not None:
                parser.fail("defrel must precede the query", sx.span)
                continue
            rel = parser.parse_defrel(sx)
            if rel is not None:
                rels.append(rel)
        elif head in ("run*", "run"):
            if query is not None:
                parser.fail("only one run form is allowed", sx.span)
                continue
            query = parser.parse_run(sx)
        else:
            parser.fail(f"unknown top-level form '{head}'", sx.span)
    if query is None and not parser.diagnostics:
        last = forms[-1].span if forms else Span(0, 0, 1, 1, 1, 1)
        parser.fail("program needs a run form", last)
    diags = _sorted(parser.diagnostics)
    if diags or query is None:
        return None, diags
    return SurfaceProgram(tuple(rels), query), ()


def check(program: SurfaceProgram) -> tuple[Diagnostic, ...]:
    """Static checks: relation resolution and arity, variable binding,
    duplicate definitions and binders. Empty result means well-formed."""
    diags: list[Diagnostic] = []
    arities: dict[str, int] = {}
    for rel in program.rels:
        if rel.name in arities:
            diags.append(Diagnostic(DUPLICATE_DEFINITION,
                                    f"relation '{rel.name}' is already defined", rel.name_span))
        else:
            arities[rel.name] = len(rel.params)
        seen: set[str] = set()
        for name, span in zip(rel.params, rel.param_spans):
            if name in seen:
                diags.append(Diagnostic(DUPLICATE_BINDING,
                                        f"duplicate parameter '{name}'", span))
            seen.add(name)

    def check_goals(goals: tuple[SurfaceGoal, ...], scope: frozenset[str]) -> None:
        for goal in goals:
            check_goal(goal, scope)

    def check_goal(goal: SurfaceGoal, scope: frozenset[str]) -> None:
        if isinstance(goal, SSucceed):
            return
        if isinstance(goal, SUnify):
            check_term(goal.left, scope)
            check_term(goal.right, scope)
            return
        if isinstance(goal, SCall):
            if goal.name not in arities:
                diags.append(Diagnostic(UNBOUND_RELATION,
                                        f"unknown relation '{goal.name}'", goal.name_span))
            elif arities[goal.name] != len(goal.args):
                diags.append(Diagnostic(
                    ARITY_MISMATCH,
                    f"'{goal.name}' takes {arities[goal.name]} argument(s), got {len(goal.args)}",
                    goal.span))
            for arg in goal.args:
                check_term(arg, scope)
            return
        if isinstance(goal, SConde):
            for clause in goal.clauses:
                check_goals(clause, scope)
            return
        if isinstance(goal, SFresh):
            seen: set[str] = set()
            for name, span in zip(goal.names, goal.name_spans):
                if name in seen:
                    diags.append(Diagnostic(DUPLICATE_BINDING,
                                            f"duplicate fresh variable '{name}'", span))
                seen.add(name)
            check_goals(goal.body, scope | frozenset(goal.names))
            return
        raise TypeError(f"not a surface goal: {goal!r}")

    def check_term(term: STerm, scope: frozenset[str]) -> None:
        if isinstance(term, STVar):
            if term.name not in scope:
                diags.append(Diagnostic(UNBOUND_VARIABLE,
                                        f"unbound variable '{term.name}'", term.span))
        elif isinstance(term, STPair):
            check_term(term.head, scope)
            check_term(term.tail, scope)

    for rel in program.rels:
        check_goals(rel.body, frozenset(rel.params))
    check_goals(program.query.body, frozenset(program.query.vars))
    return _sorted(diags)


def _sorted(diags: list[Diagnostic]) -> tuple[Diagnostic, ...]:
    return tuple(sorted(diags, key=lambda d: (d.span.start, d.span.end, d.code)))


def analyze(text: str) -> tuple[Optional[SurfaceProgram], tuple[Diagnostic, ...]]:
    """read + parse + check in one call; program is None iff diagnostics."""
    forms, diags = read(text)
    if diags:
        return None, diags
    program, diags = parse(forms)
    if program is None:
        return None, diags
    diags = check(program)
    if diags:
        return None, diags
    return program, ()
