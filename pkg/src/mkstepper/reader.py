"""S-expression reader with byte/line/column source spans.

Reads the concrete syntax used by the surface language: parens and
square brackets, ``'``/`` ` ``/``,`` reader sugar expanded to quote,
quasiquote, and unquote forms, dotted pairs, ``;`` line comments,
integers, ``#t``/``#f``, and symbols. Every node carries the span of the
text it came from; diagnostics point back into the original source.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True, slots=True)
class Span:
    start: int
    end: int
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def to_json(self) -> dict:
        return {
            "start": {"line": self.start_line, "col": self.start_col},
            "end": {"line": self.end_line, "col": self.end_col},
        }


def join_spans(a: Span, b: Span) -> Span:
    first, last = (a, b) if a.start <= b.start else (b, a)
    return Span(first.start, last.end, first.start_line, first.start_col, last.end_line, last.end_col)


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    message: str
    span: Span
    severity: str = "error"

    def to_json(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        doc.update(self.span.to_json())
        return doc


BAD_FORM = "BAD_FORM"
ARITY_MISMATCH = "ARITY_MISMATCH"
UNBOUND_RELATION = "UNBOUND_RELATION"
UNBOUND_VARIABLE = "UNBOUND_VARIABLE"
DUPLICATE_DEFINITION = "DUPLICATE_DEFINITION"
DUPLICATE_BINDING = "DUPLICATE_BINDING"


@dataclass(frozen=True, slots=True)
class Sym:
    name: str
    span: Span


@dataclass(frozen=True, slots=True)
class Num:
    value: int
    span: Span


@dataclass(frozen=True, slots=True)
class Bool:
    value: bool
    span: Span


@dataclass(frozen=True, slots=True)
class SList:
    items: tuple["SExpr", ...]
    span: Span
    tail: Optional["SExpr"] = None  # dotted tail, if any


SExpr = Union[Sym, Num, Bool, SList]

_DELIMS = "()[]'`,; \t\r\n"
_SUGAR = {"'": "quote", "`": "quasiquote", ",": "unquote", ",@": "unquote-splicing"}
_CLOSER = {"(": ")", "[": "]"}


class _ReadError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, span: Span) -> _ReadError:
        return _ReadError(Diagnostic(BAD_FORM, message, span))

    def here(self, width: int = 1) -> Span:
        end = min(self.pos + width, len(self.text))
        segment = self.text[self.pos:end]
        line, col = self.line, self.col
        for ch in segment:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        return Span(self.pos, end, self.line, self.col, line, col)

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def skip_blank(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self.advance()
            elif ch == ";":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.advance()
            else:
                return

    def at_eof(self) -> bool:
        self.skip_blank()
        return self.pos >= len(self.text)

    def read_form(self) -> SExpr:
        self.skip_blank()
        if self.pos >= len(self.text):
            raise self.error("unexpected end of input", self.here(0))
        ch = self.text[self.pos]
        if ch in "([":
            return self.read_list(ch)
        if ch in ")]":
            raise self.error(f"unexpected '{ch}'", self.here())
        if ch in "'`,":
            return self.read_sugar()
        return self.read_atom()

    def read_sugar(self) -> SExpr:
        start = self.here(0)
        mark = self.text[self.pos]
        self.advance()
        if mark == "," and self.pos < len(self.text) and self.text[self.pos] == "@":
            mark = ",@"
            self.advance()
        inner = self.read_form()
        span = Span(start.start, inner.span.end, start.start_line, start.start_col,
                    inner.span.end_line, inner.span.end_col)
        head = Sym(_SUGAR[mark], Span(start.start, start.start + len(mark),
                                      start.start_line, start.start_col,
                                      start.start_line, start.start_col + len(mark)))
        return SList((head, inner), span)

    def read_list(self, opener: str) -> SList:
        start = self.here(0)
        self.advance()
        closer = _CLOSER[opener]
        items: list[SExpr] = []
        tail: Optional[SExpr] = None
        while True:
            self.skip_blank()
            if self.pos >= len(self.text):
                raise self.error(f"unclosed '{opener}'", start)
            ch = self.text[self.pos]
            if ch in ")]":
                if ch != closer:
                    raise self.error(f"mismatched '{ch}' closing '{opener}'", self.here())
                end = self.here()
                self.advance()
                span = Span(start.start, end.end, start.start_line, start.start_col,
                            end.end_line, end.end_col)
                return SList(tuple(items), span, tail)
            if tail is not None:
                raise self.error("only one form may follow '.'", self.here())
            if ch == "." and self._is_lone_dot():
                if not items:
                    raise self.error("'.' needs a preceding form", self.here())
                self.advance()
                tail = self.read_form()
                continue
            items.append(self.read_form())

    def _is_lone_dot(self) -> bool:
        nxt = self.pos + 1
        return nxt >= len(self.text) or self.text[nxt] in _DELIMS

    def read_atom(self) -> SExpr:
        start = self.here(0)
        begin = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _DELIMS:
            self.advance()
        token = self.text[begin:self.pos]
        span = Span(begin, self.pos, start.start_line, start.start_col, self.line, self.col)
        if token == "#t":
            return Bool(True, span)
        if token == "#f":
            return Bool(False, span)
        stripped = token[1:] if token[0] in "+-" else token
        if stripped.isdigit():
            return Num(int(token), span)
        return Sym(token, span)


def read(text: str) -> tuple[tuple[SExpr, ...], tuple[Diagnostic, ...]]:
    """Read all top-level forms. On a syntax error the forms read so far
    are returned alongside the diagnostic."""
    reader = _Reader(text)
    forms: list[SExpr] = []
    try:
        while not reader.at_eof():
            forms.append(reader.read_form())
    except _ReadError as err:
        return tuple(forms), (err.diagnostic,)
    return tuple(forms), ()


def print_sexpr(sx: SExpr) -> str:
    if isinstance(sx, Sym):
        return sx.name
    if isinstance(sx, Num):
        return str(sx.value)
    if isinstance(sx, Bool):
        return "#t" if sx.value else "#f"
    inner = " ".join(print_sexpr(item) for item in sx.items)
    if sx.tail is not None:
        inner = f"{inner} . {print_sexpr(sx.tail)}" if inner else f". {print_sexpr(sx.tail)}"
    return f"({inner})"


def sexpr_equal(a: SExpr, b: SExpr) -> bool:
    """Structural equality ignoring spans."""
    if isinstance(a, Sym) and isinstance(b, Sym):
        return a.name == b.name
    if isinstance(a, Num) and isinstance(b, Num):
        return a.value == b.value
    if isinstance(a, Bool) and isinstance(b, Bool):
        return a.value == b.value
    if isinstance(a, SList) and isinstance(b, SList):
        if len(a.items) != len(b.items):
            return False
        if (a.tail is None) != (b.tail is None):
            return False
        if a.tail is not None and b.tail is not None and not sexpr_equal(a.tail, b.tail):
            return False
        return all(sexpr_equal(x, y) for x, y in zip(a.items, b.items))
    return False
