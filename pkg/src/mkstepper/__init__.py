"""miniKanren with an explicit, deterministically stepped search tree."""

from .engine import (
    DFS,
    INTERLEAVING,
    Rule,
    RuleSet,
    StuckNonTerminalError,
    UnknownRuleSet,
    answers,
    is_terminal,
    locate_redex,
    resolve_ruleset,
    run_bounded,
    step,
    well_formed,
)
from .lower import Lowered, lower
from .reader import Diagnostic, read
from .surface import analyze, check, parse
from .terms import reify, print_term
from .tree import Program, pretty

__all__ = [
    "DFS",
    "INTERLEAVING",
    "Diagnostic",
    "Lowered",
    "Program",
    "Rule",
    "RuleSet",
    "StuckNonTerminalError",
    "UnknownRuleSet",
    "analyze",
    "answers",
    "check",
    "is_terminal",
    "locate_redex",
    "lower",
    "parse",
    "pretty",
    "print_term",
    "read",
    "reify",
    "resolve_ruleset",
    "run_bounded",
    "step",
    "well_formed",
]
