"""Command-line client: static checking, batch tracing, and the server.

Exit codes: 0 ok, 1 diagnostics, 2 step budget exhausted, 3 internal
invariant violation.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .engine import (
    HALT_BUDGET,
    StepEvents,
    UnknownRuleSet,
    answers,
    is_terminal,
    resolve_ruleset,
    run_bounded,
)
from .terms import EngineInvariantError
from .lower import lower
from .session import build_snapshot_doc, canonical_json
from .surface import analyze
from .terms import print_term, reify

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3


def _load(path: str):
    source = Path(path).read_text(encoding="utf-8")
    program, diags = analyze(source)
    if program is None:
        click.echo(json.dumps([d.to_json() for d in diags], indent=2))
        sys.exit(EXIT_DIAGNOSTICS)
    return source, lower(program)


@click.group()
def main() -> None:
    """miniKanren search-tree stepper."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def check(file: str) -> None:
    """Statically check FILE; print diagnostics as JSON."""
    source = Path(file).read_text(encoding="utf-8")
    program, diags = analyze(source)
    if program is None:
        click.echo(json.dumps([d.to_json() for d in diags], indent=2))
        sys.exit(EXIT_DIAGNOSTICS)
    click.echo("ok")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--rules", default="interleaving", show_default=True,
              help="Rule set: interleaving or dfs.")
@click.option("--max-steps", default=100_000, show_default=True, type=int)
@click.option("--answers", "answer_quota", default=None, type=int,
              help="Stop after this many answers (defaults to the query's run n bound).")
@click.option("--trace", "trace_mode", default="none", show_default=True,
              type=click.Choice(["none", "rules", "full-json"]))
def run(file: str, rules: str, max_steps: int, answer_quota: Optional[int],
        trace_mode: str) -> None:
    """Run FILE to completion (or budget) and print its answers."""
    try:
        ruleset = resolve_ruleset(rules)
    except UnknownRuleSet as err:
        raise click.UsageError(str(err))
    _source, lowered = _load(file)
    quota = answer_quota if answer_quota is not None else lowered.query_count
    try:
        if trace_mode == "full-json":
            _run_full_json(lowered, ruleset, max_steps, quota)
            return
        result = run_bounded(lowered.program, ruleset, max_steps, quota)
    except EngineInvariantError as err:
        click.echo(f"internal invariant violation: {err}", err=True)
        sys.exit(EXIT_INTERNAL)
    if trace_mode == "rules":
        for n, rule in enumerate(result.trace, start=1):
            click.echo(f"step {n}: {rule.value}")
    for state in answers(result.program):
        click.echo(print_term(reify(state, result.program.query_vars)))
    if result.halt == HALT_BUDGET:
        click.echo(f"step budget exhausted after {len(result.trace)} steps", err=True)
        sys.exit(EXIT_BUDGET)


def _run_full_json(lowered, ruleset, max_steps: int, quota: Optional[int]) -> None:
    """One canonical snapshot JSON document per line, then the answers."""
    from .engine import step
    from .lower import Provenance

    source_map = lowered.source_map.fork()
    program = lowered.program
    rule = None
    events = StepEvents()
    steps = 0
    while True:
        terminal = is_terminal(program) or (quota is not None and len(answers(program)) >= quota)
        doc = build_snapshot_doc(
            step_no=steps, rule=rule, program=program, ruleset=ruleset,
            terminal=terminal, events=events, source_map=source_map,
            query_names=lowered.query_names, query_count=lowered.query_count,
        )
        click.echo(canonical_json(doc).decode("utf-8"))
        if terminal:
            break
        if steps >= max_steps:
            for state in answers(program):
                click.echo(print_term(reify(state, program.query_vars)))
            click.echo(f"step budget exhausted after {steps} steps", err=True)
            sys.exit(EXIT_BUDGET)
        result = step(program, ruleset)
        if result is None:
            break
        rule, program, events = result
        steps += 1
        for minted in events.minted_states:
            source_map.state_origins[minted.uid] = Provenance(
                rule=minted.rule.value, step=steps, parent=minted.parent)
    for state in answers(program):
        click.echo(print_term(reify(state, program.query_vars)))


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--session-ttl", default=3600, show_default=True, type=int,
              help="Idle seconds before a session expires.")
@click.option("--static", "static_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Also serve this directory (a built web UI) at /.")
def serve(port: int, host: str, session_ttl: int, static_dir: Optional[str]) -> None:
    """Serve the stepping API over HTTP."""
    import uvicorn

    from .api import create_app
    from .session import SessionStore

    app = create_app(SessionStore(ttl_seconds=session_ttl), static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
