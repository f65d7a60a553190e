import pytest

from conftest import (
    APPEND_BROKEN,
    APPEND_FIXED,
    APPEND_REC_FIRST,
    PETS,
    SAME_CAT,
    TWO_PETS,
    lowered,
)
from mkstepper.engine import (
    DFS,
    HALT_ANSWERS,
    HALT_BUDGET,
    HALT_TERMINAL,
    INTERLEAVING,
    Rule,
    StuckNonTerminalError,
    answers,
    is_terminal,
    locate_redex,
    run_bounded,
    step,
    well_formed,
)
from mkstepper.goals import Call, TOP, UnifyGoal
from mkstepper.terms import Const, EMPTY_SUBST, EMPTY_TRAIL, NIL, Pair, State, Var
from mkstepper.tree import (
    ConjG,
    Delay,
    DisjL,
    DisjR,
    EMPTY,
    Go,
    Leaf,
    Plus,
    Program,
    pretty,
)


def names(trace):
    return [r.value for r in trace]


def reified(program):
    from mkstepper.terms import print_term, reify

    return [print_term(reify(s, program.query_vars)) for s in answers(program)]


def run_all(source, rs, budget=100_000):
    low = lowered(source)
    result = run_bounded(low.program, rs, budget)
    return low, result


class TestGoldenTraces:
    def test_minimal_relation_call_trace(self):
        low, result = run_all(SAME_CAT, INTERLEAVING)
        assert result.halt == HALT_TERMINAL
        assert names(result.trace) == [
            "SubstFresh", "Delay", "InvokeDelay", "Proceed", "UnifySucc",
        ]
        final = result.program.tree
        assert isinstance(final, Leaf) and final.goal is TOP
        assert dict(final.state.subst.items()) == {0: Const("cat")}

    def test_reference_program_interleaving_order(self):
        _, result = run_all(PETS, INTERLEAVING)
        assert result.halt == HALT_TERMINAL
        assert reified(result.program) == ["fish", "turtle", "dog", "cat"]

    def test_reference_program_dfs_order(self):
        _, result = run_all(PETS, DFS)
        assert result.halt == HALT_TERMINAL
        assert reified(result.program) == ["turtle", "cat", "dog", "fish"]

    def test_two_branch_promotion(self):
        low = lowered(TWO_PETS)
        program = low.program
        seen = None
        rule = None
        for _ in range(100):
            result = step(program, INTERLEAVING)
            if result is None:
                break
            rule, program, _events = result
            if isinstance(program.tree, Plus):
                seen = program.tree
                break
        assert seen is not None, "no promotion happened"
        assert rule is Rule.PROMOTE_LEFT
        answer = seen.left
        assert isinstance(answer, Leaf) and answer.goal is TOP
        assert dict(answer.state.subst.items()) == {0: Const("cat")}
        pending = seen.right
        assert isinstance(pending, Go)
        assert isinstance(pending.child, Leaf)
        call = pending.child.goal
        assert isinstance(call, Call) and call.name == "same"
        assert call.args == (Var(0), Const("dog"))

    def test_broken_append_answer_and_trail(self):
        low, result = run_all(APPEND_BROKEN, INTERLEAVING)
        assert result.halt == HALT_TERMINAL
        assert reified(result.program) == ["(dog cat)"]
        first = answers(result.program)[0]
        walked = [(e.left, e.right) for e in first.trail.entries()]
        assert (Pair(Var(1), Var(2)), Pair(Const("dog"), NIL)) in walked

    def test_fixed_append_answer(self):
        _, result = run_all(APPEND_FIXED, INTERLEAVING)
        assert result.halt == HALT_TERMINAL
        assert reified(result.program) == ["(cat)"]


class TestLocate:
    def test_initial_query_is_subst_fresh(self):
        low = lowered(SAME_CAT)
        redex = locate_redex(low.program, INTERLEAVING)
        assert redex is not None
        assert redex.path == ()
        assert redex.rule is Rule.SUBST_FRESH

    def test_delay_at_stream_tail(self):
        low = lowered(SAME_CAT)
        program = low.program
        for _ in range(2):  # SubstFresh then Delay
            _, program, _ = step(program, INTERLEAVING)
        assert isinstance(program.tree, Delay)
        redex = locate_redex(program, INTERLEAVING)
        assert redex.rule is Rule.INVOKE_DELAY

    def test_terminal_answer_leaf(self):
        low, result = run_all(SAME_CAT, INTERLEAVING)
        assert locate_redex(result.program, INTERLEAVING) is None

    def test_focus_path_selects_active_spine(self):
        low, result = run_all(PETS, INTERLEAVING, budget=19)
        redex = locate_redex(result.program, INTERLEAVING)
        assert redex is not None
        assert all(sel in ("plus_tail", "active_left", "active_right", "conj_tree")
                   for sel in redex.path)


def leaf(goal, counter=1, uid=0):
    return Leaf(goal, State(EMPTY_SUBST, counter, EMPTY_TRAIL, uid))


def top_leaf(uid=0):
    return leaf(TOP, uid=uid)


def prog(tree, env=None):
    return Program(env or {}, tree, 100, (0,))


class TestRuleApplications:
    def test_distr_disj_mints_one_state_uid(self):
        from mkstepper.goals import Disj

        g = Disj(UnifyGoal(Var(0), Const("a"), 1), UnifyGoal(Var(0), Const("b"), 2), 3)
        p = prog(leaf(g, uid=7))
        rule, p2, events = step(p, INTERLEAVING)
        assert rule is Rule.DISTR_DISJ
        assert isinstance(p2.tree, DisjL)
        assert p2.tree.left.state.uid == 7
        assert p2.tree.right.state.uid == 100
        assert p2.uid_counter == 101
        assert [m.uid for m in events.minted_states] == [100]
        assert events.minted_states[0].parent == 7

    def test_unify_succ_appends_walked_trail(self):
        g = UnifyGoal(Var(0), Const("cat"), 42)
        p = prog(leaf(g))
        rule, p2, events = step(p, INTERLEAVING)
        assert rule is Rule.UNIFY_SUCC
        entry = p2.tree.state.trail.entries()[-1]
        assert (entry.left, entry.right, entry.goal_uid) == (Var(0), Const("cat"), 42)
        assert events.trail_entries[0].entry == entry

    def test_unify_fail_prunes_to_empty(self):
        g = UnifyGoal(Const("a"), Const("b"), 1)
        rule, p2, _ = step(prog(leaf(g)), INTERLEAVING)
        assert rule is Rule.UNIFY_FAIL
        assert p2.tree is EMPTY

    def test_subst_fresh_allocates_consecutive_indices(self):
        from mkstepper.goals import Fresh
        from mkstepper.terms import SVar

        g = Fresh(("x", "y"), UnifyGoal(SVar("x"), SVar("y"), 1), 2)
        p = prog(Leaf(g, State(EMPTY_SUBST, 5, EMPTY_TRAIL, 0)))
        rule, p2, _ = step(p, INTERLEAVING)
        assert rule is Rule.SUBST_FRESH
        assert p2.tree.state.counter == 7
        assert p2.tree.goal == UnifyGoal(Var(5), Var(6), 1)

    def test_succ_conj(self):
        g = UnifyGoal(Var(0), Const("a"), 1)
        p = prog(ConjG(top_leaf(), g))
        rule, p2, _ = step(p, INTERLEAVING)
        assert rule is Rule.SUCC_CONJ
        assert p2.tree == Leaf(g, top_leaf().state)

    def test_prunes(self):
        g = UnifyGoal(Var(0), Const("a"), 1)
        survivor = leaf(g)
        for tree, rule, expected in [
            (ConjG(EMPTY, g), Rule.PRUNE_CONJ, EMPTY),
            (DisjL(EMPTY, survivor), Rule.PRUNE_LEFT, survivor),
            (DisjR(survivor, EMPTY), Rule.PRUNE_RIGHT, survivor),
        ]:
            got_rule, p2, _ = step(prog(tree), INTERLEAVING)
            assert got_rule is rule
            assert p2.tree == expected

    def test_ans_conj_distributes_goal(self):
        g = UnifyGoal(Var(0), Const("a"), 1)
        rest = leaf(UnifyGoal(Var(0), Const("b"), 2))
        rule, p2, _ = step(prog(ConjG(DisjL(top_leaf(), rest), g)), INTERLEAVING)
        assert rule is Rule.LEFT_ANS_CONJ
        assert p2.tree == DisjL(ConjG(top_leaf(), g), ConjG(rest, g))
        rule, p2, _ = step(prog(ConjG(DisjR(rest, top_leaf()), g)), INTERLEAVING)
        assert rule is Rule.RIGHT_ANS_CONJ
        assert p2.tree == DisjR(ConjG(rest, g), ConjG(top_leaf(), g))

    def test_assoc_rotations(self):
        s1 = leaf(UnifyGoal(Var(0), Const("a"), 1), uid=1)
        s2 = leaf(UnifyGoal(Var(0), Const("b"), 2), uid=2)
        ans = top_leaf(uid=3)
        cases = [
            (DisjR(s1, DisjL(ans, s2)), Rule.ASSOC_RIGHT_LEFT, DisjL(ans, DisjR(s1, s2))),
            (DisjR(s2, DisjR(s1, ans)), Rule.ASSOC_RIGHT_RIGHT, DisjR(DisjR(s2, s1), ans)),
            (DisjL(DisjL(ans, s1), s2), Rule.ASSOC_LEFT_LEFT, DisjL(ans, DisjL(s1, s2))),
            (DisjL(DisjR(s1, ans), s2), Rule.ASSOC_LEFT_RIGHT, DisjR(DisjL(s1, s2), ans)),
        ]
        for tree, rule, expected in cases:
            # embed under a conjunction so promotion cannot fire instead
            got_rule, p2, _ = step(prog(ConjG(tree, UnifyGoal(Var(0), Const("c"), 9))),
                                   INTERLEAVING)
            assert got_rule is rule
            assert p2.tree.tree == expected

    def test_delay_bubbling_flips_arrows(self):
        s1 = leaf(UnifyGoal(Var(0), Const("a"), 1), uid=1)
        s2 = leaf(UnifyGoal(Var(0), Const("b"), 2), uid=2)
        inner = leaf(UnifyGoal(Var(0), Const("c"), 3), uid=3)
        g = UnifyGoal(Var(0), Const("d"), 4)
        cases = [
            (DisjL(Delay(s1), s2), Rule.DELAY_LEFT, Delay(DisjR(s1, s2))),
            (DisjR(s1, Delay(s2)), Rule.DELAY_RIGHT, Delay(DisjL(s1, s2))),
            (ConjG(Delay(inner), g), Rule.DELAY_CONJ, Delay(ConjG(inner, g))),
        ]
        for tree, rule, expected in cases:
            got_rule, p2, _ = step(prog(ConjG(tree, g)), INTERLEAVING)
            assert got_rule is rule
            assert p2.tree.tree == expected

    def test_promotions_only_at_stream_tail(self):
        s = leaf(UnifyGoal(Var(0), Const("a"), 1), uid=1)
        rule, p2, _ = step(prog(DisjL(top_leaf(), s)), INTERLEAVING)
        assert rule is Rule.PROMOTE_LEFT
        assert p2.tree == Plus(top_leaf(), s)
        rule, p2, _ = step(prog(DisjR(s, top_leaf())), INTERLEAVING)
        assert rule is Rule.PROMOTE_RIGHT
        assert p2.tree == Plus(top_leaf(), s)
        # under a plus prefix the tail still promotes
        rule, p2, _ = step(prog(Plus(top_leaf(uid=9), DisjL(top_leaf(), s))), INTERLEAVING)
        assert rule is Rule.PROMOTE_LEFT

    def test_expand_replaces_delay_machinery_under_dfs(self):
        low = lowered(SAME_CAT)
        result = run_bounded(low.program, DFS, 100)
        assert names(result.trace) == ["SubstFresh", "Expand", "UnifySucc"]
        assert reified(result.program) == ["cat"]

    def test_step_on_terminal_returns_none(self):
        assert step(prog(top_leaf()), INTERLEAVING) is None
        assert step(prog(EMPTY), INTERLEAVING) is None

    def test_env_unchanged_by_every_step(self):
        low = lowered(PETS)
        program = low.program
        env = program.env
        while True:
            result = step(program, INTERLEAVING)
            if result is None:
                break
            _, program, _ = result
            assert program.env is env


class TestAnswers:
    def test_initial_program_has_no_answers(self):
        low = lowered(PETS)
        assert answers(low.program) == ()

    def test_promoted_plus_terminal_tail(self):
        _, result = run_all(TWO_PETS, INTERLEAVING)
        got = reified(result.program)
        assert got == ["cat", "dog"]

    def test_answer_states_in_stream_order(self):
        _, result = run_all(PETS, INTERLEAVING)
        states = answers(result.program)
        assert len(states) == 4
        assert len({s.uid for s in states}) == 4


class TestTerminality:
    def test_empty_is_terminal(self):
        assert is_terminal(prog(EMPTY))

    def test_plus_with_empty_tail_is_terminal(self):
        assert is_terminal(prog(Plus(top_leaf(), EMPTY)))

    def test_intermediate_states_are_not_terminal(self):
        low = lowered(SAME_CAT)
        program = low.program
        for _ in range(5):
            assert not is_terminal(program)
            _, program, _ = step(program, INTERLEAVING)
        assert is_terminal(program)


class TestRunBounded:
    def test_terminates_within_budget(self):
        _, result = run_all(SAME_CAT, INTERLEAVING, budget=100)
        assert result.halt == HALT_TERMINAL
        assert len(result.trace) == 5

    def test_zero_budget(self):
        low = lowered(SAME_CAT)
        result = run_bounded(low.program, INTERLEAVING, 0)
        assert result.halt == HALT_BUDGET
        assert result.trace == ()

    def test_divergent_program_never_terminal(self):
        low = lowered(APPEND_REC_FIRST)
        result = run_bounded(low.program, INTERLEAVING, 3000)
        assert result.halt == HALT_BUDGET
        result = run_bounded(low.program, INTERLEAVING, 3000, max_answers=2)
        assert result.halt == HALT_ANSWERS
        assert len(answers(result.program)) >= 2

    def test_answer_quota(self):
        low = lowered(PETS)
        result = run_bounded(low.program, INTERLEAVING, 10_000, max_answers=1)
        assert result.halt == HALT_ANSWERS
        assert reified(result.program) == ["fish"]


class TestWellFormedness:
    def test_holds_along_reference_run(self):
        low = lowered(PETS)
        uids = low.source_map.goal_uids()
        program = low.program
        while True:
            assert well_formed(program, uids) == ()
            result = step(program, INTERLEAVING)
            if result is None:
                break
            _, program, _ = result

    def test_rejects_plus_off_spine(self):
        bad = ConjG(Plus(top_leaf(), EMPTY), UnifyGoal(Var(0), Const("a"), 1))
        assert well_formed(prog(bad), frozenset({1})) != ()

    def test_rejects_go_around_non_call(self):
        bad = Go(top_leaf())
        assert well_formed(prog(bad), frozenset()) != ()

    def test_rejects_nested_delay(self):
        bad = Delay(Delay(top_leaf()))
        assert well_formed(prog(bad), frozenset()) != ()

    def test_rejects_out_of_range_variable(self):
        bad = leaf(UnifyGoal(Var(5), Const("a"), 1), counter=1)
        assert well_formed(prog(bad), frozenset({1})) != ()

    def test_rejects_unknown_goal_uid(self):
        ok = leaf(UnifyGoal(Var(0), Const("a"), 77))
        assert well_formed(prog(ok), frozenset()) != ()
        assert well_formed(prog(ok), frozenset({77})) == ()

    def test_delay_never_nests_along_runs(self):
        def no_nested_delay(node):
            if isinstance(node, Delay):
                assert not isinstance(node.child, Delay)
                no_nested_delay(node.child)
            elif isinstance(node, (DisjL, DisjR, Plus)):
                no_nested_delay(node.left)
                no_nested_delay(node.right)
            elif isinstance(node, ConjG):
                no_nested_delay(node.tree)
            elif isinstance(node, Go):
                no_nested_delay(node.child)

        for source in (PETS, APPEND_BROKEN, APPEND_FIXED):
            low = lowered(source)
            program = low.program
            while True:
                no_nested_delay(program.tree)
                result = step(program, INTERLEAVING)
                if result is None:
                    break
                _, program, _ = result


class TestStuckDetection:
    def test_stuck_leaf_is_loud(self):
        # a relation-call leaf with no applicable rule in a gutted rule set
        from mkstepper.engine import RuleSet

        gutted = RuleSet("gutted", frozenset())
        call = leaf(Call("f", (), 1))
        with pytest.raises(StuckNonTerminalError):
            locate_redex(prog(call), gutted)

    def test_pretty_printer_uses_engine_notation(self):
        low = lowered(SAME_CAT)
        program = low.program
        _, program, _ = step(program, INTERLEAVING)
        _, program, _ = step(program, INTERLEAVING)
        text = pretty(program.tree)
        assert "delay" in text and "go" in text
        _, result = run_all(SAME_CAT, INTERLEAVING)
        assert pretty(result.program.tree) == "(⊤ ((0 ↦ cat), 1))"
