from collections import Counter

from conftest import APPEND_FIXED, APPEND_REC_FIRST, PETS, lowered
from mkstepper.oracle import oracle_answers


def test_reference_program_multiset():
    low = lowered(PETS)
    result = oracle_answers(low.program)
    assert not result.exhausted
    assert result.answers == Counter({"fish": 1, "turtle": 1, "dog": 1, "cat": 1})


def test_failing_unification_yields_empty():
    low = lowered("(run* (q) (== 'a 'b))")
    result = oracle_answers(low.program)
    assert not result.exhausted
    assert result.answers == Counter()


def test_fixed_append_single_answer():
    # by hand: (dog) ++ q = (dog cat) forces q = (cat)
    low = lowered(APPEND_FIXED)
    result = oracle_answers(low.program)
    assert not result.exhausted
    assert result.answers == Counter({"(cat)": 1})


def test_depth_bound_reported_distinctly():
    low = lowered(APPEND_REC_FIRST)
    result = oracle_answers(low.program, depth_bound=6, max_answers=50)
    assert result.exhausted

    finite = lowered("(run* (q) (== q 'a))")
    ok = oracle_answers(finite.program, depth_bound=1)
    assert not ok.exhausted and ok.answers == Counter({"a": 1})


def test_duplicate_answers_counted_with_multiplicity():
    low = lowered("(run* (q) (conde [(== q 'a)] [(== q 'a)]))")
    result = oracle_answers(low.program)
    assert result.answers == Counter({"a": 2})
