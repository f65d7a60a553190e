import pytest

PETS = """\
(defrel (same x y) (== x y))

(run* (q)
  (conde
    [(conde
       [(same q 'turtle)]
       [(same q 'cat)]
       [(== q 'dog)])]
    [(same q 'fish)]))
"""

SAME_CAT = """\
(defrel (same x y) (== x y))

(run* (p) (same p 'cat))
"""

TWO_PETS = """\
(defrel (same x y) (== x y))

(run* (q)
  (conde
    [(same q 'cat)]
    [(same q 'dog)]))
"""

APPEND_BROKEN = """\
(defrel (appendoh l s ls)
  (conde
   ((== '() l) (== s ls))
   ((fresh (a d res)
       (== `(,a . ,d) l)
       (== `(,a . ,res) ls)
       (appendoh d s ls)))))

(run* (q) (appendoh '(dog) q '(dog cat)))
"""

APPEND_FIXED = """\
(defrel (appendoh l s ls)
  (conde
   ((== '() l) (== s ls))
   ((fresh (a d res)
       (== `(,a . ,d) l)
       (== `(,a . ,res) ls)
       (appendoh d s res)))))

(run* (q) (appendoh '(dog) q '(dog cat)))
"""

APPEND_REC_FIRST = """\
(defrel (appendoh l s ls)
  (conde
   ((== '() l) (== s ls))
   ((fresh (a d res)
       (appendoh d s res)
       (== `(,a . ,d) l)
       (== `(,a . ,res) ls)))))

(run* (q) (fresh (s ls) (appendoh q s ls)))
"""


@pytest.fixture
def pets_source():
    return PETS


@pytest.fixture
def same_cat_source():
    return SAME_CAT


def lowered(source):
    from mkstepper import analyze, lower

    program, diags = analyze(source)
    assert program is not None, diags
    return lower(program)
