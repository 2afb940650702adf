import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksatlab.core import (
    Formula,
    PartialAssignment,
    Status,
    as_assignment,
    check_formula,
    clause_status,
    eval_formula,
    make_clause,
    satisfied_clauses,
    validate_formula,
)


def pa(*vals):
    return PartialAssignment(len(vals), vals)


class TestClauseStatus:
    def test_unit_when_one_literal_left(self):
        st_ = clause_status((1, 2), pa(0, None))
        assert st_.status is Status.UNIT and st_.literal == 2

    def test_satisfied(self):
        assert clause_status((1, 2), pa(1, None)).status is Status.SATISFIED

    def test_falsified(self):
        assert clause_status((1, 2), pa(0, 0)).status is Status.FALSIFIED

    def test_unresolved(self):
        assert clause_status((1, -2, 3), pa(0, None, None)).status is Status.UNRESOLVED

    def test_negative_unit_literal(self):
        st_ = clause_status((1, -3), pa(0, 1, None))
        assert st_ == (Status.UNIT, -3)

    def test_accepts_plain_total_array(self):
        assert clause_status((-1,), np.array([0], dtype=np.int8)).status is Status.SATISFIED


class TestEval:
    def test_single_clause(self):
        assert eval_formula(Formula.from_clauses(2, [(1, 2)]), [1, 0])

    @pytest.mark.parametrize("a", [[0], [1]])
    def test_contradictory_units(self, a):
        assert not eval_formula(Formula.from_clauses(1, [(1,), (-1,)]), a)

    @pytest.mark.parametrize("a", [[0, 0, 0], [1, 0, 1]])
    def test_empty_formula_is_true(self, a):
        assert eval_formula(Formula.from_clauses(3, [], k=3), a)

    def test_partial_assignment_rejected(self):
        with pytest.raises(ValueError):
            eval_formula(Formula.from_clauses(2, [(1, 2)]), pa(1, None))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            eval_formula(Formula.from_clauses(2, [(1, 2)]), [1])

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            as_assignment([0, 2])


class TestValidate:
    def test_well_formed(self):
        assert validate_formula(Formula.from_clauses(3, [(1, -2, 3), (-1, 2, 3)], k=3)) is None

    def test_repeated_variable(self):
        v = validate_formula(Formula.from_clauses(2, [(1, -1)]))
        assert v.reason == "repeated variable" and v.clause_index == 0

    def test_wrong_width(self):
        v = validate_formula(Formula.from_clauses(3, [(1, 2, 3), (1, 2)], k=3))
        assert v.reason == "wrong width" and v.clause_index == 1

    def test_out_of_range(self):
        assert validate_formula(Formula.from_clauses(2, [(1, 3)])).reason == "variable out of range"

    def test_unsorted_literals(self):
        F = Formula(3, np.array([[2, 1]], dtype=np.int32))
        assert validate_formula(F).reason == "literals not sorted by variable"
        with pytest.raises(ValueError, match="malformed"):
            check_formula(F)

    def test_mixed_widths_allowed_without_k(self):
        assert validate_formula(Formula.from_clauses(2, [(1,), (-1, 2)])) is None


class TestFormula:
    def test_from_clauses_sorts(self):
        F = Formula.from_clauses(3, [(3, -1)])
        assert F.clauses == [(-1, 3)]

    def test_make_clause(self):
        assert make_clause([-3, 2, 1]) == (1, 2, -3)

    def test_equality_and_hash(self):
        a = Formula.from_clauses(3, [(1, 2), (-2, 3)], k=2)
        b = Formula.from_clauses(3, [(2, 1), (3, -2)], k=2)
        assert a == b and hash(a) == hash(b)
        assert a != Formula.from_clauses(3, [(1, 2), (2, 3)], k=2)

    def test_literals_are_read_only(self):
        F = Formula.from_clauses(2, [(1, 2)])
        with pytest.raises(ValueError):
            F.lits[0, 0] = 5

    def test_occurrence_lists(self):
        F = Formula.from_clauses(3, [(1, -2), (-1, 3)])
        ptr, owner, lit = F.occurrences
        occ_x1 = sorted(zip(owner[ptr[0]:ptr[1]], lit[ptr[0]:ptr[1]]))
        assert occ_x1 == [(0, 1), (1, -1)]

    def test_masks(self):
        pos, neg = Formula.from_clauses(3, [(1, -3), (2,)]).masks
        assert list(pos) == [0b001, 0b010] and list(neg) == [0b100, 0]


class TestPartialAssignment:
    def test_set_once(self):
        p = PartialAssignment(2)
        p.set(1, True)
        assert p[1] == 1 and p[2] is None and not p.is_total()
        with pytest.raises(ValueError):
            p.set(1, False)

    def test_copy_is_independent(self):
        p = PartialAssignment(2)
        q = p.copy()
        q.set(2, 0)
        assert not p.is_set(2) and q.is_set(2)

    def test_to_assignment(self):
        assert list(pa(1, 0).to_assignment()) == [1, 0]


# -- properties ---------------------------------------------------------------

@st.composite
def formulas(draw, max_n=6, max_m=8):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    clauses = []
    for _ in range(m):
        vars_ = draw(st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True))
        signs = draw(st.lists(st.booleans(), min_size=len(vars_), max_size=len(vars_)))
        clauses.append(tuple(v if s else -v for v, s in zip(vars_, signs)))
    return Formula.from_clauses(n, clauses)


def total_assignments(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_total_assignment_resolves_every_clause(data):
    F = data.draw(formulas())
    a = np.array(data.draw(total_assignments(F.n)), dtype=np.int8)
    for c in F.clauses:
        assert clause_status(c, a).status in (Status.SATISFIED, Status.FALSIFIED)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_eval_is_conjunction_of_clause_status(data):
    F = data.draw(formulas())
    a = np.array(data.draw(total_assignments(F.n)), dtype=np.uint8)
    expected = all(clause_status(c, a.astype(np.int8)).status is Status.SATISFIED for c in F.clauses)
    assert eval_formula(F, a) == expected
    assert list(satisfied_clauses(F, a)) == [
        clause_status(c, a.astype(np.int8)).status is Status.SATISFIED for c in F.clauses
    ]


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_clause_status_is_monotone_under_extension(data):
    F = data.draw(formulas())
    order = data.draw(st.permutations(range(1, F.n + 1)))
    values = data.draw(total_assignments(F.n))
    p = PartialAssignment(F.n)
    settled = {}
    for var in order:
        p.set(var, values[var - 1])
        for idx, c in enumerate(F.clauses):
            s = clause_status(c, p).status
            if idx in settled:
                assert s is settled[idx]
            elif s in (Status.SATISFIED, Status.FALSIFIED):
                settled[idx] = s
