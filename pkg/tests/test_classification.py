import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgbrauer.classification import ClassificationError, TemplateParams, classify_dg_field, make_template, template_grid
from dgbrauer.dg import homology, zero_differential
from dgbrauer.fixtures import dual_numbers, quaternions
from dgbrauer.graded import GradedPresentation, PreconditionError, validate_presentation
from dgbrauer.scalars import GF, QQ

GRID = template_grid([QQ, GF(2), GF(3), GF(5)])


@pytest.mark.parametrize("case,F,t", GRID, ids=[f"{c}-{F.label}-{t}" for c, F, t in GRID])
def test_template_round_trip(case, F, t):
    assert classify_dg_field(make_template(case, F, t)).case == case


def test_invalid_template_parameters():
    with pytest.raises(ValueError):
        TemplateParams("4b", QQ, 3).normalized()
    with pytest.raises(ValueError):
        TemplateParams("5b", QQ, 2).normalized()
    with pytest.raises(ValueError):
        TemplateParams("3", QQ, -3).normalized()
    with pytest.raises(ValueError):
        TemplateParams("6", QQ, None).normalized()


def test_case_three_summary():
    assert classify_dg_field(make_template("3", GF(5))).summary() == "case 3, y = T"


def test_case_two_reports_generator_degree():
    r = classify_dg_field(make_template("2", QQ, -1))
    assert r.summary() == "case 2, T = T in degree -1"
    assert r.flags["commutative"] and not r.flags["graded_commutative"]


def test_finite_extension_field_is_case_one():
    mul = {("1", "1"): {("1", 0): 1}, ("1", "i"): {("i", 0): 1}, ("i", "1"): {("i", 0): 1}, ("i", "i"): {("1", 0): 2}}
    F9 = validate_presentation(GradedPresentation(GF(3), [("1", 0), ("i", 0)], mul))
    assert classify_dg_field(zero_differential(F9)).case == "1"


def test_non_division_input_rejected():
    with pytest.raises(PreconditionError, match="not a dg-division algebra"):
        classify_dg_field(zero_differential(dual_numbers(QQ)))


def test_noncommutative_input_rejected():
    with pytest.raises(PreconditionError, match="not commutative"):
        classify_dg_field(zero_differential(quaternions(QQ)))


def test_characteristic_two_distinguishes_5a_and_5b():
    assert classify_dg_field(make_template("5a", GF(2))).case == "5a"
    assert classify_dg_field(make_template("5b", GF(2), -1)).case == "5b"


def test_classification_error_is_value_error():
    assert issubclass(ClassificationError, ValueError)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["3", "4a", "5a"]), st.sampled_from([QQ, GF(3), GF(7)]))
def test_acyclic_cases_have_no_homology(case, F):
    assert homology(make_template(case, F), (-8, 8)).acyclic
