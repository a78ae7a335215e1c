import pytest

from dgbrauer.classification import make_template
from dgbrauer.dg import (
    brute_force_dg_division,
    cycles,
    dg_ideal,
    dg_structure_report,
    dichotomy,
    homology,
    validate_differential,
    zero_differential,
)
from dgbrauer.fixtures import acyclic_matrix, dual_numbers, planted_product, quaternions
from dgbrauer.graded import GradedPresentation, ValidationError, WindowError, validate_presentation
from dgbrauer.scalars import GF, QQ


def _unit_rows(names):
    rows = {}
    for b in names:
        rows[("1", b)] = {(b, 0): 1}
        rows[(b, "1")] = {(b, 0): 1}
    return rows


def test_differential_must_raise_degree():
    A = dual_numbers(QQ, -1)
    validate_differential(A, {"x": A.one()})
    with pytest.raises(ValidationError) as e:
        validate_differential(A, {"x": A.gen("x")})
    assert e.value.kind == "degree"


def test_unit_must_be_a_cycle():
    A = dual_numbers(QQ, 1)
    with pytest.raises(ValidationError):
        validate_differential(A, {"1": A.gen("x")})


def test_leibniz_failure_is_named():
    mul = _unit_rows(["1", "a", "b"])
    mul[("b", "b")] = {("b", 0): 1}
    A = validate_presentation(GradedPresentation(QQ, [("1", 0), ("a", -1), ("b", 0)], mul))
    with pytest.raises(ValidationError) as e:
        validate_differential(A, {"a": A.one()})
    assert e.value.kind == "leibniz"


def test_square_zero_failure():
    mul = _unit_rows(["1", "x", "y", "z"])
    A = validate_presentation(GradedPresentation(QQ, [("1", 0), ("x", -2), ("y", -1), ("z", 0)], mul))
    with pytest.raises(ValidationError) as e:
        validate_differential(A, {"x": A.gen("y"), "y": A.gen("z")})
    assert e.value.kind == "d-squared"


def test_zero_differential_homology_equals_algebra():
    Ad = make_template("2", QQ, 2)
    rep = homology(Ad, (-4, 4))
    assert rep.dims() == {n: (1 if n % 2 == 0 else 0) for n in range(-4, 5)}
    assert not rep.acyclic


def test_homology_window_guard():
    with pytest.raises(WindowError):
        homology(make_template("2", QQ, 4), (0, 4))


@pytest.mark.parametrize("case,t", [("3", None), ("4a", None), ("4b", 2), ("4b", -2), ("5a", None), ("5b", -1), ("5b", 3)])
def test_acyclic_templates(case, t):
    rep = homology(make_template(case, GF(3), t), (-8, 8))
    assert rep.acyclic


def test_cycles_of_case_three_are_laurent_in_u():
    Z = cycles(make_template("3", GF(5)))
    assert Z.algebra.names == ["1"] and Z.algebra.unit_degree == -2


def test_cycle_restriction_rejects_non_cycles():
    Ad = make_template("3", GF(5))
    Z = cycles(Ad)
    with pytest.raises(ValueError):
        Z.restrict(Ad.algebra.gen("T"))


def test_planted_product_has_proper_dg_ideal():
    P = planted_product(GF(3))
    I = dg_ideal(P, [P.algebra.gen("e1")])
    assert I.dims() == {-1: 1, 0: 1} and not I.is_whole()
    assert brute_force_dg_division(P).value is False
    assert dg_structure_report(P)["dg_division"].value is False


def test_acyclic_matrix_center_and_division():
    X = acyclic_matrix(QQ)
    assert homology(X.carrier).acyclic
    rep = dg_structure_report(X.carrier, run_oracle=False)
    assert rep["dg_division"].value is False
    assert repr(rep["dg_division"].witness) == "E[e0,e1]"


def test_dichotomy_labels():
    assert dichotomy(make_template("2", QQ, 2)) == "zero_differential"
    assert dichotomy(make_template("4b", QQ, 2)) == "acyclic"
    assert dichotomy(zero_differential(quaternions(QQ))) == "zero_differential"


def test_oracle_and_criterion_agree_on_case_three():
    rep = dg_structure_report(make_template("3", GF(3)))
    assert rep["dg_division"].value is True
    assert rep["oracle_agrees"] is True


def test_oracle_declines_large_inputs():
    assert brute_force_dg_division(zero_differential(quaternions(QQ))).value is None
