import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgbrauer.classification import make_template
from dgbrauer.fixtures import dual_numbers, quaternions
from dgbrauer.graded import (
    GradedLinearMap,
    GradedPresentation,
    ValidationError,
    WindowError,
    graded_center,
    graded_division,
    graded_ideal,
    graded_simple,
    opposite,
    relabeled_equal,
    same_table,
    structure_report,
    validate_presentation,
)
from dgbrauer.scalars import GF, QQ

TEMPLATE_PARAMS = [("1", None), ("2", 2), ("2", -1), ("3", None), ("4a", None), ("4b", 2), ("5a", None), ("5b", -1), ("5b", 3)]


def _unit_rows(names):
    rows = {}
    for b in names:
        rows[("1", b)] = {(b, 0): 1}
        rows[(b, "1")] = {(b, 0): 1}
    return rows


def test_quaternion_relations():
    H = quaternions(QQ)
    i, j, k = H.gen("i"), H.gen("j"), H.gen("k")
    assert i * j == k and j * i == -k
    assert i * i == -H.one()
    assert (i * j) * k == i * (j * k)


def test_degree_violation_is_reported():
    mul = _unit_rows(["1", "T"])
    mul[("T", "T")] = {("1", 0): 1}
    with pytest.raises(ValidationError) as e:
        validate_presentation(GradedPresentation(QQ, [("1", 0), ("T", -1)], mul))
    assert e.value.kind == "degree"
    assert "T*T" in str(e.value)


def test_associativity_violation_is_reported():
    mul = _unit_rows(["1", "a", "b"])
    mul[("a", "a")] = {("b", 0): 1}
    mul[("a", "b")] = {("1", 0): 1}
    mul[("b", "a")] = {("a", 0): 1}
    with pytest.raises(ValidationError) as e:
        validate_presentation(GradedPresentation(QQ, [("1", 0), ("a", 0), ("b", 0)], mul))
    assert e.value.kind == "associativity"


def test_unit_degree_must_be_even():
    with pytest.raises(ValidationError):
        validate_presentation(GradedPresentation(QQ, [("1", 0)], _unit_rows(["1"]), unit_degree=3))


def test_laurent_components_are_periodic():
    A = make_template("4b", QQ, 2).algebra
    assert A.unit_degree == 4
    assert [len(A.component(n)) for n in range(-5, 6)] == [1] * 11


def test_window_smaller_than_period_rejected():
    A = make_template("2", QQ, 4).algebra
    with pytest.raises(WindowError):
        A.check_window((0, 3))


def test_graded_center_dimensions():
    assert graded_center(quaternions(QQ)).dims() == {0: 1}
    assert graded_center(dual_numbers(QQ, 1)).dims() == {0: 1, 1: 1}


def test_opposite_of_quaternions_differs_but_is_involutive():
    H = quaternions(QQ)
    assert not same_table(opposite(H), H)
    assert same_table(opposite(opposite(H)), H)


def test_opposite_follows_koszul_rule():
    A = make_template("5a", GF(5)).algebra
    O = opposite(A)
    F = A.field
    for a in A.names:
        for b in A.names:
            expected = (A.gen(a) * A.gen(b)) * F.sign(A.deg[a] * A.deg[b])
            assert (O.gen(b) * O.gen(a)).terms == expected.terms


def test_division_verdicts():
    assert graded_division(quaternions(QQ)).value is True
    assert graded_division(quaternions(QQ)).method == "anisotropic norm certificate"
    split = graded_division(quaternions(GF(3)))
    assert split.value is False and split.witness is not None
    assert quaternions(GF(3)).inverse(split.witness) is None
    assert graded_division(quaternions(QQ, 1, 1)).value is False
    d = graded_division(dual_numbers(QQ))
    assert d.value is False and repr(d.witness) == "x"


def test_simplicity_verdicts():
    assert graded_simple(quaternions(GF(3))).value is True
    assert graded_simple(dual_numbers(QQ)).value is False


def test_principal_ideal_of_nilpotent():
    A = dual_numbers(QQ)
    I = graded_ideal(A, [A.gen("x")])
    assert I.dims() == {0: 1} and not I.is_whole()


def test_structure_report_flags():
    r = structure_report(make_template("3", GF(5)).algebra)
    assert r["commutative"] and not r["graded_commutative"]
    assert r["graded_field"].value is True


def test_relabeled_equal():
    A = dual_numbers(QQ)
    mul = _unit_rows(["e", "y"])
    mul[("e", "e")] = {("e", 0): 1}
    for k in list(mul):
        if "1" in k:
            del mul[k]
    mul.update({("e", "y"): {("y", 0): 1}, ("y", "e"): {("y", 0): 1}})
    B = validate_presentation(GradedPresentation(QQ, [("e", 0), ("y", 0)], mul, one="e"))
    assert not same_table(A, B)
    assert relabeled_equal(A, B)


def test_linear_map_rank_table():
    A = dual_numbers(QQ)
    f = GradedLinearMap(A, A, 0, {"1": A.one(), "x": A.zero()})
    assert f.rank_table() == {0: {"source": 2, "target": 2, "rank": 1}}
    assert f.first_defect() == (0, "not surjective")
    assert not f.is_bijective()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(TEMPLATE_PARAMS), st.sampled_from([QQ, GF(2), GF(3), GF(5)]))
def test_opposite_is_an_involution(params, F):
    A = make_template(params[0], F, params[1]).algebra
    assert same_table(opposite(opposite(A)), A)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([p for p in TEMPLATE_PARAMS if p[0] not in ("1", "4a")]), st.sampled_from([QQ, GF(3)]), st.data())
def test_products_commute_with_unit_shift(params, F, data):
    A = make_template(params[0], F, params[1]).algebra
    a, b = data.draw(st.sampled_from(A.names)), data.draw(st.sampled_from(A.names))
    k, m = data.draw(st.integers(-3, 3)), data.draw(st.integers(-3, 3))
    x, y = A.gen(a, k), A.gen(b, m)
    assert x * y == (A.gen(a) * A.gen(b)).shift(k + m)
    n = x.degree if not x.is_zero() else 0
    assert len(A.component(n)) == len(A.component(n + A.unit_degree))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([QQ, GF(3), GF(5)]), st.data())
def test_quaternion_associativity_on_random_elements(F, data):
    H = quaternions(F)
    coeffs = st.lists(st.integers(-3, 3), min_size=4, max_size=4)
    x, y, z = (H.from_vector([F(c) for c in data.draw(coeffs)], 0) for _ in range(3))
    assert (x * y) * z == x * (y * z)
