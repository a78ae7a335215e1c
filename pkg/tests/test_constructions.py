import pytest

from dgbrauer.classification import make_template
from dgbrauer.constructions import (
    FreeDgModule,
    NotFree,
    agr_decompose,
    cycles_over,
    cycles_tensor_comparison,
    end_over,
    extend_scalars,
    induce_from_cycles,
    mu_map,
    opposite_over,
    over_field,
    over_itself,
    point_algebra,
    tensor_over,
    twisted_poly_quotient,
)
from dgbrauer.dg import homology, zero_differential
from dgbrauer.fixtures import acyclic_matrix, dual_numbers, matrix_algebra, quaternions, scramble
from dgbrauer.graded import PreconditionError, graded_center, same_table
from dgbrauer.scalars import GF, QQ


def test_tensor_koszul_sign_on_odd_generators():
    A = over_field(zero_differential(dual_numbers(QQ, 1)))
    T = tensor_over(A, A)
    td = T.tensor_data
    one, x = A.A.one(), A.A.gen("x")
    lhs = td.pure(one, x) * td.pure(x, one)
    assert lhs == -td.pure(x, x)
    assert td.pure(x, one) * td.pure(one, x) == td.pure(x, x)


def test_quaternion_square_is_central_simple_of_rank_sixteen():
    H = over_field(zero_differential(quaternions(QQ)))
    T = tensor_over(H, H)
    assert T.rank == 16
    assert graded_center(T.A).dims() == {0: 1}


def test_opposite_over_is_involutive():
    H = over_field(zero_differential(quaternions(QQ)))
    assert same_table(opposite_over(opposite_over(H)).A, H.A)


def test_extend_scalars_keeps_rank_and_differential():
    K = make_template("4a", QQ)
    HK = extend_scalars(zero_differential(quaternions(QQ)), K)
    assert HK.rank == 4 and HK.is_free()
    assert homology(HK.carrier).acyclic


def test_free_module_delta_must_square_to_zero():
    K = point_algebra(QQ)
    one, z = K.algebra.one(), K.algebra.zero()
    with pytest.raises(ValueError):
        FreeDgModule(K, [("e0", 0), ("e1", -1), ("e2", -2)], [[z, z, z], [one, z, z], [z, one, z]])


def test_end_of_acyclic_module():
    X = acyclic_matrix(QQ)
    assert X.rank == 4
    assert homology(X.carrier).acyclic
    assert graded_center(X.A).dims() == {-1: 0, 0: 1, 1: 0}


def test_mu_for_quaternions():
    m = mu_map(over_field(zero_differential(quaternions(QQ))))
    assert m.is_iso and m.is_dg_map
    assert m.ranks == {0: {"source": 16, "target": 16, "rank": 16}}


def test_mu_for_graded_matrices():
    m = mu_map(matrix_algebra(GF(3), 2, [0, -1]))
    assert m.is_iso and m.is_dg_map and m.total_rank() == 16


def test_mu_defect_for_dual_numbers():
    m = mu_map(over_field(zero_differential(dual_numbers(QQ))))
    assert not m.is_iso
    assert m.message() == "mu not surjective in degree 0"
    assert m.total_rank() == 2


def test_mu_after_inflation_to_case_4a():
    HK = extend_scalars(zero_differential(quaternions(QQ)), make_template("4a", QQ))
    m = mu_map(HK)
    assert m.ranks == {n: {"source": 16, "target": 16, "rank": 16} for n in (-1, 0)}
    assert m.is_dg_map


@pytest.mark.parametrize("case,t", [("3", None), ("4a", None), ("4b", 2), ("5a", None), ("5b", -1)])
def test_agr_decomposition_verified(case, t):
    dec = agr_decompose(make_template(case, GF(5), t))
    assert dec.verified, dec.checks


def test_agr_requires_acyclic_division():
    with pytest.raises(PreconditionError):
        agr_decompose(make_template("2", QQ, 2))


def test_twisted_quotient_of_laurent_ring():
    R = make_template("2", QQ, -2).algebra
    TQ = twisted_poly_quotient(R, {b: R.zero() for b in R.names}, R.gen("T"))
    assert len(TQ.algebra.names) == 2 * len(R.names)
    T = TQ.algebra.gen(TQ.twisted["1"])
    assert T.degree == -1
    assert T * T == TQ.lift(R.gen("T"))


@pytest.mark.parametrize("case", ["3", "4a"])
def test_cycles_of_tensor_match_tensor_of_cycles(case):
    K = make_template(case, GF(3))
    HK = extend_scalars(zero_differential(quaternions(GF(3))), K)
    r = cycles_tensor_comparison(HK, over_itself(K))
    assert r["bijective"] and r["multiplicative"]


@pytest.mark.parametrize("case", ["3", "4a", "5a"])
def test_alpha_round_trip(case):
    K = make_template(case, GF(3))
    X = extend_scalars(zero_differential(quaternions(GF(3))), K)
    res = induce_from_cycles(cycles_over(X), K, original=X)
    assert res.alpha_is_dg_iso
    assert all(row["rank"] == row["source"] == row["target"] for row in res.alpha.rank_table().values())


def test_scrambled_algebra_stays_free():
    X = scramble(matrix_algebra(GF(3), 2, [0, -1]), seed=1)
    assert X.is_free() and X.rank == 4


def test_non_free_basis_rejected():
    K = point_algebra(QQ)
    A = zero_differential(dual_numbers(QQ))
    from dgbrauer.constructions import OverBase

    X = OverBase(K, A, {"1": A.algebra.one()}, [("1", A.algebra.one())])
    with pytest.raises(NotFree):
        X.check_free()
