"""Small named algebras used by tests, the CLI and the shipped JSON fixtures."""

from __future__ import annotations

import random

from . import linalg
from .constructions import FreeDgModule, OverBase, end_over, extend_scalars, over_field, point_algebra
from .dg import DgAlgebra, validate_differential, zero_differential
from .graded import Element, GradedAlgebra, GradedPresentation, NormCertificate, validate_presentation
from .scalars import Field

__all__ = [
    "quaternions",
    "dual_numbers",
    "matrix_algebra",
    "shifted_end",
    "acyclic_matrix",
    "planted_product",
    "laurent",
    "scramble",
    "over_case",
]


def _with_unit(mul: dict, names) -> dict:
    for b in names:
        mul[("1", b)] = {(b, 0): 1}
        mul[(b, "1")] = {(b, 0): 1}
    return mul


def quaternions(F: Field, a=-1, b=-1) -> GradedAlgebra:
    """(a, b)/F in degree 0; over Q with a, b < 0 it carries a norm certificate."""
    a, b = F(a), F(b)
    ab = F.mul(a, b)
    n = F.neg
    mul = _with_unit({}, ["1", "i", "j", "k"])
    mul.update(
        {
            ("i", "i"): {("1", 0): a},
            ("j", "j"): {("1", 0): b},
            ("k", "k"): {("1", 0): n(ab)},
            ("i", "j"): {("k", 0): 1},
            ("j", "i"): {("k", 0): n(1)},
            ("i", "k"): {("j", 0): a},
            ("k", "i"): {("j", 0): n(a)},
            ("j", "k"): {("i", 0): n(b)},
            ("k", "j"): {("i", 0): b},
        }
    )
    certs = ()
    name = f"({F.format(a)},{F.format(b)})/{F.label}"
    pres = GradedPresentation(F, [("1", 0), ("i", 0), ("j", 0), ("k", 0)], mul, name=name)
    A = validate_presentation(pres)
    if F.characteristic == 0 and a < 0 and b < 0:
        conj = {"1": A.gen("1"), "i": -A.gen("i"), "j": -A.gen("j"), "k": -A.gen("k")}
        pres.certificates = (NormCertificate(conj),)
        A = validate_presentation(pres)
    return A


def dual_numbers(F: Field, degree: int = 0) -> GradedAlgebra:
    """F[x]/(x^2) with |x| = degree."""
    mul = _with_unit({}, ["1", "x"])
    return validate_presentation(GradedPresentation(F, [("1", 0), ("x", degree)], mul, name=f"{F.label}[x]/x^2"))


def shifted_end(base: DgAlgebra, shifts, delta=None) -> OverBase:
    """End over ``base`` of the free module with generators in degrees ``shifts``."""
    K = base.algebra
    gens = [(f"e{i}", s) for i, s in enumerate(shifts)]
    if delta is not None:
        delta = [[K.elem(c) if not isinstance(c, Element) else c for c in col] for col in delta]
    return end_over(FreeDgModule(base, gens, delta))


def matrix_algebra(F: Field, n: int = 2, shifts=None) -> OverBase:
    """M_n(F) (optionally graded by generator shifts) over F."""
    return shifted_end(point_algebra(F), shifts or [0] * n)


def acyclic_matrix(F: Field) -> OverBase:
    """End of F<e0, e1>, |e0| = 0, |e1| = -1, delta(e1) = e0: acyclic with center F."""
    K = point_algebra(F)
    z, o = K.algebra.zero(), K.algebra.one()
    return shifted_end(K, [0, -1], delta=[[z, z], [o, z]])


def planted_product(F: Field) -> DgAlgebra:
    """Two copies of F[Y]/Y^2, d(Y) = 1: acyclic, with the proper dg-ideal of the first factor."""
    names = ["e1", "Y1", "e2", "Y2"]
    mul = {
        ("e1", "e1"): {("e1", 0): 1},
        ("e1", "Y1"): {("Y1", 0): 1},
        ("Y1", "e1"): {("Y1", 0): 1},
        ("e2", "e2"): {("e2", 0): 1},
        ("e2", "Y2"): {("Y2", 0): 1},
        ("Y2", "e2"): {("Y2", 0): 1},
    }
    pres = GradedPresentation(
        F, [("e1", 0), ("Y1", -1), ("e2", 0), ("Y2", -1)], mul, one={("e1", 0): 1, ("e2", 0): 1}, name="planted product"
    )
    A = validate_presentation(pres)
    return validate_differential(A, {"Y1": A.gen("e1"), "Y2": A.gen("e2")})


def laurent(F: Field, t: int) -> DgAlgebra:
    """F[T, T^-1] with |T| = t and zero differential."""
    from .classification import make_template

    return make_template("2", F, t)


def over_case(C, case: str, F: Field) -> OverBase:
    """Scalar extension of a finite-dimensional algebra to a template base."""
    from .classification import make_template

    return extend_scalars(C, make_template(case, F))


def scramble(X: OverBase, seed: int = 0) -> OverBase:
    """Re-present X in a randomly changed core basis (per degree), keeping it isomorphic.

    Used to plant End-algebras whose matrix units are not visible in the table.
    """
    A = X.A
    F = A.field
    rng = random.Random(seed)
    groups: dict = {}
    for b in A.names:
        groups.setdefault(A.deg[b], []).append(b)
    new_of = {}  # new core name -> old element
    for d, names in groups.items():
        m = len(names)
        while True:
            M = [[F(rng.randrange(F.characteristic or 7) - (0 if F.characteristic else 3)) for _ in range(m)] for _ in range(m)]
            if linalg.inverse(F, M) is not None:
                break
        for r, row in enumerate(M):
            new_of[f"b{d}_{r}".replace("-", "m")] = Element(A, {(names[c], 0): row[c] for c in range(m) if row[c] != 0})
    new_names = list(new_of)
    basis = [(n, new_of[n].degree) for n in new_names]
    # express old core elements in the new basis, degree by degree
    back = {}
    for d, names in groups.items():
        news = [n for n in new_names if new_of[n].degree == d]
        M = linalg.transpose([[new_of[n].terms.get((o, 0), F(0)) for o in names] for n in news])
        inv = linalg.inverse(F, M)
        for c, o in enumerate(names):
            back[o] = {(news[r], 0): inv[r][c] for r in range(len(news)) if inv[r][c] != 0}

    def convert(x: Element) -> dict:
        out: dict = {}
        for (o, k), c in x.terms.items():
            for (n, _), v in back[o].items():
                key = (n, k)
                out[key] = F.add(out.get(key, F(0)), F.mul(c, v))
        return {k: v for k, v in out.items() if v != 0}

    mul = {}
    for n1 in new_names:
        for n2 in new_names:
            t = convert(new_of[n1] * new_of[n2])
            if t:
                mul[(n1, n2)] = t
    pres = GradedPresentation(F, basis, mul, one=convert(A.one()), unit_degree=A.unit_degree, name=f"{A.name} (scrambled)")
    B = validate_presentation(pres)
    Bd = validate_differential(B, {n: Element(B, convert(X.carrier.apply(new_of[n]))) for n in new_names})
    nu = {k: Element(B, convert(v)) for k, v in X.nu.items()}
    basis_el = [(lab, Element(B, convert(e))) for lab, e in X.basis]
    Y = OverBase(X.base, Bd, nu, basis_el, name=pres.name)
    Y.check_free()
    return Y
