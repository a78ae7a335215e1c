"""Templates for the dg-field cases and a classifier that recognises them."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .constructions import solve_for_y
from .dg import DgAlgebra, cycles, dg_structure_report, validate_differential
from .graded import Element, GradedAlgebra, GradedPresentation, PreconditionError, structure_report, validate_presentation
from .scalars import Field

__all__ = ["CASES", "TemplateParams", "ClassificationReport", "make_template", "classify_dg_field", "template_grid"]

CASES = ("1", "2", "3", "4a", "4b", "5a", "5b")

NOTE_5B = (
    "case 5b is realised as L[T,T^-1] (x) L[U]/(U^2) with |T| odd and d(U) = 1; "
    "the relation T^2 - U^2 would force T^2 = 0"
)
NOTE_ODD_SIGN = (
    "U and T anticommute (TU = -UT); the Leibniz rule rules out TU = UT for odd T, U with "
    "d(T) = 0, d(U) = 1 outside characteristic 2"
)
NOTE_CASE2_ODD = "commutative, not graded-commutative (|T| odd)"


class ClassificationError(ValueError):
    """Observed structure matches none of the cases."""


@dataclass(frozen=True)
class TemplateParams:
    case: str
    field: Field
    t_degree: int | None = None

    def normalized(self) -> "TemplateParams":
        c = str(self.case)
        if c not in CASES:
            raise ValueError(f"unknown case {self.case!r}; expected one of {', '.join(CASES)}")
        t = self.t_degree
        if c in ("1", "4a"):
            t = None
        elif c in ("3", "5a"):
            if t not in (None, -1):
                raise ValueError(f"case {c} fixes |T| = -1")
            t = -1
        elif c == "2":
            if not t:
                raise ValueError("case 2 needs a nonzero T degree")
        elif c == "4b":
            if not t or t % 2:
                raise ValueError("case 4b needs a nonzero even T degree")
        elif c == "5b":
            if t is None or t % 2 == 0:
                raise ValueError("case 5b needs an odd T degree")
        return TemplateParams(c, self.field, t)


def _pres(F, basis, mul, unit_degree, name):
    table = {}
    for (l, r), out in mul.items():
        table[(l, r)] = {(k if isinstance(k, tuple) else (k, 0)): c for k, c in out.items()}
    return validate_presentation(GradedPresentation(F, basis, table, one="1", unit_degree=unit_degree, name=name))


def _unit_rows(names):
    rows = {}
    for b in names:
        rows[("1", b)] = {b: 1}
        rows[(b, "1")] = {b: 1}
    return rows


def make_template(case, field: Field, t_degree: int | None = None) -> DgAlgebra:
    """Validated dg-algebra for one of the seven template labels."""
    p = TemplateParams(str(case), field, t_degree).normalized()
    F, t = p.field, p.t_degree
    c = p.case
    label = f"case {c} over {F.label}" + (f", |T| = {t}" if t is not None else "")
    if c == "1":
        A = _pres(F, [("1", 0)], {("1", "1"): {"1": 1}}, None, label)
        return validate_differential(A, {})
    if c in ("2", "3"):
        mul = _unit_rows(["1", "T"])
        mul[("T", "T")] = {("1", 1): 1}
        A = _pres(F, [("1", 0), ("T", t)], mul, 2 * t, label)
        return validate_differential(A, {"T": {"1": 1}} if c == "3" else {})
    if c == "4a":
        mul = _unit_rows(["1", "Y"])
        A = _pres(F, [("1", 0), ("Y", -1)], mul, None, label)
        return validate_differential(A, {"Y": {"1": 1}})
    if c == "4b":
        names = ["1", "T", "Y", "TY"]
        mul = _unit_rows(names)
        mul.update(
            {
                ("T", "T"): {("1", 1): 1},
                ("T", "Y"): {"TY": 1},
                ("Y", "T"): {"TY": 1},
                ("T", "TY"): {("Y", 1): 1},
                ("TY", "T"): {("Y", 1): 1},
            }
        )
        A = _pres(F, [("1", 0), ("T", t), ("Y", -1), ("TY", t - 1)], mul, 2 * t, label)
        return validate_differential(A, {"Y": {"1": 1}, "TY": {"T": 1}})
    # cases 5a / 5b: T, U anticommute, T^2 = u, U^2 = u (5a) or 0 (5b)
    names = ["1", "T", "U", "TU"]
    mul = _unit_rows(names)
    m1 = -1
    mul.update(
        {
            ("T", "T"): {("1", 1): 1},
            ("T", "U"): {"TU": 1},
            ("U", "T"): {"TU": m1},
            ("T", "TU"): {("U", 1): 1},
            ("TU", "T"): {("U", 1): m1},
        }
    )
    if c == "5a":
        mul.update(
            {
                ("U", "U"): {("1", 1): 1},
                ("U", "TU"): {("T", 1): m1},
                ("TU", "U"): {("T", 1): 1},
                ("TU", "TU"): {("1", 2): m1},
            }
        )
    A = _pres(F, [("1", 0), ("T", t), ("U", -1), ("TU", t - 1)], mul, 2 * t, label)
    return validate_differential(A, {"U": {"1": 1}, "TU": {"T": m1}})


def template_grid(fields) -> list:
    """All (case, field, |T|) combinations of the round-trip grid."""
    grid = []
    for F in fields:
        grid += [("1", F, None), ("3", F, -1), ("4a", F, None), ("5a", F, -1)]
        grid += [("2", F, t) for t in (2, -2, 4, -1, 3)]
        grid += [("4b", F, t) for t in (2, -2, 4)]
        grid += [("5b", F, t) for t in (-1, 3)]
    return grid


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@dataclass
class ClassificationReport:
    case: str
    witnesses: dict
    notes: list = dc_field(default_factory=list)
    flags: dict = dc_field(default_factory=dict)

    def summary(self) -> str:
        w = self.witnesses
        if "y" in w:
            return f"case {self.case}, y = {w['y']!r}"
        if "T" in w:
            return f"case {self.case}, T = {w['T']!r} in degree {w['T_degree']}"
        return f"case {self.case}"

    def to_json(self) -> dict:
        wit = {}
        for k, v in self.witnesses.items():
            if isinstance(v, Element):
                wit[k] = repr(v)
            elif isinstance(v, list):
                wit[k] = [repr(x) if isinstance(x, Element) else x for x in v]
            else:
                wit[k] = v
        return {"case": self.case, "summary": self.summary(), "witnesses": wit, "notes": list(self.notes), "flags": self.flags}


def _generator(A: GradedAlgebra):
    """(degree, element) of a homogeneous unit of least nonzero |degree|, or None."""
    if A.periodic:
        p = A.unit_degree
        cands = [n for n in range(-abs(p), abs(p) + 1) if n and A.component(n)]
    else:
        cands = sorted({d for d in A.deg.values() if d})
    if not cands:
        return None
    best = min(abs(n) for n in cands)
    opts = [n for n in cands if abs(n) == best]

    def has_core(n):
        return any(k == 0 for _, k in A.component(n))

    opts.sort(key=lambda n: (not has_core(n), n))
    n = opts[0]
    key = next((key for key in A.component(n) if key[1] == 0), A.component(n)[0])
    return n, Element(A, {key: A.field(1)})


def _is_laurent(A: GradedAlgebra, n: int, g: Element) -> bool:
    """A = A_0[g, g^-1] with g of degree n: support is nZ and g is invertible."""
    if A.inverse(g) is None:
        return False
    d0 = len(A.component(0))
    if not A.periodic:
        return False
    for m in range(-abs(A.unit_degree), abs(A.unit_degree) + 1):
        dim = len(A.component(m))
        if m % n == 0:
            if dim != d0:
                return False
        elif dim:
            return False
    return True


def _concentrated_in_zero(A: GradedAlgebra) -> bool:
    return not A.periodic and set(A.deg.values()) == {0}


def classify_dg_field(Ad: DgAlgebra) -> ClassificationReport:
    """Assign one of the seven labels, re-verifying every witness."""
    A = Ad.algebra
    F = A.field
    rep = dg_structure_report(Ad, run_oracle=False)
    div = rep["dg_division"]
    if div.value is None:
        raise PreconditionError(f"dg-division undecided: {div.method}")
    if not div.value:
        raise PreconditionError("not a dg-division algebra")
    sr = structure_report(A)
    comm, gcomm = sr["commutative"], sr["graded_commutative"]
    notes, flags = [], {"commutative": comm, "graded_commutative": gcomm}
    Z = rep["cycles"]
    ZA = Z.algebra
    zr = rep["cycles_report"]
    if not (zr["commutative"] or zr["graded_commutative"]):
        raise PreconditionError("ker(d) is not commutative")

    if Ad.is_zero():
        if _concentrated_in_zero(A):
            return _finish("1", {"L_basis": list(A.names)}, notes, flags, Ad)
        g = _generator(A)
        if g is None or not _is_laurent(A, g[0], g[1]):
            raise ClassificationError("d = 0 but A is neither a field in degree 0 nor L[T, T^-1]")
        n, T = g
        if n % 2 and F.characteristic != 2:
            notes.append(NOTE_CASE2_ODD)
        return _finish("2", {"T": T, "T_degree": n, "L_basis": _l_basis(A)}, notes, flags, Ad)

    if rep["dichotomy"] != "acyclic":
        raise ClassificationError("nonzero differential with nonzero homology")
    y = solve_for_y(Ad)
    if y is None:
        raise ClassificationError("no y with d(y) = 1")
    y2 = y * y
    D_zero = all(
        y * Z.include(ZA.gen(b)) == (Z.include(ZA.gen(b)) * y) * F.sign(ZA.deg[b]) for b in ZA.names
    )
    flags["D_zero"] = D_zero
    if not (comm or gcomm):
        if not D_zero:
            raise PreconditionError("neither commutative nor graded-commutative, and y does not graded-commute with ker(d)")
        notes.append("accepted: ker(d) is commutative and y graded-commutes with it (D = 0)")
    wit = {"y": y, "y_squared": y2}
    if _concentrated_in_zero(ZA):
        wit["L_basis"] = [repr(Z.include(ZA.gen(b))) for b in ZA.names]
        return _finish("4a", wit, notes, flags, Ad)
    g = _generator(ZA)
    if g is None or not _is_laurent(ZA, g[0], g[1]):
        raise ClassificationError("ker(d) is neither L nor L[T, T^-1]")
    n, Tz = g
    T = Z.include(Tz)
    wit.update({"T": T, "T_degree": n})
    if n % 2 == 0:
        if y2.is_zero():
            return _finish("4b", wit, notes, flags, Ad)
        return _finish("3", wit, notes, flags, Ad)
    if F.characteristic != 2 or not (comm and gcomm):
        notes.append(NOTE_ODD_SIGN)
    if y2.is_zero():
        notes.append(NOTE_5B)
        return _finish("5b", wit, notes, flags, Ad)
    return _finish("5a", wit, notes, flags, Ad)


def _l_basis(A: GradedAlgebra) -> list:
    return [repr(e) for e in A.component_elements(0)]


def _predicates(Ad: DgAlgebra, w: dict) -> dict:
    """Case predicates evaluated on the witnesses alone."""
    A = Ad.algebra
    dz = Ad.is_zero()
    y = w.get("y")
    T = w.get("T")
    n = w.get("T_degree")
    ok_y = y is not None and y.is_homogeneous() and y.degree == -1 and Ad.apply(y) == A.one()
    y2z = ok_y and (y * y).is_zero()
    ok_T = T is not None and T.degree == n and A.inverse(T) is not None and Ad.apply(T).is_zero()
    return {
        "1": dz and T is None and not A.periodic,
        "2": dz and ok_T and n != 0,
        "3": not dz and ok_y and ok_T and n % 2 == 0 and not y2z and A.inverse(y * y) is not None,
        "4a": not dz and ok_y and T is None and y2z,
        "4b": not dz and ok_y and ok_T and n % 2 == 0 and y2z,
        "5a": not dz and ok_y and ok_T and n % 2 != 0 and not y2z and A.inverse(y * y) is not None,
        "5b": not dz and ok_y and ok_T and n % 2 != 0 and y2z,
    }


def _finish(case, wit, notes, flags, Ad) -> ClassificationReport:
    preds = _predicates(Ad, wit)
    hits = [c for c, v in preds.items() if v]
    if hits != [case]:
        raise ClassificationError(f"witness re-verification failed for case {case}: matches {hits}")
    if "y_squared" in wit and case in ("3", "5a"):
        wit["y_squared_inverse"] = Ad.algebra.inverse(wit["y_squared"])
    return ClassificationReport(case, wit, notes, flags)
