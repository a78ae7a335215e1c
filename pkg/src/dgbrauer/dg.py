"""Differentials on graded algebras: validation, cycles, homology, dg-ideals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .graded import (
    Element,
    GradedAlgebra,
    GradedPresentation,
    GradedSubspace,
    NormCertificate,
    ValidationError,
    Verdict,
    WindowError,
    _projective_vectors,
    graded_ideal,
    homogeneous_enumeration_size,
    structure_report,
    validate_presentation,
)

__all__ = [
    "DgAlgebra",
    "Cycles",
    "HomologyReport",
    "validate_differential",
    "zero_differential",
    "cycles",
    "homology",
    "dg_ideal",
    "dg_structure_report",
    "brute_force_dg_division",
    "dg_simple",
    "dichotomy",
]

ORACLE_MAX_DIM = 6


class DgAlgebra:
    """A graded algebra with a degree +1 differential given on the core basis."""

    def __init__(self, algebra: GradedAlgebra, d: dict):
        self.algebra = algebra
        self.field = algebra.field
        self.d = {b: (d.get(b) or algebra.zero()) for b in algebra.names}

    def apply(self, x: Element) -> Element:
        A = self.algebra
        out = A.zero()
        for (b, k), c in x.terms.items():
            img = self.d[b]
            if img.is_zero():
                continue
            out = out + (img.shift(k) if k else img) * c
        return out

    __call__ = apply

    def matrix(self, n: int):
        """Matrix of d: A_n -> A_{n+1}, rows indexed by A_{n+1}."""
        A = self.algebra
        cols = [A.vector(self.apply(e), n + 1) for e in A.component_elements(n)]
        if not cols or not A.component(n + 1):
            return []
        return linalg.transpose(cols)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.d.values())

    def __repr__(self):
        return f"DgAlgebra({self.algebra!r})"


def zero_differential(A: GradedAlgebra) -> DgAlgebra:
    return DgAlgebra(A, {})


def validate_differential(A: GradedAlgebra, d_raw: dict) -> DgAlgebra:
    """Check degree +1, d(1) = 0, d^2 = 0 and the graded Leibniz rule on core pairs."""
    d = {}
    for b, img in d_raw.items():
        if b not in A.deg:
            raise ValidationError("basis", f"differential given on unknown name {b!r}", b)
        img = img if isinstance(img, Element) else A.elem(img)
        if img.alg is not A:
            img = img.rebind(A)
        for key in img.terms:
            if A.key_degree(key) != A.deg[b] + 1:
                raise ValidationError(
                    "degree",
                    f"degree violation: d({b}) has a term {key[0]}*u^{key[1]} of degree "
                    f"{A.key_degree(key)}, expected {A.deg[b] + 1}",
                    (b, key),
                )
        d[b] = img
    Ad = DgAlgebra(A, d)
    if not Ad.apply(A.one()).is_zero():
        raise ValidationError("unit", "d(1) must vanish", "one")
    for b in A.names:
        if not Ad.apply(Ad.d[b]).is_zero():
            raise ValidationError("d-squared", f"d^2({b}) != 0", b)
    F = A.field
    gens = {b: A.gen(b) for b in A.names}
    for a, b in itertools.product(A.names, repeat=2):
        x, y = gens[a], gens[b]
        lhs = Ad.apply(x * y)
        rhs = Ad.d[a] * y + (x * Ad.d[b]) * F.sign(A.deg[a])
        if lhs != rhs:
            raise ValidationError("leibniz", f"Leibniz rule fails on ({a}, {b})", (a, b))
    return Ad


# --------------------------------------------------------------------------
# cycles
# --------------------------------------------------------------------------


class Cycles:
    """ker(d) as a graded algebra ``algebra`` together with its inclusion into A."""

    def __init__(self, source: DgAlgebra, algebra: GradedAlgebra, kernels: dict, names: dict):
        self.source = source
        self.algebra = algebra
        self._kernels = kernels  # class rep -> list of kernel vectors
        self._names = names  # class rep -> list of core names of Z
        self._pivot_cache: dict = {}

    def include(self, z: Element) -> Element:
        A = self.source.algebra
        out = A.zero()
        for (b, k), c in z.terms.items():
            n = self.algebra.deg[b]
            i = self._names[n].index(b)
            x = A.from_vector(self._kernels[n][i], n)
            out = out + (x.shift(k) if k else x) * c
        return out

    def inclusion_images(self) -> dict:
        return {b: self.include(self.algebra.gen(b)) for b in self.algebra.names}

    def restrict(self, x: Element) -> Element:
        """Coordinates of a cycle of A in the core basis of ker(d)."""
        A = self.source.algebra
        Z = self.algebra
        F = A.field
        out = Z.zero()
        for n, part in x.homogeneous_parts().items():
            rep, k = A.class_of(n)
            part = part.shift(-k) if k else part
            kern = self._kernels.get(rep, [])
            v = A.vector(part, rep)
            # kernel rows are in RREF, so coordinates sit at the pivot positions
            sol = [v[piv] for piv in self._pivots(rep)]
            recon = [F(0)] * len(v)
            for c, row in zip(sol, kern):
                if c:
                    recon = [F.add(a, F.mul(c, b)) for a, b in zip(recon, row)]
            if not kern or recon != v:
                raise ValueError(f"{x!r} is not a cycle")
            for name, c in zip(self._names[rep], sol):
                if c != 0:
                    out = out + Z.gen(name, k) * c
        return out

    def _pivots(self, rep: int) -> list:
        piv = self._pivot_cache.get(rep)
        if piv is None:
            piv = [next(i for i, c in enumerate(row) if c != 0) for row in self._kernels.get(rep, [])]
            self._pivot_cache[rep] = piv
        return piv

    def contains(self, x: Element) -> bool:
        return self.source.apply(x).is_zero()


def _kernel_name(A: GradedAlgebra, v, n: int, taken: set, idx: int) -> str:
    nz = [(key, c) for key, c in zip(A.component(n), v) if c != 0]
    if len(nz) == 1 and nz[0][1] == 1:
        (b, k), _ = nz[0]
        name = b if k == 0 else f"{b}*u^{k}"
    else:
        name = f"z[{n}]{idx}"
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def cycles(Ad: DgAlgebra, window=None) -> Cycles:
    """Kernel of d assembled into a validated graded algebra (u-stable when periodic)."""
    A = Ad.algebra
    F = A.field
    kernels, names, basis = {}, {}, []
    taken: set = set()
    for n in A.classes():
        comp = A.component(n)
        if not comp:
            continue
        M = Ad.matrix(n)
        ns = linalg.nullspace(F, M, len(comp)) if M else linalg.identity(F, len(comp))
        # prefer core basis vectors where possible (e.g. 1 and T stay named)
        kern = linalg.row_space_basis(F, ns) if ns else []
        if not kern:
            continue
        kernels[n] = kern
        names[n] = [_kernel_name(A, v, n, taken, i) for i, v in enumerate(kern)]
        basis += [(nm, n) for nm in names[n]]
    proto = Cycles(Ad, None, kernels, names)

    # structure constants of ker(d), computed through a table-less shim
    shim_pres = GradedPresentation(field=F, basis=basis, mul={}, one="", unit_degree=A.unit_degree)
    shim = GradedAlgebra(shim_pres)
    proto.algebra = shim
    mul = {}
    incl = {b: proto.include(shim.gen(b)) for b in shim.names}
    for a, b in itertools.product(shim.names, repeat=2):
        prod = incl[a] * incl[b]
        if prod.is_zero():
            continue
        if not Ad.apply(prod).is_zero():
            raise ValidationError("closure", f"product {a}*{b} of cycles is not a cycle", (a, b))
        r = proto.restrict(prod)
        mul[(a, b)] = dict(r.terms)
    one = dict(proto.restrict(A.one()).terms)
    if len(one) == 1 and list(one.values()) == [1] and list(one)[0][1] == 0:
        one = list(one)[0][0]
    pres = GradedPresentation(
        field=F,
        basis=basis,
        mul=mul,
        one=one,
        unit_degree=A.unit_degree,
        name=f"ker(d) of {A.name}" if A.name else "ker(d)",
    )
    Z = validate_presentation(pres)
    if Ad.is_zero() and Z.names == A.names and A.certificates:
        # d = 0: ker(d) is A itself, so division certificates carry over verbatim
        pres.certificates = tuple(
            NormCertificate({b: x.rebind(Z) for b, x in c.conj.items()}) for c in A.certificates if isinstance(c, NormCertificate)
        )
        Z = validate_presentation(pres)
    return Cycles(Ad, Z, kernels, names)


# --------------------------------------------------------------------------
# homology
# --------------------------------------------------------------------------


@dataclass
class HomologyReport:
    window: tuple
    per_degree: dict
    periodic: bool

    @property
    def acyclic(self) -> bool:
        return all(v["homology"] == 0 for v in self.per_degree.values())

    def dims(self) -> dict:
        return {n: v["homology"] for n, v in self.per_degree.items()}

    def to_json(self):
        return {
            "window": list(self.window),
            "periodic": self.periodic,
            "acyclic": self.acyclic,
            "degrees": {
                str(n): {k: (v if k != "basis" else [repr(x) for x in v]) for k, v in row.items()}
                for n, row in self.per_degree.items()
            },
        }


def homology(Ad: DgAlgebra, window=None) -> HomologyReport:
    A = Ad.algebra
    F = A.field
    if window is None:
        window = A.default_window()
        if not A.periodic:
            window = (window[0] - 1, window[1] + 1)
    lo, hi = window
    if hi < lo:
        raise WindowError(f"empty window {window}")
    if A.periodic and hi - lo + 1 < A.period + 2:
        raise WindowError(f"window {window} must span a full period plus one degree on each side")
    per = {}
    for n in range(lo, hi + 1):
        comp = A.component(n)
        M = Ad.matrix(n)
        ker = linalg.nullspace(F, M, len(comp)) if M else (linalg.identity(F, len(comp)) if comp else [])
        Mprev = Ad.matrix(n - 1)
        bdry = linalg.row_space_basis(F, linalg.transpose(Mprev)) if Mprev else []
        basis = []
        span = list(bdry)
        for v in ker:
            if not linalg.in_span(F, span, v):
                span.append(v)
                basis.append(A.from_vector(v, n))
        per[n] = {
            "cycles": len(ker),
            "boundaries": len(bdry),
            "homology": len(ker) - len(bdry),
            "basis": basis,
        }
    return HomologyReport(window=(lo, hi), per_degree=per, periodic=A.periodic)


# --------------------------------------------------------------------------
# dg-ideals and the division criterion
# --------------------------------------------------------------------------


def dg_ideal(Ad: DgAlgebra, gens, side: str = "twosided", window=None) -> GradedSubspace:
    """graded_ideal closure additionally saturated under d."""
    I = graded_ideal(Ad.algebra, gens, side, window, extra_ops=[Ad.apply])
    I.kind = f"{side} dg-ideal"
    return I


def brute_force_dg_division(Ad: DgAlgebra) -> Verdict:
    """Principal left and right dg-ideals from every nonzero homogeneous element."""
    A = Ad.algebra
    F = A.field
    if not F.is_finite or F.characteristic > 3 or A.dim > ORACLE_MAX_DIM:
        return Verdict(None, "oracle restricted to F_2/F_3 and core dimension <= 6")
    for n in A.classes():
        for v in _projective_vectors(F, len(A.component(n))):
            x = A.from_vector([F(c) for c in v], n)
            for side in ("left", "right"):
                if not dg_ideal(Ad, [x], side).is_whole():
                    return Verdict(False, f"proper principal {side} dg-ideal", x)
    return Verdict(True, "every principal one-sided dg-ideal is the whole algebra")


def dg_simple(Ad: DgAlgebra, division: Verdict) -> Verdict:
    if division.value:
        return Verdict(True, "dg-division implies dg-simple")
    A = Ad.algebra
    F = A.field
    for n in A.classes():
        for e in A.component_elements(n):
            if not dg_ideal(Ad, [e], "twosided").is_whole():
                return Verdict(False, "proper twosided dg-ideal", e)
    if F.is_finite and homogeneous_enumeration_size(A) <= 6000:
        for n in A.classes():
            for v in _projective_vectors(F, len(A.component(n))):
                x = A.from_vector([F(c) for c in v], n)
                if not dg_ideal(Ad, [x], "twosided").is_whole():
                    return Verdict(False, "proper twosided dg-ideal", x)
        return Verdict(True, "twosided dg-ideal saturation from every homogeneous element")
    return Verdict(None, "no exact decision method")


def dichotomy(Ad: DgAlgebra) -> str:
    if Ad.is_zero():
        return "zero_differential"
    return "acyclic" if homology(Ad).acyclic else "neither"


def dg_structure_report(Ad: DgAlgebra, run_oracle: bool = True) -> dict:
    Z = cycles(Ad)
    zr = structure_report(Z.algebra)
    div = zr["graded_division"]
    division = Verdict(div.value, f"ker(d) graded-division ({div.method})", div.witness)
    if division.witness is not None:
        division.witness = Z.include(division.witness)
    oracle = brute_force_dg_division(Ad) if run_oracle else Verdict(None, "not run")
    agree = None if oracle.value is None or division.value is None else oracle.value == division.value
    return {
        "dg_division": division,
        "dg_simple": dg_simple(Ad, division),
        "dichotomy": dichotomy(Ad),
        "oracle": oracle,
        "oracle_agrees": agree,
        "cycles": Z,
        "cycles_report": zr,
    }
