"""Algebras over a graded-commutative dg base and the standard constructions on them.

Everything here works with *free* algebras over the base: an explicit
homogeneous basis ``e_1..e_r`` such that every element is uniquely
``sum nu(k_i) e_i`` with coefficients on the left.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .dg import Cycles, DgAlgebra, cycles, validate_differential, zero_differential
from .graded import (
    Element,
    GradedAlgebra,
    GradedLinearMap,
    GradedPresentation,
    PreconditionError,
    ValidationError,
    opposite,
    same_table,
    validate_presentation,
)
from .scalars import Field

__all__ = [
    "NotFree",
    "BaseMismatch",
    "OverBase",
    "point_algebra",
    "over_itself",
    "over_field",
    "tensor_over",
    "opposite_over",
    "extend_scalars",
    "FreeDgModule",
    "end_over",
    "MuResult",
    "mu_map",
    "twisted_poly_quotient",
    "quotient_differential",
    "AgrDecomposition",
    "agr_decompose",
    "cycles_over",
    "induce_from_cycles",
    "alpha_map",
    "cycles_tensor_comparison",
]


class NotFree(ValueError):
    pass


class BaseMismatch(ValueError):
    pass


def _unique_names(raw: list) -> list:
    if len(set(raw)) == len(raw):
        return raw
    raise ValidationError("basis", "generated core names collide", raw)


# --------------------------------------------------------------------------
# algebras over a base
# --------------------------------------------------------------------------


class OverBase:
    """A dg-algebra ``carrier`` over the dg-algebra ``base`` via ``nu``.

    ``nu`` maps base core names to carrier elements; ``basis`` is a list of
    ``(label, element)`` pairs giving a homogeneous base-basis of the carrier.
    """

    def __init__(self, base: DgAlgebra, carrier: DgAlgebra, nu: dict, basis: list, name: str = ""):
        self.base = base
        self.carrier = carrier
        self.nu = nu
        self.basis = list(basis)
        self.name = name or carrier.algebra.name
        self._inv_cache: dict = {}
        self.tensor_data = None  # filled by tensor_over
        K, A = base.algebra, carrier.algebra
        if K.field != A.field:
            raise BaseMismatch("base and carrier live over different fields")
        if A.periodic and not K.periodic:
            raise NotFree("a periodic carrier over a non-periodic base has infinite rank")

    # convenience ----------------------------------------------------------
    @property
    def K(self) -> GradedAlgebra:
        return self.base.algebra

    @property
    def A(self) -> GradedAlgebra:
        return self.carrier.algebra

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.basis]

    @property
    def elements(self) -> list:
        return [e for _, e in self.basis]

    def bdeg(self, i: int) -> int:
        return self.basis[i][1].degree

    def nu_apply(self, kappa: Element) -> Element:
        out = self.A.zero()
        for (b, k), c in kappa.terms.items():
            img = self.nu[b]
            out = out + (img.shift(k) if k else img) * c
        return out

    def combine(self, coeffs) -> Element:
        """sum nu(coeffs[i]) * e_i"""
        out = self.A.zero()
        for kappa, (_, e) in zip(coeffs, self.basis):
            if not kappa.is_zero():
                out = out + self.nu_apply(kappa) * e
        return out

    # coordinates ------------------------------------------------------------
    def _columns(self, n: int):
        K, A = self.K, self.A
        keys, cols = [], []
        for i, (_, e) in enumerate(self.basis):
            m = n - e.degree
            for key in K.component(m):
                keys.append((i, key))
                cols.append(A.vector(self.nu_apply(Element(K, {key: K.field(1)})) * e, n))
        return keys, cols

    def _inverse(self, n: int):
        hit = self._inv_cache.get(n)
        if hit is not None:
            return hit
        keys, cols = self._columns(n)
        size = len(self.A.component(n))
        if len(keys) != size:
            raise NotFree(f"degree {n}: {len(keys)} base-basis products for a {size}-dimensional component")
        if size == 0:
            inv = []
        else:
            inv = linalg.inverse(self.field, linalg.transpose(cols))
            if inv is None:
                raise NotFree(f"degree {n}: the base-basis products are linearly dependent")
        self._inv_cache[n] = (keys, inv)
        return keys, inv

    def coords(self, x: Element) -> list:
        """Base coefficients of ``x`` in the basis, as base elements."""
        K, A = self.K, self.A
        out = [K.zero() for _ in self.basis]
        for n, part in x.homogeneous_parts().items():
            shift = 0
            if A.periodic:
                rep, shift = A.class_of(n)
                part, n = (part.shift(-shift) if shift else part), rep
            keys, inv = self._inverse(n)
            sol = linalg.matvec(self.field, inv, A.vector(part, n))
            for (i, (b, k)), c in zip(keys, sol):
                if c != 0:
                    out[i] = out[i] + Element(K, {(b, k + shift): c})
        return out

    def degrees(self) -> list:
        A, K = self.A, self.K
        if A.periodic:
            return A.classes()
        ds = set(A.deg.values())
        for _, e in self.basis:
            ds |= {e.degree + m for m in K.deg.values()}
        return sorted(ds)

    def check_free(self) -> bool:
        for n in self.degrees():
            self._inverse(n)
        return True

    def is_free(self) -> bool:
        try:
            return self.check_free()
        except NotFree:
            return False

    def structure_flags(self) -> dict:
        """nu multiplicative, unital, graded-central, compatible with d."""
        K, A = self.K, self.A
        F = self.field
        mult = all(
            self.nu_apply(K.gen(a) * K.gen(b)) == self.nu[a] * self.nu[b] for a in K.names for b in K.names
        )
        unital = self.nu_apply(K.one()) == A.one()
        central = all(
            self.nu[a] * A.gen(b) == (A.gen(b) * self.nu[a]) * F.sign(K.deg[a] * A.deg[b])
            for a in K.names
            for b in A.names
        )
        dg = all(self.carrier.apply(self.nu[a]) == self.nu_apply(self.base.apply(K.gen(a))) for a in K.names)
        return {"nu_multiplicative": mult, "nu_unital": unital, "nu_graded_central": central, "nu_dg": dg}

    def basis_over_field(self) -> list:
        return self.A.names

    def __repr__(self):
        return f"OverBase({self.name or 'unnamed'}, rank {self.rank} over {self.K.name or 'base'})"


def point_algebra(F: Field, name: str = "") -> DgAlgebra:
    """The field itself in degree 0 with zero differential."""
    pres = GradedPresentation(field=F, basis=[("1", 0)], mul={("1", "1"): {("1", 0): 1}}, one="1", name=name or F.label)
    return zero_differential(validate_presentation(pres))


def over_itself(Kd: DgAlgebra) -> OverBase:
    K = Kd.algebra
    return OverBase(Kd, Kd, {b: K.gen(b) for b in K.names}, [("1", K.one())], name=K.name)


def over_field(Ad: DgAlgebra) -> OverBase:
    """A finite-dimensional (non-periodic) dg-algebra over its ground field."""
    A = Ad.algebra
    if A.periodic:
        raise NotFree("a periodic algebra is not finite-dimensional over the field")
    base = point_algebra(A.field)
    return OverBase(base, Ad, {"1": A.one()}, [(b, A.gen(b)) for b in A.names], name=A.name)


# --------------------------------------------------------------------------
# Koszul tensor product over the base
# --------------------------------------------------------------------------


@dataclass
class TensorData:
    left: OverBase
    right: OverBase
    names: dict  # (base core, i, j) -> carrier core name
    result: "OverBase | None" = None

    def pure(self, x: Element, y: Element) -> Element:
        """x (x) y with coefficients pulled to the front (Koszul signs)."""
        T = self.result.A
        K = self.left.K
        F = K.field
        ax = self.left.coords(x)
        by = self.right.coords(y)
        out = T.zero()
        for i, alpha in enumerate(ax):
            if alpha.is_zero():
                continue
            ei = self.left.bdeg(i)
            for j, beta in enumerate(by):
                for db, bpart in beta.homogeneous_parts().items():
                    coef = (alpha * bpart) * F.sign(db * ei)
                    out = out + _spread(T, coef, self.names, i, j)
        return out


def _spread(T: GradedAlgebra, kappa: Element, names: dict, i: int, j: int) -> Element:
    return Element(T, {(names[(b, i, j)], k): c for (b, k), c in kappa.terms.items()})


def _coords_table(X: OverBase) -> dict:
    els = X.elements
    return {(i, k): X.coords(els[i] * els[k]) for i in range(X.rank) for k in range(X.rank)}


def _pair_label(K: GradedAlgebra, rho: str, la: str, lb: str) -> str:
    core = f"{la}⊗{lb}"
    return core if rho == K.one_name else f"{rho}·{core}"


def tensor_over(X: OverBase, Y: OverBase, name: str = "") -> OverBase:
    """Koszul tensor product X (x)_K Y with the induced differential."""
    Kd = X.base
    K = Kd.algebra
    if not same_table(K, Y.K):
        raise BaseMismatch("tensor factors have different bases")
    X.check_free()
    Y.check_free()
    F = K.field
    r, s = X.rank, Y.rank
    names = {}
    basis = []
    for rho in K.names:
        for i in range(r):
            for j in range(s):
                nm = _pair_label(K, rho, X.labels[i], Y.labels[j])
                names[(rho, i, j)] = nm
                basis.append((nm, K.deg[rho] + X.bdeg(i) + Y.bdeg(j)))
    _unique_names([b for b, _ in basis])
    pA, pB = _coords_table(X), _coords_table(Y)
    eX = [X.bdeg(i) for i in range(r)]
    eY = [Y.bdeg(j) for j in range(s)]
    stub = GradedAlgebra(GradedPresentation(F, basis, {}, one="", unit_degree=K.unit_degree))

    mul = {}
    for (rho, i, j), (sig, k, l) in itertools.product(names, repeat=2):
        s1 = F.sign(K.deg[sig] * (eX[i] + eY[j]) + eY[j] * eX[k])
        rs = K.gen(rho) * K.gen(sig)
        if rs.is_zero():
            continue
        acc = stub.zero()
        for m, am in enumerate(pA[(i, k)]):
            if am.is_zero():
                continue
            for n, bn in enumerate(pB[(j, l)]):
                for db, bpart in bn.homogeneous_parts().items():
                    coef = (rs * am * bpart) * F.mul(s1, F.sign(db * eX[m]))
                    acc = acc + _spread(stub, coef, names, m, n)
        if acc:
            mul[(names[(rho, i, j)], names[(sig, k, l)])] = acc.terms

    td = TensorData(X, Y, names)
    # unit: 1_X (x) 1_Y
    ox, oy = X.coords(X.A.one()), Y.coords(Y.A.one())
    one = stub.zero()
    for i, a in enumerate(ox):
        for j, b in enumerate(oy):
            for db, bpart in b.homogeneous_parts().items():
                one = one + _spread(stub, (a * bpart) * F.sign(db * eX[i]), names, i, j)
    one_terms = one.terms
    if len(one_terms) == 1 and list(one_terms.values()) == [1] and list(one_terms)[0][1] == 0:
        one_spec = list(one_terms)[0][0]
    else:
        one_spec = dict(one_terms)
    pres = GradedPresentation(
        field=F,
        basis=basis,
        mul=mul,
        one=one_spec,
        unit_degree=K.unit_degree,
        name=name or f"({X.name})⊗({Y.name})",
    )
    T = validate_presentation(pres)

    # differential: d_K(rho) e f + (-1)^|rho| rho (d e) f + (-1)^{|rho|+|e|} rho e (d f)
    dX = [X.coords(X.carrier.apply(e)) for e in X.elements]
    dY = [Y.coords(Y.carrier.apply(f)) for f in Y.elements]
    diff = {}
    for (rho, i, j), nm in names.items():
        acc = T.zero()
        drho = Kd.apply(K.gen(rho))
        if drho:
            acc = acc + _spread(T, drho, names, i, j)
        sr = F.sign(K.deg[rho])
        for m, am in enumerate(dX[i]):
            if am:
                acc = acc + _spread(T, (K.gen(rho) * am) * sr, names, m, j)
        for n, bn in enumerate(dY[j]):
            for db, bpart in bn.homogeneous_parts().items():
                sg = F.sign(K.deg[rho] + eX[i] + db * eX[i])
                acc = acc + _spread(T, (K.gen(rho) * bpart) * sg, names, i, n)
        diff[nm] = acc
    Td = validate_differential(T, diff)

    nu = {}
    for rho in K.names:
        nu[rho] = T.zero()
    res = OverBase(Kd, Td, {}, [], name=pres.name)
    td.result = res
    for rho in K.names:
        nu[rho] = td.pure(X.nu[rho], Y.A.one())
    res.nu = nu
    res.basis = [
        (f"{X.labels[i]}⊗{Y.labels[j]}", td.pure(X.elements[i], Y.elements[j])) for i in range(r) for j in range(s)
    ]
    res.tensor_data = td
    res.check_free()
    return res


def opposite_over(X: OverBase) -> OverBase:
    """Opposite carrier with the same differential, base action and basis."""
    Aop = opposite(X.A)
    dop = DgAlgebra(Aop, {b: v.rebind(Aop) for b, v in X.carrier.d.items()})
    dop = validate_differential(Aop, dop.d)
    return OverBase(
        X.base,
        dop,
        {b: v.rebind(Aop) for b, v in X.nu.items()},
        [(lab, e.rebind(Aop)) for lab, e in X.basis],
        name=Aop.name,
    )


def extend_scalars(Cd, Rd: DgAlgebra, name: str = "") -> OverBase:
    """R (x)_F C as an algebra over R, for C finite-dimensional over the field F.

    ``Cd`` may be a GradedAlgebra (zero differential) or a DgAlgebra.
    """
    if isinstance(Cd, GradedAlgebra):
        Cd = zero_differential(Cd)
    C, R = Cd.algebra, Rd.algebra
    if C.periodic:
        raise NotFree("scalar extension needs a finite-dimensional algebra")
    if C.field != R.field:
        raise BaseMismatch("fields differ")
    F = R.field
    one_c = C.one_name

    def nm(rho, c):
        if rho == R.one_name:
            return c
        if c == one_c:
            return rho
        return f"{rho}·{c}"

    names = {(rho, c): nm(rho, c) for rho in R.names for c in C.names}
    if len(set(names.values())) != len(names):
        names = {(rho, c): f"({rho},{c})" for rho in R.names for c in C.names}
    basis = [(names[(rho, c)], R.deg[rho] + C.deg[c]) for rho in R.names for c in C.names]

    def spread(rho_el: Element, c_el: Element, sign):
        out = {}
        for (rb, k), rc in rho_el.terms.items():
            for (cb, _), cc in c_el.terms.items():
                key = (names[(rb, cb)], k)
                out[key] = F.add(out.get(key, F(0)), F.mul(sign, F.mul(rc, cc)))
        return {k: v for k, v in out.items() if v != 0}

    mul = {}
    for (rho, c), (sig, c2) in itertools.product(names, repeat=2):
        t = spread(R.gen(rho) * R.gen(sig), C.gen(c) * C.gen(c2), F.sign(C.deg[c] * R.deg[sig]))
        if t:
            mul[(names[(rho, c)], names[(sig, c2)])] = t
    one = spread(R.one(), C.one(), F(1))
    if len(one) == 1 and list(one.values()) == [1] and list(one)[0][1] == 0:
        one = list(one)[0][0]
    pres = GradedPresentation(
        F, basis, mul, one=one, unit_degree=R.unit_degree, name=name or f"{C.name or 'C'}⊗{R.name or 'R'}"
    )
    T = validate_presentation(pres)
    diff = {}
    for (rho, c), n in names.items():
        a = Element(T, spread(Rd.apply(R.gen(rho)), C.gen(c), F(1)))
        b = Element(T, spread(R.gen(rho), Cd.apply(C.gen(c)), F.sign(R.deg[rho])))
        diff[n] = a + b
    Td = validate_differential(T, diff)
    nu = {rho: Element(T, spread(R.gen(rho), C.one(), F(1))) for rho in R.names}
    basis_el = [(c, Element(T, spread(R.one(), C.gen(c), F(1)))) for c in C.names]
    X = OverBase(Rd, Td, nu, basis_el, name=pres.name)
    X.check_free()
    return X


# --------------------------------------------------------------------------
# free dg-modules and their endomorphism dg-algebras
# --------------------------------------------------------------------------


class FreeDgModule:
    """Free module over ``base`` on homogeneous generators with a differential.

    ``delta[j]`` lists base coefficients ``k_ij`` with delta(e_j) = sum_i k_ij e_i.
    """

    def __init__(self, base: DgAlgebra, gens: list, delta: list | None = None):
        self.base = base
        self.gens = [(str(lab), int(d)) for lab, d in gens]
        K = base.algebra
        r = len(self.gens)
        self.delta = delta or [[K.zero() for _ in range(r)] for _ in range(r)]
        self._validate()

    @property
    def rank(self) -> int:
        return len(self.gens)

    def degree(self, i: int) -> int:
        return self.gens[i][1]

    def _validate(self):
        K = self.base.algebra
        F = K.field
        r = self.rank
        for j, col in enumerate(self.delta):
            for i, k in enumerate(col):
                for key in k.terms:
                    if K.key_degree(key) != self.degree(j) + 1 - self.degree(i):
                        raise ValidationError("degree", f"delta({self.gens[j][0]}) has a coefficient of wrong degree", (j, i))
        # delta^2 = 0
        for j in range(r):
            acc = [K.zero() for _ in range(r)]
            for i, k in enumerate(self.delta[j]):
                if k.is_zero():
                    continue
                acc[i] = acc[i] + self.base.apply(k)
                for m, kk in enumerate(self.delta[i]):
                    for dk, part in k.homogeneous_parts().items():
                        acc[m] = acc[m] + (part * kk) * F.sign(dk)
            if any(a for a in acc):
                raise ValidationError("d-squared", f"delta^2({self.gens[j][0]}) != 0", j)


def end_over(M: FreeDgModule, name: str = "") -> OverBase:
    """End_K(M) with composition and d(f) = delta f - (-1)^|f| f delta."""
    Kd = M.base
    K = Kd.algebra
    F = K.field
    r = M.rank
    lab = [g for g, _ in M.gens]
    e = [d for _, d in M.gens]

    def ename(rho, i, j):
        core = f"E[{lab[i]},{lab[j]}]"
        return core if rho == K.one_name else f"{rho}·{core}"

    names = {(rho, i, j): ename(rho, i, j) for rho in K.names for i in range(r) for j in range(r)}
    _unique_names(list(names.values()))
    basis = [(names[(rho, i, j)], K.deg[rho] + e[i] - e[j]) for (rho, i, j) in names]
    stub = GradedAlgebra(GradedPresentation(F, basis, {}, one="", unit_degree=K.unit_degree))
    mul = {}
    for (rho, i, j), (sig, k, l) in itertools.product(names, repeat=2):
        if j != k:
            continue
        coef = (K.gen(rho) * K.gen(sig)) * F.sign(K.deg[sig] * (e[i] - e[j]))
        t = _spread(stub, coef, names, i, l).terms
        if t:
            mul[(names[(rho, i, j)], names[(sig, k, l)])] = t
    one = stub.zero()
    for i in range(r):
        one = one + _spread(stub, K.one(), names, i, i)
    one_spec = dict(one.terms)
    if len(one_spec) == 1 and list(one_spec)[0][1] == 0 and list(one_spec.values()) == [1]:
        one_spec = list(one_spec)[0][0]
    pres = GradedPresentation(F, basis, mul, one=one_spec, unit_degree=K.unit_degree, name=name or f"End({','.join(lab)})")
    E = validate_presentation(pres)
    kap = M.delta  # kap[l][m] = coefficient of e_m in delta(e_l)
    diff = {}
    for (rho, i, j), nm in names.items():
        acc = E.zero()
        drho = Kd.apply(K.gen(rho))
        if drho:
            acc = acc + _spread(E, drho, names, i, j)
        sr = F.sign(K.deg[rho])
        fdeg = e[i] - e[j]
        for m in range(r):
            k_mi = kap[i][m]
            if k_mi:
                acc = acc + _spread(E, (K.gen(rho) * k_mi) * sr, names, m, j)
        for l in range(r):
            k_jl = kap[l][j]
            if k_jl:
                s = F.neg(F.sign(fdeg * (1 + e[l] + 1 - e[j])))
                acc = acc + _spread(E, (K.gen(rho) * k_jl) * F.mul(sr, s), names, i, l)
        diff[nm] = acc
    Ed = validate_differential(E, diff)
    nu = {}
    for rho in K.names:
        x = E.zero()
        for i in range(r):
            x = x + _spread(E, K.gen(rho), names, i, i)
        nu[rho] = x
    bas = [(f"E[{lab[i]},{lab[j]}]", _spread(E, K.one(), names, i, j)) for i in range(r) for j in range(r)]
    X = OverBase(Kd, Ed, nu, bas, name=pres.name)
    X.check_free()
    X.module = M
    return X


def module_of(X: OverBase) -> FreeDgModule:
    """The carrier of X as a free dg-module over its base."""
    delta = [X.coords(X.carrier.apply(e)) for e in X.elements]
    return FreeDgModule(X.base, [(lab, e.degree) for lab, e in X.basis], delta)


# --------------------------------------------------------------------------
# the enveloping map
# --------------------------------------------------------------------------


@dataclass
class MuResult:
    map: GradedLinearMap
    is_iso: bool
    is_dg_map: bool
    multiplicative: bool
    ranks: dict
    defect: tuple | None
    source: OverBase
    target: OverBase

    def message(self) -> str:
        if self.defect is None:
            return "mu is an isomorphism in every degree"
        n, what = self.defect
        return f"mu {what} in degree {n}"

    def total_rank(self) -> int:
        return sum(row["rank"] for row in self.ranks.values())


def mu_map(X: OverBase) -> MuResult:
    """mu: X (x)_K X^op -> End_K(X), a(x)b -> (x -> (-1)^{|b||x|} a x b)."""
    X.check_free()
    T = tensor_over(X, opposite_over(X))
    End = end_over(module_of(X))
    K = X.K
    F = X.field
    r = X.rank
    els = X.elements
    cols = {}
    for i in range(r):
        for j in range(r):
            vals = []
            for k in range(r):
                s = F.sign(els[j].degree * els[k].degree)
                vals.append(X.coords(els[i] * els[k] * els[j] * s))
            cols[(i, j)] = vals
    names = {}
    for rho in End.K.names:
        for i in range(r):
            for j in range(r):
                names[(rho, i, j)] = _pair(End, rho, i, j)
    images = {}
    for (rho, i, j), tname in T.tensor_data.names.items():
        acc = End.A.zero()
        for k, coeffs in enumerate(cols[(i, j)]):
            for m, c in enumerate(coeffs):
                if c:
                    acc = acc + _spread(End.A, K.gen(rho) * c, names, m, k)
        images[tname] = acc
    mu = GradedLinearMap(T.A, End.A, 0, images, name="mu")
    mult, _ = mu.is_multiplicative()
    dg = all(mu.apply(T.carrier.apply(T.A.gen(b))) == End.carrier.apply(images[b]) for b in T.A.names)
    return MuResult(
        map=mu,
        is_iso=mu.is_bijective(),
        is_dg_map=dg and mult,
        multiplicative=mult,
        ranks=mu.rank_table(),
        defect=mu.first_defect(),
        source=T,
        target=End,
    )


def _pair(End: OverBase, rho, i, j) -> str:
    M = End.module
    core = f"E[{M.gens[i][0]},{M.gens[j][0]}]"
    return core if rho == End.K.one_name else f"{rho}·{core}"


# --------------------------------------------------------------------------
# twisted polynomial quotients and the acyclic decomposition
# --------------------------------------------------------------------------


@dataclass
class TwistedQuotient:
    """R[T;D]/(T^2 - y2) on the core R + T R."""

    algebra: GradedAlgebra
    R: GradedAlgebra
    plain: dict  # R core -> quotient core
    twisted: dict  # R core -> quotient core of T*b

    def lift(self, x: Element, twisted: bool = False) -> Element:
        names = self.twisted if twisted else self.plain
        return Element(self.algebra, {(names[b], k): c for (b, k), c in x.terms.items()})


def twisted_poly_quotient(R: GradedAlgebra, D: dict, y2: Element, t_name: str = "T") -> TwistedQuotient:
    """Ta = (-1)^{|a|} aT + D(a) and T^2 = y2, with |T| = -1."""
    F = R.field
    while any(n == t_name or n.startswith(t_name + "·") for n in R.names):
        t_name += "'"
    plain = {b: b for b in R.names}
    twisted = {b: (t_name if b == R.one_name else f"{t_name}·{b}") for b in R.names}
    basis = [(b, R.deg[b]) for b in R.names] + [(twisted[b], R.deg[b] - 1) for b in R.names]
    _unique_names([b for b, _ in basis])
    Dm = {b: (D.get(b) or R.zero()).rebind(R) for b in R.names}
    y2 = y2.rebind(R)
    for b, v in Dm.items():
        for key in v.terms:
            if R.key_degree(key) != R.deg[b] + 1:
                raise ValidationError("degree", f"D({b}) is not of degree {R.deg[b] + 1}", b)
    if y2 and y2.degrees() != {-2}:
        raise ValidationError("degree", "y2 must have degree -2")
    stub = GradedAlgebra(GradedPresentation(F, basis, {}, one="", unit_degree=R.unit_degree))

    def P(x):
        return Element(stub, {(plain[b], k): c for (b, k), c in x.terms.items()})

    def Tw(x):
        return Element(stub, {(twisted[b], k): c for (b, k), c in x.terms.items()})

    mul = {}
    for b1, b2 in itertools.product(R.names, repeat=2):
        x1, x2 = R.gen(b1), R.gen(b2)
        s1 = F.sign(R.deg[b1])
        entries = {
            (plain[b1], plain[b2]): P(x1 * x2),
            (plain[b1], twisted[b2]): (Tw(x1 * x2) - P(Dm[b1] * x2)) * s1,
            (twisted[b1], plain[b2]): Tw(x1 * x2),
            (twisted[b1], twisted[b2]): (P(y2 * x1 * x2) - Tw(Dm[b1] * x2)) * s1,
        }
        for key, val in entries.items():
            if val:
                mul[key] = val.terms
    one = R.one()
    one_spec = R.pres.one if isinstance(R.pres.one, str) else dict(one.terms)
    pres = GradedPresentation(F, basis, mul, one=one_spec, unit_degree=R.unit_degree, name=f"{R.name or 'R'}[{t_name};D]")
    Q = validate_presentation(pres)
    return TwistedQuotient(Q, R, plain, twisted)


def quotient_differential(TQ: TwistedQuotient) -> DgAlgebra:
    """d(b + T a) = a on a quotient of the cycles algebra."""
    Q = TQ.algebra
    d = {TQ.twisted[b]: Q.gen(TQ.plain[b]) for b in TQ.R.names}
    return validate_differential(Q, d)


@dataclass
class AgrDecomposition:
    y: Element
    y_squared: Element
    D: dict
    quotient: DgAlgebra
    twisted: TwistedQuotient
    phi: GradedLinearMap
    cycles: Cycles
    checks: dict = dc_field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())


def solve_for_y(Ad: DgAlgebra):
    """Degree -1 solution of d(x) = 1 supported on the earliest basis positions."""
    A = Ad.algebra
    M = Ad.matrix(-1)
    if not M:
        return None
    sol = linalg.solve(A.field, M, A.vector(A.one(), 0))
    return None if sol is None else A.from_vector(sol, -1)


def agr_decompose(Ad: DgAlgebra, check_precondition: bool = True) -> AgrDecomposition:
    from .dg import dg_structure_report

    A = Ad.algebra
    F = A.field
    if check_precondition:
        rep = dg_structure_report(Ad, run_oracle=False)
        if rep["dg_division"].value is not True:
            raise PreconditionError(f"not a dg-division algebra ({rep['dg_division'].method})")
        if rep["dichotomy"] != "acyclic":
            raise PreconditionError(f"decomposition needs a nonzero differential (dichotomy: {rep['dichotomy']})")
    y = solve_for_y(Ad)
    if y is None:
        raise PreconditionError("no degree -1 element with d(y) = 1")
    Z = cycles(Ad)
    y2 = y * y
    if Ad.apply(y2):
        raise PreconditionError("y^2 is not a cycle")
    D = {}
    for b in Z.algebra.names:
        z = Z.include(Z.algebra.gen(b))
        Dz = y * z - (z * y) * F.sign(Z.algebra.deg[b])
        D[b] = Z.restrict(Dz)
    TQ = twisted_poly_quotient(Z.algebra, D, Z.restrict(y2))
    Qd = quotient_differential(TQ)
    images = {}
    for b in Z.algebra.names:
        z = Z.include(Z.algebra.gen(b))
        images[TQ.plain[b]] = z
        images[TQ.twisted[b]] = y * z
    phi = GradedLinearMap(TQ.algebra, A, 0, images, name="Phi")
    mult, _ = phi.is_multiplicative()
    dgc = all(phi.apply(Qd.apply(TQ.algebra.gen(b))) == Ad.apply(images[b]) for b in TQ.algebra.names)
    checks = {
        "d(y) = 1": Ad.apply(y) == A.one(),
        "y^2 cycle": True,
        "Phi bijective": phi.is_bijective(),
        "Phi multiplicative": mult,
        "Phi commutes with d": dgc,
    }
    return AgrDecomposition(y, Z.restrict(y2), D, Qd, TQ, phi, Z, checks)


# --------------------------------------------------------------------------
# cycles over the cycles of the base, induction and comparison maps
# --------------------------------------------------------------------------


def _greedy_basis(K: GradedAlgebra, A: GradedAlgebra, nu_apply, candidates):
    """Homogeneous elements whose K-span is free, chosen in candidate order."""
    chosen = []
    for lab, c in candidates:
        if c.is_zero():
            continue
        n = c.degree
        vecs = []
        for _, e in chosen:
            for key in K.component(n - e.degree):
                vecs.append(A.vector(nu_apply(Element(K, {key: K.field(1)})) * e, n))
        v = A.vector(c, n)
        if not linalg.in_span(A.field, vecs, v):
            chosen.append((lab, c))
    return chosen


def cycles_over(X: OverBase) -> OverBase:
    """ker(d_A) as a free algebra over ker(d_K), basis seeded with 1."""
    ZK = cycles(X.base)
    ZA = cycles(X.carrier)
    nu = {}
    for z in ZK.algebra.names:
        img = X.nu_apply(ZK.include(ZK.algebra.gen(z)))
        nu[z] = ZA.restrict(img)
    ZAa = ZA.algebra

    def nu_apply(k):
        out = ZAa.zero()
        for (b, s), c in k.terms.items():
            out = out + nu[b].shift(s) * c if s else out + nu[b] * c
        return out

    cands = [("1", ZAa.one())] + [(b, ZAa.gen(b)) for b in ZAa.names]
    basis = _greedy_basis(ZK.algebra, ZAa, nu_apply, cands)
    Y = OverBase(zero_differential(ZK.algebra), zero_differential(ZAa), nu, basis, name=f"ker d of {X.name}")
    Y.check_free()
    Y.cycles_data = (ZK, ZA, X)
    return Y


@dataclass
class InducedResult:
    algebra: OverBase
    tensor: OverBase
    alpha: GradedLinearMap | None = None
    alpha_is_dg_iso: bool | None = None
    alpha_checks: dict = dc_field(default_factory=dict)


def base_over_cycles(Kd: DgAlgebra) -> OverBase:
    """K as a free algebra over ker(d_K)."""
    ZK = cycles(Kd)
    K = Kd.algebra
    nu = {z: ZK.include(ZK.algebra.gen(z)) for z in ZK.algebra.names}
    X0 = OverBase(zero_differential(ZK.algebra), Kd, nu, [])
    cands = [("1", K.one())] + [(b, K.gen(b)) for b in K.names]
    X0.basis = _greedy_basis(ZK.algebra, K, X0.nu_apply, cands)
    X0.check_free()
    X0.cycles_obj = ZK
    return X0


def induce_from_cycles(C: OverBase, Kd: DgAlgebra, original: OverBase | None = None) -> InducedResult:
    """C (x)_{ker d_K} K over K with differential id (x) d_K; optional alpha check."""
    Kz = base_over_cycles(Kd)
    if not same_table(C.K, Kz.K):
        raise BaseMismatch("C must be an algebra over the cycles of the base")
    P = tensor_over(C, Kz)
    td = P.tensor_data
    K = Kd.algebra
    nu = {k: td.pure(C.A.one(), K.gen(k)) for k in K.names}
    basis = [(lab, td.pure(e, K.one())) for lab, e in C.basis]
    X = OverBase(Kd, P.carrier, nu, basis, name=f"{C.name}⊗K")
    X.check_free()
    X.tensor_data = td
    res = InducedResult(X, P)
    if original is not None:
        alpha = alpha_map(C, Kz, P, original)
        mult, _ = alpha.is_multiplicative()
        dgc = all(alpha.apply(P.carrier.apply(P.A.gen(b))) == original.carrier.apply(alpha.images[b]) for b in P.A.names)
        res.alpha = alpha
        res.alpha_checks = {"bijective": alpha.is_bijective(), "multiplicative": mult, "commutes with d": dgc}
        res.alpha_is_dg_iso = all(res.alpha_checks.values())
    return res


def alpha_map(C: OverBase, Kz: OverBase, P: OverBase, A: OverBase) -> GradedLinearMap:
    """a (x) x -> a x from ker(d_A) (x)_{ker d_K} K to A."""
    ZK, ZA, _ = C.cycles_data
    images = {}
    for (rho, i, j), nm in P.tensor_data.names.items():
        z = A.nu_apply(ZK.include(ZK.algebra.gen(rho)))
        a = ZA.include(C.elements[i])
        x = A.nu_apply(Kz.elements[j])
        images[nm] = z * a * x
    return GradedLinearMap(P.A, A.A, 0, images, name="alpha")


def cycles_tensor_comparison(X: OverBase, Y: OverBase) -> dict:
    """Compare ker d(X (x) Y) with ker d(X) (x) ker d(Y) through z (x) w -> z (x) w."""
    T = tensor_over(X, Y)
    CX, CY = cycles_over(X), cycles_over(Y)
    P = tensor_over(CX, CY)
    ZT = cycles(T.carrier)
    ZK, ZX, _ = CX.cycles_data
    _, ZY, _ = CY.cycles_data
    td = T.tensor_data
    images = {}
    for (rho, i, j), nm in P.tensor_data.names.items():
        z = T.nu_apply(ZK.include(ZK.algebra.gen(rho)))
        w = td.pure(ZX.include(CX.elements[i]), ZY.include(CY.elements[j]))
        images[nm] = ZT.restrict(z * w)
    phi = GradedLinearMap(P.A, ZT.algebra, 0, images, name="phi")
    mult, wit = phi.is_multiplicative()
    return {
        "tensor": T,
        "cycles_tensor": P,
        "phi": phi,
        "bijective": phi.is_bijective(),
        "multiplicative": mult,
        "witness": wit,
        "ranks": phi.rank_table(),
    }
