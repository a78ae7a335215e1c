"""Z-graded algebras given by homogeneous structure constants.

An algebra is a finite *core* basis, each element of integer degree, with a
multiplication table on core pairs.  Optionally the algebra is Laurent
periodic: a formal central unit ``u`` of even nonzero degree ``p`` is
adjoined and every table value is a sum of ``c * b * u**k``.  The algebra is
then the free ``F[u, u^-1]``-module on the core, so each homogeneous
component is finite dimensional and determined by its degree modulo ``p``.

Elements are sparse maps ``(core name, u-power) -> coefficient``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from . import linalg
from .scalars import Field, FieldMismatch

__all__ = [
    "ValidationError",
    "WindowError",
    "PreconditionError",
    "GradedPresentation",
    "GradedAlgebra",
    "Element",
    "Verdict",
    "GradedSubspace",
    "NormCertificate",
    "validate_presentation",
    "multiply",
    "opposite",
    "graded_center",
    "graded_ideal",
    "structure_report",
    "same_table",
    "relabeled_equal",
    "graded_division",
    "graded_simple",
    "homogeneous_enumeration_size",
    "GradedLinearMap",
]

ENUMERATION_LIMIT = 60000


class ValidationError(ValueError):
    """A presentation or differential failed a structural check.

    ``kind`` is a short machine-readable tag (``degree``, ``associativity``,
    ``unit``, ``d-squared``, ``leibniz``, ...); ``witness`` names the offending
    basis elements or table entry.
    """

    def __init__(self, kind: str, message: str, witness=None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


class WindowError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# --------------------------------------------------------------------------
# raw presentations
# --------------------------------------------------------------------------


@dataclass
class GradedPresentation:
    """Unvalidated input: ``mul`` maps ``(left, right)`` to ``{(name, k): c}``.

    ``one`` is either a core name or a term map for the unit element.
    """

    field: Field
    basis: list
    mul: dict
    one: object = "1"
    unit_degree: int | None = None
    certificates: tuple = ()
    name: str = ""


class Element:
    """Finite sum of ``coefficient * core * u**k`` inside a fixed algebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "GradedAlgebra", terms=None):
        self.alg = alg
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if other.alg.field != self.alg.field:
            raise FieldMismatch("elements over different fields")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        F = self.alg.field
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = F.add(t.get(k, F(0)), v)
        return Element(self.alg, t)

    def __neg__(self):
        F = self.alg.field
        return Element(self.alg, {k: F.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.alg.mul(self, other)
        F = self.alg.field
        c = F(other)
        return Element(self.alg, {k: F.mul(v, c) for k, v in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, Element):
            return NotImplemented
        return self.__mul__(other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # grading --------------------------------------------------------------
    def degrees(self) -> set:
        return {self.alg.key_degree(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"element {self!r} is not homogeneous (or is zero)")
        return next(iter(ds))

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for k, v in self.terms.items():
            parts.setdefault(self.alg.key_degree(k), {})[k] = v
        return {d: Element(self.alg, t) for d, t in sorted(parts.items())}

    def shift(self, k: int) -> "Element":
        """Multiply by ``u**k``."""
        if k == 0:
            return self
        if self.alg.unit_degree is None:
            raise ValueError("algebra has no periodic unit")
        return Element(self.alg, {(b, e + k): v for (b, e), v in self.terms.items()})

    def rebind(self, alg: "GradedAlgebra") -> "Element":
        return Element(alg, self.terms)

    def sorted_terms(self):
        idx = self.alg.index
        return sorted(self.terms.items(), key=lambda kv: (idx[kv[0][0]], kv[0][1]))

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.alg.field
        parts = []
        for (b, k), c in self.sorted_terms():
            s = F.format(c)
            if k == 0:
                mono = b
            else:
                mono = f"u^{k}" if b == self.alg.one_name else f"{b}*u^{k}"
            parts.append(mono if s == "1" else f"{s}*{mono}")
        return " + ".join(parts)


def _sign(F: Field, e: int):
    return F.sign(e)


class GradedAlgebra:
    """A validated graded algebra.  Build through :func:`validate_presentation`."""

    def __init__(self, pres: GradedPresentation):
        self.pres = pres
        self.field = pres.field
        self.names = [b for b, _ in pres.basis]
        self.deg = {b: int(d) for b, d in pres.basis}
        self.index = {b: i for i, b in enumerate(self.names)}
        self.unit_degree = pres.unit_degree
        self.certificates = tuple(pres.certificates)
        self.name = pres.name
        F = self.field
        self.table = {}
        for (l, r), out in pres.mul.items():
            t = {k: F(v) for k, v in out.items() if F(v) != 0}
            if t:
                self.table[(l, r)] = t
        if isinstance(pres.one, str):
            self._one_terms = {(pres.one, 0): F(1)}
        else:
            self._one_terms = {k: F(v) for k, v in dict(pres.one).items() if F(v) != 0}
        self._comp_cache: dict = {}

    # --- basic structure -----------------------------------------------------
    @property
    def periodic(self) -> bool:
        return self.unit_degree is not None

    @property
    def period(self) -> int | None:
        return abs(self.unit_degree) if self.unit_degree else None

    @property
    def dim(self) -> int:
        """Size of the core basis (rank over F[u, u^-1] when periodic)."""
        return len(self.names)

    @property
    def one_name(self) -> str | None:
        return self.pres.one if isinstance(self.pres.one, str) else None

    def key_degree(self, key) -> int:
        b, k = key
        return self.deg[b] + (self.unit_degree or 0) * k

    def one(self) -> Element:
        return Element(self, self._one_terms)

    def zero(self) -> Element:
        return Element(self, {})

    def gen(self, name: str, k: int = 0) -> Element:
        if name not in self.deg:
            raise KeyError(f"foreign basis name {name!r}")
        return Element(self, {(name, k): self.field(1)})

    def u(self, k: int = 1) -> Element:
        return self.one().shift(k)

    def elem(self, terms) -> Element:
        """Element from ``{name: c}`` or ``{(name, k): c}``."""
        F = self.field
        out = {}
        for key, c in dict(terms).items():
            if isinstance(key, str):
                key = (key, 0)
            if key[0] not in self.deg:
                raise KeyError(f"foreign basis name {key[0]!r}")
            out[key] = F.add(out.get(key, F(0)), F(c))
        return Element(self, out)

    def mul(self, x: Element, y: Element) -> Element:
        F = self.field
        if x.alg.field != F or y.alg.field != F:
            raise FieldMismatch("multiplying elements over a different field")
        out: dict = {}
        table = self.table
        deg = self.deg
        zero = F(0)
        for (b1, k1), c1 in x.terms.items():
            for (b2, k2), c2 in y.terms.items():
                prod = table.get((b1, b2))
                if prod is None:
                    if b1 not in deg or b2 not in deg:
                        raise KeyError(f"foreign basis name in product {b1!r}*{b2!r}")
                    continue
                c12 = c1 * c2
                s = k1 + k2
                for (b, k), c in prod.items():
                    key = (b, k + s)
                    out[key] = out.get(key, zero) + c12 * c
        norm = F.normalize
        return Element(self, {k: norm(v) for k, v in out.items()})

    def sign(self, e: int):
        return self.field.sign(e)

    # --- components ----------------------------------------------------------
    def classes(self) -> list:
        """Representative degrees: one per residue class, or the support."""
        if self.periodic:
            p = self.unit_degree
            return list(range(0, p, 1 if p > 0 else -1))
        return sorted(set(self.deg.values()))

    def class_of(self, n: int):
        """``(rep, k)`` with ``n = rep + unit_degree * k``."""
        if not self.periodic:
            return n, 0
        p = self.unit_degree
        if p > 0:
            r = n % p
        else:
            r = -((-n) % (-p))
        return r, (n - r) // p

    def component(self, n: int) -> list:
        c = self._comp_cache.get(n)
        if c is not None:
            return c
        if self.periodic:
            p = self.unit_degree
            c = [(b, (n - self.deg[b]) // p) for b in self.names if (n - self.deg[b]) % p == 0]
        else:
            c = [(b, 0) for b in self.names if self.deg[b] == n]
        self._comp_cache[n] = c
        return c

    def vector(self, x: Element, n: int) -> list:
        F = self.field
        return [x.terms.get(key, F(0)) for key in self.component(n)]

    def from_vector(self, v, n: int) -> Element:
        return Element(self, dict(zip(self.component(n), v)))

    def component_elements(self, n: int) -> list:
        return [Element(self, {key: self.field(1)}) for key in self.component(n)]

    def to_class(self, x: Element):
        """Shift a homogeneous element into its class representative degree."""
        rep, k = self.class_of(x.degree)
        return (x.shift(-k) if k else x), rep

    def support_window(self):
        ds = sorted(set(self.deg.values()))
        return (ds[0], ds[-1]) if ds else (0, 0)

    def degrees_in(self, window) -> list:
        lo, hi = window
        return list(range(lo, hi + 1))

    def check_window(self, window):
        if window is None:
            return self.default_window()
        lo, hi = window
        if hi < lo:
            raise WindowError(f"empty window {window}")
        if self.periodic and hi - lo + 1 < self.period:
            raise WindowError(f"window {window} shorter than the period {self.period}")
        return (lo, hi)

    def default_window(self):
        if self.periodic:
            return (-8, 8) if self.period <= 17 else (-self.period, self.period)
        return self.support_window()

    # --- linear maps between components --------------------------------------
    def left_mult_matrix(self, a: Element, n: int):
        """Matrix of x -> a*x from A_n into A_{n+|a|} (columns = A_n basis)."""
        m = n + a.degree
        cols = [self.vector(a * e, m) for e in self.component_elements(n)]
        return linalg.transpose(cols) if cols and self.component(m) else [[] for _ in self.component(m)]

    def inverse(self, x: Element):
        """Two-sided homogeneous inverse of ``x`` or None."""
        if x.is_zero():
            return None
        n = x.degree
        cols = [self.vector(x * e, 0) for e in self.component_elements(-n)]
        if not cols:
            return None
        M = linalg.transpose(cols)
        y = linalg.solve(self.field, M, self.vector(self.one(), 0))
        if y is None:
            return None
        yy = self.from_vector(y, -n)
        if yy * x != self.one():
            return None
        return yy

    def __repr__(self):
        per = f", u-degree {self.unit_degree}" if self.periodic else ""
        return f"GradedAlgebra({self.name or 'unnamed'}, {self.field!r}, dim {self.dim}{per})"


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def _term_map(alg, out):
    return Element(alg, out)


def validate_presentation(raw: GradedPresentation, check_associativity: bool = True) -> GradedAlgebra:
    """Check degree additivity, the unit laws and associativity; return the algebra."""
    names = [b for b, _ in raw.basis]
    if len(set(names)) != len(names):
        raise ValidationError("basis", "duplicate core basis names")
    if raw.unit_degree is not None:
        if raw.unit_degree == 0 or raw.unit_degree % 2:
            raise ValidationError("unit", f"periodic unit degree must be even and nonzero, got {raw.unit_degree}")
    A = GradedAlgebra(raw)
    for (l, r), out in A.table.items():
        for nm in (l, r):
            if nm not in A.deg:
                raise ValidationError("basis", f"table entry {l}*{r} uses unknown name {nm!r}", (l, r))
        for (b, k) in out:
            if b not in A.deg:
                raise ValidationError("basis", f"table entry {l}*{r} produces unknown name {b!r}", (l, r))
            if k != 0 and not A.periodic:
                raise ValidationError(
                    "degree", f"table entry {l}*{r} has u-power {k} but no periodic unit", (l, r, b, k)
                )
            got = A.key_degree((b, k))
            want = A.deg[l] + A.deg[r]
            if got != want:
                raise ValidationError(
                    "degree",
                    f"degree violation in {l}*{r}: term {b}*u^{k} has degree {got}, expected {want}",
                    (l, r, b, k),
                )
    one = A.one()
    if one.is_zero():
        raise ValidationError("unit", "unit element is zero")
    for key in one.terms:
        if key[0] not in A.deg:
            raise ValidationError("unit", f"unit uses unknown name {key[0]!r}")
    if one.degrees() != {0}:
        raise ValidationError("unit", "unit element must be homogeneous of degree 0")
    for b in A.names:
        g = A.gen(b)
        if one * g != g or g * one != g:
            raise ValidationError("unit", f"unit law fails on {b!r}", b)
    if check_associativity:
        gens = [A.gen(b) for b in A.names]
        left = {}
        for i, x in enumerate(gens):
            for j, y in enumerate(gens):
                left[i, j] = x * y
        for i, x in enumerate(gens):
            for j, y in enumerate(gens):
                xy = left[i, j]
                for k, z in enumerate(gens):
                    if xy * z != x * left[j, k]:
                        raise ValidationError(
                            "associativity",
                            f"non-associative triple ({A.names[i]}, {A.names[j]}, {A.names[k]})",
                            (A.names[i], A.names[j], A.names[k]),
                        )
    return A


def multiply(A: GradedAlgebra, x: Element, y: Element) -> Element:
    return A.mul(x, y)


def same_table(A: GradedAlgebra, B: GradedAlgebra) -> bool:
    """Table identity: same field, core, degrees, unit degree, table and unit."""
    return (
        A.field == B.field
        and A.names == B.names
        and A.deg == B.deg
        and A.unit_degree == B.unit_degree
        and A.table == B.table
        and A._one_terms == B._one_terms
    )


def relabeled_equal(A: GradedAlgebra, B: GradedAlgebra, mapping: dict | None = None) -> bool:
    """Equal structure constants after renaming A's core basis into B's.

    ``mapping`` defaults to matching the two core bases position by position.
    """
    if A.field != B.field or len(A.names) != len(B.names) or A.unit_degree != B.unit_degree:
        return False
    mapping = mapping or dict(zip(A.names, B.names))
    if any(A.deg[a] != B.deg[mapping[a]] for a in A.names):
        return False

    def ren(terms):
        return {(mapping[b], k): c for (b, k), c in terms.items()}

    table = {(mapping[l], mapping[r]): ren(t) for (l, r), t in A.table.items()}
    return table == B.table and ren(A.one().terms) == B.one().terms


def opposite(A: GradedAlgebra) -> GradedAlgebra:
    """Opposite algebra with b *_op a = (-1)^{|a||b|} a*b."""
    F = A.field
    mul = {}
    for (l, r), out in A.table.items():
        s = F.sign(A.deg[l] * A.deg[r])
        mul[(r, l)] = {k: F.mul(s, v) for k, v in out.items()}
    pres = GradedPresentation(
        field=F,
        basis=list(A.pres.basis),
        mul=mul,
        one=A.pres.one,
        unit_degree=A.unit_degree,
        name=(A.name + "^op") if A.name else "",
    )
    return validate_presentation(pres)


# --------------------------------------------------------------------------
# subspaces, centers and ideals
# --------------------------------------------------------------------------


@dataclass
class GradedSubspace:
    """Per-degree RREF bases (coordinates in ``algebra.component(n)``)."""

    algebra: GradedAlgebra
    window: tuple
    per_degree: dict
    periodic: bool = False
    kind: str = ""

    def dim(self, n: int) -> int:
        if self.periodic:
            n = self.algebra.class_of(n)[0]
        return len(self.per_degree.get(n, []))

    def dims(self) -> dict:
        lo, hi = self.window
        return {n: self.dim(n) for n in range(lo, hi + 1)}

    def elements(self, n: int) -> list:
        rep = self.algebra.class_of(n)[0] if self.periodic else n
        return [self.algebra.from_vector(v, n) for v in self.per_degree.get(rep, [])]

    def contains(self, x: Element) -> bool:
        A = self.algebra
        for n, part in x.homogeneous_parts().items():
            rep = A.class_of(n)[0] if self.periodic else n
            if not linalg.in_span(A.field, self.per_degree.get(rep, []), A.vector(part, n)):
                return False
        return True

    def is_whole(self) -> bool:
        lo, hi = self.window
        return all(self.dim(n) == len(self.algebra.component(n)) for n in range(lo, hi + 1))

    def is_zero(self) -> bool:
        return all(not v for v in self.per_degree.values())


def _span_per_class(A: GradedAlgebra, vectors_by_class: dict) -> dict:
    return {n: linalg.row_space_basis(A.field, vs) for n, vs in vectors_by_class.items()}


def graded_center(A: GradedAlgebra, window=None) -> GradedSubspace:
    """Per-degree solution space of a*x = (-1)^{|a||x|} x*a over all core a."""
    window = A.check_window(window)
    F = A.field
    degs = A.classes() if A.periodic else [n for n in A.degrees_in(window) if A.component(n)]
    per = {}
    gens = [A.gen(b) for b in A.names]
    for n in degs:
        comp = A.component_elements(n)
        if not comp:
            continue
        rows = []
        for a in gens:
            m = n + a.degree
            s = F.sign(a.degree * n)
            cols = [A.vector(a * e - (e * a) * s, m) for e in comp]
            rows.extend(linalg.transpose(cols) if A.component(m) else [])
        ns = linalg.nullspace(F, rows, len(comp)) if rows else linalg.identity(F, len(comp))
        per[n] = linalg.row_space_basis(F, ns) if ns else []
    Z = GradedSubspace(A, window, per, periodic=A.periodic, kind="center")
    return Z


def _saturate(A: GradedAlgebra, seeds: Iterable[Element], ops, window=None) -> dict:
    """Smallest per-class subspace containing ``seeds`` and stable under ``ops``."""
    F = A.field
    basis: dict = {}
    queue = []

    def push(x: Element):
        for n, part in x.homogeneous_parts().items():
            if A.periodic:
                part, n = A.to_class(part)
            elif window is not None and not (window[0] <= n <= window[1]):
                continue
            if not A.component(n):
                continue
            v = A.vector(part, n)
            cur = basis.get(n, [])
            if linalg.in_span(F, cur, v):
                continue
            basis[n] = linalg.row_space_basis(F, cur + [v])
            queue.append(part)

    for s in seeds:
        push(s)
    while queue:
        x = queue.pop()
        for op in ops:
            push(op(x))
    return basis


def _ideal_ops(A: GradedAlgebra, side: str):
    gens = [A.gen(b) for b in A.names]
    ops = []
    if side in ("left", "twosided"):
        ops += [(lambda x, g=g: g * x) for g in gens]
    if side in ("right", "twosided"):
        ops += [(lambda x, g=g: x * g) for g in gens]
    if side not in ("left", "right", "twosided"):
        raise ValueError(f"side must be left, right or twosided, got {side!r}")
    return ops


def graded_ideal(A: GradedAlgebra, gens, side: str = "twosided", window=None, extra_ops=()) -> GradedSubspace:
    """Graded one- or two-sided ideal generated by homogeneous ``gens``."""
    window = A.check_window(window)
    for g in gens:
        if not g.is_zero() and not g.is_homogeneous():
            raise ValueError(f"non-homogeneous generator {g!r}")
    ops = _ideal_ops(A, side) + list(extra_ops)
    per = _saturate(A, gens, ops, None if A.periodic else window)
    return GradedSubspace(A, window, per, periodic=A.periodic, kind=f"{side} ideal")


# --------------------------------------------------------------------------
# verdicts and structure report
# --------------------------------------------------------------------------


@dataclass
class Verdict:
    """Three-valued outcome: ``value`` is True, False or None (unknown)."""

    value: bool | None
    method: str = ""
    witness: object = None

    def to_json(self):
        v = "unknown" if self.value is None else self.value
        out = {"value": v, "method": self.method}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out

    @property
    def known(self) -> bool:
        return self.value is not None


def _jsonable(w):
    if isinstance(w, Element):
        return repr(w)
    if isinstance(w, (list, tuple)):
        return [_jsonable(x) for x in w]
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    if isinstance(w, (bool, int, str)) or w is None:
        return w
    return str(w)


@dataclass(frozen=True)
class NormCertificate:
    """Anisotropic norm witness: x*conj(x) = Q(x)*1 with Q positive definite.

    ``conj`` maps core names to elements; the algebra must sit in degree 0.
    """

    conj: dict = dc_field(default_factory=dict)

    def apply(self, A: GradedAlgebra, x: Element) -> Element:
        out = A.zero()
        for (b, k), c in x.terms.items():
            out = out + self.conj[b].rebind(A).shift(k) * c
        return out

    def gram(self, A: GradedAlgebra):
        """Gram matrix of Q in the core basis, or None if x*conj(x) is not scalar."""
        F = A.field
        one = A.one()
        onev = A.vector(one, 0)
        piv = next(i for i, c in enumerate(onev) if c != 0)
        n = len(A.names)
        G = [[F(0)] * n for _ in range(n)]
        gens = [A.gen(b) for b in A.names]
        cj = [self.apply(A, g) for g in gens]
        for i in range(n):
            for j in range(i, n):
                s = gens[i] * cj[j] + (gens[j] * cj[i] if i != j else A.zero())
                v = A.vector(s, 0)
                c = F(v[piv]) * F.inv(onev[piv])
                if s != one * c:
                    return None
                if i == j:
                    G[i][i] = c
                else:
                    half = F.mul(c, F.inv(2))
                    G[i][j] = G[j][i] = half
        return G

    def verify(self, A: GradedAlgebra) -> bool:
        if A.field.characteristic != 0 or A.periodic or set(A.deg.values()) != {0}:
            return False
        if set(self.conj) != set(A.names):
            return False
        G = self.gram(A)
        if G is None:
            return False
        # Sylvester: all leading principal minors positive.
        from fractions import Fraction

        n = len(G)
        for k in range(1, n + 1):
            sub = [[Fraction(G[i][j]) for j in range(k)] for i in range(k)]
            if _det(sub) <= 0:
                return False
        return True


def _det(M):
    from fractions import Fraction

    M = [list(r) for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def _is_graded_commutative(A: GradedAlgebra):
    F = A.field
    for a, b in itertools.product(A.names, repeat=2):
        x, y = A.gen(a), A.gen(b)
        if x * y != (y * x) * F.sign(A.deg[a] * A.deg[b]):
            return False, (a, b)
    return True, None


def _is_commutative(A: GradedAlgebra):
    for a, b in itertools.combinations(A.names, 2):
        x, y = A.gen(a), A.gen(b)
        if x * y != y * x:
            return False, (a, b)
    return True, None


def _projective_vectors(F: Field, d: int):
    """Nonzero vectors of F^d with first nonzero coordinate 1."""
    for lead in range(d):
        for tail in itertools.product(range(F.characteristic), repeat=d - lead - 1):
            yield [0] * lead + [1] + list(tail)


def homogeneous_enumeration_size(A: GradedAlgebra, degs=None) -> int:
    p = A.field.characteristic
    degs = degs if degs is not None else A.classes()
    return sum(p ** len(A.component(n)) for n in degs)


def _nonunit_witness(A: GradedAlgebra):
    """Cheap certificate of non-division: a basis element or zero divisor that is not invertible."""
    for n in A.classes():
        for e in A.component_elements(n):
            if A.inverse(e) is None:
                return e
    gens = [A.gen(b) for b in A.names]
    for n in A.classes():
        comp = A.component(n)
        if not comp:
            continue
        for g in gens:
            m = n + g.degree
            if not A.component(m):
                return A.component_elements(n)[0]
            M = A.left_mult_matrix(g, n)
            ns = linalg.nullspace(A.field, M, len(comp))
            if ns:
                return A.from_vector(ns[0], n)
    return None


def graded_division(A: GradedAlgebra) -> Verdict:
    """Is every nonzero homogeneous element invertible?"""
    F = A.field
    w = _nonunit_witness(A)
    if w is not None:
        return Verdict(False, "non-invertible homogeneous element", w)
    if F.is_finite:
        if homogeneous_enumeration_size(A) > ENUMERATION_LIMIT:
            return Verdict(None, "enumeration bound exceeded")
        for n in A.classes():
            d = len(A.component(n))
            for v in _projective_vectors(F, d):
                x = A.from_vector([F(c) for c in v], n)
                if A.inverse(x) is None:
                    return Verdict(False, "enumeration", x)
        return Verdict(True, "enumeration of homogeneous components")
    if len(A.component(0)) == 1 and all(len(A.component(n)) <= 1 for n in A.classes()):
        # every nonzero homogeneous element is a scalar multiple of an invertible basis element
        return Verdict(True, "components at most one-dimensional over A_0 = Q")
    for cert in A.certificates:
        if isinstance(cert, NormCertificate) and cert.verify(A):
            return Verdict(True, "anisotropic norm certificate")
    w = _small_nonunit(A)
    if w is not None:
        return Verdict(False, "non-invertible element found by bounded coefficient search", w)
    return Verdict(None, "no exact decision method over Q")


def _small_nonunit(A: GradedAlgebra, bound: int = 2, max_dim: int = 4):
    """Search homogeneous elements with integer coefficients in [-bound, bound]."""
    for n in A.classes():
        d = len(A.component(n))
        if d < 2 or d > max_dim:
            continue
        for v in itertools.product(range(-bound, bound + 1), repeat=d):
            if any(v) and next(c for c in v if c) > 0:
                x = A.from_vector([A.field(c) for c in v], n)
                if A.inverse(x) is None:
                    return x
    return None


def graded_simple(A: GradedAlgebra, division: Verdict | None = None) -> Verdict:
    division = division or graded_division(A)
    if division.value:
        return Verdict(True, "graded division implies graded simple")
    F = A.field
    # principal ideals from basis elements first; each is a cheap witness search
    for n in A.classes():
        for e in A.component_elements(n):
            I = graded_ideal(A, [e], "twosided")
            if not I.is_whole():
                return Verdict(False, "proper principal twosided ideal", e)
    if F.is_finite:
        if homogeneous_enumeration_size(A) > ENUMERATION_LIMIT // 10:
            return Verdict(None, "enumeration bound exceeded")
        for n in A.classes():
            for v in _projective_vectors(F, len(A.component(n))):
                x = A.from_vector([F(c) for c in v], n)
                I = graded_ideal(A, [x], "twosided")
                if not I.is_whole():
                    return Verdict(False, "proper principal twosided ideal", x)
        return Verdict(True, "ideal saturation from every homogeneous element")
    return Verdict(None, "no exact decision method over Q")


def structure_report(A: GradedAlgebra) -> dict:
    gc, gcw = _is_graded_commutative(A)
    c, cw = _is_commutative(A)
    div = graded_division(A)
    if div.value is None:
        field_v = Verdict(False if not (gc or c) else None, div.method)
    else:
        field_v = Verdict(div.value and (gc or c), div.method)
    return {
        "graded_commutative": gc,
        "graded_commutative_witness": gcw,
        "commutative": c,
        "commutative_witness": cw,
        "graded_division": div,
        "graded_field": field_v,
        "graded_simple": graded_simple(A, div),
    }


# --------------------------------------------------------------------------
# homogeneous linear maps
# --------------------------------------------------------------------------


class GradedLinearMap:
    """Homogeneous linear map given by images of the source core basis.

    A periodic source requires the map to commute with ``u``; blocks are then
    computed per residue class.
    """

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra, degree: int, images: dict, name: str = ""):
        self.source = source
        self.target = target
        self.degree = degree
        self.images = images
        self.name = name

    def apply(self, x: Element) -> Element:
        out = self.target.zero()
        for (b, k), c in x.terms.items():
            img = self.images[b]
            out = out + (img.shift(k) if k else img) * c
        return out

    __call__ = apply

    def degrees(self) -> list:
        if self.source.periodic:
            return self.source.classes()
        src = set(self.source.deg.values())
        tgt = {n - self.degree for n in self.target.deg.values()} if not self.target.periodic else set()
        return sorted(src | tgt)

    def block(self, n: int):
        """Matrix from source component n to target component n + degree."""
        m = n + self.degree
        cols = [self.target.vector(self.apply(e), m) for e in self.source.component_elements(n)]
        return linalg.transpose(cols) if cols and self.target.component(m) else []

    def rank(self, n: int) -> int:
        B = self.block(n)
        return linalg.rank(self.target.field, B) if B else 0

    def rank_table(self) -> dict:
        out = {}
        for n in self.degrees():
            out[n] = {
                "source": len(self.source.component(n)),
                "target": len(self.target.component(n + self.degree)),
                "rank": self.rank(n),
            }
        return out

    def first_defect(self):
        """First degree where the map fails to be bijective, with the reason."""
        for n, row in self.rank_table().items():
            if row["rank"] < row["target"]:
                return n, "not surjective"
            if row["rank"] < row["source"]:
                return n, "not injective"
        return None

    def is_bijective(self) -> bool:
        return self.first_defect() is None

    def is_multiplicative(self):
        """Check f(xy) = f(x)f(y) on core pairs; returns (ok, witness pair)."""
        S = self.source
        gens = {b: S.gen(b) for b in S.names}
        for a, b in itertools.product(S.names, repeat=2):
            if self.apply(gens[a] * gens[b]) != self.images[a] * self.images[b]:
                return False, (a, b)
        if self.apply(S.one()) != self.target.one():
            return False, "unit"
        return True, None
