"""Dense exact linear algebra over a :class:`~dgbrauer.scalars.Field`.

Matrices are lists of rows.  Over Q, forward elimination is fraction free
(Bareiss) on an integer-scaled copy; the echelon form is normalized to RREF
afterwards.  Over F_p plain Gauss-Jordan is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

from .scalars import Field

__all__ = [
    "DimensionMismatch",
    "SolveReport",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "solve_report",
    "matmul",
    "matvec",
    "transpose",
    "identity",
    "inverse",
    "row_space_basis",
    "in_span",
]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SolveReport:
    rank: int
    nullspace_basis: list = dc_field(default_factory=list)
    particular_solution: list | None = None

    @property
    def consistent(self) -> bool:
        return self.particular_solution is not None


def _shape(M):
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for r in M:
        if len(r) != cols:
            raise DimensionMismatch("ragged matrix")
    return rows, cols


def _bareiss_rows(M):
    """Integer row echelon form by fraction-free elimination; returns (rows, pivots)."""
    A = []
    for row in M:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        A.append([int(Fraction(x) * den) for x in row])
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        prc = A[r][c]
        Ar = A[r]
        for i in range(r + 1, nrows):
            Ai = A[i]
            aic = Ai[c]
            if aic == 0:
                # the update reduces to scaling; keep exactness by the same formula
                for j in range(c + 1, ncols):
                    Ai[j] = (prc * Ai[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    Ai[j] = (prc * Ai[j] - aic * Ar[j]) // prev
            Ai[c] = 0
        prev = prc
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(F: Field, M):
    """Reduced row echelon form: returns ``(R, pivots)`` with only nonzero rows kept."""
    rows, cols = _shape(M)
    if rows == 0 or cols == 0:
        return [], []
    if F.characteristic == 0:
        E, pivots = _bareiss_rows(M)
        R = [[Fraction(x) for x in row] for row in E]
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            inv = 1 / R[k][c]
            R[k] = [x * inv for x in R[k]]
            for i in range(k):
                f = R[i][c]
                if f:
                    Rk = R[k]
                    R[i] = [a - f * b for a, b in zip(R[i], Rk)]
        return R, pivots
    p = F.characteristic
    A = [[int(x) % p for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        Ar = A[r]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: Field, M) -> int:
    if not M or not M[0]:
        return 0
    if F.characteristic == 0:
        return len(_bareiss_rows(M)[1])
    return len(rref(F, M)[1])


def nullspace(F: Field, M, ncols: int | None = None):
    """Basis of {x : M x = 0}; ``ncols`` is needed when M has no rows."""
    if not M:
        n = ncols or 0
        return [[F(1) if i == j else F(0) for i in range(n)] for j in range(n)]
    _, cols = _shape(M)
    R, pivots = rref(F, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F(0)] * cols
        v[f] = F(1)
        for k, c in enumerate(pivots):
            v[c] = F.neg(F(R[k][f]))
        basis.append(v)
    return basis


def solve(F: Field, M, b):
    """A particular solution of M x = b (free variables 0), or None."""
    rows, cols = _shape(M) if M else (0, 0)
    if len(b) != rows:
        raise DimensionMismatch(f"right-hand side has {len(b)} entries, matrix has {rows} rows")
    if rows == 0:
        return []
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    R, pivots = rref(F, aug)
    if pivots and pivots[-1] == cols:
        return None
    x = [F(0)] * cols
    for k, c in enumerate(pivots):
        x[c] = F(R[k][cols])
    return x


def solve_report(F: Field, M, b=None) -> SolveReport:
    """Rank, kernel basis and (when ``b`` is given) a particular solution."""
    rows, cols = _shape(M) if M else (0, 0)
    if b is not None:
        if isinstance(b[0] if b else None, list):
            if len(b) != rows:
                raise DimensionMismatch("b must have M.rows rows")
            b = [row[0] for row in b]
        elif len(b) != rows:
            raise DimensionMismatch("b must have M.rows rows")
    r = rank(F, M)
    ns = nullspace(F, M, cols)
    part = solve(F, M, b) if b is not None else None
    return SolveReport(rank=r, nullspace_basis=ns, particular_solution=part)


def matmul(F: Field, A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatch("inner dimensions differ")
    Bt = list(zip(*B)) if B else []
    return [[F(sum(a * b for a, b in zip(row, col))) for col in Bt] for row in A]


def matvec(F: Field, A, x):
    return [F(sum(a * b for a, b in zip(row, x))) for row in A]


def transpose(M):
    return [list(c) for c in zip(*M)] if M else []


def identity(F: Field, n: int):
    return [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]


def inverse(F: Field, M):
    """Inverse of a square matrix, or None if singular."""
    n = len(M)
    if n == 0:
        return []
    aug = [list(row) + e for row, e in zip(M, identity(F, n))]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [[F(x) for x in row[n:]] for row in R]


def row_space_basis(F: Field, vectors):
    """RREF basis of the span of ``vectors`` (list of equal-length lists)."""
    vectors = [v for v in vectors]
    if not vectors or not vectors[0]:
        return []
    R, _ = rref(F, vectors)
    return [[F(x) for x in row] for row in R]


def in_span(F: Field, basis, v) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(F, basis + [v]) == rank(F, basis)
