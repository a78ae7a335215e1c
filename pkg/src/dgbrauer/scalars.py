"""Exact scalar fields: the rationals and prime fields F_p.

Rational scalars are reduced :class:`fractions.Fraction` values, stored as
plain ``int`` when integral (equal and hash-equal to the Fraction, much
cheaper to multiply); residues mod p are ``int`` values in ``[0, p)``.  A :class:`Field` knows how to bring a raw
value into canonical form and back out as a string.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["Field", "QQ", "GF", "FieldMismatch", "scalar_arith"]

_MAX_CHAR = 2**31


class FieldMismatch(ValueError):
    """Raised when scalars or algebras over different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _norm(x):
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x


class Field:
    """A prime field (``characteristic > 0``) or the rationals (``0``)."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not (_is_prime(characteristic) and characteristic <= _MAX_CHAR):
            raise ValueError(f"characteristic must be 0 or a prime <= 2^31, got {characteristic}")
        self.characteristic = characteristic

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def label(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"

    @classmethod
    def from_label(cls, label: str) -> "Field":
        label = label.strip()
        if label in ("Q", "QQ"):
            return QQ
        for prefix in ("Fp:", "F", "GF"):
            if label.startswith(prefix):
                rest = label[len(prefix):].strip("()")
                if rest.isdigit():
                    return cls(int(rest))
        raise ValueError(f"unknown field label {label!r} (expected Q or Fp:p)")

    # -- element handling -------------------------------------------------
    def __call__(self, x) -> Fraction | int:
        """Canonical form of ``x`` (an int, Fraction or serialized string)."""
        if isinstance(x, str):
            return self.parse(x)
        p = self.characteristic
        if p == 0:
            if type(x) is int:
                return x
            return _norm(Fraction(x))
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, p)) % p
        return int(x) % p

    def parse(self, s: str):
        s = s.strip()
        if self.characteristic == 0:
            return _norm(Fraction(s))
        if "/" in s:
            num, den = s.split("/")
            return self(Fraction(int(num), int(den)))
        return int(s) % self.characteristic

    def format(self, x) -> str:
        if self.characteristic == 0:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.characteristic)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def add(self, x, y):
        s = x + y
        return s % self.characteristic if self.characteristic else _norm(s)

    def sub(self, x, y):
        s = x - y
        return s % self.characteristic if self.characteristic else _norm(s)

    def mul(self, x, y):
        s = x * y
        return s % self.characteristic if self.characteristic else _norm(s)

    def neg(self, x):
        return (-x) % self.characteristic if self.characteristic else _norm(-x)

    def normalize(self, x):
        """Canonical form of a value already in the field's number type."""
        return x % self.characteristic if self.characteristic else _norm(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(int(x), -1, self.characteristic)
        return _norm(1 / Fraction(x))

    def sign(self, exponent: int):
        """(-1)**exponent as a field element."""
        return self.one() if exponent % 2 == 0 else self.neg(self.one())

    def elements(self):
        """Enumerate a finite field."""
        if not self.characteristic:
            raise ValueError("cannot enumerate the rationals")
        return range(self.characteristic)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def scalar_arith(op: str, field: Field, x, y=None):
    """Apply ``op`` in {add, mul, neg, inv} to canonical scalars of ``field``.

    Operands must already be canonical members of ``field``; a residue out of
    range or a proper fraction handed to a prime field raises FieldMismatch.
    """
    x = _member(field, x)
    if op in ("add", "mul"):
        if y is None:
            raise ValueError(f"{op} needs two operands")
        y = _member(field, y)
        return field.add(x, y) if op == "add" else field.mul(x, y)
    if op == "neg":
        return field.neg(x)
    if op == "inv":
        return field.inv(x)
    raise ValueError(f"unknown scalar operation {op!r}")


def _member(field: Field, v):
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise FieldMismatch(f"{v!r} is not a scalar of {field.label}")
    if field.characteristic:
        if not isinstance(v, int) or not 0 <= v < field.characteristic:
            raise FieldMismatch(f"{v!r} is not a canonical residue of {field.label}")
        return v
    return field(v)
