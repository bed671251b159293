"""Exact ground fields: the rationals and prime fields F_p.

Every scalar in the package is either a ``fractions.Fraction`` (over Q) or a
plain ``int`` reduced mod p (over F_p).  A field object performs all
arithmetic; values never carry their field, so mixing fields is guarded at
the container level (matrices, complexes, categories all hold a field and
refuse to combine with a different one).
"""

from __future__ import annotations

from fractions import Fraction


class FieldMismatchError(Exception):
    """Two containers over different ground fields were combined."""


class RationalField:
    """The field Q, scalars are Fraction instances."""

    char = 0
    name = "Q"

    def of(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


class PrimeField:
    """The field F_p for a prime p, scalars are ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"F{p}"

    def of(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (value.numerator * pow(den, -1, self.p)) % self.p
        if isinstance(value, str):
            return self.of(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def format(self, a) -> str:
        return str(a % self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


QQ = RationalField()


def field_by_name(name: str):
    """Parse a field spec such as ``"Q"``, ``"F5"`` or ``"Fp:5"``."""
    name = name.strip()
    if name in ("Q", "QQ", "q"):
        return QQ
    if name.startswith("Fp:"):
        return PrimeField(int(name[3:]))
    if name.startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field spec {name!r}")


def check_same_field(a, b):
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a!r} vs {b!r}")
