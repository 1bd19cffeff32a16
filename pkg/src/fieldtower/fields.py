"""Exact coefficient fields: prime fields, rationals, and residue extensions.

Every field is a small object exposing arithmetic on plain hashable element
values (ints for F_p, ``Fraction`` for the rationals, coefficient tuples for
residue-field extensions).  Nothing here ever rounds; division by zero and
composite moduli are rejected at the point of use.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import polys
from .errors import KernelError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class Field:
    """Abstract exact field interface over plain element values."""

    char = 0

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sample(self, rng):
        """A random element, used by property tests and CLI --random modes."""
        raise NotImplementedError

    def sample_nonzero(self, rng):
        while True:
            x = self.sample(rng)
            if x != self.zero:
                return x

    def fmt(self, a) -> str:
        return str(a)


class PrimeField(Field):
    """F_p with elements stored as canonical ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or p > 2**31:
            raise KernelError("prime modulus must be an int <= 2**31")
        if not is_prime(p):
            raise KernelError(f"modulus {p} is not prime")
        self.p = p
        self.char = p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def sample(self, rng):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F{self.p}"


class RationalField(Field):
    """Q with elements stored as ``fractions.Fraction``."""

    char = 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def sample(self, rng):
        return Fraction(rng.randint(-4, 4), rng.randint(1, 4))

    def fmt(self, a) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "Q"


class ResidueField(Field):
    """F_p[x]/(m) for a monic irreducible m: the residue field of a point.

    Elements are trimmed ascending coefficient tuples of length < deg(m).
    """

    def __init__(self, base: PrimeField, modulus):
        modulus = polys.normalize(base, modulus)
        if polys.degree(modulus) < 1:
            raise KernelError("residue modulus must have degree >= 1")
        if not polys.is_monic(base, modulus):
            raise KernelError("residue modulus must be monic")
        if not polys.is_irreducible(base, modulus):
            raise KernelError("residue modulus must be irreducible")
        self.base = base
        self.modulus = modulus
        self.degree = polys.degree(modulus)
        self.char = base.p

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return (1,)

    def from_int(self, n):
        return polys.normalize(self.base, (n % self.base.p,))

    def from_poly(self, a):
        return polys.mod(self.base, a, self.modulus)

    def gen(self):
        """The class of x, a generator of the extension."""
        return self.from_poly((0, 1))

    def add(self, a, b):
        return polys.add(self.base, a, b)

    def neg(self, a):
        return polys.neg(self.base, a)

    def mul(self, a, b):
        return polys.mod(self.base, polys.mul(self.base, a, b), self.modulus)

    def inv(self, a):
        if a == ():
            raise ZeroDivisionError("inverse of 0 in residue field")
        g, s, _ = polys.xgcd(self.base, a, self.modulus)
        if polys.degree(g) != 0:
            raise KernelError("modulus not irreducible after all")
        c = self.base.inv(g[0])
        return polys.mod(self.base, polys.scale(self.base, s, c), self.modulus)

    def coords(self, a):
        """F_p coordinates of ``a`` in the basis 1, x, ..., x^(d-1)."""
        return tuple(a[i] if i < len(a) else 0 for i in range(self.degree))

    def from_coords(self, cs):
        return polys.normalize(self.base, tuple(cs))

    def sample(self, rng):
        return polys.normalize(
            self.base, tuple(rng.randrange(self.base.p) for _ in range(self.degree))
        )

    def fmt(self, a) -> str:
        return polys.fmt(self.base, a, var="x")

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ResidueField", self.base.p, self.modulus))

    def __repr__(self):
        return f"F{self.base.p}[x]/({polys.fmt(self.base, self.modulus, var='x')})"


def parse_field_flag(text: str) -> Field:
    """Field from a CLI flag value: a prime, or ``Q`` for the rationals."""
    if text in ("Q", "q"):
        return RationalField()
    try:
        p = int(text)
    except ValueError:
        raise KernelError(f"unknown field {text!r}: expected a prime or Q") from None
    return PrimeField(p)
