"""Exact base fields: the rationals and prime fields.

Field elements are plain Python values so that the hot loops (Cantor
arithmetic over F_p, monomial evaluation) stay cheap:

* ``PrimeField(p)`` elements are ``int`` in ``[0, p)``;
* ``Rationals()`` elements are ``gmpy2.mpq`` (always in lowest terms with a
  positive denominator).  Python ints are accepted wherever an mpq is.

Arithmetic is done with the native operators followed by ``F.norm``; only
division goes through ``F.inv``.
"""

from __future__ import annotations

from random import Random
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz


class BadCharacteristic(ValueError):
    """The requested computation is not supported in this characteristic."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 40))


class Rationals:
    char = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, str):
            return mpq(x.strip())
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        return mpq(x)

    def norm(self, x):
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return mpq(1) / x

    def div(self, x, y):
        return mpq(x) * self.inv(y)

    def is_square(self, x) -> bool:
        x = mpq(x)
        return x >= 0 and gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)

    def sqrt(self, x):
        """A square root of ``x`` in Q, or ``None``."""
        x = mpq(x)
        if not self.is_square(x):
            return None
        return mpq(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))

    def encode(self, x) -> str:
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def decode(self, s: str):
        return self(s)

    def to_json(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p == 2:
            raise BadCharacteristic("characteristic 2 is not supported")
        self.p = p
        self.char = p
        self.name = f"F_{p}"
        # Tonelli-Shanks data: p - 1 = q * 2^s
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        self._q, self._s = q, s
        self._nonresidue = None

    def __call__(self, x) -> int:
        p = self.p
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                num, den = x.split("/")
                return int(num) * pow(int(den), -1, p) % p
            return int(x) % p
        if isinstance(x, int):
            return x % p
        if isinstance(x, (Fraction, type(mpq(0)))):
            num, den = int(x.numerator), int(x.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return num * pow(den, -1, p) % p
        return int(x) % p

    def norm(self, x) -> int:
        return x % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def div(self, x, y) -> int:
        return x * self.inv(y) % self.p

    def is_square(self, x) -> bool:
        x %= self.p
        return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, x):
        """A square root of ``x`` in F_p, or ``None``."""
        p = self.p
        x %= p
        if x == 0:
            return 0
        if pow(x, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(x, (p + 1) // 4, p)
        if self._nonresidue is None:
            z = 2
            while pow(z, (p - 1) // 2, p) != p - 1:
                z += 1
            self._nonresidue = z
        m, c = self._s, pow(self._nonresidue, self._q, p)
        t, r = pow(x, self._q, p), pow(x, (self._q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    def random(self, rng: Random) -> int:
        return rng.randrange(self.p)

    def encode(self, x) -> str:
        return str(int(x) % self.p)

    def decode(self, s: str) -> int:
        return self(s)

    def to_json(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = Rationals()


def field_from_json(obj):
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        return PrimeField(int(obj["Fp"]))
    raise ValueError(f"unrecognised field description {obj!r}")


def to_int_if_integral(x):
    """Return ``x`` as an ``int`` when it is an integral rational, else ``None``."""
    x = mpq(x)
    return int(x.numerator) if x.denominator == 1 else None


__all__ = [
    "BadCharacteristic",
    "PrimeField",
    "QQ",
    "Rationals",
    "field_from_json",
    "is_prime",
    "mpq",
    "mpz",
    "to_int_if_integral",
]
