"""Dense univariate and sparse multivariate polynomials over an exact field.

Univariate polynomials are tuples of coefficients, lowest degree first, with
no trailing zeros; the zero polynomial is ``()``.  Every function takes the
field as its first argument.

Multivariate polynomials are :class:`MPoly` instances keyed by exponent
tuples.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .fields import PrimeField, Rationals


def trim(a: Sequence) -> tuple:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def deg(a: tuple) -> int:
    """Degree, with ``deg(()) == -1``."""
    return len(a) - 1


def const(F, c) -> tuple:
    c = F.norm(c)
    return (c,) if c != 0 else ()


def add(F, a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.norm(out[i] + c)
    return trim(out)


def neg(F, a) -> tuple:
    return tuple(F.norm(-c) for c in a)


def sub(F, a, b) -> tuple:
    return add(F, a, neg(F, b))


def scale(F, a, c) -> tuple:
    c = F.norm(c)
    if c == 0:
        return ()
    return tuple(F.norm(x * c) for x in a)


def mul(F, a, b) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim([F.norm(c) for c in out])


def divmod_(F, a, b) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), trim(r)
    inv_lc = F.inv(b[-1])
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = F.norm(r[k] * inv_lc)
        if c == 0:
            continue
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = F.norm(r[k - db + j] - c * b[j])
    return trim(q), trim(r[:db])


def mod(F, a, b) -> tuple:
    return divmod_(F, a, b)[1]


def exact_div(F, a, b) -> tuple:
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def monic(F, a) -> tuple:
    if not a:
        return ()
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b) -> tuple:
    """Monic gcd; ``gcd((), ()) == ()``."""
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F, a, b) -> tuple[tuple, tuple, tuple]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = const(F, 1), ()
    t0, t1 = (), const(F, 1)
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return (), s0, t0
    u = F.inv(r0[-1])
    return scale(F, r0, u), scale(F, s0, u), scale(F, t0, u)


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.norm(acc * x + c)
    return acc


def derivative(F, a) -> tuple:
    return trim([F.norm(i * a[i]) for i in range(1, len(a))])


def from_roots(F, roots: Iterable) -> tuple:
    out = const(F, 1)
    for r in roots:
        out = mul(F, out, (F.norm(-r), 1))
    return out


def powmod(F, a, e: int, m) -> tuple:
    result = const(F, 1)
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        base = mod(F, mul(F, base, base), m)
        e >>= 1
    return result


def resultant(F, a, b):
    """Resultant of ``a`` and ``b`` via the Euclidean recursion over a field."""
    if not a or not b:
        return 0
    da, db = deg(a), deg(b)
    if db == 0:
        return F.norm(b[0] ** da)
    if da == 0:
        return F.norm(a[0] ** db)
    r = mod(F, a, b)
    if not r:
        return 0
    sign = -1 if (da * db) % 2 else 1
    return F.norm(sign * b[-1] ** (da - deg(r)) * resultant(F, b, r))


def discriminant(F, a):
    n = deg(a)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return F.norm(sign * resultant(F, a, derivative(F, a)) * F.inv(a[-1]))


def is_squarefree(F, a) -> bool:
    return deg(gcd(F, a, derivative(F, a))) == 0


def roots(F, a, rng: random.Random | None = None) -> list:
    """Distinct roots of ``a`` in the base field, sorted.

    Prime fields use Cantor-Zassenhaus equal-degree splitting; over Q the
    rational roots are read off a factorisation.
    """
    if not a or deg(a) == 0:
        return []
    if isinstance(F, Rationals):
        import sympy

        x = sympy.Symbol("x")
        expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x**i
                   for i, c in enumerate(F(c) for c in a))
        found = sympy.Poly(expr, x, domain="QQ").ground_roots()
        return sorted(F(sympy.Rational(r).p) / F(sympy.Rational(r).q) for r in found)
    assert isinstance(F, PrimeField)
    p = F.p
    rng = rng or random.Random(0)
    a = monic(F, a)
    # product of the distinct linear factors
    xp = powmod(F, (0, 1), p, a)
    lin = gcd(F, a, sub(F, xp, (0, 1)))
    out: list[int] = []
    stack = [lin]
    while stack:
        g = stack.pop()
        d = deg(g)
        if d <= 0:
            continue
        if d == 1:
            out.append(F.norm(-g[0]))
            continue
        while True:
            shift = rng.randrange(p)
            h = powmod(F, (shift, 1), (p - 1) // 2, g)
            s = gcd(F, g, sub(F, h, (1,)))
            if 0 < deg(s) < d:
                stack.append(s)
                stack.append(exact_div(F, g, s))
                break
    return sorted(out)


class MPoly:
    """Sparse polynomial in ``nvars`` variables; immutable."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError("exponent tuple has wrong length")
            c = field.norm(c)
            if c != 0:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def variable(cls, field, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def constant(cls, field, nvars: int, c) -> "MPoly":
        return cls(field, nvars, {(0,) * nvars: c})

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ValueError("operands live in different rings")
            return other
        return MPoly.constant(self.field, self.nvars, self.field(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MPoly.constant(self.field, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = self._coerce(other)
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __call__(self, point: Sequence):
        F = self.field
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = F.norm(term * x**k)
            total += term
        return F.norm(total)

    def coefficient(self, e: tuple):
        return self.terms.get(tuple(e), 0)

    def coefficient_vector(self, basis: Sequence[tuple]) -> list:
        """Coefficients on ``basis``; raises if a term falls outside it."""
        index = {e: i for i, e in enumerate(basis)}
        vec = [0] * len(basis)
        for e, c in self.terms.items():
            if e not in index:
                raise ValueError(f"monomial {e} is not in the basis")
            vec[index[e]] = c
        return vec

    @classmethod
    def from_vector(cls, field, basis: Sequence[tuple], vec: Sequence) -> "MPoly":
        return cls(field, len(basis[0]), dict(zip(basis, vec)))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}"
                            for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)
