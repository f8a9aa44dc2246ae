"""Divisor-class arithmetic on the Jacobian via Mumford pairs and Cantor's algorithm.

A point is a pair ``(a, b)`` of univariate polynomials with ``a`` monic,
``deg a <= 3``, ``deg b < deg a`` and ``b^2 = F(X, 1) mod a``.  The identity
is ``(1, 0)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import poly as up
from .algebra.fields import PrimeField
from .curve import Curve, CurvePoint, random_affine_point
from .errors import DoesNotSplit

GENUS = 3


@dataclass(frozen=True)
class JacobianPoint:
    a: tuple
    b: tuple

    @property
    def weight(self) -> int:
        return len(self.a) - 1

    def is_identity(self) -> bool:
        return len(self.a) == 1


def identity(c: Curve) -> JacobianPoint:
    return JacobianPoint((c.field(1),), ())


def make_point(c: Curve, a, b) -> JacobianPoint:
    """Build and validate a Mumford pair from coefficient lists (low to high)."""
    K = c.field
    a = up.trim([K(x) for x in a])
    b = up.trim([K(x) for x in b])
    P = JacobianPoint(a, b)
    if not is_valid(c, P):
        raise ValueError("not a reduced Mumford pair on this curve")
    return P


def is_valid(c: Curve, P: JacobianPoint) -> bool:
    K = c.field
    a, b = P.a, P.b
    if not a or a[-1] != 1 or len(a) - 1 > GENUS:
        return False
    if len(b) >= len(a):
        return False
    return not up.mod(K, up.sub(K, up.mul(K, b, b), c.poly), a)


def from_curve_point(c: Curve, pt: CurvePoint) -> JacobianPoint:
    """The class of ``(pt) - (infinity)``."""
    if pt.is_infinity():
        return identity(c)
    K = c.field
    x = K.norm(pt.x * K.inv(pt.z)) if pt.z != 1 else pt.x
    return JacobianPoint((K.norm(-x), K(1)), up.const(K, pt.y))


def _reduce(c: Curve, a: tuple, b: tuple) -> JacobianPoint:
    K = c.field
    f = c.poly
    b = up.mod(K, b, a)
    while len(a) - 1 > GENUS:
        a = up.monic(K, up.exact_div(K, up.sub(K, f, up.mul(K, b, b)), a))
        b = up.mod(K, up.neg(K, b), a)
    return JacobianPoint(up.monic(K, a), b)


def add(c: Curve, P: JacobianPoint, Q: JacobianPoint) -> JacobianPoint:
    """Cantor composition followed by reduction."""
    K = c.field
    if P.is_identity():
        return Q
    if Q.is_identity():
        return P
    a1, b1, a2, b2 = P.a, P.b, Q.a, Q.b
    d1, e1, e2 = up.xgcd(K, a1, a2)
    if len(d1) == 1:
        a = up.mul(K, a1, a2)
        b = up.add(K, up.mul(K, up.mul(K, e1, a1), b2), up.mul(K, up.mul(K, e2, a2), b1))
        return _reduce(c, a, up.mod(K, b, a))
    d, c1, c2 = up.xgcd(K, d1, up.add(K, b1, b2))
    s1, s2, s3 = up.mul(K, c1, e1), up.mul(K, c1, e2), c2
    dd = up.mul(K, d, d)
    a = up.exact_div(K, up.mul(K, a1, a2), dd)
    num = up.add(K, up.mul(K, up.mul(K, s1, a1), b2), up.mul(K, up.mul(K, s2, a2), b1))
    num = up.add(K, num, up.mul(K, s3, up.add(K, up.mul(K, b1, b2), c.poly)))
    b = up.exact_div(K, num, d)
    return _reduce(c, a, up.mod(K, b, a))


def negate(c: Curve, P: JacobianPoint) -> JacobianPoint:
    return JacobianPoint(P.a, up.mod(c.field, up.neg(c.field, P.b), P.a))


def double(c: Curve, P: JacobianPoint) -> JacobianPoint:
    return add(c, P, P)


def sub(c: Curve, P: JacobianPoint, Q: JacobianPoint) -> JacobianPoint:
    return add(c, P, negate(c, Q))


def scalar_mul(c: Curve, n: int, P: JacobianPoint) -> JacobianPoint:
    if n < 0:
        return scalar_mul(c, -n, negate(c, P))
    result = identity(c)
    base = P
    while n:
        if n & 1:
            result = add(c, result, base)
        n >>= 1
        if n:
            base = double(c, base)
    return result


def two_torsion(c: Curve) -> list[JacobianPoint]:
    """All 64 points of A[2], as ``(prod_{e in S}(X - e), 0)`` for ``|S| <= 3``.

    Ordered by subset size, then lexicographically in the sorted roots.
    """
    K = c.field
    roots = up.roots(K, c.poly)
    if len(roots) != 7:
        raise DoesNotSplit(f"F(X,1) has only {len(roots)} distinct roots over {K.name}")
    out = []
    for k in range(4):
        for S in itertools.combinations(roots, k):
            out.append(JacobianPoint(up.from_roots(K, S), ()))
    return out


def _interpolate(K, xs, ys) -> tuple:
    """Lagrange interpolation through distinct abscissae."""
    b: tuple = ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        others = [xj for j, xj in enumerate(xs) if j != i]
        basis = up.from_roots(K, others)
        denom = up.evaluate(K, basis, xi)
        b = up.add(K, b, up.scale(K, basis, K.norm(yi * K.inv(denom))))
    return b


def from_curve_points(c: Curve, pts) -> JacobianPoint:
    """The class of ``sum (P_i) - n (infinity)``."""
    K = c.field
    affine = [q for q in pts if not q.is_infinity()]
    xs = [q.x for q in affine]
    if 0 < len(affine) <= GENUS and len(set(xs)) == len(xs):
        return JacobianPoint(up.from_roots(K, xs), _interpolate(K, xs, [q.y for q in affine]))
    out = identity(c)
    for q in affine:
        out = add(c, out, from_curve_point(c, q))
    return out


def random_point(c: Curve, rng: random.Random) -> JacobianPoint:
    """Sum of three random affine curve points, reduced (prime fields only)."""
    if not isinstance(c.field, PrimeField):
        raise ValueError("random points are only available over prime fields")
    pts = [random_affine_point(c, rng) for _ in range(3)]
    return from_curve_points(c, pts)


STRATA = ("generic", "weight3_repeated", "weight2", "weight2_tangent",
          "weight1", "identity", "two_torsion")


def random_point_in_stratum(c: Curve, rng: random.Random, stratum: str) -> JacobianPoint:
    """Random point of a prescribed shape, used to exercise every formula branch."""
    if stratum == "identity":
        return identity(c)
    if stratum == "two_torsion":
        return rng.choice(two_torsion(c))

    def pt_nonzero_y():
        while True:
            q = random_affine_point(c, rng)
            if q.y != 0:
                return q

    if stratum == "weight1":
        return from_curve_point(c, random_affine_point(c, rng))
    if stratum == "weight2":
        while True:
            q1, q2 = random_affine_point(c, rng), random_affine_point(c, rng)
            if q1.x != q2.x:
                return from_curve_points(c, [q1, q2])
    if stratum == "weight2_tangent":
        return double(c, from_curve_point(c, pt_nonzero_y()))
    if stratum == "weight3_repeated":
        q1 = pt_nonzero_y()
        while True:
            q2 = random_affine_point(c, rng)
            if q2.x != q1.x:
                break
        P = add(c, double(c, from_curve_point(c, q1)), from_curve_point(c, q2))
        if rng.random() < 0.5:
            P = scalar_mul(c, 3, from_curve_point(c, q1))
        return P
    if stratum == "generic":
        while True:
            pts = [random_affine_point(c, rng) for _ in range(3)]
            if len({q.x for q in pts}) == 3:
                return from_curve_points(c, pts)
    raise ValueError(f"unknown stratum {stratum!r}")


def group_order_bruteforce(c: Curve) -> int:
    """#J(F_p) by enumerating reduced Mumford pairs; only for tiny p."""
    K = c.field
    if not isinstance(K, PrimeField) or K.p > 31:
        raise ValueError("brute-force group order needs a prime field with p <= 31")
    p = K.p
    f = c.poly
    count = 1
    for d in range(1, GENUS + 1):
        for low in itertools.product(range(p), repeat=d):
            a = tuple(low) + (1,)
            fa = up.mod(K, f, a)
            for bc in itertools.product(range(p), repeat=d):
                b = up.trim(bc)
                if up.mod(K, up.mul(K, b, b), a) == fa:
                    count += 1
    return count


def point_to_json(c: Curve, P: JacobianPoint) -> dict:
    enc = c.field.encode
    return {"a": [enc(x) for x in P.a], "b": [enc(x) for x in P.b]}


def point_from_json(c: Curve, obj: dict) -> JacobianPoint:
    K = c.field
    return make_point(c, [K.decode(str(s)) for s in obj["a"]],
                      [K.decode(str(s)) for s in obj["b"]])
