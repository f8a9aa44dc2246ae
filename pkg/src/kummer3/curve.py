"""Genus-3 hyperelliptic curves ``Y^2 = F(X, Z)`` with ``deg_X F = 7``.

``F(X, Z) = f0 Z^8 + f1 X Z^7 + ... + f7 X^7 Z`` in the weighted projective
plane with weights (1, 4, 1).  The point at infinity is ``(1 : 0 : 0)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import poly
from .algebra.fields import QQ, PrimeField, Rationals, field_from_json
from .errors import BadPrime, FieldTooLarge, NotDegreeSeven, NotSquarefree, OcticModel

ENUMERATION_LIMIT = 2**16


@dataclass(frozen=True)
class Curve:
    field: object
    f: tuple
    degenerate: bool = False
    disc: object = field(default=0, compare=False)

    @property
    def poly(self) -> tuple:
        """``F(X, 1)`` as a univariate coefficient tuple."""
        return poly.trim(self.f)

    def F(self, x):
        return poly.evaluate(self.field, self.f, x)

    def is_on(self, pt: "CurvePoint") -> bool:
        if pt.is_infinity():
            return True
        K = self.field
        return K.norm(pt.y * pt.y - self.F(pt.x)) == 0

    def __repr__(self):
        terms = " + ".join(f"{self.field.encode(c)}*X^{i}" for i, c in enumerate(self.f) if c != 0)
        return f"Curve(Y^2 = {terms} over {self.field.name})"


def new_curve(f: Sequence, field=QQ, degenerate: bool = False) -> Curve:
    """Validate coefficients ``[f0, ..., f7]`` and build a :class:`Curve`.

    A ninth coefficient is tolerated only if it is zero.  Squarefreeness of
    ``F(X, 1)`` is enforced unless ``degenerate`` is set.
    """
    coeffs = [field(c) for c in f]
    if len(coeffs) == 9:
        if coeffs[8] != 0:
            raise OcticModel("f8 != 0: octic models do not embed the Kummer variety")
        coeffs = coeffs[:8]
    if len(coeffs) != 8:
        raise ValueError(f"expected 8 coefficients f0..f7, got {len(coeffs)}")
    if coeffs[7] == 0:
        raise NotDegreeSeven("f7 must be nonzero")
    disc = poly.discriminant(field, poly.trim(coeffs))
    if disc == 0 and not degenerate:
        raise NotSquarefree("F(X,1) has a repeated factor; pass degenerate=True to allow")
    return Curve(field, tuple(coeffs), degenerate, disc)


def is_good_prime(c: Curve, p: int) -> bool:
    """True if ``c`` reduces to a (possibly degenerate-flagged) septic curve mod ``p``."""
    if p in (2, 3, 5):
        return False
    for x in c.f:
        if getattr(x, "denominator", 1) % p == 0:
            return False
    if QQ(c.f[7]).numerator % p == 0:
        return False
    if not c.degenerate and QQ(c.disc).numerator % p == 0:
        return False
    return True


def reduce_mod(c: Curve, p: int) -> Curve:
    if not isinstance(c.field, Rationals):
        if isinstance(c.field, PrimeField) and c.field.p == p:
            return c
        raise ValueError("only curves over Q can be reduced")
    if not is_good_prime(c, p):
        raise BadPrime(f"{p} is a bad prime for {c}")
    Fp = PrimeField(p)
    return new_curve([Fp(x) for x in c.f], Fp, degenerate=c.degenerate)


@dataclass(frozen=True)
class CurvePoint:
    x: object
    y: object
    z: object = 1

    def is_infinity(self) -> bool:
        return self.z == 0


INFINITY = CurvePoint(1, 0, 0)


def involution(c: Curve, pt: CurvePoint) -> CurvePoint:
    if pt.is_infinity():
        return pt
    return CurvePoint(pt.x, c.field.norm(-pt.y), pt.z)


def points_over_prime_field(c: Curve, mode: str = "enumerate",
                            rng: random.Random | None = None) -> list[CurvePoint]:
    """All points (affine ones plus infinity), or one uniform random affine point.

    In ``"sample"`` mode the returned list holds a single point chosen
    uniformly among the affine points.
    """
    K = c.field
    if not isinstance(K, PrimeField):
        raise ValueError("point enumeration needs a prime field")
    if mode == "enumerate":
        if K.p > ENUMERATION_LIMIT:
            raise FieldTooLarge(f"p = {K.p} exceeds the enumeration limit {ENUMERATION_LIMIT}")
        squares: dict[int, list[int]] = {}
        for y in range(K.p):
            squares.setdefault(y * y % K.p, []).append(y)
        pts = []
        for x in range(K.p):
            for y in squares.get(c.F(x), []):
                pts.append(CurvePoint(x, y))
        pts.append(INFINITY)
        return pts
    if mode == "sample":
        rng = rng or random.Random()
        return [random_affine_point(c, rng)]
    raise ValueError(f"unknown mode {mode!r}")


def random_affine_point(c: Curve, rng: random.Random) -> CurvePoint:
    """Uniform random affine point over a prime field (rejection sampling)."""
    K = c.field
    while True:
        x = rng.randrange(K.p)
        v = c.F(x)
        if v == 0:
            if rng.random() < 0.5:
                return CurvePoint(x, 0)
            continue
        y = K.sqrt(v)
        if y is None:
            continue
        return CurvePoint(x, y if rng.random() < 0.5 else K.norm(-y))


def random_curve(field, rng: random.Random, split: bool = False,
                 degenerate: bool = False) -> Curve:
    """A random septic curve over a prime field, for experiments.

    ``split`` makes F(X,1) a product of distinct linear factors;
    ``degenerate`` forces a repeated root.
    """
    p = field.p
    if split or degenerate:
        while True:
            roots = [rng.randrange(p) for _ in range(7)]
            if degenerate:
                roots[6] = roots[rng.randrange(6)]
            elif len(set(roots)) < 7:
                continue
            lead = rng.randrange(1, p)
            f = poly.scale(field, poly.from_roots(field, roots), lead)
            f = list(f) + [0] * (8 - len(f))
            return new_curve(f, field, degenerate=degenerate)
    while True:
        f = [rng.randrange(p) for _ in range(7)] + [rng.randrange(1, p)]
        try:
            return new_curve(f, field)
        except NotSquarefree:
            continue


def curve_to_json(c: Curve) -> dict:
    out = {"field": c.field.to_json(), "f": [c.field.encode(x) for x in c.f]}
    if c.degenerate:
        out["degenerate"] = True
    return out


def curve_from_json(obj: dict) -> Curve:
    field = field_from_json(obj["field"])
    return new_curve([field.decode(str(s)) for s in obj["f"]], field,
                     degenerate=bool(obj.get("degenerate", False)))
