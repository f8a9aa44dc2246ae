"""The map ``kappa: A -> K in P^7`` and its partial inverse.

Coordinates follow Stubbs' basis ``kappa_1..kappa_8`` of L(2 Theta), with
explicit formulas for every stratum of the Jacobian: weight three, weight two
(distinct and coincident abscissae), weight one and the identity.

For a weight-3 point with Mumford pair ``(a, b)``, ``b = c0 + c1 X + c2 X^2``,
the quantities written ``b0, b1`` in the kappa formulas are ``c2`` and ``c1``
(both up to a common sign, which the formulas do not see).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from gmpy2 import mpq

from .algebra import poly as up
from .algebra.fields import Rationals
from .algebra.linalg import Matrix, rref
from .algebra.poly import MPoly
from .curve import Curve
from .errors import NotOnKummer
from .jacobian import JacobianPoint, is_valid, negate

DIM = 8


@dataclass(frozen=True)
class KummerPoint:
    coords: tuple
    field: object

    def __post_init__(self):
        if len(self.coords) != DIM:
            raise ValueError("Kummer points have 8 coordinates")
        if all(x == 0 for x in self.coords):
            raise ValueError("the zero vector is not a projective point")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def canonical(self) -> "KummerPoint":
        return KummerPoint(canonical_coords(self.coords, self.field), self.field)

    def scaled(self, lam) -> "KummerPoint":
        F = self.field
        return KummerPoint(tuple(F.norm(x * lam) for x in self.coords), F)

    def same_point(self, other: "KummerPoint") -> bool:
        return proportional(self.coords, other.coords, self.field)


def canonical_coords(x: Sequence, F) -> tuple:
    """First nonzero entry 1; over Q, coprime integers with positive leading entry."""
    lead = next(v for v in x if v != 0)
    if isinstance(F, Rationals):
        q = [mpq(v) for v in x]
        den = 1
        for v in q:
            d = int(v.denominator)
            den = den * d // gcd(den, d)
        ints = [int(v * den) for v in q]
        g = 0
        for v in ints:
            g = gcd(g, v)
        sign = 1 if ints[[i for i, v in enumerate(ints) if v][0]] > 0 else -1
        return tuple(mpq(sign * v // g) for v in ints)
    inv = F.inv(lead)
    return tuple(F.norm(v * inv) for v in x)


def proportional(u: Sequence, v: Sequence, F) -> bool:
    """Projective equality of two nonzero vectors."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        return False
    return canonical_coords(u, F) == canonical_coords(v, F)


def _weight3(f, k2, k3, k4, b0, b1, F):
    f5, f6, f7 = f[5], f[6], f[7]
    bb = b0 * b0
    k5 = bb - f7 * k2**3 + f7 * k3 * k2 - f6 * k2**2 + 3 * f7 * k4 + 2 * f6 * k3
    k6 = (k2 * bb + 2 * b0 * b1 - f7 * k2**4 + 3 * f7 * k3 * k2**2 - f6 * k2**3
          - f7 * k3**2 - f7 * k4 * k2 + 2 * f6 * k3 * k2 - f5 * k2**2 + 2 * f5 * k3)
    k7 = (b1 * b1 - k3 * bb + f7 * k3 * k2**3 - 2 * f7 * k3**2 * k2 + f6 * k3 * k2**2
          + f7 * k4 * k3 - f6 * k3**2 + f5 * k3 * k2 - 3 * f5 * k4)
    k8 = (k2 * b1 * b1 + 2 * k3 * b0 * b1 + k4 * bb + f7 * k3**2 * k2**2 - f7 * k2**3 * k4
          + f7 * k2 * k3 * k4 - f7 * k3**3 + f6 * k3**2 * k2 - f6 * k4 * k2**2
          + f5 * k3**2 - f5 * k4 * k2)
    return tuple(F.norm(v) for v in (1, k2, k3, k4, k5, k6, k7, k8))


def _weight2_head(f, k3, k4):
    f4, f5, f6, f7 = f[4], f[5], f[6], f[7]
    k5 = f5 + 2 * f6 * k3 + f7 * k3**2 + 2 * k4 * f7
    k6 = f4 + f5 * k3 - f7 * k4 * k3
    k7 = -f4 * k3 - 3 * f5 * k4 + f7 * k4**2
    return k5, k6, k7


def _weight2_numerator(f, k3, k4):
    """Numerator of kappa_8 for distinct abscissae, without the ``-2 y1 y2`` term."""
    f0, f1, f2, f3, f4, f5, f6, f7 = f
    return (f3 * k3**3 + f1 * k3 + f2 * k3**2 + 2 * f0 + f4 * k4 * k3**2
            - 3 * f3 * k4 * k3 - 2 * f2 * k4 + f5 * k4**2 * k3 - 2 * f4 * k4**2
            + f7 * k4**3 * k3 + 2 * f6 * k4**3)


def _tangent_tail(f, k3, k4):
    f4, f5, f6, f7 = f[4], f[5], f[6], f[7]
    return (k4 - k3**2) * (-2 * f7 * k4 * k3 - f6 * k4 + f7 * k3**3 + f6 * k3**2 + f5 * k3 + f4)


def kappa_coords(c: Curve, P: JacobianPoint) -> tuple:
    """Unnormalised Kummer coordinates of ``P``."""
    F = c.field
    f = c.f
    a, b = P.a, P.b
    d = len(a) - 1
    coef = lambda poly_, i: poly_[i] if i < len(poly_) else 0  # noqa: E731
    if d == 3:
        k2, k3, k4 = F.norm(-a[2]), a[1], F.norm(-a[0])
        return _weight3(f, k2, k3, k4, coef(b, 2), coef(b, 1), F)
    if d == 2:
        k3, k4 = F.norm(-a[1]), a[0]
        k5, k6, k7 = _weight2_head(f, k3, k4)
        c0, c1 = coef(b, 0), coef(b, 1)
        disc = F.norm(k3 * k3 - 4 * k4)
        if disc != 0:
            y1y2 = c0 * c0 + c0 * c1 * k3 + c1 * c1 * k4
            k8 = (_weight2_numerator(f, k3, k4) - 2 * y1y2) * F.inv(disc)
        else:
            k8 = c1 * c1 + _tangent_tail(f, k3, k4)
        return tuple(F.norm(v) for v in (0, 1, k3, k4, k5, k6, k7, k8))
    if d == 1:
        x1 = F.norm(-a[0])
        return tuple(F.norm(v) for v in (0, 0, 0, 0, 1, -x1, x1 * x1, x1**3))
    return tuple(F(v) for v in (0, 0, 0, 0, 0, 0, 0, 1))


def kappa(c: Curve, P: JacobianPoint) -> KummerPoint:
    return KummerPoint(kappa_coords(c, P), c.field)


def r1_poly(c: Curve) -> MPoly:
    """The quadric R1 vanishing on K."""
    F = c.field
    f5, f6, f7 = c.f[5], c.f[6], c.f[7]
    x = [MPoly.variable(F, DIM, i) for i in range(DIM)]
    return (x[0] * x[7] - x[1] * x[6] - x[2] * x[5] - x[3] * x[4]
            - 2 * f5 * x[1] * x[3] + f5 * x[2] * x[2] + 2 * f6 * x[2] * x[3]
            + 3 * f7 * x[3] * x[3])


def r1_value(c: Curve, x: Sequence):
    F = c.field
    f5, f6, f7 = c.f[5], c.f[6], c.f[7]
    x1, x2, x3, x4, x5, x6, x7, x8 = x
    return F.norm(x1 * x8 - x2 * x7 - x3 * x6 - x4 * x5 - 2 * f5 * x2 * x4
                  + f5 * x3 * x3 + 2 * f6 * x3 * x4 + 3 * f7 * x4 * x4)


def xi_matrix(c: Curve) -> Matrix:
    """Linear change of coordinates from kappa to Stoll's xi."""
    F = c.field
    f2, f3, f4, f5, f6, f7 = (c.f[i] for i in range(2, 8))
    rows = [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, -f7, 0, 0, 0, 0, 0, 0],
        [0, 0, f7, 0, 0, 0, 0, 0],
        [0, 0, 0, -f7, 0, 0, 0, 0],
        [f4, f5, 2 * f6, 3 * f7, -1, 0, 0, 0],
        [f3, f4, f5, 0, 0, -1, 0, 0],
        [f2, 0, -f4, -3 * f5, 0, 0, -1, 0],
        [0, -f2 * f7, -f4 * f7, -f4 * f7, 0, 0, 0, f7],
    ]
    return Matrix.from_rows(F, [[F.norm(v) for v in r] for r in rows])


def xi_inverse_matrix(c: Curve) -> Matrix:
    F = c.field
    M = xi_matrix(c)
    aug = [list(M.row(i)) + [F(int(i == j)) for j in range(DIM)] for i in range(DIM)]
    R, piv = rref(Matrix.from_rows(F, aug))
    if piv[:DIM] != list(range(DIM)):
        raise ZeroDivisionError("coordinate change is singular (f7 = 0?)")
    return Matrix.from_rows(F, [R.row(i)[DIM:] for i in range(DIM)])


def to_xi(c: Curve, k: KummerPoint) -> KummerPoint:
    return KummerPoint(tuple(xi_matrix(c) @ k.coords), c.field)


def from_xi(c: Curve, k: KummerPoint) -> KummerPoint:
    return KummerPoint(tuple(xi_inverse_matrix(c) @ k.coords), c.field)


def _sqrt_pm(F, v) -> list:
    r = F.sqrt(v)
    if r is None:
        return []
    r = F.norm(r)
    return [r] if r == 0 else [r, F.norm(-r)]


def _lift_weight3(c: Curve, x) -> list[JacobianPoint]:
    F = c.field
    f = c.f
    f5, f6, f7 = f[5], f[6], f[7]
    _, k2, k3, k4, k5, k6, k7, _ = x
    B0 = F.norm(k5 - (-f7 * k2**3 + f7 * k3 * k2 - f6 * k2**2 + 3 * f7 * k4 + 2 * f6 * k3))
    B1 = F.norm(k7 + k3 * B0 - (f7 * k3 * k2**3 - 2 * f7 * k3**2 * k2 + f6 * k3 * k2**2
                                 + f7 * k4 * k3 - f6 * k3**2 + f5 * k3 * k2 - 3 * f5 * k4))
    B01 = F.norm(k6 - k2 * B0 - (-f7 * k2**4 + 3 * f7 * k3 * k2**2 - f6 * k2**3 - f7 * k3**2
                                 - f7 * k4 * k2 + 2 * f6 * k3 * k2 - f5 * k2**2 + 2 * f5 * k3))
    a = (F.norm(-k4), k3, F.norm(-k2), F(1))
    pairs = []
    for c2 in _sqrt_pm(F, B0):
        if c2 != 0:
            pairs.append((c2, F.norm(B01 * F.inv(2 * c2))))
        else:
            pairs.extend((c2, c1) for c1 in _sqrt_pm(F, B1))
    out = []
    for c2, c1 in pairs:
        g = up.trim((0, c1, c2))
        r = up.mod(F, up.sub(F, c.poly, up.mul(F, g, g)), a)
        h = up.scale(F, g, 2)
        r = list(r) + [0] * (3 - len(r))
        h = list(h) + [0] * (3 - len(h))
        # need c0^2 + c0*h(X) = r(X) mod a, coefficientwise
        lin = [i for i in (1, 2) if h[i] != 0]
        if lin:
            cands = [F.norm(r[lin[0]] * F.inv(h[lin[0]]))]
        else:
            cands = _sqrt_pm(F, r[0])
        for c0 in cands:
            out.append(JacobianPoint(a, up.trim((c0, c1, c2))))
    return out


def _lift_weight2(c: Curve, x) -> list[JacobianPoint]:
    F = c.field
    f = c.f
    s, t, k8 = x[2], x[3], x[7]
    a = (t, F.norm(-s), F(1))
    r = list(up.mod(F, c.poly, a))
    r += [0] * (2 - len(r))
    r0, r1 = r
    disc = F.norm(s * s - 4 * t)
    if disc != 0:
        y1y2 = F.norm((_weight2_numerator(f, s, t) - k8 * disc) * F.inv(2))
        sq = F.norm(-2 * (y1y2 - r0 - s * r1 * F.inv(2)) * F.inv(disc))
    else:
        sq = F.norm(k8 - _tangent_tail(f, s, t))
    out = []
    for c1 in _sqrt_pm(F, sq):
        if c1 != 0:
            c0s = [F.norm((r1 - s * c1 * c1) * F.inv(2 * c1))]
        else:
            c0s = _sqrt_pm(F, r0)
        for c0 in c0s:
            out.append(JacobianPoint(a, up.trim((c0, c1))))
    return out


def lift_to_jacobian(c: Curve, k: KummerPoint, relations: Sequence[MPoly] = ()) -> list[JacobianPoint]:
    """Jacobian points over the base field mapping to ``k``: ``[]``, ``[P]`` or ``[P, -P]``.

    Raises :class:`NotOnKummer` if ``k`` violates R1, one of the supplied
    ``relations``, or the shape constraints of the lower strata.
    """
    F = c.field
    x = tuple(F(v) for v in k.coords)
    if r1_value(c, x) != 0 or any(rel(x) != 0 for rel in relations):
        raise NotOnKummer("relation residue is nonzero")
    x = _unit_lead(x, F)
    if x[0] != 0:
        cands = _lift_weight3(c, x)
    elif x[1] != 0:
        cands = _lift_weight2(c, x)
    elif any(v != 0 for v in x[2:4]):
        raise NotOnKummer("kappa_1 = kappa_2 = 0 forces kappa_3 = kappa_4 = 0")
    elif x[4] != 0:
        x1 = F.norm(-x[5])
        if x[6] != F.norm(x1 * x1) or x[7] != F.norm(x1**3):
            raise NotOnKummer("weight-one shape violated")
        cands = [JacobianPoint((F.norm(-x1), F(1)), up.const(F, y))
                 for y in _sqrt_pm(F, c.F(x1))]
    elif any(v != 0 for v in x[5:7]):
        raise NotOnKummer("only kappa_8 may be nonzero beyond a weight-one shape")
    else:
        cands = [JacobianPoint((F(1),), ())]
    found = []
    for P in cands:
        if is_valid(c, P) and proportional(kappa_coords(c, P), x, F) and P not in found:
            found.append(P)
    if len(found) == 1 and negate(c, found[0]) != found[0]:
        found.append(negate(c, found[0]))
    return found


def _unit_lead(x, F):
    lead = next(v for v in x if v != 0)
    inv = F.inv(lead)
    return tuple(F.norm(v * inv) for v in x)


def kummer_to_json(c: Curve, k: KummerPoint) -> dict:
    return {"x": [c.field.encode(v) for v in k.coords]}


def kummer_from_json(c: Curve, obj: dict) -> KummerPoint:
    return KummerPoint(tuple(c.field.decode(str(s)) for s in obj["x"]), c.field)
