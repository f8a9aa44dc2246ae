"""Naive and canonical heights on the Kummer variety, and bounded-height point search.

Heights are carried as exact integers (the maximum absolute coordinate of the
primitive integer representative) with a float logarithm for display.  The
canonical height is the limit of ``4^-n h(kappa(2^n P))``, computed with exact
Cantor doubling over Q.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from gmpy2 import mpz

from .algebra.fields import Rationals
from .algebra.linalg import matmul_mod_p
from .algebra.modular import random_prime
from .curve import Curve, is_good_prime
from .errors import BudgetExceeded, FieldMismatch, NotOnKummer
from .jacobian import JacobianPoint, double
from .kummer import DIM, KummerPoint, canonical_coords, kappa_coords, lift_to_jacobian, proportional
from .relations import RelationBasis, find_relations, monomial_values, monomial_values_exact


@dataclass(frozen=True)
class NaiveHeight:
    """``max |x_i|`` of the primitive integer representative."""

    max_abs: int

    @property
    def bits(self) -> int:
        return self.max_abs.bit_length()

    @property
    def log(self) -> float:
        return math.log(self.max_abs)

    def to_json(self) -> dict:
        return {"max_abs": str(mpz(self.max_abs)),  # gmpy2 has no digit cap
                "bits": self.bits, "log": self.log}


def primitive_integer_coords(x: Sequence) -> tuple[int, ...]:
    return tuple(int(v) for v in canonical_coords(x, Rationals()))


def naive_height(k: KummerPoint | Sequence) -> NaiveHeight:
    """Height of a rational point of P^7, from its coprime integer coordinates."""
    coords = k.coords if isinstance(k, KummerPoint) else tuple(k)
    return NaiveHeight(max(abs(v) for v in primitive_integer_coords(coords)))


def _require_q(c: Curve) -> None:
    if not isinstance(c.field, Rationals):
        raise FieldMismatch("heights are defined for curves over Q")


@dataclass
class HeightReport:
    point: JacobianPoint
    naive: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    N: int = 0
    converged: bool = False
    tolerance: float = 0.0
    achieved: float | None = None
    status: str = "ok"
    cross_check: bool | None = None

    @property
    def estimate(self) -> float:
        return self.estimates[-1]

    def to_json(self, c: Curve) -> dict:
        from .jacobian import point_to_json

        return {"point": point_to_json(c, self.point),
                "ladder": [h.to_json() for h in self.naive],
                "estimates": self.estimates, "estimate": self.estimate, "N": self.N,
                "converged": self.converged, "tolerance": self.tolerance,
                "achieved": self.achieved, "status": self.status,
                "cross_check": self.cross_check}


def canonical_height(c: Curve, P: JacobianPoint, tol: float = 1e-3, max_n: int = 10,
                     strict: bool = False, cross_check=None) -> HeightReport:
    """Estimate ``h^(P) = lim 4^-n h(kappa(2^n P))``.

    Stops once two consecutive estimates differ by less than ``tol`` or at
    ``max_n`` doublings; in the latter case the report has status
    ``"budget"`` (or :class:`BudgetExceeded` is raised when ``strict``).
    ``cross_check`` may be a duplication map; the first ladder step is then
    recomputed with it and compared projectively.
    """
    _require_q(c)
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = HeightReport(P, tolerance=tol)
    Q = P
    x = kappa_coords(c, Q)
    rep.naive.append(naive_height(x))
    rep.estimates.append(rep.naive[0].log)
    if P.is_identity():
        rep.converged, rep.achieved = True, 0.0
        return rep
    for n in range(1, max_n + 1):
        Q = double(c, Q)
        y = kappa_coords(c, Q)
        if n == 1 and cross_check is not None:
            rep.cross_check = _dup_agrees(c, cross_check, x, y)
        h = naive_height(y)
        rep.naive.append(h)
        rep.estimates.append(h.log / 4**n)
        rep.N = n
        diff = abs(rep.estimates[-1] - rep.estimates[-2])
        rep.achieved = diff
        if diff < tol:
            rep.converged = True
            return rep
    rep.status = "budget"
    if strict:
        err = BudgetExceeded(f"no convergence to {tol} within {max_n} doublings")
        err.report = rep
        raise err
    return rep


def _dup_agrees(c: Curve, dup, x, y) -> bool:
    from .remnants import apply_tau

    if getattr(dup, "normalized", False):
        x, y = apply_tau(c, x), apply_tau(c, y)
    return proportional(dup(x), y, c.field)


def doubling_constant(c: Curve, points: Sequence[JacobianPoint]) -> dict:
    """Largest observed ``h(kappa(2P)) - 4 h(kappa(P))`` over ``points``.

    The true constant is not known explicitly; this is an empirical reading.
    """
    _require_q(c)
    worst = None
    for P in points:
        h1 = naive_height(kappa_coords(c, P)).log
        h2 = naive_height(kappa_coords(c, double(c, P))).log
        gap = h2 - 4 * h1
        worst = gap if worst is None else max(worst, gap)
    return {"samples": len(points), "max_gap": worst}


# point search -----------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    point: KummerPoint
    lifts: tuple


def _r1_parts(c: Curve, X: np.ndarray) -> np.ndarray:
    """``R1 - x1 x8`` on small integer rows."""
    f5, f6, f7 = (int(v) for v in c.f[5:8])
    x2, x3, x4, x5, x6, x7 = (X[:, i] for i in range(1, 7))
    return (-x2 * x7 - x3 * x6 - x4 * x5 - 2 * f5 * x2 * x4 + f5 * x3 * x3
            + 2 * f6 * x3 * x4 + 3 * f7 * x4 * x4)


def _candidates(c: Curve, H: int) -> list[tuple[int, ...]]:
    """Primitive tuples with |x_i| <= H, first nonzero positive, satisfying R1."""
    rng = np.arange(-H, H + 1, dtype=np.int64)
    mid = np.array(list(itertools.product(range(-H, H + 1), repeat=6)), dtype=np.int64)
    out = []
    rest = _r1_parts(c, np.hstack([np.zeros((len(mid), 1), dtype=np.int64), mid]))
    for x1 in range(0, H + 1):
        if x1 == 0:
            ok = mid[rest == 0]
            for row in ok:
                for x8 in rng:
                    out.append((0,) + tuple(int(v) for v in row) + (int(x8),))
        else:
            # x1 x8 + rest = 0
            sel = (rest % x1 == 0)
            x8 = -rest[sel] // x1
            good = np.abs(x8) <= H
            for row, v in zip(mid[sel][good], x8[good]):
                out.append((x1,) + tuple(int(t) for t in row) + (int(v),))
    prim = []
    for t in out:
        if not any(t):
            continue
        lead = next(v for v in t if v != 0)
        g = 0
        for v in t:
            g = math.gcd(g, v)
        if lead > 0 and g == 1:
            prim.append(t)
    return prim


def _needs_integral_model(c: Curve) -> None:
    for v in c.f:
        if getattr(v, "denominator", 1) != 1:
            raise ValueError("point search needs integral coefficients")


def _relations_mod_prime(c: Curve, rel: RelationBasis, rng: random.Random):
    dens = [int(getattr(x, "denominator", 1)) for v in rel.vectors for x in v]
    while True:
        p = random_prime(rng, 31)
        if is_good_prime(c, p) and all(d % p for d in dens):
            break
    V = np.array([[int(x.numerator) * pow(int(x.denominator), -1, p) % p for x in v]
                  for v in rel.vectors], dtype=np.int64)
    return p, V


def search_points(c: Curve, H: int, relations: RelationBasis | None = None,
                  rng: random.Random | None = None) -> list[SearchResult]:
    """All rational points of K with primitive coordinates bounded by ``H``, with lifts to A.

    Candidates satisfy R1 exactly; a modular filter with the quartic relations
    of a reduction prunes most of them before the exact check against the
    rational quartic relation basis.
    """
    _require_q(c)
    _needs_integral_model(c)
    if H < 1:
        raise ValueError("H must be positive")
    rng = rng or random.Random(0)
    rel = relations or find_relations(c, 4, rng)
    cands = _candidates(c, H)
    p, V = _relations_mod_prime(c, rel, rng)
    X = np.array(cands, dtype=np.int64).reshape(len(cands), DIM)
    vals = matmul_mod_p(monomial_values(X, 4, p), V.T, p)
    keep = [t for t, row in zip(cands, vals) if not row.any()]
    F = c.field
    out = []
    for t in keep:
        mons = monomial_values_exact(F, [F(v) for v in t], 4)
        if any(sum(a * b for a, b in zip(mons, v) if b != 0) != 0 for v in rel.vectors):
            continue
        k = KummerPoint(tuple(F(v) for v in t), F)
        try:
            lifts = tuple(lift_to_jacobian(c, k))
        except NotOnKummer:
            lifts = ()
        out.append(SearchResult(k, lifts))
    return out
