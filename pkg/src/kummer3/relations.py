"""Homogeneous relations on the Kummer variety.

Relations of degree n are found per curve by evaluating all degree-n
monomials in the Kummer coordinates at many sampled points and taking the
exact kernel of the evaluation matrix modulo a prime.  Over Q the kernel is
lifted from several primes by rational reconstruction.

Monomials are ordered graded-lexicographically with ``x1 > x2 > ... > x8``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .algebra.fields import PrimeField, Rationals
from .algebra.linalg import (
    echelon_basis,
    nullspace_mod_p,
    rank_mod_p,
    span_rank,
)
from .algebra.modular import lift_with_primes, random_prime
from .algebra.poly import MPoly
from .curve import Curve, is_good_prime, reduce_mod
from .errors import BadCharacteristic, DoesNotSplit, FieldMismatch, RankUnstable
from .jacobian import JacobianPoint, random_point, two_torsion
from .kummer import DIM, canonical_coords, kappa_coords, r1_poly

GENUS = 3
SAMPLE_MARGIN = 30


@lru_cache(maxsize=None)
def monomial_basis(n: int, nvars: int = DIM) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of the degree-n monomials, largest first in grlex."""
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, k + 1)

    rec([], n, 0)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_indices(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(i for i, e in enumerate(mono) for _ in range(e))
                 for mono in monomial_basis(n))


def m(n: int, g: int = GENUS) -> int:
    """Number of degree-n monomials in the 2^g Kummer coordinates."""
    return comb(2**g + n - 1, n)


def dim_even(n: int, g: int = GENUS) -> int:
    """Dimension ``e(n)`` of the even functions in L(2n Theta)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (2 * n) ** g // 2 + 2 ** (g - 1)


def require_good_characteristic(c: Curve) -> None:
    if c.field.char in (2, 3, 5):
        raise BadCharacteristic("relation work needs characteristic other than 2, 3, 5")


# weights -------------------------------------------------------------------

@dataclass(frozen=True)
class WeightTable:
    """x- and y-weights of the symbols appearing in the Kummer formulas."""

    def x_point(self):
        return (1, 0)

    def y_point(self):
        return (0, 1)

    def f(self, i: int):
        return (-i, 2)

    def kappa(self, i: int):
        if not 1 <= i <= DIM:
            raise ValueError("kappa index out of range")
        return (i - 1, 0) if i <= 4 else (i - 9, 2)


WEIGHTS = WeightTable()


def weights(symbol) -> tuple[int, int]:
    """Weights of ``"x3"``, ``"y1"``, ``"f7"``, ``"kappa4"`` or a kappa-monomial exponent tuple."""
    if isinstance(symbol, str):
        s = symbol.strip().lower()
        for prefix, fn in (("kappa", WEIGHTS.kappa), ("k", WEIGHTS.kappa), ("f", WEIGHTS.f)):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                return fn(int(s[len(prefix):]))
        if s[:1] == "x" and s[1:].isdigit():
            return WEIGHTS.x_point()
        if s[:1] == "y" and s[1:].isdigit():
            return WEIGHTS.y_point()
        raise ValueError(f"unknown symbol {symbol!r}")
    exps = tuple(symbol)
    if len(exps) != DIM:
        raise ValueError("monomials are exponent tuples of length 8")
    xw = sum(e * WEIGHTS.kappa(i + 1)[0] for i, e in enumerate(exps))
    yw = sum(e * WEIGHTS.kappa(i + 1)[1] for i, e in enumerate(exps))
    return xw, yw


# evaluation ----------------------------------------------------------------

def kappa_array(c: Curve, samples: Sequence[JacobianPoint]) -> np.ndarray:
    """Canonical Kummer coordinates of the samples as an ``N x 8`` int64 array."""
    F = c.field
    rows = [canonical_coords(kappa_coords(c, P), F) for P in samples]
    return np.array(rows, dtype=np.int64).reshape(len(rows), DIM)


def monomial_values(X: np.ndarray, n: int, p: int) -> np.ndarray:
    """Values of all degree-n monomials at the rows of ``X`` modulo ``p``."""
    X = np.asarray(X, dtype=np.int64) % p
    cols = []
    for idx in _monomial_indices(n):
        v = X[:, idx[0]].copy()
        for i in idx[1:]:
            v = v * X[:, i] % p
        cols.append(v)
    if not cols:
        return np.zeros((X.shape[0], 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def monomial_values_exact(F, x: Sequence, n: int) -> list:
    out = []
    for idx in _monomial_indices(n):
        v = 1
        for i in idx:
            v = v * x[i]
        out.append(F.norm(v))
    return out


def evaluation_matrix(c: Curve, n: int, samples: Sequence[JacobianPoint]) -> np.ndarray:
    """Rows: samples; columns: degree-n monomials at canonical kappa(P)."""
    if not isinstance(c.field, PrimeField):
        raise FieldMismatch("evaluation matrices are built over a prime field; reduce the curve first")
    return monomial_values(kappa_array(c, samples), n, c.field.p)


def sample_points(c: Curve, count: int, rng: random.Random) -> list[JacobianPoint]:
    return [random_point(c, rng) for _ in range(count)]


def _fp_rank(c: Curve, n: int, count: int, rng: random.Random) -> int:
    return rank_mod_p(evaluation_matrix(c, n, sample_points(c, count, rng)), c.field.p)


def _working_curves(c: Curve, rng: random.Random, count: int, bits: int,
                    exclude=()) -> list[Curve]:
    """``count`` independent reductions of a Q-curve (or the curve itself over F_p)."""
    if isinstance(c.field, PrimeField):
        return [c] * count
    out, used = [], set(exclude)
    while len(out) < count:
        p = random_prime(rng, bits, exclude=used)
        used.add(p)
        if is_good_prime(c, p):
            out.append(reduce_mod(c, p))
    return out


def d(c: Curve, n: int, rng: random.Random | None = None, samples: int | None = None,
      bits: int = 31, report: dict | None = None, primes: int = 2) -> int:
    """Dimension of the span of the degree-n monomials in the kappa_i on K.

    ``primes`` independent computations (distinct primes for a Q-curve,
    distinct sample sets for an F_p-curve) must agree.  On disagreement the sample count is
    doubled, then fresh primes are drawn, before giving up.
    """
    if not 1 <= n <= 4:
        raise ValueError("n must be between 1 and 4")
    rng = rng or random.Random(0)
    count = samples or m(n) + SAMPLE_MARGIN
    primes_used: list[int] = []
    for attempt in range(3):
        curves = _working_curves(c, rng, max(primes, 2), bits, exclude=primes_used)
        primes_used += [w.field.p for w in curves]
        ranks = [_fp_rank(w, n, count, rng) for w in curves]
        if len(set(ranks)) == 1:
            if report is not None:
                report.setdefault("primes", []).extend(sorted(set(w.field.p for w in curves)))
                report["samples"] = count
            return ranks[0]
        if attempt == 0:
            count *= 2
    raise RankUnstable(f"d({n}) did not stabilise: {ranks}")


# relation bases ------------------------------------------------------------

@dataclass(frozen=True)
class RelationBasis:
    degree: int
    field: object
    vectors: tuple
    primes: tuple = field(default=())
    lifted: bool = False

    def __len__(self):
        return len(self.vectors)

    @property
    def basis(self):
        return monomial_basis(self.degree)

    def polys(self) -> list[MPoly]:
        return [MPoly.from_vector(self.field, self.basis, v) for v in self.vectors]

    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(v) if x != 0) for v in self.vectors]

    def standard_monomials(self) -> list[int]:
        """Indices of monomials that are not leading terms of a basis vector."""
        lead = set(self.pivots())
        return [i for i in range(m(self.degree)) if i not in lead]


def _fp_kernel(c: Curve, n: int, count: int, rng: random.Random) -> np.ndarray:
    return nullspace_mod_p(evaluation_matrix(c, n, sample_points(c, count, rng)), c.field.p)


def _fp_relations(c: Curve, n: int, rng: random.Random, samples: int | None) -> np.ndarray:
    count = samples or m(n) + SAMPLE_MARGIN
    for attempt in range(2):
        k1 = _fp_kernel(c, n, count, rng)
        k2 = _fp_kernel(c, n, count, rng)
        if k1.shape == k2.shape and np.array_equal(k1, k2):
            return k1
        count *= 2
    raise RankUnstable(f"degree-{n} kernels disagree across sample sets")


def find_relations(c: Curve, n: int, rng: random.Random | None = None,
                   samples: int | None = None, bits: int = 31,
                   primes: int = 2) -> RelationBasis:
    """Canonical basis of the degree-n relations on the Kummer variety of ``c``."""
    if not 2 <= n <= 4:
        raise ValueError("n must be between 2 and 4")
    require_good_characteristic(c)
    rng = rng or random.Random(0)
    if isinstance(c.field, PrimeField):
        K = _fp_relations(c, n, rng, samples)
        return RelationBasis(n, c.field, tuple(tuple(int(x) for x in r) for r in K),
                             (c.field.p,), False)
    used: set[int] = set()
    shape: dict = {}

    def next_prime():
        while True:
            p = random_prime(rng, bits, exclude=used)
            used.add(p)
            if is_good_prime(c, p):
                return p

    def compute(p):
        # agreement across primes replaces the per-prime double sampling here
        K = _fp_kernel(reduce_mod(c, p), n, samples or m(n) + SAMPLE_MARGIN, rng)
        piv = tuple(int(np.flatnonzero(r)[0]) for r in K)
        if "pivots" not in shape:
            shape["pivots"] = piv
        elif shape["pivots"] != piv:
            raise RankUnstable(f"kernel shape differs modulo {p}")
        return [[int(x) for x in r] for r in K]

    vectors, used_primes = lift_with_primes(compute, next_prime, min_primes=max(primes, 2))
    rb = RelationBasis(n, c.field, tuple(tuple(v) for v in vectors), tuple(used_primes), True)
    for P in rational_test_points(c):
        x = kappa_coords(c, P)
        for poly_ in rb.polys():
            if poly_(x) != 0:
                raise RankUnstable("lifted relation fails at a rational point")
    return rb


def rational_test_points(c: Curve, limit: int = 8) -> list[JacobianPoint]:
    """Some Q-rational Jacobian points: 2-torsion if F splits, plus small curve points."""
    from .curve import CurvePoint
    from .jacobian import add, from_curve_point

    F = c.field
    pts: list[JacobianPoint] = []
    try:
        pts.extend(two_torsion(c))
    except DoesNotSplit:
        pass
    curve_pts = []
    for num in range(-20, 21):
        for den in (1, 2, 3):
            x = F(num) / den
            y = F.sqrt(c.F(x))
            if y is not None and all(q.x != x for q in curve_pts):
                curve_pts.append(CurvePoint(x, y))
    singles = [from_curve_point(c, q) for q in curve_pts[:limit]]
    pts.extend(singles)
    for i in range(len(singles)):
        for j in range(i + 1, min(len(singles), i + 3)):
            pts.append(add(c, singles[i], singles[j]))
    return pts


def r1_vector(c: Curve) -> list:
    return r1_poly(c).coefficient_vector(monomial_basis(2))


def relation_poly(c: Curve, rel, n: int) -> MPoly:
    if isinstance(rel, MPoly):
        return rel
    return MPoly.from_vector(c.field, monomial_basis(n), [c.field(x) for x in rel])


def verify_relation(c: Curve, rel, n: int, trials: int = 100,
                    rng: random.Random | None = None, include_torsion: bool = True) -> bool:
    """Check that a degree-n form vanishes at kappa(P) for fresh random P.

    Over Q the random points are replaced by the available rational points.
    When F splits, the 64 two-torsion images are checked as well.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = rng or random.Random()
    F = c.field
    form = relation_poly(c, rel, n)
    if form.is_zero():
        return True
    if isinstance(F, Rationals):
        points = rational_test_points(c)
    else:
        points = sample_points(c, trials, rng)
        if include_torsion:
            try:
                points += two_torsion(c)
            except DoesNotSplit:
                pass
    return all(form(kappa_coords(c, P)) == 0 for P in points)


def multiples_of_r1(c: Curve) -> list[list]:
    """Coefficient vectors of ``x_i x_j R1`` for ``i <= j`` in the degree-4 basis."""
    r1 = r1_poly(c)
    F = c.field
    basis4 = monomial_basis(4)
    out = []
    for mono in monomial_basis(2):
        mult = MPoly(F, DIM, {mono: 1}) * r1
        out.append(mult.coefficient_vector(basis4))
    return out


def quartic_split(c: Curve, rb: RelationBasis) -> dict:
    """Dimensions of the quartic relation space, the R1 multiples, and the quotient."""
    if rb.degree != 4:
        raise ValueError("expected a degree-4 relation basis")
    F = rb.field
    mults = multiples_of_r1(c)
    kernel = len(rb)
    mult_dim = span_rank(mults, F)
    union = span_rank(list(rb.vectors) + mults, F)
    return {"relations": kernel, "r1_multiples": mult_dim, "span": union,
            "quotient": union - mult_dim, "contains_multiples": union == kernel}


def check_conjecture_d4(c: Curve, rng: random.Random | None = None, **kw) -> dict:
    require_good_characteristic(c)
    value = d(c, 4, rng, **kw)
    return {"d4": value, "holds": value == 260}


def relations_to_json(rb: RelationBasis) -> dict:
    enc = rb.field.encode
    return {
        "degree": rb.degree,
        "monomial_order": "grlex",
        "field": rb.field.to_json(),
        "primes": list(rb.primes),
        "basis": [[enc(x) for x in v] for v in rb.vectors],
    }


def relations_from_json(obj: dict, field_) -> RelationBasis:
    n = int(obj["degree"])
    if obj.get("monomial_order", "grlex") != "grlex":
        raise ValueError("only grlex monomial order is supported")
    vecs = tuple(tuple(field_.decode(str(s)) for s in v) for v in obj["basis"])
    for v in vecs:
        if len(v) != m(n):
            raise ValueError(f"relation vectors must have length {m(n)}")
    return RelationBasis(n, field_, vecs, tuple(obj.get("primes", ())), False)


def same_span(u: Sequence[Sequence], v: Sequence[Sequence], F) -> bool:
    return echelon_basis(u, F) == echelon_basis(v, F)
