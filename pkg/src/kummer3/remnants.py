"""Traces of the group law on the Kummer variety.

* translation by a 2-torsion point: an 8x8 matrix ``W_T`` with
  ``kappa(P + T) ~ W_T kappa(P)``, found by interpolation;
* the 36x64 matrix of quadratic monomials at the 2-torsion images, whose
  rank 35 rules out genus-2 style biquadratic forms;
* duplication: eight quartics ``delta'`` with ``delta'(kappa(P)) ~ kappa(2P)``,
  found by interpolation and reduced modulo the quartic relations, and the
  normalised version ``delta`` fixing ``(0, ..., 0, 1)``.

Here ``~`` is projective equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra.fields import PrimeField, Rationals
from .algebra.linalg import (
    Matrix,
    left_nullspace,
    left_nullspace_mod_p,
    matmul_mod_p,
    nullspace,
    nullspace_mod_p,
    rank,
    solve_mod_p,
    span_rank,
)
from .algebra.modular import lift_with_primes, random_prime
from .algebra.poly import MPoly
from .curve import Curve, is_good_prime, reduce_mod
from .errors import (
    DoesNotSplit,
    KernelEmpty,
    KernelTooBig,
    KernelUnexpectedDim,
    NotDegreeSeven,
)
from .jacobian import (
    STRATA,
    JacobianPoint,
    add,
    double,
    random_point,
    random_point_in_stratum,
    two_torsion,
)
from .kummer import DIM, canonical_coords, kappa_coords, proportional
from .relations import (
    RelationBasis,
    find_relations,
    kappa_array,
    m,
    monomial_basis,
    monomial_values,
    monomial_values_exact,
    r1_vector,
    rational_test_points,
    require_good_characteristic,
)

# Index sets of the pseudo-addition conjecture (documentation only; the
# forms they index are not available here).
INDEX_I = tuple((i, j) for i in range(1, 9) for j in range(i, 9))
INDEX_E = ((1, 8), (2, 7), (3, 6), (4, 5), (5, 5), (5, 6), (5, 7), (6, 6))

TRANSLATION_SAMPLES = 12
DUPLICATION_SAMPLES = 400
E8_INDEX = m(4) - 1  # x8^4 is last in grlex


# translations ----------------------------------------------------------------

@dataclass(frozen=True)
class TranslationMatrix:
    T: JacobianPoint
    M: Matrix

    def apply(self, x: Sequence) -> tuple:
        return tuple(self.M @ list(x))


def _translation_rows(c: Curve, pairs) -> list[list]:
    F = c.field
    rows = []
    for x, y in pairs:
        for i in range(DIM):
            for j in range(i + 1, DIM):
                row = [0] * (DIM * DIM)
                for k in range(DIM):
                    row[i * DIM + k] = F.norm(x[k] * y[j])
                    row[j * DIM + k] = F.norm(-x[k] * y[i])
                rows.append(row)
    return rows


def derive_translation(c: Curve, T: JacobianPoint, samples: Sequence[JacobianPoint] | None = None,
                       rng: random.Random | None = None,
                       count: int = TRANSLATION_SAMPLES) -> TranslationMatrix:
    """Interpolate ``W_T`` from pairs ``(kappa(P), kappa(P + T))``.

    Over Q the default samples are the known rational points.  The 64
    entries of the matrix solve ``(W x)_i y_j = (W x)_j y_i``; the solution
    must be unique up to scale.
    """
    F = c.field
    if samples is None:
        if isinstance(F, PrimeField):
            rng = rng or random.Random(0)
            samples = [random_point(c, rng) for _ in range(count)]
        else:
            samples = rational_test_points(c)
    pairs = [(kappa_coords(c, P), kappa_coords(c, add(c, P, T))) for P in samples]
    rows = _translation_rows(c, pairs)
    K = nullspace(Matrix.from_rows(F, rows, cols=DIM * DIM))
    if not K:
        raise KernelEmpty("no matrix maps kappa(P) to kappa(P+T)")
    if len(K) > 1:
        raise KernelTooBig(f"{len(K)}-dimensional solution space; add samples")
    return TranslationMatrix(T, Matrix(F, DIM, DIM, tuple(K[0])))


def all_translations(c: Curve, rng: random.Random | None = None,
                     count: int = TRANSLATION_SAMPLES) -> list[TranslationMatrix]:
    rng = rng or random.Random(0)
    return [derive_translation(c, T, rng=rng, count=count) for T in two_torsion(c)]


def is_scalar_matrix(M: Matrix) -> bool:
    d0 = M[0, 0]
    if d0 == 0:
        return False
    return all(M[i, j] == (d0 if i == j else 0) for i in range(M.rows) for j in range(M.cols))


# the 36 x 64 matrix at the 2-torsion ---------------------------------------

@dataclass(frozen=True)
class TwoTorsionGram:
    matrix: Matrix
    torsion: tuple

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def left_kernel(self) -> list[tuple]:
        return left_nullspace(self.matrix)


def two_torsion_gram(c: Curve) -> TwoTorsionGram:
    """Rows ``x_a x_b`` (``a <= b``, grlex order), columns the 64 points of A[2]."""
    F = c.field
    torsion = two_torsion(c)
    cols = [monomial_values_exact(F, canonical_coords(kappa_coords(c, T), F), 2) for T in torsion]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]
    return TwoTorsionGram(Matrix.from_rows(F, rows), tuple(torsion))


def rank35_report(c: Curve) -> dict:
    g = two_torsion_gram(c)
    kern = g.left_kernel()
    r1 = r1_vector(c)
    is_r1 = len(kern) == 1 and span_rank([kern[0], r1], c.field) == 1
    return {"rank": g.rank, "kernel_dim": len(kern), "kernel_is_R1": is_r1}


# duplication ------------------------------------------------------------------

@dataclass(frozen=True)
class DuplicationMap:
    """Eight quartic forms, as coefficient vectors on the grlex degree-4 basis."""

    field: object
    coeffs: tuple
    primes: tuple = ()
    normalized: bool = False
    info: dict = field(default_factory=dict, compare=False)

    def polys(self) -> list[MPoly]:
        basis = monomial_basis(4)
        return [MPoly.from_vector(self.field, basis, v) for v in self.coeffs]

    def __call__(self, x: Sequence) -> tuple:
        F = self.field
        vals = monomial_values_exact(F, list(x), 4)
        return tuple(F.norm(sum(a * b for a, b in zip(vals, v) if b != 0)) for v in self.coeffs)

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        """Values at the rows of ``X`` (prime fields only)."""
        p = self.field.p
        C = np.array(self.coeffs, dtype=np.int64).T
        return matmul_mod_p(monomial_values(X, 4, p), C, p)


def _doubling_pairs(c: Curve, count: int, rng: random.Random):
    """Samples ``(kappa(P), kappa(2P))`` with the first coordinate of kappa(2P) nonzero."""
    F = c.field
    xs, ws = [], []
    while len(xs) < count:
        P = random_point(c, rng)
        w = kappa_coords(c, double(c, P))
        if w[0] == 0:
            continue
        xs.append(canonical_coords(kappa_coords(c, P), F))
        ws.append(canonical_coords(w, F))
    return np.array(xs, dtype=np.int64), np.array(ws, dtype=np.int64)


def _derive_duplication_fp(c: Curve, relations: RelationBasis, count: int,
                           rng: random.Random) -> tuple[list[list[int]], dict]:
    F = c.field
    p = F.p
    n_rel = len(relations)
    if n_rel != m(4) - 260:
        raise KernelUnexpectedDim(f"{n_rel} quartic relations, expected 70")
    std = relations.standard_monomials()
    X, W = _doubling_pairs(c, count, rng)
    M = monomial_values(X, 4, p)[:, std]
    # delta_i = (w_i / w_1) delta_1 at every sample
    L = left_nullspace_mod_p(M, p)
    if L.shape[0] != count - len(std):
        raise KernelUnexpectedDim("evaluation matrix on standard monomials is rank deficient")
    blocks = []
    for i in range(1, DIM):
        blocks.append(matmul_mod_p(L, W[:, i:i + 1] * M % p, p))
    C = np.vstack(blocks)
    k1 = nullspace_mod_p(C, p)
    if k1.shape[0] != 1:
        raise KernelUnexpectedDim(
            f"duplication solution space has dimension {8 * n_rel + k1.shape[0]}, "
            f"expected {8 * n_rel + 1}")
    c1 = k1[0]
    base = matmul_mod_p(M, c1[:, None], p)[:, 0]
    rhs = np.stack([W[:, i] * base % p for i in range(1, DIM)], axis=1)
    sol = solve_mod_p(M, rhs, p)
    if sol is None:
        raise KernelUnexpectedDim("duplication coordinates are inconsistent")
    reduced = [c1] + [sol[:, i] for i in range(DIM - 1)]
    coeffs = []
    for vec in reduced:
        full = [0] * m(4)
        for j, idx in enumerate(std):
            full[idx] = int(vec[j])
        coeffs.append(full)
    lead = coeffs[7][E8_INDEX]
    if lead == 0:
        raise KernelUnexpectedDim("delta'_8 has no x8^4 term")
    f7 = c.f[7]
    lam = f7 * f7 * pow(lead, -1, p) % p
    coeffs = [[x * lam % p for x in v] for v in coeffs]
    info = {"samples": count, "solution_dim": 8 * n_rel + 1,
            "relations": n_rel, "standard_monomials": len(std)}
    return coeffs, info


def derive_duplication(c: Curve, rng: random.Random | None = None,
                       samples: int = DUPLICATION_SAMPLES,
                       relations: RelationBasis | None = None,
                       bits: int = 31, primes: int = 2) -> DuplicationMap:
    """Quartic duplication polynomials ``delta'``, reduced modulo the quartic relations.

    The scale is fixed by ``delta'(0,...,0,1) = (0,...,0,f7^2)``.  Over F_p
    two independent sample sets must give the same map; over Q the map is
    lifted from several primes and then checked exactly at rational points.
    """
    require_good_characteristic(c)
    rng = rng or random.Random(0)
    F = c.field
    if isinstance(F, PrimeField):
        rel = relations or find_relations(c, 4, rng)
        a, info = _derive_duplication_fp(c, rel, samples, rng)
        b, _ = _derive_duplication_fp(c, rel, samples, rng)
        if a != b:
            raise KernelUnexpectedDim("duplication maps from independent samples disagree")
        return DuplicationMap(F, tuple(tuple(v) for v in a), (F.p,), False, info)
    used: set[int] = set()
    infos = {}

    def next_prime():
        while True:
            p = random_prime(rng, bits, exclude=used)
            used.add(p)
            if is_good_prime(c, p):
                return p

    def compute(p):
        cp = reduce_mod(c, p)
        rel = find_relations(cp, 4, rng)
        coeffs, infos[p] = _derive_duplication_fp(cp, rel, samples, rng)
        return coeffs

    vectors, used_primes = lift_with_primes(compute, next_prime, min_primes=max(primes, 2))
    dup = DuplicationMap(F, tuple(tuple(v) for v in vectors), tuple(used_primes), False,
                         dict(infos[used_primes[0]]))
    for P in rational_test_points(c):
        if not _dup_matches(c, dup, P):
            raise KernelUnexpectedDim("lifted duplication map fails at a rational point")
    return dup


def apply_tau(c: Curve, x: Sequence, inverse: bool = False) -> tuple:
    """``(x1, ..., x7, f7 x8)``, or its inverse."""
    F = c.field
    f7 = c.f[7]
    if f7 == 0:
        raise NotDegreeSeven("f7 must be nonzero")
    s = F.inv(f7) if inverse else f7
    return tuple(x[:7]) + (F.norm(x[7] * s),)


def normalized_duplication(c: Curve, dup: DuplicationMap) -> DuplicationMap:
    """Conjugate ``delta'`` by tau and rescale so that ``(0,...,0,1)`` is fixed.

    ``delta = f7 * (tau o delta' o tau^-1)``; with ``delta'(e8) = f7^2 e8`` this
    gives ``delta(e8) = e8`` exactly.
    """
    if dup.normalized:
        return dup
    F = c.field
    f7 = c.f[7]
    inv = F.inv(f7)
    basis = monomial_basis(4)
    out = []
    for i, vec in enumerate(dup.coeffs):
        outer = F.norm(f7 * f7) if i == 7 else f7
        out.append(tuple(F.norm(v * outer * inv ** e[7]) if v != 0 else v
                         for v, e in zip(vec, basis)))
    return DuplicationMap(F, tuple(out), dup.primes, True, dict(dup.info))


def is_integral(dup: DuplicationMap) -> bool:
    """True if every coefficient is an integer (curves over Q)."""
    return isinstance(dup.field, Rationals) and all(
        getattr(v, "denominator", 1) == 1 for vec in dup.coeffs for v in vec)


def _dup_matches(c: Curve, dup: DuplicationMap, P: JacobianPoint) -> bool:
    x = kappa_coords(c, P)
    w = kappa_coords(c, double(c, P))
    if dup.normalized:
        x, w = apply_tau(c, x), apply_tau(c, w)
    return proportional(dup(x), w, c.field)


VERIFY_STRATA = tuple(s for s in STRATA if s != "identity")


def verify_theorem_duplication(c: Curve, dup: DuplicationMap, trials: int = 100,
                               rng: random.Random | None = None,
                               report: dict | None = None) -> bool:
    """Check ``dup(kappa(P)) ~ kappa(2P)`` at fresh points of every reachable stratum.

    Over F_p most trials are generic points; every tenth cycles through the
    special strata (and the identity is always checked).  Over Q the available
    rational points are used.  For a normalised map the identity is checked in
    tau coordinates.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    F = c.field
    rng = rng or random.Random()
    if isinstance(F, Rationals):
        pts = rational_test_points(c) + [JacobianPoint((F(1),), ())]
        ok = all(_dup_matches(c, dup, P) for P in pts)
        if report is not None:
            report.update(checked=len(pts), failures=0 if ok else None)
        return ok
    try:
        two_torsion(c)
        strata = VERIFY_STRATA
    except DoesNotSplit:
        strata = tuple(s for s in VERIFY_STRATA if s != "two_torsion")
    pts = [JacobianPoint((F(1),), ())]
    for t in range(trials):
        if t % 10 == 9:
            pts.append(random_point_in_stratum(c, rng, strata[(t // 10) % len(strata)]))
        else:
            pts.append(random_point(c, rng))
    X = kappa_array(c, pts)
    Y = kappa_array(c, [double(c, P) for P in pts])
    if dup.normalized:
        X = np.array([apply_tau(c, [int(v) for v in r]) for r in X], dtype=np.int64)
        Y = np.array([apply_tau(c, [int(v) for v in r]) for r in Y], dtype=np.int64)
    V = dup.evaluate_many(X)
    failures = 0
    for v, y in zip(V, Y):
        if not proportional([int(t) for t in v], [int(t) for t in y], F):
            failures += 1
    if report is not None:
        report.update(checked=len(pts), failures=failures)
    return failures == 0


def commutes_with_translation(c: Curve, dup: DuplicationMap, W: TranslationMatrix,
                              P: JacobianPoint) -> bool:
    """``dup(W x) ~ dup(x)`` for ``x = kappa(P)``, since ``2(P + T) = 2P``."""
    x = kappa_coords(c, P)
    return proportional(dup(W.apply(x)), dup(x), c.field)


# serialisation ----------------------------------------------------------------

def translation_to_json(c: Curve, W: TranslationMatrix) -> dict:
    from .jacobian import point_to_json

    enc = c.field.encode
    return {"T": point_to_json(c, W.T),
            "matrix": [[enc(x) for x in W.M.row(i)] for i in range(DIM)]}


def translation_from_json(c: Curve, obj: dict) -> TranslationMatrix:
    from .jacobian import point_from_json

    F = c.field
    rows = [[F.decode(str(s)) for s in r] for r in obj["matrix"]]
    return TranslationMatrix(point_from_json(c, obj["T"]), Matrix.from_rows(F, rows))


def duplication_to_json(dup: DuplicationMap) -> dict:
    enc = dup.field.encode
    return {"degree": 4, "monomial_order": "grlex", "normalized": dup.normalized,
            "field": dup.field.to_json(), "primes": list(dup.primes),
            "coefficients": [[enc(x) for x in v] for v in dup.coeffs]}


def duplication_from_json(obj: dict, field_) -> DuplicationMap:
    if obj.get("monomial_order", "grlex") != "grlex":
        raise ValueError("only grlex monomial order is supported")
    coeffs = tuple(tuple(field_.decode(str(s)) for s in v) for v in obj["coefficients"])
    if len(coeffs) != DIM or any(len(v) != m(4) for v in coeffs):
        raise ValueError("expected 8 coefficient vectors of length 330")
    return DuplicationMap(field_, coeffs, tuple(obj.get("primes", ())),
                          bool(obj.get("normalized", False)))
