import random
from math import isqrt

import pytest

from kummer3.algebra import poly
from kummer3.algebra.fields import QQ, PrimeField
from kummer3.curve import (
    INFINITY,
    CurvePoint,
    curve_from_json,
    curve_to_json,
    involution,
    is_good_prime,
    new_curve,
    points_over_prime_field,
    random_curve,
    reduce_mod,
)
from kummer3.errors import (
    BadPrime,
    DoesNotSplit,
    FieldTooLarge,
    NotDegreeSeven,
    NotSquarefree,
    OcticModel,
)
from kummer3.jacobian import (
    STRATA,
    JacobianPoint,
    add,
    double,
    from_curve_point,
    from_curve_points,
    group_order_bruteforce,
    identity,
    is_valid,
    make_point,
    negate,
    point_from_json,
    point_to_json,
    random_point,
    random_point_in_stratum,
    scalar_mul,
    sub,
    two_torsion,
)

from oracles import legendre_count

SPLIT = [0, 720, -1764, 1624, -735, 175, -21, 1]   # X(X-1)...(X-6)


def test_model_validation():
    with pytest.raises(NotDegreeSeven):
        new_curve([1, 2, 3, 4, 5, 6, 7, 0])
    with pytest.raises(OcticModel):
        new_curve([1, 0, 0, 0, 0, 0, 0, 1, 1])
    assert new_curve([1, 0, 0, 0, 0, 0, 0, 1, 0]).f[7] == 1
    square = list(poly.from_roots(QQ, [0, 0, 1, 2, 3, 4, 5]))
    with pytest.raises(NotSquarefree):
        new_curve(square)
    assert new_curve(square, degenerate=True).degenerate


def test_reduction_and_bad_primes():
    c = new_curve(SPLIT)
    assert is_good_prime(c, 7)           # root differences are at most 6
    assert not is_good_prime(c, 5)
    d = new_curve(list(poly.from_roots(QQ, [0, 1, 2, 3, 4, 5, 13])))
    assert not is_good_prime(d, 11) and not is_good_prime(d, 13)
    assert is_good_prime(d, 17)
    with pytest.raises(BadPrime):
        reduce_mod(c, 3)
    cp = reduce_mod(c, 10007)
    assert cp.field == PrimeField(10007)
    assert cp.f[2] == 10007 - 1764


def test_point_count_matches_legendre_and_weil_bound():
    rng = random.Random(1)
    for p in (101, 211, 307):
        c = random_curve(PrimeField(p), rng)
        pts = points_over_prime_field(c)
        n = legendre_count(c.f, p)
        assert len(pts) == n
        assert all(c.is_on(q) for q in pts)
        assert abs(n - (p + 1)) <= 6 * isqrt(p) + 6     # |N - (p+1)| <= 2 g sqrt(p)


def test_enumeration_limit():
    c = random_curve(PrimeField(1000003), random.Random(2))
    with pytest.raises(FieldTooLarge):
        points_over_prime_field(c)
    (q,) = points_over_prime_field(c, "sample", random.Random(3))
    assert c.is_on(q)


def test_involution_and_infinity():
    c = new_curve(SPLIT)
    q = CurvePoint(QQ(0), QQ(0))
    assert involution(c, q) == q
    assert involution(c, INFINITY) == INFINITY
    assert c.is_on(INFINITY)


def test_curve_json_roundtrip():
    c = new_curve(SPLIT)
    assert curve_from_json(curve_to_json(c)) == c
    d = random_curve(PrimeField(101), random.Random(4), degenerate=True)
    assert curve_from_json(curve_to_json(d)) == d


# Jacobian --------------------------------------------------------------------

def test_group_order_over_f7_within_hasse_weil():
    c = random_curve(PrimeField(7), random.Random(5))
    n = group_order_bruteforce(c)
    assert (isqrt(7) - 1) ** 6 <= n <= (isqrt(7) + 2) ** 6
    rng = random.Random(6)
    for _ in range(20):
        assert scalar_mul(c, n, random_point(c, rng)).is_identity()


def test_group_order_counts_valid_pairs():
    # sampled points are valid reduced pairs and never outnumber the brute-force count
    K = PrimeField(5)
    c = random_curve(K, random.Random(7))
    rng = random.Random(8)
    n = group_order_bruteforce(c)
    seen = {random_point(c, rng) for _ in range(4000)}
    assert len(seen) <= n
    assert all(is_valid(c, P) for P in seen)


def test_group_axioms_randomised():
    rng = random.Random(9)
    c = random_curve(PrimeField(10007), rng)
    O = identity(c)
    for _ in range(200):
        P, Q, R = (random_point(c, rng) for _ in range(3))
        assert add(c, add(c, P, Q), R) == add(c, P, add(c, Q, R))
        assert add(c, P, Q) == add(c, Q, P)
        assert add(c, P, negate(c, P)) == O
        assert add(c, P, O) == P
        assert sub(c, add(c, P, Q), Q) == P


def test_scalar_multiplication():
    rng = random.Random(10)
    c = random_curve(PrimeField(10007), rng)
    P = random_point(c, rng)
    acc = identity(c)
    for k in range(12):
        assert scalar_mul(c, k, P) == acc
        acc = add(c, acc, P)
    assert scalar_mul(c, -3, P) == negate(c, scalar_mul(c, 3, P))
    assert double(c, P) == scalar_mul(c, 2, P)


def test_two_torsion():
    c = reduce_mod(new_curve(SPLIT), 10007)
    T = two_torsion(c)
    assert len(T) == 64 and len(set(T)) == 64
    assert T[0].is_identity()
    for t in T:
        assert double(c, t).is_identity()
    with pytest.raises(DoesNotSplit):
        two_torsion(new_curve([1, 0, 0, 0, 0, 0, 0, 1]))


def test_rational_two_torsion():
    c = new_curve(SPLIT)
    T = two_torsion(c)
    assert len(T) == 64
    assert all(double(c, t).is_identity() for t in T)


def test_from_curve_points_is_divisor_sum():
    rng = random.Random(11)
    c = random_curve(PrimeField(10007), rng)
    from kummer3.curve import random_affine_point

    for _ in range(30):
        pts = [random_affine_point(c, rng) for _ in range(3)]
        direct = from_curve_points(c, pts)
        summed = identity(c)
        for q in pts:
            summed = add(c, summed, from_curve_point(c, q))
        assert direct == summed


def test_strata_shapes():
    rng = random.Random(12)
    c = random_curve(PrimeField(10007), rng, split=True)
    weights = {"generic": 3, "weight3_repeated": 3, "weight2": 2, "weight2_tangent": 2,
               "weight1": 1, "identity": 0}
    for s in STRATA:
        P = random_point_in_stratum(c, rng, s)
        assert is_valid(c, P)
        if s in weights:
            assert P.weight == weights[s]
    P = random_point_in_stratum(c, rng, "weight2_tangent")
    assert len(poly.roots(c.field, P.a)) == 1


def test_point_json_and_validation():
    c = new_curve(SPLIT)
    P = make_point(c, [0, -3, 1], [])      # X(X-3), a 2-torsion point
    assert point_from_json(c, point_to_json(c, P)) == P
    with pytest.raises(ValueError):
        make_point(c, [5, 1], [1])
    assert not is_valid(c, JacobianPoint((QQ(2), QQ(1)), (QQ(1),)))
