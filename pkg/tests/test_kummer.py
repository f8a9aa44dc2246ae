import random

import pytest

from kummer3.algebra.fields import QQ, PrimeField
from kummer3.algebra.linalg import Matrix
from kummer3.curve import new_curve, random_curve, reduce_mod
from kummer3.errors import NotOnKummer
from kummer3.jacobian import (
    STRATA,
    identity,
    make_point,
    negate,
    random_point,
    random_point_in_stratum,
    two_torsion,
)
from kummer3.kummer import (
    KummerPoint,
    canonical_coords,
    from_xi,
    kappa,
    kappa_coords,
    kummer_from_json,
    kummer_to_json,
    lift_to_jacobian,
    proportional,
    r1_poly,
    r1_value,
    to_xi,
    xi_inverse_matrix,
    xi_matrix,
)

SPLIT = [0, 720, -1764, 1624, -735, 175, -21, 1]


@pytest.fixture(scope="module")
def split_fp():
    return random_curve(PrimeField(1000003), random.Random(1), split=True)


def test_identity_and_weight_one():
    c = new_curve(SPLIT)
    assert kappa_coords(c, identity(c)) == (0, 0, 0, 0, 0, 0, 0, 1)
    P = make_point(c, [-1, 1], [])           # (X - 1, 0)
    assert kappa_coords(c, P) == (0, 0, 0, 0, 1, -1, 1, 1)


def test_weight_three_two_torsion_by_hand():
    # T = (X(X-1)(X-2), 0): a = X^3 - 3X^2 + 2X gives kappa_2..4 = 3, 2, 0.
    # With b = 0 the weight-3 formulas reduce to polynomials in f5, f6, f7:
    #   kappa_5 = -f7 k2^3 + f7 k3 k2 - f6 k2^2 + 3 f7 k4 + 2 f6 k3 = -27 + 6 + 189 - 84 = 84
    # and R1 then fixes kappa_8 once kappa_6, kappa_7 are known.
    c = new_curve(SPLIT)
    x = kappa_coords(c, make_point(c, [0, 2, -3, 1], []))
    assert x[:5] == (1, 3, 2, 0, 84)
    assert x == (1, 3, 2, 0, 84, -591, 786, 476)


def test_r1_vanishes_on_all_strata(split_fp):
    rng = random.Random(2)
    for s in STRATA:
        for _ in range(30):
            P = random_point_in_stratum(split_fp, rng, s)
            assert r1_value(split_fp, kappa_coords(split_fp, P)) == 0


def test_r1_on_rational_torsion():
    c = new_curve(SPLIT)
    for T in two_torsion(c):
        assert r1_value(c, kappa_coords(c, T)) == 0
    assert r1_poly(c).is_homogeneous() and r1_poly(c).total_degree() == 2


def test_kappa_is_even(split_fp):
    rng = random.Random(3)
    for s in STRATA:
        P = random_point_in_stratum(split_fp, rng, s)
        assert proportional(kappa_coords(split_fp, P), kappa_coords(split_fp, negate(split_fp, P)),
                            split_fp.field)


def test_lift_roundtrip(split_fp):
    rng = random.Random(4)
    for s in STRATA:
        for _ in range(10):
            P = random_point_in_stratum(split_fp, rng, s)
            lifts = lift_to_jacobian(split_fp, kappa(split_fp, P))
            assert P in lifts
            assert set(lifts) == {P, negate(split_fp, P)}


def test_lift_rejects_points_off_kummer(split_fp):
    F = split_fp.field
    x = list(kappa_coords(split_fp, random_point(split_fp, random.Random(5))))
    x[7] = F.norm(x[7] + 1)
    with pytest.raises(NotOnKummer):
        lift_to_jacobian(split_fp, KummerPoint(tuple(x), F))
    with pytest.raises(NotOnKummer):
        lift_to_jacobian(split_fp, KummerPoint((0, 0, 0, 0, 1, 2, 3, 4), F))


def test_lift_to_twist_is_empty():
    c = new_curve(SPLIT)
    # x = -1 gives F(-1) = -5040, not a square: a rational point of K only
    k = KummerPoint(tuple(QQ(v) for v in (0, 0, 0, 0, 1, 1, 1, -1)), QQ)
    assert lift_to_jacobian(c, k) == []


def test_canonical_coordinates():
    x = (QQ(1) / 2, QQ(0), QQ(-3), QQ(0), QQ(0), QQ(0), QQ(0), QQ(1))
    assert canonical_coords(x, QQ) == (1, 0, -6, 0, 0, 0, 0, 2)
    assert canonical_coords([QQ(-2) * v for v in x], QQ) == (1, 0, -6, 0, 0, 0, 0, 2)
    F = PrimeField(7)
    assert canonical_coords((0, 3, 6, 0, 0, 0, 0, 1), F) == (0, 1, 2, 0, 0, 0, 0, 5)


def test_xi_is_invertible(split_fp):
    Xi, Xinv = xi_matrix(split_fp), xi_inverse_matrix(split_fp)
    assert Xi @ Xinv == Matrix.identity(split_fp.field, 8)
    k = kappa(split_fp, random_point(split_fp, random.Random(6)))
    assert from_xi(split_fp, to_xi(split_fp, k)).coords == k.coords


def test_kummer_json_roundtrip():
    c = new_curve(SPLIT)
    k = kappa(c, two_torsion(c)[20])
    assert kummer_from_json(c, kummer_to_json(c, k)) == k
    assert kummer_to_json(c, kappa(c, identity(c))) == {"x": ["0"] * 7 + ["1"]}


def test_reduction_commutes_with_kappa():
    c = new_curve(SPLIT)
    cp = reduce_mod(c, 10007)
    for T in two_torsion(c)[:20]:
        x = kappa_coords(c, T)
        Tp = make_point(cp, [int(v) for v in T.a], [int(v) for v in T.b])
        assert kappa_coords(cp, Tp) == tuple(cp.field(v) for v in x)

