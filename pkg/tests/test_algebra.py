import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kummer3.algebra import poly
from kummer3.algebra.fields import QQ, BadCharacteristic, PrimeField, field_from_json
from kummer3.algebra.linalg import (
    Matrix,
    left_nullspace,
    matmul_mod_p,
    nullspace,
    nullspace_mod_p,
    rank,
    rank_mod_p,
    solve_mod_p,
)
from kummer3.algebra.modular import (
    NoReconstruction,
    crt,
    lift_with_primes,
    random_prime,
    rational_reconstruct,
    reconstruct,
)
from kummer3.algebra.poly import MPoly

from oracles import rank_by_counting, rational_by_search

P = 10007
F = PrimeField(P)
elems = st.integers(min_value=0, max_value=P - 1)


# fields -----------------------------------------------------------------------

@settings(max_examples=200)
@given(elems, elems, elems)
def test_prime_field_ring_axioms(a, b, c):
    n = F.norm
    assert n(a * (b + c)) == n(n(a * b) + n(a * c))
    assert n(n(a * b) * c) == n(a * n(b * c))
    assert n(a + b) == n(b + a)


@given(elems.filter(lambda x: x != 0))
def test_prime_field_inverse(a):
    assert F.norm(a * F.inv(a)) == 1


@given(elems)
def test_sqrt_matches_euler_criterion(a):
    r = F.sqrt(a)
    euler = a == 0 or pow(a, (P - 1) // 2, P) == 1
    assert (r is not None) == euler
    if r is not None:
        assert r * r % P == a


def test_sqrt_for_p_one_mod_eight():
    K = PrimeField(17)   # Tonelli-Shanks with s = 4
    for a in range(17):
        r = K.sqrt(a)
        assert (r is not None) == (a in {x * x % 17 for x in range(17)})


def test_characteristic_two_rejected():
    with pytest.raises(BadCharacteristic):
        PrimeField(2)


def test_field_conversions():
    assert F(Fraction(1, 2)) == F.inv(2)
    assert F("-1") == P - 1
    assert QQ.decode(QQ.encode(QQ(-3) / 7)) == QQ(-3) / 7
    assert QQ.encode(QQ(5)) == "5"
    assert field_from_json(F.to_json()) == F
    assert field_from_json("Q") == QQ


def test_rational_sqrt():
    assert QQ.sqrt(QQ(9) / 4) == QQ(3) / 2
    assert QQ.sqrt(QQ(2)) is None
    assert QQ.sqrt(QQ(-1)) is None


# univariate polynomials ------------------------------------------------------

def test_xgcd_bezout():
    rng = random.Random(1)
    for _ in range(50):
        a = tuple(rng.randrange(P) for _ in range(rng.randrange(1, 7)))
        b = tuple(rng.randrange(P) for _ in range(rng.randrange(1, 7)))
        g, s, t = poly.xgcd(F, a, b)
        assert poly.add(F, poly.mul(F, s, a), poly.mul(F, t, b)) == g
        if g:
            assert not poly.mod(F, a, g) and not poly.mod(F, b, g)


def test_divmod_reconstructs():
    a = (3, 1, 4, 1, 5, 9)
    b = (2, 7, 1)
    q, r = poly.divmod_(F, a, b)
    assert poly.add(F, poly.mul(F, q, b), r) == poly.trim(a)
    assert poly.deg(r) < poly.deg(b)


def test_roots_against_brute_force():
    K = PrimeField(101)
    rng = random.Random(2)
    for _ in range(30):
        f = tuple(rng.randrange(101) for _ in range(7)) + (1,)
        expected = sorted(x for x in range(101) if poly.evaluate(K, f, x) == 0)
        assert sorted(poly.roots(K, f, rng)) == expected


def test_roots_over_rationals():
    f = poly.from_roots(QQ, [QQ(1) / 2, QQ(-3), QQ(0)])
    assert sorted(poly.roots(QQ, f)) == [QQ(-3), QQ(0), QQ(1) / 2]
    assert poly.roots(QQ, (QQ(-2), QQ(0), QQ(1))) == []


def test_discriminant_against_sympy():
    x = sympy.Symbol("x")
    for coeffs in ([1, 0, 0, 0, 0, 0, 0, 1], [0, 720, -1764, 1624, -735, 175, -21, 1],
                   [3, -1, 4, 1, -5, 9, 2, 6]):
        f = tuple(QQ(c) for c in coeffs)
        expr = sum(c * x**i for i, c in enumerate(coeffs))
        assert int(poly.discriminant(QQ, f)) == int(sympy.discriminant(expr, x))


def test_squarefree_detection():
    assert poly.is_squarefree(QQ, poly.from_roots(QQ, [1, 2, 3]))
    assert not poly.is_squarefree(QQ, poly.from_roots(QQ, [1, 1, 3]))


def test_mpoly_arithmetic_and_vectors():
    x = [MPoly.variable(QQ, 3, i) for i in range(3)]
    f = (x[0] + x[1]) ** 2 - x[2] * x[0]
    assert f((QQ(1), QQ(2), QQ(3))) == 6
    assert f.is_homogeneous() and f.total_degree() == 2
    basis = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    vec = f.coefficient_vector(basis)
    assert vec == [1, 2, -1, 1, 0, 0]
    assert MPoly.from_vector(QQ, basis, vec) == f


# linear algebra -------------------------------------------------------------

def test_rank_against_kernel_count():
    rng = random.Random(3)
    for _ in range(20):
        rows = [[rng.randrange(5) for _ in range(4)] for _ in range(rng.randrange(1, 5))]
        assert rank_mod_p(np.array(rows), 5) == rank_by_counting(rows, 5)
        assert rank(Matrix.from_rows(PrimeField(5), rows)) == rank_by_counting(rows, 5)


def test_canonical_kernel_representative():
    K = nullspace_mod_p(np.array([[1, 1]]), 7)
    assert K.tolist() == [[1, 6]]
    assert nullspace(Matrix.from_rows(PrimeField(7), [[1, 1]])) == [(1, 6)]


def test_rational_nullspace_and_left_kernel():
    A = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    for v in nullspace(A):
        assert all(x == 0 for x in A @ list(v))
    L = left_nullspace(A)
    assert len(L) == 1
    assert all(x == 0 for x in A.transpose() @ list(L[0]))


def test_matmul_without_overflow():
    rng = np.random.default_rng(4)
    p = 2147483629
    a = rng.integers(0, p, size=(6, 300))
    b = rng.integers(0, p, size=(300, 5))
    exact = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(300)) % p for j in range(5)]
             for i in range(6)]
    assert matmul_mod_p(a, b, p).tolist() == exact


def test_solve_mod_p():
    p = 101
    a = np.array([[1, 2], [3, 4], [5, 6]])
    x = np.array([[7], [9]])
    rhs = a @ x % p
    assert solve_mod_p(a, rhs, p).tolist() == [[7], [9]]
    assert solve_mod_p(a, (rhs + np.array([[0], [0], [1]])) % p, p) is None


# CRT and reconstruction ------------------------------------------------------------

def test_crt_and_reconstruction_oracle():
    x, M = crt([1, 50], [101, 103])
    assert M == 10403 and x % 101 == 1 and x % 103 == 50
    assert rational_by_search(x, M) == [(-40, 61)]
    assert rational_reconstruct([1, 50], [101, 103]) == Fraction(-40, 61)


def test_reconstruction_fails_without_small_fraction():
    M = 101
    found = {x for x in range(M) if rational_by_search(x, M)}
    missing = next(x for x in range(M) if x not in found)
    with pytest.raises(NoReconstruction):
        reconstruct(missing, M)


def test_lift_with_primes_recovers_fractions():
    rng = random.Random(5)
    target = [[Fraction(-40, 61), Fraction(123456789, 1000003)], [Fraction(0), Fraction(7)]]

    def image(p):
        return [[v.numerator * pow(v.denominator, -1, p) % p for v in row] for row in target]

    values, primes = lift_with_primes(image, lambda: random_prime(rng, 20))
    assert values == target
    assert len(primes) >= 3


def test_random_prime_excludes_small():
    rng = random.Random(6)
    for _ in range(20):
        p = random_prime(rng, 4)
        assert sympy.isprime(p) and p not in (2, 3, 5)


def test_encode_has_no_digit_cap():
    x = QQ(3) ** 20000 / 7
    assert QQ.decode(QQ.encode(x)) == x
