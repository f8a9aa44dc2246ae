"""Chinese remaindering, rational reconstruction and working-prime selection."""

from __future__ import annotations

import random
from math import gcd, isqrt, prod
from typing import Callable, Sequence

import gmpy2
from gmpy2 import mpq


class NoReconstruction(ArithmeticError):
    """No rational within the reconstruction bound matches the residues."""


EXCLUDED_PRIMES = (2, 3, 5)


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Return ``(x, M)`` with ``0 <= x < M = prod(moduli)``."""
    if len(residues) != len(moduli) or not moduli:
        raise ValueError("need matching, non-empty residue and modulus lists")
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if gcd(M, m) != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = (int(r) - x) * pow(M, -1, m) % m
        x += M * t
        M *= m
    return x % M, M


def reconstruct(x: int, M: int):
    """Rational ``u/v`` with ``|u|, v <= sqrt(M/2)`` and ``u = v*x mod M``."""
    bound = isqrt(M // 2)
    r0, r1 = M, x % M
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        raise NoReconstruction(f"no rational reconstruction of {x} mod {M}")
    if s1 < 0:
        r1, s1 = -r1, -s1
    return mpq(r1, s1)


def rational_reconstruct(residues: Sequence[int], moduli: Sequence[int]):
    x, M = crt(residues, moduli)
    return reconstruct(x, M)


def reconstruct_vectors(images: dict[int, Sequence[Sequence[int]]]) -> list[list]:
    """Entry-wise reconstruction of equally shaped lists of vectors.

    ``images`` maps each prime to the mod-p image of the same list of
    vectors.  Raises :class:`NoReconstruction` if any entry fails.
    """
    primes = sorted(images)
    first = images[primes[0]]
    M = prod(primes)
    out = []
    for i, vec in enumerate(first):
        row = []
        for j in range(len(vec)):
            x, _ = crt([images[p][i][j] for p in primes], primes)
            row.append(reconstruct(x, M))
        out.append(row)
    return out


def agrees_mod(values: Sequence[Sequence], images: Sequence[Sequence[int]], p: int) -> bool:
    for vec, img in zip(values, images):
        for v, r in zip(vec, img):
            v = mpq(v)
            if v.denominator % p == 0:
                return False
            if (int(v.numerator) * pow(int(v.denominator), -1, p) - int(r)) % p:
                return False
    return True


def random_prime(rng: random.Random, bits: int = 31, exclude: Sequence[int] = ()) -> int:
    """A random prime in ``[2**(bits-1), 2**bits)`` outside ``exclude``."""
    if bits < 3:
        raise ValueError("prime size too small")
    lo, hi = 1 << (bits - 1), 1 << bits
    banned = set(exclude) | set(EXCLUDED_PRIMES)
    while True:
        p = int(gmpy2.next_prime(rng.randrange(lo, hi)))
        if p < hi and p not in banned:
            return p


def lift_with_primes(compute: Callable[[int], Sequence[Sequence[int]]],
                     next_prime: Callable[[], int],
                     min_primes: int = 2, max_primes: int = 64):
    """Run ``compute`` modulo fresh primes until the rational lift stabilises.

    A lift from ``k`` primes is accepted once it also matches the image
    modulo one further, independent prime.  Returns ``(values, primes)``.
    """
    images: dict[int, Sequence[Sequence[int]]] = {}
    while len(images) < min_primes:
        p = next_prime()
        if p not in images:
            images[p] = compute(p)
    while len(images) < max_primes:
        candidate = None
        try:
            candidate = reconstruct_vectors(images)
        except NoReconstruction:
            pass
        p = next_prime()
        while p in images:
            p = next_prime()
        img = compute(p)
        if candidate is not None and agrees_mod(candidate, img, p):
            images[p] = img
            return candidate, sorted(images)
        images[p] = img
    raise NoReconstruction(f"lift did not stabilise with {max_primes} primes")
