"""Prime selection, Chinese remaindering and rational reconstruction."""

from __future__ import annotations

import os
import random
from fractions import Fraction

import gmpy2

SEED_ENV = "RESCONJ_SEED"


def session_seed(seed: int | None = None) -> int:
    if seed is not None:
        return seed
    return int(os.environ.get(SEED_ENV, "0"))


def random_primes(count: int = 3, seed: int | None = None, bits: int = 31, skip: int = 0) -> list[int]:
    """``count`` distinct primes just below 2^bits, reproducible from the seed.

    ``skip`` discards that many primes first, so callers can draw fresh ones.
    """
    rng = random.Random(session_seed(seed))
    out: list[int] = []
    while len(out) < count + skip:
        p = int(gmpy2.next_prime(rng.randrange(1 << (bits - 1), 1 << bits)))
        if p < (1 << bits) and p not in out:
            out.append(p)
    return out[skip:]


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """x = r1 mod m1, x = r2 mod m2 for coprime moduli; returns (x mod m1*m2, m1*m2)."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a: int, modulus: int) -> Fraction | None:
    """n/d with n = a*d mod modulus and |n|, d below sqrt(modulus/2); None if absent."""
    a %= modulus
    bound = gmpy2.isqrt(modulus // 2)
    r0, r1 = modulus, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gmpy2.gcd(r1, s1) != 1:
        return None
    return Fraction(int(r1), int(s1))
