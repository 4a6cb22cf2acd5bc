from fractions import Fraction

import pytest

from qsteenrod.errors import NegativeValuation, ZeroInverse
from qsteenrod.fp import balanced, factorial_ratio, fp_inv, is_prime, require_prime


def xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return x, y, g


def test_fp_inv_examples():
    assert fp_inv(1, 7) == 1
    # extended Euclid oracle
    x, _, g = xgcd(2, 5)
    assert g == 1 and x % 5 == 3
    assert fp_inv(2, 5) == 3
    with pytest.raises(ZeroInverse):
        fp_inv(0, 3)


def test_fp_inv_brute_force_all_small_primes():
    for p in [q for q in range(2, 98) if is_prime(q)]:
        for x in range(1, p):
            inv = fp_inv(x, p)
            assert x * inv % p == 1
            assert inv == next(y for y in range(1, p) if x * y % p == 1)


def test_primality():
    assert [q for q in range(2, 20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        require_prime(6)
    with pytest.raises(ValueError):
        require_prime(1)


def fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_factorial_ratio_examples():
    # (2k)!/(k!)^4 at k=1, p=3
    assert factorial_ratio([2], [1, 1, 1, 1], 3) == 2
    # (2k)!/(k!)^4 at k=2, p=5: 24/16 = 3/2 and 3 * inv(2) = 4
    oracle = Fraction(fact(4), fact(2) ** 4)
    assert oracle == Fraction(3, 2)
    assert factorial_ratio([4], [2, 2, 2, 2], 5) == oracle.numerator * fp_inv(oracle.denominator, 5) % 5
    with pytest.raises(NegativeValuation):
        factorial_ratio([], [3], 3)


def test_factorial_ratio_random_against_rational_oracle():
    import random

    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 11])
        numer = [rng.randrange(0, 12) for _ in range(rng.randrange(0, 3))]
        denom = [rng.randrange(0, 12) for _ in range(rng.randrange(0, 3))]
        oracle = Fraction(1)
        for n in numer:
            oracle *= fact(n)
        for n in denom:
            oracle /= fact(n)
        if oracle.denominator % p == 0:
            with pytest.raises(NegativeValuation):
                factorial_ratio(numer, denom, p)
        else:
            want = oracle.numerator * fp_inv(oracle.denominator % p, p) % p if oracle.denominator % p else 0
            assert factorial_ratio(numer, denom, p) == want % p


def test_balanced():
    assert balanced(2, 3) == -1
    assert balanced(1, 3) == 1
    assert balanced(4, 7) == -3
    assert balanced(3, 7) == 3
