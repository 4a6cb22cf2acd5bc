"""Arithmetic mod a prime p.

Scalars in F_p are plain Python ints kept in the range [0, p).  Everything
here is exact; a factorial ratio is reduced with explicit bookkeeping of
p-adic valuations so that no intermediate division by a multiple of p ever
happens.
"""

from .errors import NegativeValuation, ZeroInverse


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def require_prime(p):
    if not is_prime(p):
        raise ValueError("not a prime: %r" % (p,))
    return p


def fp_inv(x, p):
    """Inverse of x mod p.  Raises ZeroInverse on x == 0 (mod p)."""
    x %= p
    if x == 0:
        raise ZeroInverse("0 has no inverse mod %d" % p)
    # Fermat; p is small enough that pow() is fine.
    return pow(x, p - 2, p)


def _strip_p(n, p):
    """Return (valuation, unit) with n = p^valuation * unit."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def factorial_ratio(numer, denom, p):
    """(prod of n! for n in numer) / (prod of n! for n in denom) mod p.

    The ratio need not be an integer, but its p-adic valuation must be >= 0;
    otherwise NegativeValuation is raised.  If the valuation is positive the
    result is 0.
    """
    require_prime(p)
    val = 0
    unit_num = 1
    unit_den = 1
    for n in numer:
        for k in range(2, n + 1):
            v, u = _strip_p(k, p)
            val += v
            unit_num = unit_num * u % p
    for n in denom:
        for k in range(2, n + 1):
            v, u = _strip_p(k, p)
            val -= v
            unit_den = unit_den * u % p
    if val < 0:
        raise NegativeValuation(
            "p=%d divides the denominator %d more times than the numerator" % (p, -val)
        )
    if val > 0:
        return 0
    return unit_num * fp_inv(unit_den, p) % p


def balanced(c, p):
    """Representative of c in (-p/2, p/2]; used only for printing."""
    c %= p
    return c if c <= p // 2 else c - p
