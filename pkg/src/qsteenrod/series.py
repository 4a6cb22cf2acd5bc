"""The coefficient ring F_p[t, t^-1, theta] tensor F_p[[q]], truncated in q.

A monomial is (q_exp, t_exp, theta_exp) with q_exp >= 0, t_exp any integer
(negative powers occur inside intermediate endomorphisms), theta_exp in
{0, 1}.  A SeriesElement stores a finite map monomial -> coefficient with no
zero coefficients and all q exponents <= its truncation D; it represents an
element of the ring modulo q^(D+1).

theta is the odd generator of the group-cohomology coefficient ring: on
multiplication theta^2 becomes t when p = 2 and 0 when p > 2.  t and q are
even, so no other signs appear.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import MixedContext


class Monomial(NamedTuple):
    q: int
    t: int
    theta: int


@dataclass(frozen=True)
class SeriesElement:
    prime: int
    trunc: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = Monomial(*mono)
            if mono.theta not in (0, 1):
                raise ValueError("theta exponent must be 0 or 1")
            if mono.q < 0:
                raise ValueError("negative q exponent")
            c %= self.prime
            if c and mono.q <= self.trunc:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.prime != other.prime or self.trunc != other.trunc:
            raise MixedContext(
                "mixed series context: p=%d,D=%d vs p=%d,D=%d"
                % (self.prime, self.trunc, other.prime, other.trunc)
            )

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, 0) + c
        return SeriesElement(self.prime, self.trunc, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c %= self.prime
        return SeriesElement(
            self.prime, self.trunc, {m: c * v for m, v in self.terms.items()}
        )

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        return series_mul(self, other)

    def times_monomial(self, q=0, t=0, theta=0, coeff=1):
        """Multiply by coeff * q^q t^t theta^theta."""
        out = {}
        p = self.prime
        for (mq, mt, mth), c in self.terms.items():
            nth = mth + theta
            ntq, nt = mq + q, mt + t
            if nth == 2:
                if p == 2:
                    nth, nt = 0, nt + 1
                else:
                    continue
            out[Monomial(ntq, nt, nth)] = out.get(Monomial(ntq, nt, nth), 0) + c * coeff
        return SeriesElement(p, self.trunc, out)

    def coefficient(self, q, t, theta=0):
        return self.terms.get(Monomial(q, t, theta), 0)

    def retruncate(self, trunc):
        return SeriesElement(self.prime, trunc, dict(self.terms))


def series(p, trunc, items=()):
    """Build a SeriesElement from (q, t, theta, coeff) tuples."""
    terms = {}
    for q, t, theta, c in items:
        m = Monomial(q, t, theta)
        terms[m] = terms.get(m, 0) + c
    return SeriesElement(p, trunc, terms)


def series_zero(p, trunc):
    return SeriesElement(p, trunc, {})


def series_one(p, trunc):
    return SeriesElement(p, trunc, {Monomial(0, 0, 0): 1})


def series_mul(x, y):
    """Product in F_p[t, t^-1, theta][[q]] / q^(D+1)."""
    x._check(y)
    p = x.prime
    out = {}
    for (q1, t1, h1), c1 in x.terms.items():
        for (q2, t2, h2), c2 in y.terms.items():
            q = q1 + q2
            if q > x.trunc:
                continue
            t = t1 + t2
            h = h1 + h2
            if h == 2:
                # theta^2 -> t for p = 2, 0 for odd p
                if p == 2:
                    h, t = 0, t + 1
                else:
                    continue
            m = Monomial(q, t, h)
            out[m] = out.get(m, 0) + c1 * c2
    return SeriesElement(p, x.trunc, out)


def derivation_apply(lam, x):
    """The divisor derivation: q^d t^k theta^e  ->  (lam*d) q^d t^k theta^e."""
    return SeriesElement(
        x.prime, x.trunc, {m: lam * m.q * c for m, c in x.terms.items()}
    )


def format_series(x, unit="", star="*"):
    """Render deterministically, balanced coefficients, q before t.

    With unit="h" renders terms like "q*t*h - t^2*h"; with unit="" renders
    scalar series like "q - t^2".
    """
    from .fp import balanced

    if not x.terms:
        return "0"
    parts = []
    for mono in sorted(x.terms):
        c = balanced(x.terms[mono], x.prime)
        factors = []
        if mono.q == 1:
            factors.append("q")
        elif mono.q:
            factors.append("q^%d" % mono.q)
        if mono.t == 1:
            factors.append("t")
        elif mono.t:
            factors.append("t^%d" % mono.t)
        if mono.theta:
            factors.append("th")
        if unit:
            factors.append(unit)
        if abs(c) != 1 or not factors:
            factors.insert(0, str(abs(c)))
        text = star.join(factors)
        if not parts:
            parts.append(text if c > 0 else "-" + text)
        else:
            parts.append(("+ " if c > 0 else "- ") + text)
    return " ".join(parts)
