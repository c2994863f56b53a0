"""The constants ledger: rationals plus rational combinations of logs of primes."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import mpmath
from sympy import factorint


@dataclass(frozen=True)
class Constant:
    rat: Fraction = Fraction(0)
    logs: tuple = field(default=())  # sorted (prime, coefficient) pairs, no zero coefficients

    @classmethod
    def of(cls, rat=0, logpart=None):
        items = tuple(sorted((int(p), Fraction(q)) for p, q in (logpart or {}).items() if q))
        return cls(Fraction(rat), items)

    @classmethod
    def log_of(cls, q):
        """log q for a positive rational q, by prime factorisation."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("log of a non-positive rational")
        part = {}
        for p, k in factorint(q.numerator).items():
            part[p] = part.get(p, 0) + k
        for p, k in factorint(q.denominator).items():
            part[p] = part.get(p, 0) - k
        return cls.of(0, part)

    @property
    def logpart(self):
        return dict(self.logs)

    def is_zero(self):
        return not self.rat and not self.logs

    def __add__(self, other):
        part = self.logpart
        for p, q in other.logs:
            part[p] = part.get(p, 0) + q
        return Constant.of(self.rat + other.rat, part)

    def __neg__(self):
        return Constant(-self.rat, tuple((p, -q) for p, q in self.logs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return Constant.of(self.rat * c, {p: q * c for p, q in self.logs})

    def value(self, dps=50):
        with mpmath.workdps(dps):
            return mpmath.mpf(self.rat.numerator) / self.rat.denominator + mpmath.fsum(
                mpmath.mpf(q.numerator) / q.denominator * mpmath.log(p) for p, q in self.logs)

    def sign(self):
        if not self.logs:
            return (self.rat > 0) - (self.rat < 0)
        if not self.rat:
            # sign of log prod p^q: compare the integer powers after clearing denominators
            d = lcm(*(q.denominator for _, q in self.logs))
            num = den = 1
            for p, q in self.logs:
                k = q * d
                if k > 0:
                    num *= p ** int(k)
                else:
                    den *= p ** int(-k)
            return (num > den) - (num < den)
        # rat + log(algebraic) never vanishes for rat != 0; high precision settles the sign
        v = self.value(80)
        return (v > 0) - (v < 0)

    def exp_rational(self):
        """exp of the constant when it is a rational number, else None."""
        if self.rat or any(q.denominator != 1 for _, q in self.logs):
            return None
        out = Fraction(1)
        for p, q in self.logs:
            out *= Fraction(p) ** int(q)
        return out


ZERO = Constant()
