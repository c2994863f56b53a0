"""Random monomials and series for property checks."""

import random
from fractions import Fraction

from .monomial import ONE, Monomial
from .series import Series

_EXPONENTS = [Fraction(p, q) for q in (1, 2, 3) for p in range(-3 * q, 3 * q + 1) if p]


def random_exponent(rng):
    return rng.choice(_EXPONENTS)


def random_monomial(rng, lo=-3, hi=3, max_factors=3, tail=False):
    """A random finite monomial on indices [lo, hi], optionally times a periodic tail."""
    k = rng.randint(0, max_factors)
    top = rng.randint(lo, hi)
    idx = rng.sample(range(lo, top + 1), min(k, top - lo + 1))
    m = Monomial({j: random_exponent(rng) for j in idx})
    if tail and rng.random() < 0.5:
        period = rng.choice([1, 2])
        pattern = [rng.choice([-1, 0, 1, Fraction(1, 2)]) for _ in range(period)]
        if any(pattern):
            m = m * Monomial({}, pattern, lo)
    return m


def random_nonunit_monomial(rng, **kw):
    while True:
        m = random_monomial(rng, **kw)
        if not m.is_one:
            return m


def random_series(rng, max_terms=4, one_weight=0.2, **kw):
    """A random exact series with a few terms and small rational coefficients."""
    n = rng.randint(1, max_terms)
    terms = []
    for _ in range(n):
        m = ONE if rng.random() < one_weight else random_monomial(rng, **kw)
        terms.append((Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])), m))
    s = Series(terms)
    return s if not s.is_zero() else Series.const(1)


def random_positive_series(rng, **kw):
    s = random_series(rng, **kw)
    return s if s.lc > 0 else -s


def make_rng(seed=0):
    return random.Random(seed)
