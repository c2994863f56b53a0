"""Shared test helpers: sympy germs for the logexp chain and small builders."""

from fractions import Fraction

import sympy

from transserial.monomial import Monomial
from transserial.series import Series

X = sympy.Symbol("x", positive=True)


def germ(i):
    """The logexp germ at index i as a sympy expression."""
    e = X
    for _ in range(abs(i)):
        e = sympy.exp(e) if i > 0 else sympy.log(e)
    return e


def monomial_expr(m):
    assert not m.has_tail
    out = sympy.Integer(1)
    for j, e in m.support():
        out *= germ(j) ** sympy.Rational(e.numerator, e.denominator)
    return out


def series_expr(s):
    assert s.exact
    return sum((sympy.Rational(c.numerator, c.denominator) * monomial_expr(m) for c, m in s._cache),
               sympy.Integer(0))


def sympy_equal(a, b):
    return sympy.simplify(sympy.expand(a - b)) == 0


def mono(**exps):
    """mono(x=2, log=1) style builder on the logexp labels."""
    names = {"x": 0, "log": -1, "loglog": -2, "exp": 1, "expexp": 2}
    return Monomial({names[k]: Fraction(v) for k, v in exps.items()})


def ser(*terms):
    return Series([(Fraction(c), m) for c, m in terms])


# hypothesis strategies

from hypothesis import strategies as st  # noqa: E402

exponents = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def monomials(draw, lo=-4, hi=3, tails=True):
    window = draw(st.dictionaries(st.integers(lo, hi), exponents, max_size=4))
    if tails and draw(st.booleans()):
        pattern = draw(st.lists(st.sampled_from([Fraction(-1), Fraction(0), Fraction(1), Fraction(1, 2)]),
                                min_size=1, max_size=2))
        return Monomial(window, pattern, lo)
    return Monomial(window)


@st.composite
def finite_series(draw, max_terms=4, lo=-3, hi=2):
    n = draw(st.integers(1, max_terms))
    terms = []
    for _ in range(n):
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=2).filter(bool))
        m = draw(st.one_of(st.just(Monomial()), monomials(lo, hi, tails=False)))
        terms.append((c, m))
    s = Series(terms)
    return s if not s.is_zero() else Series.const(1)
