import itertools
from fractions import Fraction

import mpmath
import pytest
from helpers import finite_series
from hypothesis import given, settings
from hypothesis import strategies as st

from transserial.errors import NotInfinitesimal, SummabilityViolation, ZeroSeries
from transserial.monomial import ONE, Monomial
from transserial.series import (Dominance, Series, asymptotic, comparable, decompose, dominance, eq_exact,
                                eq_to_budget, exp1, invert, is_decreasing, log1, power, split)
from transserial.settings import using

x = Monomial.fundamental(0)
lg = Monomial.fundamental(-1)
ex = Monomial.fundamental(1)
X = Series.monomial(x)
INV = Series.monomial(x.inverse())


def terms_of(*pairs):
    return [(Fraction(c), m) for c, m in pairs]


def test_addition_examples():
    assert eq_exact((X + 1) + (-X), Series.const(1))
    assert eq_exact((X + INV) + INV, Series([(1, x), (2, x.inverse())]))
    a = Series([(3, x), (1, lg)])
    assert eq_exact(a + Series.zero(), a)


def test_product_examples():
    assert eq_exact((X + 1) * (X - 1), Series([(1, x ** 2), (-1, ONE)]))
    assert eq_exact((1 + INV) ** 2, Series([(1, ONE), (2, x.inverse()), (1, x ** -2)]))


def test_invert_examples():
    assert eq_exact(invert(X), INV)
    geometric = invert(1 - INV)
    assert geometric.terms(5) == terms_of((1, ONE), (1, x ** -1), (1, x ** -2), (1, x ** -3), (1, x ** -4))
    assert invert(2 * X * (1 + INV)).terms(3) == terms_of((Fraction(1, 2), x ** -1), (Fraction(-1, 2), x ** -2),
                                                          (Fraction(1, 2), x ** -3))


def test_leading_examples():
    assert Series([(3, x ** 2), (1, x)]).leading() == (3, x ** 2)
    assert Series([(1, x.inverse()), (-5, ONE)]).leading() == (-5, ONE)
    assert log1(INV).leading() == (1, x.inverse())
    with pytest.raises(ZeroSeries):
        Series.zero().leading()


def test_dominance_examples():
    assert dominance(Series.monomial(x ** 2), Series.monomial(x * lg)) == Dominance.SUCC
    assert asymptotic(2 * X, 2 * X + Series.monomial(lg))
    assert not comparable(Series.monomial(x ** 2), Series.monomial(ex))


def test_log1_examples():
    assert log1(Series.zero()).is_zero()
    assert log1(INV).terms(3) == terms_of((1, x ** -1), (Fraction(-1, 2), x ** -2), (Fraction(1, 3), x ** -3))
    with pytest.raises(NotInfinitesimal):
        log1(X)


def test_log1_numeric_oracle():
    mpmath.mp.dps = 60
    point = mpmath.mpf(1000)
    approx = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * point ** m.le()
                         for c, m in log1(INV).terms(8))
    assert abs(approx - mpmath.log(1 + 1 / point)) < mpmath.mpf(10) ** -20


def test_exp1_examples():
    assert eq_exact(exp1(Series.zero()), Series.const(1))
    assert exp1(INV).terms(3) == terms_of((1, ONE), (1, x ** -1), (Fraction(1, 2), x ** -2))
    with using(cancel_limit=16):
        assert eq_to_budget(exp1(log1(INV)) - 1, INV)


def test_decompose_examples():
    d = decompose(Series([(3, x ** 2), (3, x)]))
    assert (d.lc, d.lm, d.eps.terms()) == (3, x ** 2, terms_of((1, x ** -1)))
    d = decompose(-INV)
    assert (d.lc, d.lm) == (-1, x ** -1) and d.eps.is_zero()
    d = decompose(1 + INV)
    assert (d.lc, d.lm, d.eps.terms()) == (1, ONE, terms_of((1, x ** -1)))


def test_split_examples():
    pi, c, eps = split(X + 2 + INV)
    assert (pi.terms(), c, eps.terms()) == (terms_of((1, x)), 2, terms_of((1, x ** -1)))
    pi, c, eps = split(Series.const(5))
    assert pi.is_zero() and c == 5 and eps.is_zero()
    m = ex / x
    pi, c, eps = split(Series.monomial(m))
    assert pi.terms() == terms_of((1, m)) and c == 0 and eps.is_zero()


def test_rejects_non_decreasing_stream():
    bad = Series.lazy(iter([(Fraction(1), x.inverse()), (Fraction(1), x)]))
    with pytest.raises(SummabilityViolation):
        bad.terms(2)


def test_power_and_roots():
    assert eq_exact(power(Series([(4, x ** 2)]), Fraction(1, 2)), Series([(2, x)]))
    s = power(1 + INV, Fraction(1, 2))
    assert s.terms(3) == terms_of((1, ONE), (Fraction(1, 2), x ** -1), (Fraction(-1, 8), x ** -2))


def test_infinite_sums_of_tails_stay_lazy():
    # sum of phi_{-k} for k >= 0 is an infinite decreasing stream
    s = Series.from_stream((Fraction(1), Monomial.fundamental(-k)) for k in itertools.count())
    assert len(s.terms(10)) == 10 and is_decreasing(s.terms(10))
    assert not s.exact


@settings(max_examples=120, deadline=None)
@given(finite_series(), finite_series(), finite_series())
def test_ring_laws(a, b, c):
    assert eq_exact((a + b) + c, a + (b + c))
    assert eq_exact(a * (b + c), a * b + a * c)
    if not (a.is_zero() or b.is_zero()):
        assert (a * b).leading() == (a.lc * b.lc, a.lm * b.lm)


@settings(max_examples=60, deadline=None)
@given(finite_series(max_terms=3))
def test_inverse_law_to_budget(a):
    with using(budget=12, cancel_limit=12):
        assert eq_to_budget(a * invert(a), Series.const(1))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([x ** -1, lg ** -1, x ** -2 * lg, x ** Fraction(-1, 2)]), min_size=1, max_size=2),
       st.lists(st.sampled_from([x ** -1, lg ** -2, x ** -3]), min_size=1, max_size=2))
def test_log1_turns_products_into_sums(m1, m2):
    e1 = Series([(1, m) for m in m1])
    e2 = Series([(1, m) for m in m2])
    with using(budget=10, cancel_limit=16):
        assert eq_to_budget(log1(e1) + log1(e2), log1(e1 + e2 + e1 * e2))


@settings(max_examples=100, deadline=None)
@given(finite_series(), finite_series())
def test_forced_prefixes_strictly_decrease(a, b):
    for s in (a + b, a * b, a - b):
        assert is_decreasing(s.terms())
    if not b.is_zero():
        with using(budget=8):
            assert is_decreasing(invert(b).terms(8))
