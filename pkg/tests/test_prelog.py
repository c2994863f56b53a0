import random
from fractions import Fraction

import mpmath
import pytest
from helpers import ser

from transserial import derivation, prelog
from transserial.constants import Constant
from transserial.errors import NotPositive
from transserial.monomial import ONE, Monomial
from transserial.prelog import check_HL1, check_HL2_HL3, check_HL4, log, log_monomial
from transserial.sampling import random_positive_series
from transserial.series import Series, eq_exact, eq_to_budget
from transserial.settings import using

x = Monomial.fundamental(0)
lg = Monomial.fundamental(-1)
ex = Monomial.fundamental(1)


def phi(i, c=1):
    return Series.monomial(Monomial.fundamental(i), c)


def adversarial_table():
    # l(phi_{-n}) carries phi_{-1}^{1-1/(n+1)}: an increasing chain along decreasing indices
    table = {-n: Series([(1, lg ** (1 - Fraction(1, n + 1))), (1, Monomial.fundamental(-n - 1))])
             for n in range(0, 11)}
    table.update({n: phi(n - 1) for n in range(1, 11)})
    return prelog.table(table, name="adversarial")


def test_log_monomial_examples(sigma, ddx):
    assert eq_exact(log_monomial(sigma, x ** 2 * ex), ser((1, x), (2, lg)))
    assert log_monomial(sigma, ONE).is_zero()
    integrated = prelog.integrated(ddx)
    assert eq_exact(log_monomial(integrated, Monomial.fundamental(2) ** 3), ser((3, ex)))


def test_log_monomial_of_tail_is_lazy(sigma):
    s = log_monomial(sigma, Monomial.tail_product(0, 1, -1))
    assert s.terms(3) == [(-1, lg), (-1, Monomial.fundamental(-2)), (-1, Monomial.fundamental(-3))]


def test_log_example_and_numeric_oracle(sigma):
    a = ser((3, x ** 2), (3, x))
    v = log(sigma, a)
    assert v.constant == Constant.log_of(3)
    assert v.series.terms(4) == [(2, lg), (1, x ** -1), (Fraction(-1, 2), x ** -2), (Fraction(1, 3), x ** -3)]
    mpmath.mp.dps = 80
    point = mpmath.mpf(10) ** 6
    total = v.constant.value(80)
    for c, m in v.series.terms(10):
        value = mpmath.log(point) if m == lg else point ** m.exponent(0)
        total += mpmath.mpf(c.numerator) / c.denominator * (value if m != lg else mpmath.log(point))
    exact = mpmath.log(3 * point ** 2 + 3 * point)
    assert abs(total - exact) / exact < mpmath.mpf(10) ** -30


def test_log_of_one_and_errors(sigma):
    v = log(sigma, Series.const(1))
    assert v.series.is_zero() and v.constant.is_zero()
    with pytest.raises(NotPositive):
        log(sigma, ser((-1, x)))
    with pytest.raises(NotPositive):
        log(sigma, Series.zero())


def test_log_is_a_group_morphism(sigma):
    rng = random.Random(4)
    with using(budget=8, cancel_limit=12):
        for _ in range(40):
            a = random_positive_series(rng, lo=-2, hi=1)
            b = random_positive_series(rng, lo=-2, hi=1)
            assert log(sigma, a * b).eq_to_budget(log(sigma, a) + log(sigma, b))


def test_log_is_order_preserving(sigma):
    rng = random.Random(6)
    with using(budget=8, cancel_limit=12):
        for _ in range(80):
            a = random_positive_series(rng, lo=-2, hi=1)
            b = random_positive_series(rng, lo=-2, hi=1)
            d = (a - b).sign()
            if d:
                assert (log(sigma, a) + -log(sigma, b)).sign() == d


def test_hl1(sigma, ddx):
    assert check_HL1(sigma, window=(-10, 10)).ok
    assert check_HL1(prelog.integrated(ddx), window=(-6, 6)).ok
    report = check_HL1(adversarial_table(), window=(-10, 10))
    assert not report.ok
    assert report.failures[0]["witness"][:3] == [0, -1, -2]


def test_hl2_hl3(sigma):
    assert check_HL2_HL3(sigma).ok
    report = check_HL2_HL3(prelog.basic())
    assert report.failed_conditions() == ["HL3"]
    table = {i: phi(i - 1) for i in range(-8, 9)}
    table[0] = phi(-1, -1)
    assert "HL2" in check_HL2_HL3(prelog.table(table)).failed_conditions()


def test_hl4(sigma, ddx, geometric):
    assert check_HL4(sigma, ddx).ok
    assert check_HL4(sigma, geometric).ok
    report = check_HL4(prelog.basic(), ddx)
    assert 0 in [f["witness"] for f in report.failures]


def test_uniqueness_of_the_prelog(ddx, geometric, sigma):
    for spec in (ddx, geometric):
        integrated = prelog.integrated(spec)
        for i in range(-8, 9):
            assert eq_exact(integrated.value(i), sigma.value(i))


def test_log_compatibility_on_series(sigma, ddx):
    with using(budget=12, cancel_limit=16):
        assert check_HL4(sigma, ddx, samples=60, seed=1).ok


def test_preimage(sigma, ddx):
    assert sigma.preimage(lg) == (0, 1)
    assert sigma.preimage(x ** 2) is None
    assert prelog.integrated(ddx).preimage(lg) == (0, 1)
