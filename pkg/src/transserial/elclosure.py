"""The exponential closure tower over a base field with a pre-logarithm.

A sharp monomial stands for ``exp(l(base) + r_0 + r_1 + ...)``: ``base`` is an
ordinary monomial and ``r_k`` collects the exponent terms whose monomials sit
exactly at level ``k``.  ``r_0`` only holds level-0 terms that are not images
of fundamentals under the pre-logarithm, so every element has one canonical
representation and multiplication is componentwise addition.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .asympint import AsymptoticIntegral, IntegrationResult, ai
from .constants import Constant
from .errors import (AtThetaHat, ConstantInExpArg, LevelMismatch, NotNormalizable, NotPositive,
                     NotPurelyInfinite, TowerDepthExceeded, TransserialError)
from .monomial import ONE, Monomial
from .prelog import PrelogValue, log_monomial
from .sampling import random_positive_series
from .series import _STALL, Series, _stream, decompose, exp1, log1, split, sum_family, sum_series
from .settings import settings


def _add_exact(a, b):
    return Series(list(a._cache) + list(b._cache), a.one)


class SharpMonomial:
    __slots__ = ("tower", "base", "comps", "_hash")

    def __init__(self, tower, base, comps=()):
        comps = list(comps)
        while comps and comps[-1].is_zero():
            comps.pop()
        self.tower = tower
        self.base = base
        self.comps = tuple(comps)
        self._hash = None

    @property
    def level(self):
        return len(self.comps)

    @property
    def is_one(self):
        return self.base.is_one and not self.comps

    def one(self):
        return self.tower.one

    def _check(self, other):
        if not isinstance(other, SharpMonomial) or other.tower is not self.tower:
            raise LevelMismatch("sharp monomials from different towers")

    def __mul__(self, other):
        self._check(other)
        if not other.comps:
            if not self.comps:
                return SharpMonomial(self.tower, self.base * other.base)
            return SharpMonomial(self.tower, self.base * other.base, self.comps)
        if not self.comps:
            return SharpMonomial(self.tower, self.base * other.base, other.comps)
        comps = []
        zero = Series.zero(self.tower.one)
        for a, b in itertools.zip_longest(self.comps, other.comps, fillvalue=zero):
            comps.append(_add_exact(a, b))
        return SharpMonomial(self.tower, self.base * other.base, comps)

    def inverse(self):
        comps = [Series._sorted([(-c, m) for c, m in r._cache], r.one) for r in self.comps]
        return SharpMonomial(self.tower, self.base.inverse(), comps)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, q):
        q = Fraction(q)
        if not q:
            return self.tower.one
        comps = [Series._sorted([(c * q, m) for c, m in r._cache], r.one) for r in self.comps]
        return SharpMonomial(self.tower, self.base ** q, comps)

    def cmp(self, other):
        self._check(other)
        return self.tower._compare(self, other)

    def exp_key(self):
        return tuple(r.key() for r in self.comps)

    def exp_arg(self):
        """r_0 + r_1 + ... as one series: the part of the logarithm outside l(base)."""
        return Series([t for r in self.comps for t in r._cache], self.tower.one)

    def lf(self):
        if self.comps:
            raise TransserialError("leading fundamental is defined on level-0 monomials")
        return self.base.lf()

    def le(self):
        if self.comps:
            raise TransserialError("leading exponent is defined on level-0 monomials")
        return self.base.le()

    def __eq__(self, other):
        if not isinstance(other, SharpMonomial):
            return NotImplemented
        return (self.tower is other.tower and self.base == other.base
                and self.exp_key() == other.exp_key())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base, self.exp_key()))
        return self._hash

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __repr__(self):
        if not self.comps:
            return f"Sharp({self.base!r})"
        return f"Sharp({self.base!r}, exp={[r._cache for r in self.comps]!r})"


class Tower:
    """Exponential closure tower on top of a pre-logarithm, up to ``depth`` levels."""

    def __init__(self, prelog, depth=3):
        self.prelog = prelog
        self.depth = depth
        self.one = SharpMonomial(self, ONE)
        self._cmp_cache = {}
        self._ld_cache = {}

    def lift(self, m):
        return SharpMonomial(self, m)

    def lift_series(self, s):
        if s.exact:
            return Series._sorted([(c, self.lift(m)) for c, m in s._cache], self.one)

        def source():
            for item in _stream(s):
                yield item if item is _STALL else (item[0], self.lift(item[1]))
                if item is _STALL:
                    return

        return Series.lazy(source(), self.one)

    def project(self, s):
        """A level-0 tower series back as an ordinary series."""
        terms = s.terms()
        if any(m.comps for _, m in terms):
            raise LevelMismatch("series has terms above level 0")
        if s.exact:
            return Series._sorted([(c, m.base) for c, m in s._cache], ONE)
        return Series.from_stream((c, m.base) for c, m in s)

    def monomial(self, m, c=1):
        if isinstance(m, Monomial):
            m = self.lift(m)
        return Series.monomial(m, c, self.one)

    def _log_leading(self, m):
        """Leading terms of l#(m) from each component, or None if they may cancel."""
        candidates = []
        if not m.base.is_one:
            c, mu = log_monomial(self.prelog, m.base).leading()
            candidates.append((c, self.lift(mu)))
        candidates.extend(r.leading() for r in m.comps if not r.is_zero())
        if len({mu for _, mu in candidates}) < len(candidates):
            return None
        return candidates

    def _compare(self, a, b):
        if not a.comps and not b.comps:
            return a.base.cmp(b.base)
        if a == b:
            return 0
        key = (a, b)
        hit = self._cmp_cache.get(key)
        if hit is not None:
            return hit
        quotient = a / b
        candidates = self._log_leading(quotient)
        if candidates is None:
            sign = sharp_log(self, Series.monomial(quotient, 1, self.one)).series.sign()
        elif not candidates:
            sign = 0
        else:
            best = candidates[0]
            for cand in candidates[1:]:
                if cand[1].cmp(best[1]) > 0:
                    best = cand
            sign = 1 if best[0] > 0 else -1
        if len(self._cmp_cache) < 200000:
            self._cmp_cache[key] = sign
            self._cmp_cache[(b, a)] = -sign
        return sign

    def __repr__(self):
        return f"Tower({self.prelog.name!r}, depth={self.depth})"


def sharp_mul(a, b):
    return a * b


def normalize(tower, arg):
    """The sharp monomial exp(arg) for an exact purely infinite tower series."""
    if isinstance(arg, Series) and not arg.exact:
        raise NotNormalizable("exp argument must be an exact (finite) series")
    one = tower.one
    gamma = {}
    buckets = {}
    for c, mu in arg._cache:
        if not isinstance(mu, SharpMonomial):
            mu = tower.lift(mu)
        if mu.cmp(one) <= 0:
            raise NotPurelyInfinite("exp argument must be purely infinite")
        if not mu.comps:
            pre = tower.prelog.preimage(mu.base)
            if pre is not None:
                i, ci = pre
                gamma[i] = gamma.get(i, 0) + Fraction(c) / ci
                continue
        buckets.setdefault(mu.level, []).append((c, mu))
    level = max(buckets) + 1 if buckets else 0
    if level > tower.depth:
        raise TowerDepthExceeded(f"needs tower level {level}, depth is {tower.depth}")
    comps = [Series._sorted(buckets.get(k, []), one) for k in range(level)]
    return SharpMonomial(tower, Monomial(gamma), comps)


def sharp_log(tower, a):
    """l#(a) = log LC(a) + l#(LM(a)) + log1(eps)."""
    if a.is_zero() or a.lc <= 0:
        raise NotPositive("log needs a positive series")
    d = decompose(a)
    m = d.lm
    head = tower.lift_series(log_monomial(tower.prelog, m.base))
    if m.comps:
        head = head + m.exp_arg()
    return PrelogValue(head + log1(d.eps), Constant.log_of(d.lc))


def sharp_exp(tower, v):
    """exp of a tower series (or of a PrelogValue with a rational-valued constant)."""
    factor = Fraction(1)
    if isinstance(v, PrelogValue):
        if not v.constant.is_zero():
            factor = v.constant.exp_rational()
            if factor is None:
                raise ConstantInExpArg("exp of a non-rational constant is unsupported")
        v = v.series
    pi, const, inf = split(v)
    if const:
        raise ConstantInExpArg()
    m = normalize(tower, pi) if not pi.is_zero() else tower.one
    return exp1(inf).scale(factor, m)


def sharp_log_deriv(spec, tower, m):
    """m'/m = (base'/base) + r_0' + r_1' + ..."""
    key = (id(spec), m)
    hit = tower._ld_cache.get(key)
    if hit is not None:
        return hit
    parts = []
    if not m.base.is_one:
        parts.append(tower.lift_series(spec.log_deriv_monomial(m.base)))
    parts.extend(sharp_derive(spec, tower, r) for r in m.comps)
    out = sum_series(parts, tower.one) if parts else Series.zero(tower.one)
    if len(tower._ld_cache) < 50000:
        tower._ld_cache[key] = out
    return out


def sharp_derive(spec, tower, a):
    """Strongly linear extension: (c*m)' = c*m*(m'/m)."""
    if a.exact:
        parts = [sharp_log_deriv(spec, tower, m).scale(c, m) for c, m in a._cache if not m.is_one]
        return sum_series(parts, tower.one)
    members = ((sharp_log_deriv(spec, tower, m), c, m) for c, m in a if not m.is_one)
    return sum_family(members, tower.one)


def tower_ai(spec, tower, a):
    """b with LT(b') = LT(a): level-0 input goes to ai, higher levels solve beta = alpha/LM(beta'/beta)."""
    c, alpha = a.leading() if isinstance(a, Series) else (Fraction(1), a)
    if not alpha.comps:
        r = ai(spec, Series.monomial(alpha.base, c))
        return AsymptoticIntegral(r.coefficient, tower.lift(r.monomial), r.psi)
    beta = alpha / sharp_log_deriv(spec, tower, alpha).lm
    for _ in range(64):
        nxt = alpha / sharp_log_deriv(spec, tower, beta).lm
        if nxt == beta:
            break
        beta = nxt
    else:
        raise TransserialError("tower asymptotic integral did not stabilise")
    out = AsymptoticIntegral(c / sharp_log_deriv(spec, tower, beta).lc, beta)
    if sharp_derive(spec, tower, out.series(tower.one)).leading() != (c, alpha):
        raise TransserialError("tower asymptotic integral postcondition failed")
    return out


def tower_integrate(spec, tower, a, max_terms=None):
    max_terms = settings.budget if max_terms is None else max_terms
    terms, residual, steps = [], a, 0
    while not residual.is_zero() and steps < max_terms:
        c, m = residual.leading()
        try:
            r = tower_ai(spec, tower, Series.monomial(m, c, tower.one))
        except AtThetaHat as exc:
            exc.partial = IntegrationResult(Series(terms, tower.one), False, residual, steps)
            raise
        terms.append(r.value)
        residual = residual - sharp_derive(spec, tower, r.series(tower.one))
        steps += 1
        if not residual.is_zero() and residual.lm.cmp(m) >= 0:
            raise TransserialError("residual did not decrease")
    exact = residual.is_zero() and not residual.stalled
    return IntegrationResult(Series(terms, tower.one), exact, residual, steps)


@dataclass(frozen=True)
class ClosureReport:
    spec: str
    theta_hat: object
    theta_hat_in_group: bool
    obstruction_at_theta_hat: bool

    @property
    def closed_under_integration(self):
        return not self.theta_hat_in_group

    def text(self):
        if self.theta_hat is None:
            return f"{self.spec}: no θ̂; the closure is closed under integration"
        if self.closed_under_integration:
            return f"{self.spec}: θ̂ lies outside the closure; it is closed under integration"
        return (f"{self.spec}: θ̂ lies in the monomial group, so the exponential closure "
                "is not closed under integration")

    def to_json(self):
        return {
            "spec": self.spec,
            "theta_hat_in_group": self.theta_hat_in_group,
            "obstruction_at_theta_hat": self.obstruction_at_theta_hat,
            "closed_under_integration": self.closed_under_integration,
        }


def closure_report(spec, tower):
    """Closed under integration exactly when θ̂ is not a monomial of the closure."""
    theta_hat = spec.theta_hat
    if theta_hat is None:
        return ClosureReport(spec.name, None, False, False)
    try:
        tower_ai(spec, tower, tower.monomial(theta_hat))
        raised = False
    except AtThetaHat:
        raised = True
    # θ̂ is built as an ordinary monomial, so it always belongs to the base group
    return ClosureReport(spec.name, theta_hat, isinstance(theta_hat, Monomial), raised)


def random_tower_series(tower, rng, level=1, **kw):
    """A random positive tower series whose leading monomial sits at ``level``."""
    kw.setdefault("lo", -2)
    kw.setdefault("hi", 1)
    base = tower.lift_series(random_positive_series(rng, **kw))
    if level == 0:
        return base
    arg_terms = []
    while not arg_terms:
        inner = random_tower_series(tower, rng, level - 1, **kw)
        arg_terms = [t for t in inner.terms(3) if t[1].cmp(tower.one) > 0 and t[1].level == level - 1]
        if not arg_terms:
            continue
        if level == 1:
            arg_terms = [t for t in arg_terms if tower.prelog.preimage(t[1].base) is None]
    e = normalize(tower, Series(arg_terms[:2], tower.one))
    if e.cmp(tower.one) < 0:
        e = e.inverse()
    lower = tower.lift_series(random_positive_series(rng, **kw))
    out = base.scale(1, e) + lower
    return out if out.lc > 0 else -out


__all__ = [
    "ClosureReport", "SharpMonomial", "Tower", "closure_report", "normalize", "random_tower_series",
    "sharp_derive", "sharp_exp", "sharp_log", "sharp_log_deriv", "sharp_mul", "tower_ai",
    "tower_integrate",
]
