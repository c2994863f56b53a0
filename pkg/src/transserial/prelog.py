"""Pre-logarithms: l on fundamentals, extended by axiom (L) and the 1-unit log."""

from dataclasses import dataclass

from .chain import LOGEXP
from .constants import ZERO, Constant
from .derivation import derive, log_derivative
from .errors import NotPositive, TransserialError
from .monomial import Monomial
from .reports import Report
from .sampling import make_rng, random_positive_series
from .series import Series, decompose, eq_to_budget, first_difference, log1, sum_family, sum_series
from .settings import settings


class PrelogSpec:
    """Values l(phi_i) for the three kinds: ``sigma``, ``table`` and ``basic``."""

    def __init__(self, kind, chain=LOGEXP, table=None, lookup=None, name=None):
        if kind not in ("sigma", "table", "basic"):
            raise ValueError(f"unknown prelog kind {kind!r}")
        self.kind = kind
        self.chain = chain
        self.table = dict(table or {})
        self.lookup = lookup
        self.name = name or kind

    def value(self, i):
        if self.kind == "sigma":
            return Series.monomial(Monomial.fundamental(self.chain.sigma(i)))
        if self.kind == "basic":
            return Series.monomial(Monomial.fundamental(i))
        if i not in self.table:
            if self.lookup is None:
                raise KeyError(f"prelog table has no entry for index {i}")
            self.table[i] = self.lookup(i)
        return self.table[i]

    def preimage(self, mono):
        """(i, c) with l(phi_i) = c*mono, or None; needs single-term values."""
        if mono.has_tail or mono.is_one:
            return None
        support = list(mono.support())
        if self.kind in ("sigma", "basic"):
            if len(support) != 1 or support[0][1] != 1:
                return None
            j = support[0][0]
            return (j + self.chain.step, 1) if self.kind == "sigma" else (j, 1)
        lf = mono.lf()
        for i in range(lf + 1, lf + 1 + 4 * self.chain.step):
            v = self.value(i)
            if v.exact and len(v._cache) == 1 and v._cache[0][1] == mono:
                return i, v._cache[0][0]
        return None

    def __repr__(self):
        return f"PrelogSpec({self.name!r})"


def sigma_induced(chain=LOGEXP):
    return PrelogSpec("sigma", chain)


def basic(chain=LOGEXP):
    return PrelogSpec("basic", chain)


def table(mapping, chain=LOGEXP, name="table"):
    return PrelogSpec("table", chain, table=mapping, name=name)


def integrated(spec, max_terms=None):
    """The pre-logarithm built by integrating phi'/phi, filled on demand."""
    from .asympint import integrate

    def lookup(i):
        return integrate(spec, spec.log_deriv(i), max_terms).antiderivative

    return PrelogSpec("table", spec.chain, lookup=lookup, name=f"integrated({spec.name})")


@dataclass
class PrelogValue:
    series: Series
    constant: Constant = ZERO

    def __add__(self, other):
        return PrelogValue(self.series + other.series, self.constant + other.constant)

    def __neg__(self):
        return PrelogValue(-self.series, -self.constant)

    def sign(self):
        # the constant outranks infinitesimal terms but not purely infinite ones
        if not self.series.is_zero() and self.series.lm.cmp(self.series.one) > 0:
            return self.series.sign()
        k = self.constant.sign()
        return k if k else self.series.sign()

    def eq_to_budget(self, other, n=None):
        return self.constant == other.constant and eq_to_budget(self.series, other.series, n)


def log_monomial(p, alpha):
    """l(alpha) = sum over the support of exponent * l(phi)."""
    if alpha.is_one:
        return Series.zero()
    if p.kind == "sigma":
        s = p.chain.step
        terms = ((e, Monomial.fundamental(j - s)) for j, e in alpha.support())
        if alpha.has_tail:
            return Series.from_stream(terms)
        return Series._sorted(list(terms), alpha.one())
    if alpha.has_tail:
        return sum_family((p.value(j), e, None) for j, e in alpha.support())
    return sum_series(p.value(j).scale(e) for j, e in alpha.support())


def log(p, a):
    if a.is_zero() or a.lc <= 0:
        raise NotPositive("log needs a positive series")
    d = decompose(a)
    return PrelogValue(log_monomial(p, d.lm) + log1(d.eps), Constant.log_of(d.lc))


def check_HL1(p, window=(-10, 10), depth=4, min_chain=5):
    """Search for an increasing chain of lambdas in Supp l(phi) along decreasing phi."""
    report = Report("HL1", params={"window": list(window), "depth": depth, "min_chain": min_chain})
    nodes = []
    for i in range(window[1], window[0] - 1, -1):
        for _, lam in p.value(i).terms(depth):
            nodes.append((i, lam))
    best = []
    for k, (i, lam) in enumerate(nodes):
        length, prev = 1, None
        for h in range(k):
            i2, lam2 = nodes[h]
            report.checked += 1
            if i2 > i and lam2.cmp(lam) <= 0 and best[h][0] + 1 > length:
                length, prev = best[h][0] + 1, h
        best.append((length, prev))
    if best:
        k = max(range(len(best)), key=lambda h: best[h][0])
        if best[k][0] >= min_chain:
            chain = []
            while k is not None:
                chain.append(nodes[k][0])
                k = best[k][1]
            report.fail(chain[::-1], condition="HL1")
    return report


def check_HL2_HL3(p, window=(-8, 8)):
    report = Report("HL2/HL3", params={"window": list(window), "prelog": p.name})
    idx = range(window[0], window[1] + 1)
    values = {i: p.value(i) for i in idx}
    for i in idx:
        report.checked += 1
        v = values[i]
        if v.sign() <= 0:
            report.fail(i, condition="HL2")
        if v.is_zero() or v.lm.lf() >= i:
            report.fail(i, condition="HL3")
    for i in idx:
        for j in idx:
            if i < j:
                report.checked += 1
                if (values[j] - values[i]).sign() <= 0:
                    report.fail([i, j], condition="HL2")
    return report


def check_HL4(p, spec, window=(-8, 8), budget=None, samples=0, seed=0):
    """derive(l(phi)) against phi'/phi, plus optional random log(a)' = a'/a spot checks."""
    budget = settings.budget if budget is None else budget
    report = Report("HL4", params={"window": list(window), "budget": budget, "samples": samples})
    for i in range(window[0], window[1] + 1):
        report.checked += 1
        lhs = derive(spec, p.value(i))
        rhs = spec.log_deriv(i)
        if not eq_to_budget(lhs, rhs, budget):
            report.fail(i, condition="HL4", difference=str(first_difference(lhs, rhs, budget)))
    rng = make_rng(seed)
    for _ in range(samples):
        a = random_positive_series(rng)
        report.checked += 1
        try:
            lhs = derive(spec, log(p, a).series)
            rhs = log_derivative(spec, a)
            ok = eq_to_budget(lhs, rhs, budget)
        except TransserialError as exc:
            ok = False
            report.fail(str(a.terms(4)), condition="log-compatibility", error=type(exc).__name__)
            continue
        if not ok:
            report.fail(str(a.terms(4)), condition="log-compatibility")
    return report
