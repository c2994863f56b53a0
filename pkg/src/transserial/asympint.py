"""Asymptotic integration of monomials and iterated anti-differentiation."""

from dataclasses import dataclass
from fractions import Fraction

from .derivation import derive
from .errors import AtThetaHat, NoPsiFound, TransserialError
from .monomial import BOTTOM, ONE, lf_or_bottom
from .reports import Report
from .series import Series
from .settings import settings


@dataclass(frozen=True)
class AsymptoticIntegral:
    coefficient: Fraction
    monomial: object
    psi: object = None

    @property
    def value(self):
        return (self.coefficient, self.monomial)

    def series(self, one=ONE):
        return Series.monomial(self.monomial, self.coefficient, one)


@dataclass
class IntegrationResult:
    antiderivative: Series
    exact: bool
    residual: Series
    steps: int


def find_psi(spec, alpha, scan=64, max_iter=64):
    """The unique index psi with LF(alpha / theta(psi)) = psi."""
    if spec.theta_hat is not None and alpha == spec.theta_hat:
        raise AtThetaHat()

    def image(psi):
        return lf_or_bottom(alpha / spec.theta(psi))

    seed = 0 if alpha.is_one else alpha.lf()
    psi, seen = seed, set()
    for _ in range(max_iter):
        nxt = image(psi)
        if nxt == psi:
            return psi
        if nxt == BOTTOM or nxt in seen:
            break
        seen.add(psi)
        psi = nxt
    for d in range(scan + 1):
        for cand in ((seed,) if d == 0 else (seed - d, seed + d)):
            if image(cand) == cand:
                return cand
    raise NoPsiFound(f"no fixed point within {scan} indices of {seed}")


def ai(spec, a):
    """The monomial asymptotic integral of LT(a): LT(derive(result)) = LT(a)."""
    c, alpha = (a.leading() if isinstance(a, Series) else (Fraction(1), a))
    psi = find_psi(spec, alpha)
    t, theta = spec.log_deriv(psi).leading()
    e = (alpha / spec.theta(psi)).le()
    out = AsymptoticIntegral(c / (e * t), alpha / theta, psi)
    if derive(spec, out.series()).leading() != (c, alpha):
        raise TransserialError("asymptotic integral postcondition failed")
    return out


def integrate(spec, a, max_terms=None, constant=0):
    """Greedy anti-derivative: add ai(LT(residual)) until the residual vanishes."""
    max_terms = settings.budget if max_terms is None else max_terms
    terms = []
    residual = a
    steps = 0
    while not residual.is_zero() and steps < max_terms:
        c, m = residual.leading()
        try:
            r = ai(spec, Series.monomial(m, c))
        except AtThetaHat as exc:
            exc.partial = IntegrationResult(_antiderivative(terms, constant), False, residual, steps)
            raise
        terms.append(r.value)
        residual = residual - derive(spec, r.series())
        steps += 1
        if not residual.is_zero() and residual.lm.cmp(m) >= 0:
            raise TransserialError("residual did not decrease")
    exact = residual.is_zero() and not residual.stalled
    return IntegrationResult(_antiderivative(terms, constant), exact, residual, steps)


def _antiderivative(terms, constant):
    out = Series(terms)
    return out + constant if constant else out


def asymptotic_integral_series(spec, r):
    """Termwise asymptotic integral of a whole series (order preserving, lazy)."""
    def gen():
        for c, m in r:
            yield ai(spec, Series.monomial(m, c)).value
    if r.exact:
        return Series(list(gen()), r.one)
    return Series.from_stream(gen(), r.one)


def integration_step(spec, target, l):
    """f(l) = l + A.I.(target - l'); the anti-derivative is its unique fixed point."""
    return l + asymptotic_integral_series(spec, target - derive(spec, l))


def distance(a, b):
    """The ultrametric u(a, b) = LM(a - b), or None when a = b to budget."""
    d = a - b
    return None if d.is_zero() else d.lm


def build_prelog_table(spec, indices, max_terms=None):
    table = {}
    for i in indices:
        table[i] = integrate(spec, spec.log_deriv(i), max_terms).antiderivative
    return table


def check_hypotheses(spec, window=(-8, 8)):
    report = Report("hypotheses", params={"window": list(window), "spec": spec.name})
    for i in range(window[0], window[1] + 1):
        for _, tau in spec.log_deriv(i).terms():
            report.checked += 1
            if spec.theta_hat is not None and tau == spec.theta_hat:
                report.fail(i, condition="Hyp1", monomial=repr(tau))
                continue
            try:
                value = ai(spec, tau).monomial
            except (AtThetaHat, NoPsiFound, TransserialError) as exc:
                report.fail(i, condition="Hyp2", error=type(exc).__name__)
                continue
            if value.cmp(ONE) <= 0:
                report.fail(i, condition="Hyp2", monomial=repr(value))
    return report


def claim_ai_derive(spec, alpha, tau):
    """For beta = alpha*tau in Supp(alpha'): (psi_beta, LE(beta/theta(psi_beta)))."""
    beta = alpha * tau
    psi = find_psi(spec, beta)
    return psi, (beta / spec.theta(psi)).le()
