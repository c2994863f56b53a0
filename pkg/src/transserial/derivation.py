"""Hardy-type series derivations given on a fundamental domain of the shift.

A :class:`DerivationSpec` fixes ``phi_j'/phi_j = t_j * theta_j + lower_j`` for the
orbit representatives ``j = 0 .. step-1``.  Every other fundamental inherits its
logarithmic derivative along the orbit:

    phi'/phi at sigma^k(phi_j) = (phi_j'/phi_j) / prod_{m=1..k} sigma^m(phi_j)

(and the matching product with inverse shifts for k < 0).  This is what makes
the shift-induced pre-logarithm compatible with the derivation.
"""

from fractions import Fraction

from .chain import LOGEXP, Chain
from .chain import interleaved as interleaved_chain
from .errors import SummabilityViolation, TransserialError, ZeroSeries
from .monomial import ONE, Monomial
from .reports import Report
from .sampling import make_rng, random_series
from .series import Series, sum_family, sum_series

_AUTO = object()


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


class DerivationSpec:
    def __init__(self, chain, base, theta_hat=_AUTO, name=None, overrides=None):
        self.chain = chain
        self.name = name or "custom"
        self.base = {}
        for j in chain.fundamental_domain():
            if j not in base:
                raise ValueError(f"missing fundamental-domain entry {j}")
            entry = base[j]
            t, theta = _q(entry[0]), entry[1]
            lower = entry[2] if len(entry) > 2 and entry[2] is not None else Series.zero()
            if not t:
                raise ValueError("t must be nonzero")
            if not lower.is_zero() and lower.lm.cmp(theta) >= 0:
                raise ValueError("lower terms must be dominated by theta")
            self.base[j] = (t, theta, lower)
        self.overrides = dict(overrides or {})
        self.theta_hat = self._limit_theta() if theta_hat is _AUTO else theta_hat
        self._ld = {}
        self._ld_mono = {}

    def _limit_theta(self):
        # pointwise exponent limit of theta along each orbit, smallest over orbits
        s = self.chain.step
        limits = [theta * Monomial.tail_product(j - s, s, -1) for j, (_, theta, _) in self.base.items()]
        return min(limits)

    def log_deriv(self, i):
        """phi_i'/phi_i as an exact series."""
        if i in self.overrides:
            return self.overrides[i]
        hit = self._ld.get(i)
        if hit is not None:
            return hit
        s = self.chain.step
        r = self.chain.orbit_rep(i)
        k = (r - i) // s
        t, theta, lower = self.base[r]
        if k > 0:
            factor = Monomial({r - m * s: 1 for m in range(1, k + 1)}).inverse()
        else:
            factor = Monomial({r + m * s: 1 for m in range(-k)})
        out = (Series.monomial(theta, t) + lower).scale(1, factor)
        self._ld[i] = out
        return out

    def theta(self, i):
        return self.log_deriv(i).lm

    def t(self, i):
        return self.log_deriv(i).lc

    def log_deriv_monomial(self, m):
        """alpha'/alpha = sum over the support of exponent * phi'/phi."""
        hit = self._ld_mono.get(m)
        if hit is not None:
            return hit
        if m.has_tail:
            out = sum_family((self.log_deriv(j), e, None) for j, e in m.support())
        else:
            out = sum_series(self.log_deriv(j).scale(e) for j, e in m.support())
        if len(self._ld_mono) < 50000:
            self._ld_mono[m] = out
        return out

    def corrupted(self, i, series, name=None):
        """A copy whose phi_i'/phi_i is replaced outright (negative controls only)."""
        overrides = dict(self.overrides)
        overrides[i] = series
        return DerivationSpec(self.chain, self.base, self.theta_hat,
                              name or f"{self.name}+override({i})", overrides)

    def with_t(self, j, t):
        base = dict(self.base)
        _, theta, lower = base[j]
        base[j] = (t, theta, lower)
        return DerivationSpec(self.chain, base, self.theta_hat, f"{self.name}+t({j})", self.overrides)

    def __repr__(self):
        return f"DerivationSpec({self.name!r}, step={self.chain.step})"


# presets

def logexp_ddx():
    x = Monomial.fundamental(0)
    return DerivationSpec(LOGEXP, {0: (1, x.inverse())},
                          theta_hat=Monomial.tail_product(0, 1, -1), name="logexp-ddx")


def sigma_geometric():
    return DerivationSpec(LOGEXP, {0: (1, Monomial.tail_product(-1))},
                          theta_hat=ONE, name="sigma-geometric")


def interleaved(n=2):
    chain = interleaved_chain(n)
    base = {0: (1, ONE)}
    for j in range(1, n):
        base[j] = (1, Monomial.tail_product(j - n, n, 1) * Monomial.tail_product(-n, n, -1))
    return DerivationSpec(chain, base, theta_hat=Monomial.tail_product(-n, n, -1),
                          name=f"interleaved({n})")


def preset(name, step=None):
    if name == "logexp-ddx":
        return logexp_ddx()
    if name == "sigma-geometric":
        return sigma_geometric()
    if name == "interleaved":
        return interleaved(step or 2)
    if name.startswith("interleaved(") and name.endswith(")"):
        return interleaved(int(name[len("interleaved("):-1]))
    raise ValueError(f"unknown derivation preset {name!r}")


def from_config(data, chain=None):
    """Explicit spec from ``{"base": {"0": {"t": "1", "theta": {...}}, ...}}``."""
    base = {}
    for key, entry in data["base"].items():
        theta = Monomial.from_json(entry["theta"])
        base[int(key)] = (Fraction(str(entry.get("t", "1"))), theta)
    step = len(base)
    chain = chain or (LOGEXP if step == 1 else Chain(step, "indexed"))
    theta_hat = Monomial.from_json(data["theta_hat"]) if "theta_hat" in data else _AUTO
    return DerivationSpec(chain, base, theta_hat, name="config")


# differentiation

def log_deriv_fundamental(spec, i):
    return spec.log_deriv(i)


def derive(spec, a):
    """a' by the strong Leibniz rule, as a merged decreasing stream."""
    if a.exact and not any(m.has_tail for _, m in a._cache):
        terms = []
        for c, m in a._cache:
            if m.is_one:
                continue
            for d, mu in spec.log_deriv_monomial(m)._cache:
                terms.append((c * d, m * mu))
        return Series(terms, a.one)
    members = ((spec.log_deriv_monomial(m), c, m) for c, m in a if not m.is_one)
    return sum_family(members, a.one)


def log_derivative(spec, a):
    if a.is_zero():
        raise ZeroSeries("log derivative of zero")
    if a.exact and len(a._cache) == 1:
        return spec.log_deriv_monomial(a.lm)
    return derive(spec, a) * a.invert()


# validation

def _window(window):
    lo, hi = window
    return range(lo, hi + 1)


def validate_H3prime(spec, window=(-8, 8)):
    report = Report("H3'", params={"window": list(window), "spec": spec.name})
    idx = list(_window(window))
    for a in idx:
        for b in idx:
            if a >= b:
                continue
            report.checked += 1
            ta, tb = spec.theta(a), spec.theta(b)
            if ta.cmp(tb) >= 0:
                report.fail([a, b], condition="theta increasing")
                continue
            if (ta / tb).lf() >= b:
                report.fail([a, b], condition="LF(theta_i/theta_j) < j")
    return report


def validate_M(spec, window=(-8, 8), depth=12):
    report = Report("M", params={"window": list(window), "depth": depth, "spec": spec.name})
    s = spec.chain.step
    idx = list(_window(window))
    for a in idx:
        for b in idx:
            if a >= b:
                continue
            report.checked += 1
            lhs = spec.theta(b) / spec.theta(a)
            head = Monomial({})
            for k in range(1, depth + 1):
                head = head * Monomial({b - k * s: 1}) / Monomial({a - k * s: 1})
            rest = (Monomial.tail_product(b - (depth + 1) * s, s, 1)
                    * Monomial.tail_product(a - (depth + 1) * s, s, -1))
            # the convex orbit of any index is the whole chain, so the truncation keeps everything
            if lhs != head * rest:
                report.fail([a, b], condition="(M)")
    return report


def validate_hardy(spec, samples=500, seed=0, lo=-3, hi=3):
    """Sampled checks of l'Hospital (HD2), log-derivative monotonicity (HD3), constants (HD1)."""
    rng = make_rng(seed)
    report = Report("hardy", params={"samples": samples, "seed": seed, "spec": spec.name})
    one = ONE
    for _ in range(samples):
        a = random_series(rng, lo=lo, hi=hi)
        b = random_series(rng, lo=lo, hi=hi)
        try:
            da, db = derive(spec, a), derive(spec, b)
            if da.is_zero() and any(not m.is_one for _, m in a):
                report.fail([str(a.terms(4))], condition="HD1")
            report.checked += 1
            if a.lm.is_one or b.lm.is_one:
                continue
            left = a.lm.cmp(b.lm) <= 0
            right = da.lm.cmp(db.lm) <= 0
            if left != right:
                report.fail([str(a.terms(3)), str(b.terms(3))], condition="HD2")
            ma = a.lm if a.lm.cmp(one) > 0 else a.lm.inverse()
            mb = b.lm if b.lm.cmp(one) > 0 else b.lm.inverse()
            if ma.cmp(mb) > 0:
                # LM(a'/a) = LM(a')/LM(a) without inverting the whole series
                la = da.lm / a.lm
                lb = db.lm / b.lm
                c = la.cmp(lb)
                same_lf = a.lm.lf() == b.lm.lf()
                if c < 0 or (c == 0) != same_lf:
                    report.fail([str(a.terms(3)), str(b.terms(3))], condition="HD3")
        except (SummabilityViolation, ZeroSeries, TransserialError) as exc:
            report.fail([str(a.terms(3)), str(b.terms(3))], condition=type(exc).__name__)
    return report
