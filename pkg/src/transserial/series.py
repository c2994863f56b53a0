"""Lazy generalized series with exact rational coefficients.

A :class:`Series` is a memoised stream of ``(coefficient, monomial)`` pairs in
strictly decreasing monomial order.  Monomials only need ``cmp``, ``*``,
``inverse``, ``**`` with rational exponents, ``is_one``, equality and hashing,
so the same machinery serves plain monomials and the tower's sharp monomials.

Zero testing of an infinite stream is undecidable.  Every merge therefore gives
up after ``settings.cancel_limit`` consecutive cancelled monomials; the stream
then ends in a *stalled* state, meaning "no further term found within budget".
"""

import heapq
import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .errors import NotInfinitesimal, SummabilityViolation, TruncationError, ZeroSeries
from .monomial import ONE, Monomial
from .settings import settings

_STALL = object()


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


_by_monomial_desc = cmp_to_key(lambda s, t: t[1].cmp(s[1]))


class Series:
    __slots__ = ("_cache", "_source", "_done", "_stalled", "_error", "_lock", "one")

    def __init__(self, terms=(), one=ONE):
        """Exact series from ``(coefficient, monomial)`` pairs given in any order."""
        acc = {}
        for c, m in terms:
            acc[m] = acc.get(m, 0) + _q(c)
        items = [(c, m) for m, c in acc.items() if c]
        items.sort(key=_by_monomial_desc)
        self._init(one, items, None)

    def _init(self, one, cache, source):
        self.one = one
        self._cache = cache
        self._source = source
        self._done = source is None
        self._stalled = False
        self._error = None
        self._lock = threading.RLock()

    @classmethod
    def _sorted(cls, items, one):
        s = object.__new__(cls)
        s._init(one, list(items), None)
        return s

    @classmethod
    def lazy(cls, source, one=ONE):
        s = object.__new__(cls)
        s._init(one, [], iter(source))
        return s

    @classmethod
    def from_stream(cls, terms, one=ONE):
        """Wrap an external stream; ordering is validated as terms are forced."""
        return cls.lazy(((_q(c), m) for c, m in terms), one)

    @classmethod
    def const(cls, c, one=ONE):
        c = _q(c)
        return cls._sorted([(c, one)] if c else [], one)

    @classmethod
    def monomial(cls, m, c=1, one=None):
        c = _q(c)
        return cls._sorted([(c, m)] if c else [], one if one is not None else _one_like(m))

    @classmethod
    def zero(cls, one=ONE):
        return cls._sorted([], one)

    # forcing

    def _force(self, n):
        if self._done or len(self._cache) >= n:
            return
        with self._lock:
            if self._error is not None:
                raise self._error
            cache = self._cache
            while len(cache) < n and not self._done:
                try:
                    item = next(self._source)
                except StopIteration:
                    self._done = True
                    self._source = None
                    break
                except Exception as exc:
                    self._error = exc
                    raise
                if item is _STALL:
                    self._done = self._stalled = True
                    self._source = None
                    break
                if cache and cache[-1][1].cmp(item[1]) <= 0:
                    self._error = SummabilityViolation(
                        f"non-decreasing emission: {item[1]!r} after {cache[-1][1]!r}")
                    raise self._error
                cache.append(item)

    def terms(self, n=None):
        """The first ``n`` terms (default: the global budget)."""
        n = settings.budget if n is None else n
        self._force(n)
        return self._cache[:n]

    def all_terms(self, limit=None):
        limit = settings.scan_limit if limit is None else limit
        self._force(limit + 1)
        if len(self._cache) > limit:
            raise TruncationError(f"series has more than {limit} terms")
        return list(self._cache)

    def __iter__(self):
        for item in _stream(self):
            if item is _STALL:
                return
            yield item

    @property
    def exact(self):
        """True when the stream is known to be finite and fully materialised."""
        return self._done and not self._stalled

    @property
    def stalled(self):
        return self._stalled

    def forced_length(self):
        return len(self._cache)

    def key(self):
        if not self.exact:
            raise ValueError("only exact series have a structural key")
        return tuple(self._cache)

    # leading data

    def is_zero(self):
        self._force(1)
        return not self._cache

    def leading(self):
        self._force(1)
        if not self._cache:
            raise ZeroSeries("the zero series has no leading term")
        return self._cache[0]

    @property
    def lt(self):
        return self.leading()

    @property
    def lc(self):
        return self.leading()[0]

    @property
    def lm(self):
        return self.leading()[1]

    def lf(self):
        return self.lm.lf()

    def le(self):
        return self.lm.le()

    def sign(self):
        self._force(1)
        if not self._cache:
            return 0
        return 1 if self._cache[0][0] > 0 else -1

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)):
            return Series.const(other, self.one)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.exact and not other._cache:
            return self
        if self.exact and not self._cache:
            return other
        if self.exact and other.exact:
            return Series(self._cache + other._cache, self.one)
        return Series.lazy(_merge([self, other]), self.one)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c, m=None):
        """c * m * self, for a rational c and a monomial m (default 1)."""
        c = _q(c)
        if not c:
            return Series.zero(self.one)
        if c == 1 and (m is None or m.is_one):
            return self
        if self.exact:
            if m is None:
                return Series._sorted([(c * a, b) for a, b in self._cache], self.one)
            return Series._sorted([(c * a, m * b) for a, b in self._cache], self.one)
        return Series.lazy(_scaled(self, c, m), self.one)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        if self.exact and other.exact:
            if not self._cache or not other._cache:
                return Series.zero(self.one)
            if len(self._cache) == 1:
                c, m = self._cache[0]
                return other.scale(c, m)
            if len(other._cache) == 1:
                c, m = other._cache[0]
                return self.scale(c, m)
            return Series(((a * c, b * m) for a, b in self._cache for c, m in other._cache), self.one)
        return Series.lazy(_product(self, other), self.one)

    __rmul__ = __mul__

    def invert(self):
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        d = decompose(self)
        scale, mono = 1 / d.lc, d.lm.inverse()
        if d.eps.exact and not d.eps._cache:
            return Series.monomial(mono, scale, self.one)
        geometric = _power_series(-d.eps, itertools.repeat(Fraction(1)))
        return geometric.scale(scale, mono)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / _q(other))
        if not isinstance(other, Series):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, q):
        return power(self, q)

    def __repr__(self):
        shown = ", ".join(f"{c}*{m!r}" for c, m in self._cache[:6])
        more = "" if self.exact and len(self._cache) <= 6 else ", ..."
        return f"Series([{shown}{more}])"


def _one_like(m):
    return m.one() if hasattr(m, "one") and callable(m.one) else ONE


# stream plumbing

def _stream(s, start=0):
    i = start
    while True:
        s._force(i + 1)
        if i < len(s._cache):
            yield s._cache[i]
            i += 1
        else:
            if s._stalled:
                yield _STALL
            return


def _scaled(s, c, m):
    for item in _stream(s):
        if item is _STALL:
            yield item
            return
        a, b = item
        yield (c * a, b if m is None else m * b)


class _Node:
    __slots__ = ("mono", "coef", "src", "pos", "seq")

    def __init__(self, mono, coef, src, pos, seq):
        self.mono, self.coef, self.src, self.pos, self.seq = mono, coef, src, pos, seq

    def __lt__(self, other):
        c = self.mono.cmp(other.mono)
        if c:
            return c > 0
        return self.seq < other.seq


def _merge(members, ordered=False):
    """Sum a family of series.

    Members are ``Series`` or ``(series, c, m)`` views meaning ``c*m*series``.
    With ``ordered`` the (possibly infinite) family must come with
    non-increasing leading monomials; members are then admitted lazily.
    """
    heap = []
    seq = itertools.count()
    state = {"stall_all": False, "bound": None}

    def view(member):
        if isinstance(member, Series):
            return member, Fraction(1), None
        return member

    def push(src, pos):
        s, c, m = src
        s._force(pos + 1)
        if pos < len(s._cache):
            a, b = s._cache[pos]
            heapq.heappush(heap, _Node(b if m is None else m * b, c * a, src, pos, next(seq)))
        elif s._stalled:
            if pos == 0:
                state["stall_all"] = True
            else:
                last = s._cache[pos - 1][1]
                last = last if m is None else m * last
                bound = state["bound"]
                if bound is None or last.cmp(bound) > 0:
                    state["bound"] = last

    it = iter(members)
    pending = None

    def fetch():
        zeros = 0
        while True:
            member = next(it, None)
            if member is None:
                return None
            src = view(member)
            src[0]._force(1)
            if src[0]._cache:
                return src
            if src[0]._stalled:
                state["stall_all"] = True
                return None
            zeros += 1
            if zeros > settings.cancel_limit:
                state["stall_all"] = True
                return None

    if ordered:
        pending = fetch()
    else:
        for member in it:
            push(view(member), 0)

    cancelled = 0
    while True:
        while pending is not None:
            s, c, m = pending
            lead = s._cache[0][1] if m is None else m * s._cache[0][1]
            if heap and lead.cmp(heap[0].mono) < 0:
                break
            push(pending, 0)
            pending = fetch()
        if state["stall_all"]:
            yield _STALL
            return
        if not heap:
            return
        top = heap[0].mono
        bound = state["bound"]
        if bound is not None and top.cmp(bound) < 0:
            yield _STALL
            return
        total = 0
        while heap and heap[0].mono == top:
            node = heapq.heappop(heap)
            total += node.coef
            push(node.src, node.pos + 1)
        if total:
            cancelled = 0
            yield (total, top)
        else:
            cancelled += 1
            if cancelled > settings.cancel_limit:
                yield _STALL
                return


def _product(a, b):
    heap = []
    seq = itertools.count()
    state = {"stall_all": False, "bound": None}

    def raise_bound(mono):
        if state["bound"] is None or mono.cmp(state["bound"]) > 0:
            state["bound"] = mono

    def push(i, j):
        a._force(i + 1)
        b._force(j + 1)
        ok = True
        if i >= len(a._cache):
            ok = False
            if a._stalled:
                if i == 0 or not b._cache:
                    state["stall_all"] = True
                else:
                    raise_bound(a._cache[i - 1][1] * b._cache[0][1])
        if j >= len(b._cache):
            ok = False
            if b._stalled:
                if j == 0 or not a._cache:
                    state["stall_all"] = True
                else:
                    raise_bound(a._cache[0][1] * b._cache[j - 1][1])
        if ok:
            ca, ma = a._cache[i]
            cb, mb = b._cache[j]
            heapq.heappush(heap, _Node(ma * mb, ca * cb, (i, j), 0, next(seq)))

    push(0, 0)
    cancelled = 0
    while True:
        if state["stall_all"]:
            yield _STALL
            return
        if not heap:
            return
        top = heap[0].mono
        if state["bound"] is not None and top.cmp(state["bound"]) < 0:
            yield _STALL
            return
        total = 0
        while heap and heap[0].mono == top:
            node = heapq.heappop(heap)
            total += node.coef
            i, j = node.src
            if j == 0:
                push(i + 1, 0)
            push(i, j + 1)
        if total:
            cancelled = 0
            yield (total, top)
        else:
            cancelled += 1
            if cancelled > settings.cancel_limit:
                yield _STALL
                return


def _power_series(eps, coefficients):
    """sum_n k_n * eps**n for an infinitesimal eps, as an ordered family."""
    one = eps.one

    def members():
        power = Series.const(1, one)
        for n, k in enumerate(coefficients):
            if n:
                # exact expansion of eps**n grows fast; past a few dozen terms go lazy
                if power.exact and len(power._cache) * len(eps._cache) <= 64:
                    power = power * eps
                else:
                    power = Series.lazy(_product(power, eps), one)
            if k:
                yield (power, _q(k), None)

    return Series.lazy(_merge(members(), ordered=True), one)


def _check_infinitesimal(eps):
    if eps.is_zero():
        return False
    if eps.lm.cmp(eps.one) >= 0:
        raise NotInfinitesimal("argument is not infinitesimal")
    return True


# public operations

def add(a, b):
    return a + b


def neg(a):
    return -a


def scalar_mul(c, a):
    return a.scale(c)


def mul(a, b):
    return a * b


def invert(a):
    return a.invert()


def leading(a):
    return a.leading()


def sum_family(members, one=ONE):
    """Sum an ordered family (non-increasing leading monomials), lazily."""
    return Series.lazy(_merge(members, ordered=True), one)


def sum_series(items, one=ONE):
    items = list(items)
    if all(s.exact for s in items):
        return Series([t for s in items for t in s._cache], one)
    return Series.lazy(_merge(items), one)


def log1(eps):
    """The logarithm of the 1-unit 1 + eps."""
    if not _check_infinitesimal(eps):
        return Series.zero(eps.one)
    coefficients = (Fraction((-1) ** (n - 1), n) if n else 0 for n in itertools.count())
    return _power_series(eps, coefficients)


def exp1(eps):
    """exp(eps) for an infinitesimal eps."""
    if not _check_infinitesimal(eps):
        return Series.const(1, eps.one)

    def coefficients():
        k = Fraction(1)
        for n in itertools.count():
            if n:
                k /= n
            yield k

    return _power_series(eps, coefficients())


def _rational_power(c, q):
    if q.denominator == 1:
        return c ** q.numerator
    root_n = _exact_root(c.numerator, q.denominator)
    root_d = _exact_root(c.denominator, q.denominator)
    if root_n is None or root_d is None:
        raise ValueError(f"{c}^{q} is not rational")
    return Fraction(root_n, root_d) ** q.numerator


def _exact_root(n, k):
    if n < 0:
        if k % 2 == 0:
            return None
        r = _exact_root(-n, k)
        return None if r is None else -r
    r = round(n ** (1.0 / k)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def power(a, q):
    """a ** q for rational q, through the binomial series of the 1-unit."""
    q = _q(q)
    if q == 0:
        return Series.const(1, a.one)
    d = decompose(a)
    head = Series.monomial(d.lm ** q, _rational_power(d.lc, q), a.one)
    if d.eps.exact and not d.eps._cache:
        return head
    if q.denominator == 1 and q > 0 and a.exact:
        out = a
        for _ in range(int(q) - 1):
            out = out * a
        return out

    def binomials():
        k = Fraction(1)
        for n in itertools.count():
            if n:
                k = k * (q - n + 1) / n
            yield k

    return _power_series(d.eps, binomials()).scale(head.lc, head.lm)


@dataclass(frozen=True)
class UnitDecomposition:
    lc: Fraction
    lm: object
    eps: Series


def decompose(a):
    c, m = a.leading()
    inv_c, inv_m = 1 / c, m.inverse()
    if a.exact:
        eps = Series._sorted([(inv_c * x, inv_m * y) for x, y in a._cache[1:]], a.one)
    else:
        eps = Series.lazy(_scaled(Series.lazy(_stream(a, 1), a.one), inv_c, inv_m), a.one)
    return UnitDecomposition(c, m, eps)


def split(a):
    """(purely infinite part, constant coefficient, infinitesimal part)."""
    one = a.one
    if a.exact:
        big = [t for t in a._cache if t[1].cmp(one) > 0]
        small = [t for t in a._cache if t[1].cmp(one) < 0]
        const = next((c for c, m in a._cache if m == one), Fraction(0))
        return Series._sorted(big, one), const, Series._sorted(small, one)
    k = 0
    while True:
        if k >= settings.scan_limit:
            raise TruncationError("purely infinite part not resolved within the scan limit")
        a._force(k + 1)
        if k >= len(a._cache) or a._cache[k][1].cmp(one) <= 0:
            break
        k += 1
    if k >= len(a._cache):
        items = a._cache[:k]
        if a._stalled:
            return Series.lazy(_stalled_copy(items), one), Fraction(0), Series.lazy(iter([_STALL]), one)
        return Series._sorted(items, one), Fraction(0), Series.zero(one)
    big = Series._sorted(a._cache[:k], one)
    const = Fraction(0)
    start = k
    if a._cache[k][1] == one:
        const = a._cache[k][0]
        start = k + 1
    return big, const, Series.lazy(_stream(a, start), one)


def _stalled_copy(items):
    yield from items
    yield _STALL


def truncate_terms(a, n):
    return Series._sorted(a.terms(n), a.one)


class Dominance:
    PREC = "≺"
    ASYMP = "≍"
    SUCC = "≻"


def dominance(a, b):
    c = a.lm.cmp(b.lm)
    return Dominance.PREC if c < 0 else Dominance.SUCC if c > 0 else Dominance.ASYMP


def asymptotic(a, b):
    return a.lt == b.lt


def comparable(a, b):
    return a.lm.lf() == b.lm.lf()


def eq_exact(a, b):
    if not (a.exact and b.exact):
        raise ValueError("eq_exact needs two exact series")
    return a._cache == b._cache


def eq_to_budget(a, b, n=None):
    """Agreement of the first ``n`` terms; a stalled stream agrees on what it hides."""
    n = settings.budget if n is None else n
    ta, tb = a.terms(n), b.terms(n)
    k = min(len(ta), len(tb))
    if ta[:k] != tb[:k]:
        return False
    if len(ta) == len(tb):
        return True
    shorter = a if len(ta) < len(tb) else b
    return shorter.stalled


def first_difference(a, b, n=None):
    """Index and terms of the first disagreement within budget, or None."""
    n = settings.budget if n is None else n
    ta, tb = a.terms(n), b.terms(n)
    for k in range(max(len(ta), len(tb))):
        x = ta[k] if k < len(ta) else None
        y = tb[k] if k < len(tb) else None
        if x != y:
            if (x is None and a.stalled) or (y is None and b.stalled):
                return None
            return k, x, y
    return None


def is_decreasing(terms):
    return all(terms[k][1].cmp(terms[k + 1][1]) > 0 for k in range(len(terms) - 1))


def monomial_series(m, c=1):
    return Series.monomial(m, c, ONE if isinstance(m, Monomial) else None)
