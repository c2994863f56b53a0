"""Monomials of the Hahn group over the integer chain.

A monomial is an exponent function ``j -> Fraction`` that is zero above some
index and eventually periodic below.  It is stored canonically as

* ``below``: the first index not covered by the periodic tail,
* ``window``: exponents at ``below, below + 1, ...`` (last entry nonzero),
* ``pattern``: the tail, read with absolute phase: the exponent at ``j < below``
  is ``pattern[j % len(pattern)]``.

``below`` is pushed as high as the tail stays valid and the pattern has its
minimal period, so structural equality is equality of monomials.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf

from .errors import IdentityMonomial

BOTTOM = -inf  # LF of the identity, below every index

_ZERO = Fraction(0)


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def _lcm(a, b):
    return a * b // gcd(a, b)


def _minimal_period(pattern):
    p = len(pattern)
    for d in range(1, p + 1):
        if p % d == 0 and all(pattern[k] == pattern[k % d] for k in range(d, p)):
            return tuple(pattern[:d])
    return tuple(pattern)


_RELATIONS = {"≺": "<", "≼": "<=", "≻": ">", "≽": ">=", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


class Monomial:
    __slots__ = ("below", "window", "pattern", "_hash")

    def __init__(self, exponents=None, pattern=(0,), below=None):
        """Build from a finite mapping ``index -> exponent`` plus an optional
        absolute-phase tail ``pattern`` valid for every index below ``below``."""
        exponents = {int(j): _q(e) for j, e in (exponents or {}).items()}
        pattern = tuple(_q(e) for e in pattern) or (_ZERO,)
        if below is None:
            below = min(exponents, default=0)
        if any(j < below for j in exponents):
            raise ValueError("window entries must not lie below the tail boundary")
        top = max(exponents, default=below - 1)
        window = [exponents.get(j, _ZERO) for j in range(below, top + 1)]
        self._set(*_canonical(below, window, pattern))

    def _set(self, below, window, pattern):
        self.below = below
        self.window = window
        self.pattern = pattern
        self._hash = None

    @classmethod
    def _raw(cls, below, window, pattern):
        m = object.__new__(cls)
        m._set(*_canonical(below, window, pattern))
        return m

    # constructors

    @classmethod
    def one(cls):
        return ONE

    @classmethod
    def fundamental(cls, i, exponent=1):
        return cls({i: exponent})

    @classmethod
    def tail_product(cls, top, step=1, exponent=1):
        """prod_{k >= 0} phi_{top - k*step} ** exponent."""
        pattern = [_ZERO] * step
        pattern[top % step] = _q(exponent)
        return cls._raw(top + 1, [], tuple(pattern))

    # exponent access

    @property
    def top(self):
        return self.below + len(self.window) - 1

    @property
    def has_tail(self):
        return any(self.pattern)

    @property
    def is_one(self):
        return not self.window and not self.has_tail

    def exponent(self, j):
        if j >= self.below:
            k = j - self.below
            return self.window[k] if k < len(self.window) else _ZERO
        return self.pattern[j % len(self.pattern)]

    def support(self):
        """Yield ``(index, exponent)`` over the support, descending (infinite with a tail)."""
        for k in range(len(self.window) - 1, -1, -1):
            if self.window[k]:
                yield self.below + k, self.window[k]
        if self.has_tail:
            j = self.below - 1
            p = len(self.pattern)
            while True:
                e = self.pattern[j % p]
                if e:
                    yield j, e
                j -= 1

    def finite_support(self):
        if self.has_tail:
            raise ValueError("monomial has infinite support")
        return list(self.support())

    # group structure

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        if other.is_one:
            return self
        if self.is_one:
            return other
        pa, pb = len(self.pattern), len(other.pattern)
        p = _lcm(pa, pb)
        pattern = tuple(self.pattern[r % pa] + other.pattern[r % pb] for r in range(p))
        below = min(self.below, other.below)
        top = max(self.top, other.top)
        window = [self.exponent(j) + other.exponent(j) for j in range(below, top + 1)]
        return Monomial._raw(below, window, pattern)

    def inverse(self):
        return Monomial._raw(self.below, [-e for e in self.window], tuple(-e for e in self.pattern))

    def __truediv__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, q):
        q = _q(q)
        return Monomial._raw(self.below, [e * q for e in self.window], tuple(e * q for e in self.pattern))

    def shift(self, d):
        """Move every exponent from index j to index j + d."""
        p = len(self.pattern)
        pattern = tuple(self.pattern[(r - d) % p] for r in range(p))
        return Monomial._raw(self.below + d, list(self.window), pattern)

    # order

    def cmp(self, other):
        """-1, 0 or 1 according to the anti-lexicographic order."""
        j = self.first_difference(other)
        if j is None:
            return 0
        return -1 if self.exponent(j) < other.exponent(j) else 1

    def first_difference(self, other):
        """Largest index where the exponents differ, or None when equal."""
        if self is other:
            return None
        low = min(self.below, other.below)
        for j in range(max(self.top, other.top), low - 1, -1):
            if self.exponent(j) != other.exponent(j):
                return j
        span = _lcm(len(self.pattern), len(other.pattern))
        for j in range(low - 1, low - 1 - span, -1):
            if self.exponent(j) != other.exponent(j):
                return j
        return None

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return (self.below, self.window, self.pattern) == (other.below, other.window, other.pattern)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.below, self.window, self.pattern))
        return self._hash

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # leading data

    def lf(self):
        if self.window:
            return self.top
        if self.has_tail:
            j = self.below - 1
            while not self.pattern[j % len(self.pattern)]:
                j -= 1
            return j
        raise IdentityMonomial("the identity monomial has no leading fundamental")

    def le(self):
        return self.exponent(self.lf())

    def truncate(self, rel, pivot):
        """Keep the exponents at indices j with ``phi_j rel phi_pivot``."""
        rel = _RELATIONS[rel]
        if rel in (">", ">="):
            lo = pivot if rel == ">=" else pivot + 1
            window = [self.exponent(j) for j in range(lo, max(self.top, lo - 1) + 1)]
            return Monomial._raw(lo, window, (_ZERO,))
        hi = pivot if rel == "<=" else pivot - 1
        below = min(self.below, hi + 1)
        window = [self.exponent(j) for j in range(below, hi + 1)]
        return Monomial._raw(below, window, self.pattern)

    # serialisation

    def to_json(self):
        window = {str(j): str(e) for j, e in zip(range(self.below, self.top + 1), self.window) if e}
        p = len(self.pattern)
        pattern = [str(self.exponent(self.below - 1 - k)) for k in range(p)]
        return {"window": window, "tail": {"period": p, "pattern": pattern, "below": self.below}}

    @classmethod
    def from_json(cls, data):
        tail = data.get("tail") or {}
        rel = [Fraction(v) for v in tail.get("pattern", ["0"])]
        window = {int(j): Fraction(e) for j, e in data.get("window", {}).items()}
        below = tail.get("below", min(window, default=0))
        p = len(rel)
        # relative position k holds the exponent at below - 1 - k
        pattern = [rel[(below - 1 - r) % p] for r in range(p)]
        return cls(window, pattern, below)

    def __repr__(self):
        parts = [f"{j}:{e}" for j, e in zip(range(self.below, self.top + 1), self.window) if e]
        tail = f", tail={[str(e) for e in self.pattern]}<{self.below}" if self.has_tail else ""
        return f"Monomial({{{', '.join(parts)}}}{tail})"


def _canonical(below, window, pattern):
    pattern = _minimal_period(pattern)
    p = len(pattern)
    window = list(window)
    while window and window[-1] == 0:
        window.pop()
    start = 0
    while start < len(window) and window[start] == pattern[(below + start) % p]:
        start += 1
    below += start
    window = window[start:]
    if not window:
        if not any(pattern):
            return 0, (), (_ZERO,)
        while pattern[below % p] == 0:
            below += 1
    return below, tuple(window), pattern


ONE = Monomial()


@dataclass(frozen=True)
class MonomialComparison:
    result: str           # "≺", "=" or "≻"
    witness: object = None


def mul(a, b):
    return a * b


def compare(a, b):
    j = a.first_difference(b)
    if j is None:
        return MonomialComparison("=")
    return MonomialComparison("≺" if a.exponent(j) < b.exponent(j) else "≻", j)


def leading_fundamental(a):
    return a.lf()


def leading_exponent(a):
    return a.le()


def lf_or_bottom(a):
    return BOTTOM if a.is_one else a.lf()


def truncate(a, rel, pivot):
    return a.truncate(rel, pivot)
