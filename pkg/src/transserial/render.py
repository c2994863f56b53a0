"""Text and JSON rendering of monomials, series and constants."""

from fractions import Fraction

from .chain import LOGEXP
from .settings import settings


def _exponent_suffix(e):
    if e == 1:
        return ""
    if e.denominator == 1:
        return f"^{e.numerator}"
    return f"^({e})"


def monomial_text(m, chain=LOGEXP, tail_factors=3):
    """Product of labelled factors, largest index first; ``1`` for the identity."""
    if getattr(m, "comps", None) is not None:
        return sharp_monomial_text(m, chain)
    if m.is_one:
        return "1"
    factors = []
    shown_tail = 0
    for j, e in m.support():
        if j < m.below:
            if shown_tail >= max(tail_factors, len(m.pattern)):
                factors.append("...")
                break
            shown_tail += 1
        factors.append(chain.label(j) + _exponent_suffix(e))
    return "*".join(factors)


def _coefficient_text(c):
    return str(abs(c))


def term_text(c, m, chain=LOGEXP):
    """Unsigned text of |c|*m."""
    body = monomial_text(m, chain)
    if body == "1":
        return _coefficient_text(c)
    if abs(c) == 1:
        return body
    return f"{_coefficient_text(c)}*{body}"


def join_signed(pieces):
    """Join (sign, text) pairs as 'a + b - c'."""
    if not pieces:
        return "0"
    out = []
    for k, (negative, text) in enumerate(pieces):
        if k == 0:
            out.append(("-" if negative else "") + text)
        else:
            out.append((" - " if negative else " + ") + text)
    return "".join(out)


def series_text(s, chain=LOGEXP, n=None):
    """Text of the first ``n`` terms; sharp series group terms by exponential part."""
    n = settings.budget if n is None else n
    terms = s.terms(n)
    if terms and getattr(terms[0][1], "comps", None) is not None:
        return _sharp_series_text(terms, chain)
    return join_signed([(c < 0, term_text(c, m, chain)) for c, m in terms])


def is_truncated(s, n=None):
    n = settings.budget if n is None else n
    s.terms(n + 1)
    return not (s.exact and s.forced_length() <= n)


def _exp_factors(m, chain):
    if not m.comps:
        return []
    return [f"exp({series_text(m.exp_arg(), chain)})"]


def sharp_monomial_text(m, chain=LOGEXP):
    parts = []
    if not m.base.is_one:
        parts.append(monomial_text(m.base, chain))
    parts.extend(_exp_factors(m, chain))
    return "*".join(parts) if parts else "1"


def _sharp_series_text(terms, chain):
    groups = {}
    order = []
    for c, m in terms:
        key = m.exp_key()
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append((c, m))
    pieces = []
    for key in order:
        group = groups[key]
        exps = _exp_factors(group[0][1], chain)
        if len(group) == 1 or not exps:
            pieces.extend((c < 0, term_text(c, m, chain)) for c, m in group)
            continue
        inner = join_signed([(c < 0, term_text(c, m.base, chain)) for c, m in group])
        pieces.append((False, "*".join([f"({inner})"] + exps)))
    return join_signed(pieces)


def constant_text(k):
    pieces = []
    if k.rat:
        pieces.append((k.rat < 0, str(abs(k.rat))))
    for p, q in sorted(k.logpart.items()):
        body = f"log({p})"
        pieces.append((q < 0, body if abs(q) == 1 else f"{abs(q)}*{body}"))
    return join_signed(pieces)


# JSON

def monomial_json(m):
    if getattr(m, "comps", None) is not None:
        out = {"base": m.base.to_json()}
        if m.comps:
            out["exp"] = [series_json(r) for r in m.comps]
            out["level"] = len(m.comps)
        return out
    return m.to_json()


def series_json(s, n=None):
    n = settings.budget if n is None else n
    terms = s.terms(n)
    truncated = is_truncated(s, n)
    return {
        "terms": [{"coeff": str(c), "monomial": monomial_json(m)} for c, m in terms],
        "exact": not truncated,
        "truncated_at": n if truncated else None,
    }


def constant_json(k):
    return {"rat": str(k.rat), "logs": {str(p): str(q) for p, q in sorted(k.logpart.items())}}


def fraction_json(q):
    return str(Fraction(q))
