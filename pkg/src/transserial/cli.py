"""Command-line front end over exp-log germ expressions.

Expressions use ``x``, rational literals, ``+ - * /``, ``^`` with a rational
exponent, ``log(...)``, ``exp(...)`` and the aliases ``@theta_hat`` and
``@theta(i)``.
"""

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from importlib import resources

import tomli

from . import derivation as derivation_mod
from .asympint import check_hypotheses
from .chain import preset as chain_preset
from .elclosure import (Tower, closure_report, sharp_derive, sharp_exp, sharp_log,
                        sharp_log_deriv, tower_ai, tower_integrate)
from .errors import NotPositive, NotPositiveLogArg, Obstruction, ParseError, TransserialError
from .monomial import Monomial
from .prelog import basic, check_HL1, check_HL2_HL3, check_HL4, integrated, sigma_induced
from .render import (constant_json, constant_text, fraction_json, is_truncated, join_signed, series_json,
                     series_text, term_text)
from .series import Series, dominance, power
from .settings import using

TRUNCATED = "  [truncated]"

# syntax

@dataclass(frozen=True)
class Var:
    pos: int = 0


@dataclass(frozen=True)
class Rat:
    value: Fraction
    pos: int = 0


@dataclass(frozen=True)
class Alias:
    name: str
    index: int = None
    pos: int = 0


@dataclass(frozen=True)
class Log:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Exp:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction
    pos: int = 0


def Add(a, b):
    return BinOp("+", a, b)


def Sub(a, b):
    return BinOp("-", a, b)


def Mul(a, b):
    return BinOp("*", a, b)


def Div(a, b):
    return BinOp("/", a, b)


def tokenize(src):
    """(kind, text, pos) triples; kinds are num, name, alias, op and end."""
    out = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(("num", src[i:j], i))
            i = j
        elif ch.isalpha() or ch == "@":
            j = i + 1
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(("alias" if ch == "@" else "name", src[i:j], i))
            i = j
        elif ch in "+-*/^()":
            out.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.tokens = tokenize(src)
        self.k = 0

    @property
    def tok(self):
        return self.tokens[self.k]

    def advance(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect(self, text):
        kind, got, pos = self.tok
        if got != text or kind == "end":
            raise ParseError(f"expected {text!r}", pos)
        return self.advance()

    def parse(self):
        e = self.expr()
        kind, text, pos = self.tok
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return e

    def expr(self):
        left = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            _, op, pos = self.advance()
            left = BinOp(op, left, self.term(), pos)
        return left

    def term(self):
        left = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            _, op, pos = self.advance()
            left = BinOp(op, left, self.unary(), pos)
        return left

    def unary(self):
        if self.tok[:2] == ("op", "-"):
            pos = self.advance()[2]
            return Neg(self.unary(), pos)
        return self.factor()

    def factor(self):
        base = self.base()
        if self.tok[:2] == ("op", "^"):
            pos = self.advance()[2]
            return Pow(base, self.exponent(), pos)
        return base

    def exponent(self):
        if self.tok[:2] == ("op", "("):
            self.advance()
            q = self.signed_rational(allow_fraction=True)
            self.expect(")")
            return q
        return self.signed_rational(allow_fraction=False)

    def signed_rational(self, allow_fraction):
        sign = 1
        if self.tok[:2] == ("op", "-"):
            self.advance()
            sign = -1
        kind, text, pos = self.tok
        if kind != "num":
            raise ParseError("expected a rational exponent", pos)
        self.advance()
        q = Fraction(int(text))
        if allow_fraction and self.tok[:2] == ("op", "/"):
            self.advance()
            kind, text, pos = self.tok
            if kind != "num" or int(text) == 0:
                raise ParseError("expected a nonzero denominator", pos)
            self.advance()
            q /= int(text)
        return sign * q

    def base(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.advance()
            return Rat(Fraction(int(text)), pos)
        if kind == "name":
            self.advance()
            if text == "x":
                return Var(pos)
            if text in ("log", "exp"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Log(arg, pos) if text == "log" else Exp(arg, pos)
            raise ParseError(f"unknown name {text!r}", pos)
        if kind == "alias":
            self.advance()
            if text == "@theta_hat":
                return Alias("theta_hat", None, pos)
            if text == "@theta":
                self.expect("(")
                sign = -1 if self.tok[:2] == ("op", "-") else 1
                if sign < 0:
                    self.advance()
                k, num, npos = self.tok
                if k != "num":
                    raise ParseError("expected an index", npos)
                self.advance()
                self.expect(")")
                return Alias("theta", sign * int(num), pos)
            raise ParseError(f"unknown alias {text!r}", pos)
        if (kind, text) == ("op", "("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError("expected an operand" if kind != "end" else "unexpected end of input", pos)


def parse(src):
    return _Parser(src).parse()


# configuration

@dataclass(frozen=True)
class CliConfig:
    chain: str = "logexp"
    derivation: object = "logexp-ddx"
    prelog: str = "sigma"
    budget: int = 32
    depth: int = 3
    format: str = "text"

    def build(self):
        return Context(self)


class Context:
    """The derivation, pre-logarithm and tower a command runs against."""

    def __init__(self, cfg):
        self.cfg = cfg
        chain = chain_preset(cfg.chain)
        if isinstance(cfg.derivation, dict):
            self.spec = derivation_mod.from_config(cfg.derivation)
        else:
            name = cfg.derivation
            if name == "logexp-ddx" and chain.step > 1:
                name = chain.name
            self.spec = derivation_mod.preset(name)
        if self.spec.chain.step != chain.step and cfg.chain != "logexp":
            raise ValueError(f"derivation {self.spec.name!r} does not live on chain {cfg.chain!r}")
        self.chain = self.spec.chain
        if cfg.prelog == "sigma":
            self.prelog = sigma_induced(self.chain)
        elif cfg.prelog == "integrated":
            self.prelog = integrated(self.spec)
        elif cfg.prelog == "basic":
            self.prelog = basic(self.chain)
        else:
            raise ValueError(f"unknown prelog {cfg.prelog!r}")
        self.tower = Tower(self.prelog, cfg.depth)


def load_config(path):
    with open(path, "rb") as fh:
        data = tomli.load(fh)
    known = {f.name for f in fields(CliConfig)}
    unknown = set(data) - known - {"step"}
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "step" in data and data.get("chain", "logexp") == "interleaved":
        data["chain"] = f"interleaved({int(data['step'])})"
    data.pop("step", None)
    return CliConfig(**data)


# elaboration

def elaborate(e, ctx):
    tower = ctx.tower
    if isinstance(e, Var):
        return tower.monomial(Monomial.fundamental(0))
    if isinstance(e, Rat):
        return Series.const(e.value, tower.one)
    if isinstance(e, Alias):
        m = ctx.spec.theta_hat if e.name == "theta_hat" else ctx.spec.theta(e.index)
        if m is None:
            raise ValueError("this derivation has no θ̂")
        return tower.monomial(m)
    if isinstance(e, Neg):
        return -elaborate(e.arg, ctx)
    if isinstance(e, BinOp):
        a, b = elaborate(e.left, ctx), elaborate(e.right, ctx)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a * b.invert()
    if isinstance(e, Pow):
        return power(elaborate(e.base, ctx), e.exponent)
    if isinstance(e, Log):
        a = elaborate(e.arg, ctx)
        try:
            v = sharp_log(tower, a)
        except NotPositive as exc:
            raise NotPositiveLogArg("log argument must be positive") from exc
        if not v.constant.is_zero():
            raise ValueError("log of a non-unit constant factor is unsupported inside expressions")
        return v.series
    if isinstance(e, Exp):
        return sharp_exp(tower, elaborate(e.arg, ctx))
    raise TypeError(f"unknown expression node {e!r}")


# commands

def _series_out(s, ctx):
    text = series_text(s, ctx.chain)
    return text + (TRUNCATED if is_truncated(s) else "")


def _log_text(v, ctx):
    terms = v.series.terms()
    one = ctx.tower.one
    pieces = [(c < 0, term_text(c, m, ctx.chain)) for c, m in terms if m.cmp(one) > 0]
    if not v.constant.is_zero():
        pieces.append((False, constant_text(v.constant)))
    lower = [(c < 0, term_text(c, m, ctx.chain)) for c, m in terms if m.cmp(one) <= 0]
    text = join_signed(pieces + lower)
    return text + (TRUNCATED if is_truncated(v.series) else "")


def _reports(target, ctx):
    spec, p = ctx.spec, ctx.prelog
    if target == "h3prime":
        return [derivation_mod.validate_H3prime(spec)]
    if target == "m":
        return [derivation_mod.validate_M(spec)]
    if target == "hardy":
        return [derivation_mod.validate_hardy(spec)]
    if target == "hl":
        return [check_HL1(p), check_HL2_HL3(p), check_HL4(p, spec)]
    if target == "hypotheses":
        return [check_hypotheses(spec)]
    raise ValueError(f"unknown validation target {target!r}")


def run(command, exprs, ctx, terms=None, target=None):
    """Execute one command; returns (exit code, text, json payload)."""
    payload = {"command": command, "input": list(exprs)}
    if command == "closure":
        r = closure_report(ctx.spec, ctx.tower)
        payload["report"] = r.to_json()
        return 0, r.text(), payload
    if command == "validate":
        reports = _reports(target, ctx)
        ok = all(r.ok for r in reports)
        payload.update(target=target, ok=ok, reports=[r.to_json() for r in reports])
        return (0 if ok else 2), "\n".join(r.summary() for r in reports), payload
    values = [elaborate(parse(src), ctx) for src in exprs]
    a = values[0]
    spec, tower = ctx.spec, ctx.tower
    if command == "derive":
        out = sharp_derive(spec, tower, a)
    elif command == "logderiv":
        if a.is_zero():
            raise ValueError("log derivative of zero")
        if a.exact and len(a._cache) == 1:
            out = sharp_log_deriv(spec, tower, a.lm)
        else:
            out = sharp_derive(spec, tower, a) * a.invert()
    elif command == "ai":
        r = tower_ai(spec, tower, a)
        out = r.series(tower.one)
        payload["coefficient"] = fraction_json(r.coefficient)
    elif command == "integrate":
        r = tower_integrate(spec, tower, a, terms)
        out = r.antiderivative
        text = series_text(out, ctx.chain, max(len(out._cache), 1))
        payload["result"] = series_json(out, max(len(out._cache), 1))
        payload["result"]["exact"] = r.exact
        payload["result"]["truncated_at"] = None if r.exact else r.steps
        payload["steps"] = r.steps
        return 0, text + ("" if r.exact else TRUNCATED), payload
    elif command == "log":
        v = sharp_log(tower, a)
        payload["result"] = series_json(v.series)
        payload["constant"] = constant_json(v.constant)
        return 0, _log_text(v, ctx), payload
    elif command == "compare":
        d = values[0] - values[1]
        order = {1: ">", 0: "=", -1: "<"}[d.sign()]
        dom = dominance(values[0], values[1]) if not (values[0].is_zero() or values[1].is_zero()) else None
        payload.update(order=order, dominance=dom)
        text = order if dom is None else f"{order} {dom}"
        return 0, text, payload
    else:
        raise ValueError(f"unknown command {command!r}")
    payload["result"] = series_json(out)
    return 0, _series_out(out, ctx), payload


def output_schema():
    return json.loads(resources.files("transserial").joinpath("schemas/output.schema.json").read_text())


# argparse

class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="number of terms to force (default 32)")
    common.add_argument("--depth", type=int, help="exponential tower depth (default 3)")
    common.add_argument("--format", choices=["text", "json"], help="output format")
    common.add_argument("--chain", help="logexp or interleaved(n)")
    common.add_argument("--derivation", help="logexp-ddx, sigma-geometric or interleaved(n)")
    common.add_argument("--prelog", choices=["sigma", "integrated", "basic"], help="pre-logarithm")
    common.add_argument("--config", help="TOML file with default settings")

    parser = _ArgParser(prog="transserial", description="Derivations and asymptotic integration on exp-log series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)
    for name, helptext in [("derive", "differentiate"), ("logderiv", "logarithmic derivative"),
                           ("ai", "asymptotic integral of the leading term"), ("log", "logarithm")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("expr")
    p = sub.add_parser("integrate", parents=[common], help="iterated asymptotic integration")
    p.add_argument("--terms", type=int, default=None, help="maximum number of terms")
    p.add_argument("expr")
    p = sub.add_parser("validate", parents=[common], help="run an axiom checker")
    p.add_argument("target", choices=["h3prime", "m", "hardy", "hl", "hypotheses"])
    p = sub.add_parser("compare", parents=[common], help="order and dominance of two expressions")
    p.add_argument("a")
    p.add_argument("b")
    sub.add_parser("closure", parents=[common], help="is the exponential closure closed under integration")
    return parser


def _config_from_args(args):
    cfg = load_config(args.config) if args.config else CliConfig()
    changes = {k: getattr(args, k) for k in ("budget", "depth", "format", "chain", "derivation", "prelog")
               if getattr(args, k) is not None}
    return replace(cfg, **changes)


def _emit(cfg, text, payload, out):
    if cfg.format == "json":
        out.write(json.dumps(payload, ensure_ascii=False) + "\n")
    else:
        out.write(text + "\n")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    exprs = {"compare": [getattr(args, "a", None), getattr(args, "b", None)]}.get(
        args.command, [args.expr] if hasattr(args, "expr") else [])
    cfg = CliConfig()
    try:
        cfg = _config_from_args(args)
        ctx = cfg.build()
        with using(budget=cfg.budget):
            code, text, payload = run(args.command, exprs, ctx, getattr(args, "terms", None),
                                      getattr(args, "target", None))
    except Obstruction as exc:
        payload = {"command": args.command, "input": exprs,
                   "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(cfg, str(exc), payload, out)
        return 2
    except ParseError as exc:
        err.write(f"transserial: parse error: {exc}\n")
        return 1
    except (TransserialError, ValueError, ZeroDivisionError, OSError, tomli.TOMLDecodeError) as exc:
        err.write(f"transserial: error: {exc}\n")
        return 1
    _emit(cfg, text, payload, out)
    return code


def entry():
    sys.exit(main())


__all__ = ["CliConfig", "Context", "elaborate", "main", "parse", "run", "tokenize"]


if __name__ == "__main__":
    entry()
