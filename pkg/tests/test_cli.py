import io
import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from transserial.cli import (BinOp, CliConfig, Exp, Log, Pow, Rat, Var, elaborate, load_config, main,
                             output_schema, parse)
from transserial.errors import ConstantInExpArg, NotPositiveLogArg, ParseError, TowerDepthExceeded
from transserial.monomial import Monomial
from transserial.render import series_text
from transserial.series import eq_exact
from transserial.settings import using


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def strip(e):
    """Expression tree without source positions."""
    if isinstance(e, BinOp):
        return (e.op, strip(e.left), strip(e.right))
    if isinstance(e, Pow):
        return ("^", strip(e.base), e.exponent)
    if isinstance(e, (Log, Exp)):
        return (type(e).__name__, strip(e.arg))
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, Var):
        return "x"
    return e


def test_parse_examples():
    assert strip(parse("1/log(x)")) == ("/", 1, ("Log", "x"))
    assert strip(parse("x^(3/2)*exp(x^2)")) == ("*", ("^", "x", Fraction(3, 2)), ("Exp", ("^", "x", 2)))
    with pytest.raises(ParseError) as info:
        parse("log(")
    assert info.value.pos == 4
    assert isinstance(info.value, SyntaxError)


def test_precedence():
    assert strip(parse("1+x*x^2")) == ("+", 1, ("*", "x", ("^", "x", 2)))
    assert strip(parse("x^-1")) == ("^", "x", -1)
    assert strip(parse("2-x-1")) == ("-", ("-", 2, "x"), 1)
    assert type(parse("-x^2")).__name__ == "Neg"


@pytest.mark.parametrize("src, pos", [("x +", 3), ("x $ 1", 2), ("foo(x)", 0), ("x^y", 2), ("(x", 2)])
def test_parse_error_positions(src, pos):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.pos == pos


def test_elaborate_examples():
    ctx = CliConfig().build()
    a = elaborate(parse("exp(x*log(x))"), ctx)
    assert a.lm.level == 1 and a.lm.base.is_one
    b = elaborate(parse("exp(2*log(x))"), ctx)
    assert b.lm == ctx.tower.lift(Monomial.fundamental(0) ** 2)
    with pytest.raises(ConstantInExpArg):
        elaborate(parse("exp(1+x)"), ctx)
    with pytest.raises(NotPositiveLogArg):
        elaborate(parse("log(0-x)"), ctx)
    shallow = CliConfig(depth=1).build()
    with pytest.raises(TowerDepthExceeded):
        elaborate(parse("exp(exp(x^2))"), shallow)


def test_elaborate_is_budget_independent():
    ctx = CliConfig().build()
    with using(budget=4):
        small = elaborate(parse("x^3*exp(x^2) + log(x)^2 - 1/x"), ctx)
    with using(budget=40):
        large = elaborate(parse("x^3*exp(x^2) + log(x)^2 - 1/x"), ctx)
    assert eq_exact(small, large)


@pytest.mark.parametrize("src", ["x^(3/2)*exp(x^2)", "x*log(x)^-1 + 2*x*log(x)^-3", "exp(x*log(x))",
                                 "3*x^2 - 1/2*log(log(x))", "exp(exp(x)*x)"])
def test_parse_render_round_trip(src):
    ctx = CliConfig().build()
    a = elaborate(parse(src), ctx)
    again = elaborate(parse(series_text(a)), ctx)
    assert eq_exact(a, again)


def test_cli_examples_byte_exact():
    assert call("integrate", "--terms", "4", "1/log(x)") == (
        0, "x*log(x)^-1 + x*log(x)^-2 + 2*x*log(x)^-3 + 6*x*log(x)^-4  [truncated]\n", "")
    assert call("ai", "@theta_hat") == (2, "no asymptotic integral: input ≍ θ̂\n", "")
    assert call("derive", "exp(x*log(x))") == (0, "(log(x) + 1)*exp(x*log(x))\n", "")


def test_other_commands():
    assert call("logderiv", "exp(x)*x^3")[1] == "1 + 3*x^-1\n"
    assert call("ai", "x*exp(x^2)")[1] == "1/2*exp(x^2)\n"
    code, out, _ = call("log", "3*x^2+3*x", "--budget", "3")
    assert (code, out) == (0, "2*log(x) + log(3) + x^-1 - 1/2*x^-2  [truncated]\n")
    assert call("compare", "x^2", "exp(log(x)^2)")[1] == "< ≺\n"
    assert call("compare", "2*x", "2*x + log(x)")[1] == "< ≍\n"
    assert call("compare", "exp(2*log(x))", "x^2")[1] == "= ≍\n"
    assert "not closed under integration" in call("closure")[1]
    assert call("integrate", "2*x*exp(x^2)")[1] == "exp(x^2)\n"


def test_exit_codes():
    code, out, err = call("derive", "log(")
    assert code == 1 and out == "" and "position 4" in err
    assert call("derive", "exp(1+x)")[0] == 1
    assert call("derive", "1/(x-x)")[0] == 1
    assert call("validate", "hl")[0] == 0
    assert call("validate", "hl", "--prelog", "basic")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"], io.StringIO(), io.StringIO())
    assert info.value.code == 1


@pytest.mark.parametrize("argv", [
    ["derive", "x^(3/2)*exp(x^2)"], ["integrate", "--terms", "4", "1/log(x)"], ["ai", "x^2"],
    ["log", "3*x^2+3*x", "--budget", "5"], ["validate", "h3prime"], ["compare", "x", "log(x)"], ["closure"],
    ["ai", "@theta_hat"], ["logderiv", "@theta(2)"], ["derive", "@theta_hat", "--budget", "4"],
])
def test_json_output_matches_schema(argv):
    code, out, _ = call(*argv, "--format", "json")
    payload = json.loads(out)
    jsonschema.validate(payload, output_schema())
    assert payload["command"] == argv[0]


def test_config_file(tmp_path):
    path = tmp_path / "transserial.toml"
    path.write_text('derivation = "sigma-geometric"\nbudget = 6\nformat = "json"\n')
    cfg = load_config(path)
    assert (cfg.derivation, cfg.budget, cfg.format) == ("sigma-geometric", 6, "json")
    code, out, _ = call("validate", "hypotheses", "--config", str(path))
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = call("validate", "hypotheses", "--config", str(path), "--format", "text")
    assert out.startswith("hypotheses: pass")
    bad = tmp_path / "bad.toml"
    bad.write_text('colour = "red"\n')
    assert call("closure", "--config", str(bad))[0] == 1


def test_interleaved_chain_flag():
    code, out, _ = call("validate", "m", "--chain", "interleaved(3)")
    assert code == 0 and out.startswith("M: pass")
    assert call("derive", "x", "--chain", "interleaved(2)", "--derivation", "logexp-ddx")[0] == 0


def test_console_script():
    result = subprocess.run([sys.executable, "-m", "transserial.cli", "derive", "x^3"], capture_output=True, text=True)
    assert result.stdout == "3*x^2\n" and result.returncode == 0
