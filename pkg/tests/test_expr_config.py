import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from volterra_colloc.config import BUILTIN_CONFIGS, HEADER, parse_config
from volterra_colloc.errors import ConfigError, EvaluationError
from volterra_colloc.expr import (BinOp, Call, Neg, Num, Var, eval_expression, parse_expression,
                                  strip_positions, to_string, compile_expression)
from volterra_colloc.problem import reduce, manufactured_rhs
from volterra_colloc.quadrature import breakpoints_for_kernel, integrate
from volterra_colloc.stochastic import RoundingContext


def shape(text):
    return strip_positions(parse_expression(text))


def test_parse_shapes():
    assert shape("t*sin(t)") == BinOp("*", Var("t"), Call("sin", Var("t")))
    assert shape("exp(2-t)*t^2") == BinOp(
        "*", Call("exp", BinOp("-", Num(2.0), Var("t"))), BinOp("^", Var("t"), Num(2.0)))
    assert shape("-t^2") == Neg(BinOp("^", Var("t"), Num(2.0)))
    assert shape("2^3^2") == BinOp("^", Num(2.0), BinOp("^", Num(3.0), Num(2.0)))
    assert shape("1-2-3") == BinOp("-", BinOp("-", Num(1.0), Num(2.0)), Num(3.0))
    assert shape("  t\t+ s ") == shape("t+s")
    assert shape("2^-1") == BinOp("^", Num(2.0), Neg(Num(1.0)))


def test_syntax_errors():
    with pytest.raises(ConfigError) as info:
        parse_expression("(t+s")
    assert info.value.offset == 4 and info.value.expected == {")"}
    for text, offset in (("t +* s", 3), ("foo(t)", 0), ("t $ s", 2), ("", 0), ("t s", 2)):
        with pytest.raises(ConfigError) as info:
            parse_expression(text)
        assert info.value.offset == offset, text
    with pytest.raises(ConfigError):
        parse_expression("t+s", variables=("t",))


def test_evaluation_examples():
    ev = lambda text, **kw: eval_expression(parse_expression(text), kw)
    assert ev("t+s", t=0.6, s=0.2) == pytest.approx(0.8, abs=1e-15)
    assert ev("1+sin(2*s)", s=0.0) == 1.0
    assert abs(ev("cos(s)", s=math.pi) + 1.0) <= 1e-15
    assert ev("pi") == math.pi
    assert ev("t^-2", t=2.0) == 0.25
    assert ev("t^0.5", t=4.0) == 2.0


def test_evaluation_faults():
    ev = lambda text, **kw: eval_expression(parse_expression(text), kw)
    with pytest.raises(EvaluationError, match="offset 1"):
        ev("1/(t-t)", t=1.0)
    with pytest.raises(EvaluationError, match="offset 0"):
        ev("log(t)", t=0.0)
    with pytest.raises(EvaluationError):
        ev("sqrt(t)", t=-1.0)
    with pytest.raises(EvaluationError, match="unbound"):
        ev("s")


def test_stochastic_evaluation():
    ctx = RoundingContext(perturb=False)
    f = compile_expression("exp(2-t)*t^2", ("t",))
    assert f(ctx.exact(0.7)).samples[0] == f(0.7)


_LEAVES = ["t", "s", "0.5", "2", "pi", "1e-3"]


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_LEAVES)
    kind = rng.randrange(4)
    if kind == 0:
        return f"-{_random_expr(rng, depth - 1)}"
    if kind == 1:
        return f"{rng.choice(['sin', 'cos', 'exp', 'sqrt', 'log'])}({_random_expr(rng, depth - 1)})"
    if kind == 2:
        return f"({_random_expr(rng, depth - 1)})"
    op = rng.choice("+-*/^")
    return f"{_random_expr(rng, depth - 1)} {op} {_random_expr(rng, depth - 1)}"


def test_round_trip_corpus():
    rng = random.Random(12)
    for _ in range(200):
        ast = parse_expression(_random_expr(rng, 5))
        assert strip_positions(parse_expression(to_string(ast))) == strip_positions(ast)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10))
def test_round_trip_preserves_value(t, s):
    text = "exp(-t)*s^2 - sqrt(t)/(1+s) + cos(t*s)^3"
    a = parse_expression(text)
    b = parse_expression(to_string(a))
    assert eval_expression(a, {"t": t, "s": s}) == eval_expression(b, {"t": t, "s": s})


def test_builtin_configs_round_trip_and_reduce():
    for cfg in BUILTIN_CONFIGS.values():
        assert parse_config(cfg.to_text()) == cfg
        pb = cfg.to_problem()
        red = reduce(pb)
        for t in (0.05, 0.37, 0.81 * pb.horizon):
            total = pb.exact(t) - red.f(t)
            for b, c in zip(red.delay_coeffs, red.delays):
                total += b(t) * pb.exact(c.value(t))
            iv = breakpoints_for_kernel(red, t, 0.0, t)
            total -= integrate(lambda s: red.h(t, s) * pb.exact(s), iv, 30, refine=3)
            assert abs(total) <= 1e-8


def test_config_matches_builtin_functions(ex1, red1):
    pb = BUILTIN_CONFIGS["example1"].to_problem()
    red = reduce(pb)
    for t in (0.2, 0.5, 0.9):
        assert red.f(t) == pytest.approx(red1.f(t), abs=1e-14)


GOOD = f"""{HEADER}
# single branch, direct mode
[problem]
name = unit
T = 2
g_dt = 1
[branch]
K = 1
K_dt = 0
[defaults]
r = 4
t_eval = 0.1
"""


def test_parse_minimal_config():
    cfg = parse_config(GOOD)
    assert cfg.name == "unit" and cfg.T == 2.0 and cfg.exact is None
    assert cfg.defaults == {"r": 4, "t_eval": 0.1}
    pb = cfg.to_problem()
    assert reduce(pb).f(1.0) == 1.0


@pytest.mark.parametrize("text,msg", [
    ("", "header"),
    ("volterra-config v2\n", "header"),
    (GOOD.replace("[branch]", "[brunch]"), "unknown section"),
    (GOOD.replace("K_dt = 0", "K_dt = 0\nK_dt = 1"), "duplicate"),
    (GOOD.replace("T = 2", "T = -1"), "positive"),
    (GOOD.replace("g_dt = 1\n", ""), "exact or g_dt"),
    (GOOD.replace("K = 1", "K = 1 + q"), "unknown identifier"),
    (GOOD.replace("K = 1", "K = (t"), "offset"),
    (GOOD.replace("[branch]", "[branch]\ncolour = red"), "unknown key"),
    (GOOD + "[curve]\nalpha = t/2\nalpha_dt = 1/2\n", "branches need"),
    (GOOD.replace("r = 4", "r = four"), "bad value"),
    (GOOD.replace("g_dt = 1", "g_dt = s"), "unknown identifier"),
    (GOOD.replace("[problem]", "[problem]\nname = a\n[problem]"), "twice"),
])
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)
