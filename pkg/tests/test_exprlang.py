import math
import random
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqlab import ArityError, Interval, ParseError, VariableScopeError, catalog_lookup, parse_function, parse_sequence
from seqlab.exprlang import FUNCTIONS, BinOp, Call, Neg, Num, PartialSum, Var, parse_expr, pretty

ERROR_FORMAT = re.compile(r"^line 1, col (\d+): expected \{[^}]+\}")


def value(text, n=1):
    return parse_sequence(text)(n)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1+2*3^2", 19.0),
        ("-2^2", -4.0),
        ("2^3^2", 512.0),
        ("(2^3)^2", 64.0),
        ("8/4/2", 1.0),
        ("10-4-3", 3.0),
        ("2^-1", 0.5),
        ("--3", 3.0),
        ("-3*2", -6.0),
        ("1.5e1 + .5", 15.5),
        ("floor(7/2) + abs(-1)", 4.0),
    ],
)
def test_precedence_ground_truth(text, expected):
    assert value(text) == expected


def test_sequence_examples():
    alt = parse_sequence("(-1)^n")
    assert alt.prefix(3).tolist() == [-1.0, 1.0, -1.0]
    assert alt.provenance == "parsed"
    h = parse_sequence("partial_sum(1/k)")
    assert h(3) == pytest.approx(1.8333333333333333)
    assert h.prefix(10**4).tobytes() == catalog_lookup("harmonic_partial").prefix(10**4).tobytes()
    w = parse_sequence("partial_sum(1/k) * 2 + n")
    assert w(2) == 5.0


def test_function_examples():
    sq = parse_function("x^2")
    assert sq(1.5) == 2.25
    s = parse_function("sin(1/x)", Interval.open(0.0, 1.0))
    assert s(2.0 / math.pi) == pytest.approx(1.0, abs=1e-15)
    assert s.domain == Interval.open(0.0, 1.0)
    assert parse_function("lnln(x)")(math.e**math.e) == pytest.approx(1.0)


def test_scope_errors():
    with pytest.raises(VariableScopeError) as info:
        parse_sequence("x + 1")
    assert str(info.value).startswith("line 1, col 1: expected {'n'}")
    with pytest.raises(VariableScopeError):
        parse_function("n * 2")
    with pytest.raises(VariableScopeError):
        parse_sequence("partial_sum(n)")
    with pytest.raises(VariableScopeError):
        parse_sequence("k + 1")


def test_partial_sum_rules():
    with pytest.raises(ParseError) as info:
        parse_function("partial_sum(1/k)")
    assert "only allowed in sequence" in str(info.value)
    with pytest.raises(ParseError):
        parse_sequence("partial_sum(partial_sum(k))")
    # a call inside the body keeps the body scope
    assert parse_sequence("partial_sum(sqrt(k) / k)")(1) == 1.0
    with pytest.raises(VariableScopeError):
        parse_sequence("partial_sum(sqrt(k) + n)")


@pytest.mark.parametrize(
    "text, col, token",
    [
        ("1 +", 4, "number"),
        ("2 3", 3, "end of input"),
        ("(1", 3, "')'"),
        ("sqrt 2", 1, "'n'"),
        ("foo(1)", 1, "function name"),
        ("1 $ 2", 3, "operator"),
        ("", 1, "number"),
        ("   ", 1, "number"),
        ("sin()", 1, "1 argument"),
    ],
)
def test_error_positions(text, col, token):
    with pytest.raises(ParseError) as info:
        parse_sequence(text)
    msg = str(info.value)
    m = ERROR_FORMAT.match(msg)
    assert m, msg
    assert int(m.group(1)) == col
    assert token in msg


def test_arity_error():
    with pytest.raises(ArityError):
        parse_sequence("sqrt(1, 2)")


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_sequence("(" * 500 + "1" + ")" * 500)
    with pytest.raises(ParseError):
        parse_sequence("-" * 500 + "1")
    with pytest.raises(ParseError):
        parse_sequence("2^" * 500 + "1")
    assert value("(" * 40 + "1" + ")" * 40) == 1.0


def test_evaluation_overflow_is_reported():
    from seqlab import EvaluationOverflow

    s = parse_sequence("1/(n-1)")
    with pytest.raises(EvaluationOverflow):
        s(1)
    f = parse_function("ln(x)", Interval.closed(-1.0, 1.0))
    from seqlab import DomainViolation

    with pytest.raises(DomainViolation):
        f(np.array([-0.5]))


# -- round trip --------------------------------------------------------------------------


def random_ast(rng, depth, var="n", allow_sum=True):
    leaf = depth <= 0 or rng.random() < 0.25
    if leaf:
        if rng.random() < 0.5:
            return Var(var)
        return Num(rng.choice([0.0, 1.0, 2.0, 0.5, 3.25, 1e-3, 1e20, 12345.678, float(rng.randint(0, 99))]))
    kind = rng.random()
    if kind < 0.15:
        return Neg(random_ast(rng, depth - 1, var, allow_sum))
    if kind < 0.3:
        return Call(rng.choice(sorted(FUNCTIONS)), random_ast(rng, depth - 1, var, allow_sum))
    if kind < 0.36 and allow_sum and var == "n":
        return PartialSum(random_ast(rng, depth - 1, "k", False))
    op = rng.choice("+-*/^")
    return BinOp(op, random_ast(rng, depth - 1, var, allow_sum), random_ast(rng, depth - 1, var, allow_sum))


def test_round_trip_on_seeded_random_asts():
    rng = random.Random(20240531)
    for _ in range(100):
        mode = rng.choice(["sequence", "function"])
        tree = random_ast(rng, rng.randint(1, 7), "n" if mode == "sequence" else "x")
        text = pretty(tree)
        again = parse_expr(text, mode)
        assert again == tree, text
        assert pretty(again) == text


@st.composite
def ast_strategy(draw, var="n"):
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(0, 6))
    return random_ast(random.Random(seed), depth, var)


@given(ast_strategy())
def test_pretty_parse_pretty_is_fixed_point(tree):
    text = pretty(tree)
    assert pretty(parse_expr(text)) == text


# -- totality ------------------------------------------------------------------------------

ALPHABET = "nxk0123456789.eE+-*/^(), " + "sqrtlnicoabfpa_um" + "$#@!\t\n[]{}xyz"


def check_total(text, mode):
    try:
        parse_expr(text, mode)
    except ParseError as exc:
        m = ERROR_FORMAT.match(str(exc))
        assert m, str(exc)
        assert 1 <= exc.col <= len(text) + 1


def test_fuzz_totality_seeded():
    rng = random.Random(7)
    tokens = ["n", "x", "k", "1", "2.5", "+", "-", "*", "/", "^", "(", ")", ",", "sqrt(", "ln(", "partial_sum(", " "]
    for i in range(10**4):
        if i % 2:
            text = "".join(rng.choice(tokens) for _ in range(rng.randint(0, 200)))
        else:
            text = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 1024)))
        text = text[:1024]
        check_total(text, "sequence" if i % 3 else "function")


@given(st.text(max_size=1024))
def test_fuzz_totality_hypothesis(text):
    check_total(text, "sequence")
    check_total(text, "function")
