import pytest
from hypothesis import given, settings, strategies as st

from fixedloci.census import NonCompactError
from fixedloci.qseries import BivariateSeries, mul
from fixedloci.specdsl import (
    BinOp,
    Call,
    DslSyntaxError,
    EvalError,
    Num,
    Pow,
    Var,
    evaluate,
    evaluate_text,
    parse,
    to_text,
)


def test_parse_examples():
    ast = parse("posq(1)*resprod(4,[1,3])")
    assert ast == BinOp("*", Call("posq", (1,)), Call("resprod", (4, (1, 3))))
    assert parse("h0(2,1,1,[1,0])") == Call("h0", (2, 1, 1, (1, 0)))
    assert parse(" ( q + 1 ) ^ 2 ") == Pow(BinOp("+", Var("q"), Num(1)), 2)


def test_precedence_and_associativity():
    assert parse("1-q-q") == BinOp("-", BinOp("-", Num(1), Var("q")), Var("q"))
    assert parse("1+q*q^2") == BinOp("+", Num(1), BinOp("*", Var("q"), Pow(Var("q"), 2)))
    assert parse("efun(1,2,-1)") == Call("efun", (1, 2, -1))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("resprod(4 [1])", 1, 11),
        ("1 +", 1, 4),
        ("q^q", 1, 3),
        ("posq(1", 1, 7),
        ("(1\n+ )", 2, 3),
        ("1 ? 2", 1, 3),
    ],
)
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(DslSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert info.value.expected


def test_unknown_builtin_and_arity():
    with pytest.raises(DslSyntaxError, match="unknown builtin"):
        parse("foo(1)")
    with pytest.raises(DslSyntaxError, match="takes 1"):
        parse("posq(1,2)")
    with pytest.raises(DslSyntaxError, match="argument kinds"):
        parse("resprod([4],1)")


def test_evaluate_examples():
    assert list(evaluate_text("posq(1)", 3)) == [1, 1, 1, 2]
    assert list(evaluate_text("posq(1)*resprod(4,[1,3])", 3)) == [1, 2, 3, 6]
    assert list(evaluate_text("h0(2,1,1,[1,0])", 3)) == [1, 2, 2, 4]


def test_builtins_cover_operations():
    assert list(evaluate_text("qbin(4,2)", 5)) == [1, 1, 2, 1, 1, 0]
    assert list(evaluate_text("virasoro(2,5,1,2)", 4)) == [1, 1, 1, 1, 2]
    assert list(evaluate_text("jfun(2,2,0)", 4)) == [1, 1, 1, 1, 2]
    assert list(evaluate_text("efun(1,2,-1)", 2)) == [2, 3, 4]
    assert list(evaluate_text("rho(2,1)", 3)) == [1, 2, 2, 4]
    assert evaluate_text("etaq(1)*posq(1)", 10) == evaluate_text("etaq(2)", 10)


def test_division_requires_unit():
    assert list(evaluate_text("1/(1-q)", 3)) == [1, 1, 1, 1]
    with pytest.raises(EvalError):
        evaluate_text("1/q", 3)
    with pytest.raises(EvalError):
        evaluate_text("1/(2+q)", 3)


def test_bivariate_mode():
    with pytest.raises(EvalError, match="t-order"):
        evaluate_text("1+t", 3)
    b = evaluate_text("poincare(2,1,1,[0,0])", 5, 2)
    assert isinstance(b, BivariateSeries)
    assert b[2] == (2, 2, 1)
    assert evaluate_text("(1+q*t)^2", 3, 2)[1] == (0, 2)


def test_refusal_propagates():
    with pytest.raises(NonCompactError, match="non-compact"):
        evaluate_text("h0(2,1,1,[2,0])", 3)


# random small expressions

def _leaves():
    return st.one_of(
        st.integers(0, 3).map(Num),
        st.just(Var("q")),
        st.sampled_from([Call("posq", (1,)), Call("etaq", (2,)), Call("resprod", (3, (1, 2))), Call("qbin", (3, 1))]),
    )


exprs = st.recursive(
    _leaves(),
    lambda kids: st.one_of(
        st.tuples(st.sampled_from("+-*"), kids, kids).map(lambda t: BinOp(*t)),
        st.tuples(kids, st.integers(0, 3)).map(lambda t: Pow(*t)),
    ),
    max_leaves=8,
)


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_print_parse_round_trip(ast):
    text = to_text(ast)
    assert parse(text) == ast
    assert parse(to_text(parse(text))) == parse(text)


@settings(max_examples=60, deadline=None)
@given(exprs, exprs)
def test_evaluation_is_compositional(a, b):
    N = 6
    assert evaluate(BinOp("*", a, b), N) == mul(evaluate(a, N), evaluate(b, N))
    assert evaluate(BinOp("+", a, b), N) == evaluate(a, N) + evaluate(b, N)
