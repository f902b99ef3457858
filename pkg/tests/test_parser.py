import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_kernel.catalog import CATALOG
from spectral_kernel.errors import (
    NonIntegerExponent,
    NotNormalForm,
    SessionSyntaxError,
    SugarOutsideField,
    UnknownSymbol,
)
from spectral_kernel.odo import DiffOperator, is_normal_form
from spectral_kernel.parser import parse_expression, parse_session, render_expr, render_session


def test_elliptic_catalog(ell_session):
    B = ell_session.goodearl_basis()
    assert (B.n, B.t) == (4, 4)
    assert ell_session.field_decl == "field elliptic(-g2, -g3)"
    assert ell_session.field.params == ("g2", "g3")


def test_desugared_exponential(exp_session):
    s = parse_session("field exponential\nL = D^3 + (24*E^2/(E^2+1)^2)*D\n")
    assert is_normal_form(s.L)
    assert s.L == exp_session.L


def test_not_normal_form_at_validation():
    s = parse_session("field exponential\nL = 2*D^2\nbasis L:\n")
    with pytest.raises(NotNormalForm):
        s.goodearl_basis()


def test_products_are_left_to_right():
    s = parse_session("field exponential\nA = D*E\nB = E*D\n")
    E = s.field.gen()
    assert s.bindings["A"] == DiffOperator(s.field, [E, E])
    assert s.bindings["B"] == DiffOperator(s.field, [0, E])


def test_negative_powers_and_sugar():
    s = parse_session("field exponential\nA = sech(x)^2 - 1/cosh(x)^2 + E^-1*E\n")
    assert s.bindings["A"] == DiffOperator(s.field, [1])


def test_constants_field_and_params():
    s = parse_session("field constants(c)\nL = D^2 + c\nG = D^3 + 3/2*c*D\n")
    assert s.L.coeff(0) == s.field.param("c")
    s2 = parse_session("field exponential(a)\nL = D^2 + a*E\n")
    assert s2.field.params == ("a",)


def test_labels(ell_sub_session):
    assert ell_sub_session.labels() == (2,)
    B = ell_sub_session.goodearl_basis()
    assert B.labels == (0, 2) and B.rank == 2


@pytest.mark.parametrize("text, exc, line", [
    ("field exponential\nL = D^2 +\n", SessionSyntaxError, 2),
    ("field exponential\nL = D^2 $ 1\n", SessionSyntaxError, 2),
    ("L = D\n", SessionSyntaxError, 1),
    ("field exponential\nfield exponential\n", SessionSyntaxError, 2),
    ("field exponential\nL = D^2 + q\n", UnknownSymbol, 2),
    ("field exponential\nL = foo(x)\n", UnknownSymbol, 2),
    ("field elliptic(g2, g3)\nL = D^2 + cosh(x)\n", SugarOutsideField, 2),
    ("field exponential\nL = D^(1/2)\n", NonIntegerExponent, 2),
    ("field exponential\nL = D^D\n", NonIntegerExponent, 2),
    ("field exponential\nL = D^-1\n", NonIntegerExponent, 2),
    ("field exponential\nL = D/D\n", SessionSyntaxError, 2),
    ("field exponential\nL = D\nL = D\n", SessionSyntaxError, 3),
    ("field exponential\nD = 1\n", SessionSyntaxError, 2),
    ("field exponential\nL = D\nbasis L: G\n", UnknownSymbol, 3),
    ("field sideways\n", SessionSyntaxError, 1),
    ("field exponential\nL = cosh(2)\n", SessionSyntaxError, 2),
    ("", SessionSyntaxError, 1),
])
def test_errors(text, exc, line):
    with pytest.raises(exc) as info:
        parse_session(text)
    err = info.value
    if isinstance(err, SessionSyntaxError):
        assert err.line == line and err.col >= 1
    else:
        assert f"line {line}" in str(err)


def test_syntax_error_position():
    with pytest.raises(SessionSyntaxError) as info:
        parse_session("field exponential\nL = D^2 + (D\n")
    assert (info.value.line, info.value.col) == (2, 13)


@pytest.mark.parametrize("name", list(CATALOG))
def test_round_trip(name):
    s = parse_session(CATALOG[name])
    text = render_session(s)
    again = parse_session(text)
    assert render_session(again) == text
    assert again.bindings == s.bindings and again.basis == s.basis


def test_comments_and_blank_lines():
    s = parse_session("# header\n\nfield exponential  # the field\nL = D^2   # op\n")
    assert s.L.order == 2


def test_polynomial_context(exp_session, ell_sub_session):
    p = exp_session.polynomial("mu1^2 - l*mu2 + 8/3*l^2")
    assert p.format() == "mu1^2 - l*mu2 + 8/3*l^2"
    q = ell_sub_session.polynomial("mu2^2 - g2*l")
    assert q.nvars == 1
    with pytest.raises(UnknownSymbol):
        exp_session.polynomial("mu3")
    with pytest.raises(UnknownSymbol):
        exp_session.polynomial("E*l")


names = st.sampled_from(["D", "E", "x1", "G"])
leaves = st.one_of(st.integers(0, 9).map(lambda k: ("num", k, (1, 1))), names.map(lambda n: ("name", n, (1, 1))))
trees = st.recursive(
    leaves,
    lambda sub: st.one_of(
        sub.map(lambda a: ("neg", a)),
        st.tuples(st.sampled_from("+-*/"), sub, sub),
        st.tuples(st.just("^"), sub, leaves),
    ),
    max_leaves=8,
)


def _strip(node):
    if node[0] in ("num", "name"):
        return node[:2]
    if node[0] == "call":
        return node[:2] + (_strip(node[2]),)
    if node[0] == "neg":
        return ("neg", _strip(node[1]))
    return (node[0], _strip(node[1]), _strip(node[2]))


@settings(max_examples=300)
@given(trees)
def test_expression_render_parse(tree):
    assert _strip(parse_expression(render_expr(tree))) == _strip(tree)
