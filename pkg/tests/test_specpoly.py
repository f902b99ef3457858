import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_kernel.bccore import phi_L
from spectral_kernel.errors import MathDomainError
from spectral_kernel.specpoly import (
    SpectralPolynomial,
    WeightedOrder,
    is_groebner,
    mono_compare,
    mono_divides,
    mono_weight,
    monomial_of_weight,
    normal_form,
    poly_derive,
    poly_divide,
    s_polynomial,
)

from conftest import C2, ELL, EXP, exp_elements, rationals

EXPW = WeightedOrder(3, (4, 5))
ELLW = WeightedOrder(4, (5, 6, 7))
Q = EXP.constants


def mono(*e):
    return tuple(e)


def monomials(nvars, max_deg):
    for e in itertools.product(range(max_deg + 1), repeat=nvars + 1):
        if sum(e) <= max_deg:
            yield e


@st.composite
def polys(draw, field=Q, nvars=2, max_deg=3, max_terms=5, coeffs=rationals):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars + 1))
        terms[m] = draw(coeffs)
    return SpectralPolynomial(field, nvars, terms)


def test_weights():
    assert mono_weight(mono(1, 1, 0), EXPW) == 7
    assert mono_weight(mono(0, 0, 0), EXPW) == 0
    assert mono_weight(mono(0, 0, 2, 0), ELLW) == 12


def test_compare_examples():
    assert mono_compare(mono(5, 0, 0), mono(0, 1, 0), EXPW) == -1
    assert mono_compare(mono(0, 3, 0), mono(0, 0, 2), EXPW) == 1
    assert mono_compare(mono(0, 5, 0), mono(0, 0, 4), EXPW) == -1
    assert mono_compare(mono(2, 1, 0), mono(2, 1, 0), EXPW) == 0


def test_order_validation():
    with pytest.raises(MathDomainError):
        WeightedOrder(3, (4, 7))
    with pytest.raises(MathDomainError):
        WeightedOrder(3, (3,))


@pytest.mark.parametrize("order", [EXPW, ELLW, WeightedOrder(5, (2,))], ids=["exp", "ell", "one-var"])
def test_is_monomial_order(order):
    ms = list(monomials(order.nvars, 4))
    unit = (0,) * (order.nvars + 1)
    keys = {order.key(m) for m in ms}
    assert len(keys) == len(ms)  # total on this set
    for a in ms:
        assert a == unit or order.compare(unit, a) == -1
    for a, b in itertools.combinations(ms, 2):
        c = order.compare(a, b)
        for m in ms[:15]:
            am = tuple(x + y for x, y in zip(a, m))
            bm = tuple(x + y for x, y in zip(b, m))
            assert order.compare(am, bm) == c
    for a in ms:
        if any(a[1:]):
            assert all(order.compare((k,) + (0,) * order.nvars, a) == -1 for k in range(10))


@settings(max_examples=100)
@given(st.tuples(*[st.integers(0, 5)] * 3), st.tuples(*[st.integers(0, 5)] * 3))
def test_weight_multiplicative(a, b):
    ab = tuple(x + y for x, y in zip(a, b))
    assert mono_weight(ab, EXPW) == mono_weight(a, EXPW) + mono_weight(b, EXPW)


def test_monomial_of_weight_examples():
    assert monomial_of_weight(9, EXPW) == mono(3, 0, 0)
    assert monomial_of_weight(7, EXPW) == mono(1, 1, 0)
    assert monomial_of_weight(1, EXPW) is None
    with pytest.raises(MathDomainError):
        monomial_of_weight(-1, EXPW)


@pytest.mark.parametrize("order", [EXPW, ELLW], ids=["exp", "ell"])
def test_weight_uniqueness(order):
    t1 = order.nvars
    linear = [(k,) + (0,) * t1 for k in range(70)]
    linear += [(k,) + tuple(int(j == i) for j in range(t1)) for k in range(70) for i in range(t1)]
    for W in range(0, 201):
        found = [m for m in linear if mono_weight(m, order) == W]
        assert len(found) <= 1
        assert monomial_of_weight(W, order) == (found[0] if found else None)


def test_division_examples(exp_bc):
    B, o = exp_bc.polys, exp_bc.order
    mu1 = SpectralPolynomial.mu(Q, 2, 1)
    l = SpectralPolynomial.lam(Q, 2)
    mu2 = SpectralPolynomial.mu(Q, 2, 2)
    assert normal_form(mu1 ** 2, B, o) == l * mu2 - Fraction(8, 3) * l ** 2
    lin = l * mu1 + 3 * mu2 - 1
    qs, r = poly_divide(lin, B, o)
    assert r == lin and all(q.is_zero() for q in qs)


def test_division_checked_by_evaluation(exp_bc, exp_basis):
    mu1 = SpectralPolynomial.mu(Q, 2, 1)
    mu2 = SpectralPolynomial.mu(Q, 2, 2)
    p = mu1 ** 2 * mu2
    r = normal_form(p, exp_bc.polys, exp_bc.order)
    assert r.is_mu_linear()
    assert phi_L(p - r, exp_basis).is_zero()


@settings(max_examples=60)
@given(polys(), st.lists(polys(max_terms=3), min_size=1, max_size=3))
def test_division_reexpansion(p, basis):
    basis = [b for b in basis if not b.is_zero()]
    if not basis:
        return
    qs, r = poly_divide(p, basis, EXPW)
    total = r
    for q, b in zip(qs, basis):
        total = total + q * b
    assert total == p
    leads = [b.lm(EXPW) for b in basis]
    assert not any(mono_divides(lm, m) for m in r.terms for lm in leads)


@settings(max_examples=60)
@given(polys(max_deg=4))
def test_normal_form_is_mu_linear(exp_bc, p):
    assert normal_form(p, exp_bc.polys, exp_bc.order).is_mu_linear()


@settings(max_examples=30)
@given(polys(field=EXP, coeffs=exp_elements(), max_terms=3))
def test_normal_form_over_k_is_mu_linear(exp_bc, p):
    r = normal_form(p, exp_bc.polys, exp_bc.order)
    assert r.is_mu_linear() and r.coefficient_ring in ("C", "K")


def test_s_polynomial_examples(exp_bc):
    o = EXPW
    R11, R12 = exp_bc.relations[(1, 1)], exp_bc.relations[(1, 2)]
    assert s_polynomial(R11, R11, o).is_zero()
    assert normal_form(s_polynomial(R11, R12, o), exp_bc.polys, o).is_zero()
    mu1 = SpectralPolynomial.mu(Q, 2, 1)
    mu2 = SpectralPolynomial.mu(Q, 2, 2)
    f, g = mu1 * mu2 - 1, mu1
    # lcm/lm(f)*lc(g)*f - lcm/lm(g)*lc(f)*g = (mu1 mu2 - 1) - mu1 mu2
    assert s_polynomial(f, g, o) == SpectralPolynomial.const(Q, 2, -1)
    assert not is_groebner([f, g], o)


def test_is_groebner_examples(exp_bc, ell_bc):
    assert is_groebner(exp_bc.polys, exp_bc.order)
    assert is_groebner(ell_bc.polys, ell_bc.order)


def test_poly_derive_examples(exp_bc):
    assert poly_derive(exp_bc.relations[(1, 1)].over(EXP)).is_zero()
    E = EXP.gen()
    p = SpectralPolynomial.mu(EXP, 2, 1) * E
    assert poly_derive(p) == p
    assert poly_derive(SpectralPolynomial.lam(EXP, 2) ** 3).is_zero()


def test_mixed_coefficient_rings():
    a = SpectralPolynomial.mu(C2, 1, 1) * C2.param("g2")
    assert a.coefficient_ring == "C"
    b = a * ELL.symbol("wp")
    assert b.coefficient_ring == "K" and b.field == ELL
    with pytest.raises(MathDomainError):
        b.to_constants()


def test_format():
    l = SpectralPolynomial.lam(Q, 2)
    mu1, mu2 = SpectralPolynomial.mu(Q, 2, 1), SpectralPolynomial.mu(Q, 2, 2)
    p = mu1 ** 2 - l * mu2 + Fraction(8, 3) * l ** 2
    assert p.format(EXPW) == "mu1^2 - l*mu2 + 8/3*l^2"
    assert p.format(EXPW, latex=True) == r"\mu_{1}^{2} - \lambda \mu_{2} + \frac{8}{3} \lambda^{2}"
    assert SpectralPolynomial.zero(Q, 2).format() == "0"
