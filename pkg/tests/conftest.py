import os

# every reduce_as_module call re-expands its coordinates in tests
os.environ.setdefault("SPECTRAL_KERNEL_SELF_CHECK", "1")

from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

from spectral_kernel.bccore import bc_ideal  # noqa: E402
from spectral_kernel.catalog import ELLIPTIC, ELLIPTIC_SUB, EXPONENTIAL  # noqa: E402
from spectral_kernel.diffield import ConstantsField, EllipticField, ExponentialField  # noqa: E402
from spectral_kernel.parser import parse_session  # noqa: E402

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")


# fields --------------------------------------------------------------------

EXP = ExponentialField()
C2 = ConstantsField(("g2", "g3"))
ELL = EllipticField(invariants=(-C2.param("g2"), -C2.param("g3")))

small_ints = st.integers(-4, 4)
rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def univariate(draw, x, one, max_deg=3):
    cs = draw(st.lists(small_ints, min_size=1, max_size=max_deg + 1))
    acc = one * 0
    for k, c in enumerate(cs):
        if c:
            acc = acc + x ** k * c
    return acc


@st.composite
def exp_elements(draw):
    E = EXP.gen()
    num = draw(univariate(E, EXP.one()))
    den = draw(univariate(E, EXP.one()))
    return num if den.is_zero() else num / den


@st.composite
def const_elements(draw):
    g2, g3 = C2.param("g2"), C2.param("g3")
    a = draw(univariate(g2, C2.one(), 2)) + draw(small_ints) * g3
    b = draw(univariate(g3, C2.one(), 1)) + draw(small_ints) * g2
    return a if b.is_zero() else a / b


@st.composite
def ell_elements(draw):
    wp, wpd = ELL.symbol("wp"), ELL.symbol("wpd")
    g2 = ELL.symbol("g2")
    a = draw(univariate(wp, ELL.one(), 2)) + draw(small_ints) * g2
    b = draw(univariate(wp, ELL.one(), 1))
    d = draw(univariate(wp, ELL.one(), 1))
    x = a + b * wpd
    return x if d.is_zero() else x / d


def elements_of(field):
    if field is EXP:
        return exp_elements()
    if field is ELL:
        return ell_elements()
    return const_elements()


# sessions ------------------------------------------------------------------

@pytest.fixture(scope="session")
def exp_session():
    return parse_session(EXPONENTIAL)


@pytest.fixture(scope="session")
def ell_session():
    return parse_session(ELLIPTIC)


@pytest.fixture(scope="session")
def ell_sub_session():
    return parse_session(ELLIPTIC_SUB)


@pytest.fixture(scope="session")
def exp_basis(exp_session):
    return exp_session.goodearl_basis()


@pytest.fixture(scope="session")
def ell_basis(ell_session):
    return ell_session.goodearl_basis()


@pytest.fixture(scope="session")
def exp_bc(exp_basis):
    return bc_ideal(exp_basis)


@pytest.fixture(scope="session")
def ell_bc(ell_basis):
    return bc_ideal(ell_basis)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
