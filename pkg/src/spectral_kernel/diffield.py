"""Exact differential coefficient fields.

Three field towers are supported:

* ``ConstantsField``: C = Q(c1, ..., ck), the derivation is zero.
* ``ExponentialField``: C(E) with dE = E (E stands for exp(x)).
* ``EllipticField``: C(wp)[wpd] / (wpd^2 - 4 wp^3 + a wp + b) with
  d wp = wpd and d wpd = 6 wp^2 - a/2, where (a, b) are the Weierstrass
  invariants, given as elements of C.

Every element is kept in a canonical form, so equality is structural.
A rational function is a pair (num, den) of integer polynomials over all
the internal variables (parameters first, then the generator), reduced to
lowest terms over Z[vars] and with the leading coefficient of ``den``
positive under graded-lex.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DivisionByZero, FieldMismatch, MathDomainError

__all__ = [
    "ConstantsField",
    "DiffField",
    "EllipticField",
    "ExponentialField",
    "FieldElement",
    "derive",
    "invert",
]


class RF(NamedTuple):
    """Rational function num/den in lowest terms."""

    num: PolyElement
    den: PolyElement


def _cancel(num: PolyElement, den: PolyElement) -> RF:
    if not den:
        raise DivisionByZero("denominator reduces to zero")
    ring = num.ring
    if not num:
        return RF(ring.zero, ring.one)
    if den.is_one:
        return RF(num, den)
    _, num, den = num.cofactors(den)
    if den.LC < 0:
        num, den = -num, -den
    return RF(num, den)


def _rf_add(x: RF, y: RF) -> RF:
    if x.den.is_one and y.den.is_one:
        return RF(x.num + y.num, x.den)
    if x.den == y.den:
        return _cancel(x.num + y.num, x.den)
    if x.den.is_one:
        return RF(x.num * y.den + y.num, y.den)  # already in lowest terms
    if y.den.is_one:
        return RF(x.num + y.num * x.den, x.den)
    g, dx, dy = x.den.cofactors(y.den)
    return _cancel(x.num * dy + y.num * dx, dx * y.den)


def _rf_neg(x: RF) -> RF:
    return RF(-x.num, x.den)


def _rf_mul(x: RF, y: RF) -> RF:
    if not x.num or not y.num:
        return RF(x.num.ring.zero, x.num.ring.one)
    if x.den.is_one and y.den.is_one:
        return RF(x.num * y.num, x.den)
    a, b = x.num, y.den
    if not b.is_one:
        _, a, b = a.cofactors(b)
    c, d = y.num, x.den
    if not d.is_one:
        _, c, d = c.cofactors(d)
    num, den = a * c, b * d
    if den.LC < 0:
        num, den = -num, -den
    return RF(num, den)


def _rf_inv(x: RF) -> RF:
    if not x.num:
        raise DivisionByZero("inverse of zero")
    num, den = x.den, x.num
    if den.LC < 0:
        num, den = -num, -den
    return RF(num, den)


def _rf_diff(x: RF, var: int) -> RF:
    dn = x.num.diff(var)
    if x.den.is_one:
        return RF(dn, x.den)
    dd = x.den.diff(var)
    return _cancel(dn * x.den - x.num * dd, x.den * x.den)


def _rf_const(ring: PolyRing, value) -> RF:
    q = Fraction(value)
    return _cancel(ring(q.numerator), ring(q.denominator))


def _rf_set_ring(x: RF, ring: PolyRing) -> RF:
    return RF(x.num.set_ring(ring), x.den.set_ring(ring))


# ---------------------------------------------------------------------------
# text rendering of canonical payloads
# ---------------------------------------------------------------------------

def _fmt_monomial(exps, names, latex=False) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 0:
            continue
        if latex:
            name = _latex_name(name)
            parts.append(name if e == 1 else f"{name}^{{{e}}}")
        else:
            parts.append(name if e == 1 else f"{name}^{e}")
    return (" " if latex else "*").join(parts)


def _latex_name(name: str) -> str:
    if name == "wp":
        return r"\wp"
    if name == "wpd":
        return r"\wp'"
    stem = name.rstrip("0123456789")
    if stem and stem != name:
        return f"{stem}_{{{name[len(stem):]}}}"
    return name


def _fmt_coeff_term(c: Fraction, mono: str, first: bool, latex=False) -> str:
    sign = "-" if c < 0 else "+"
    c = abs(c)
    if latex:
        if c.denominator != 1:
            body = rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
        else:
            body = str(c.numerator)
        if mono:
            body = mono if c == 1 else f"{body} {mono}"
    else:
        body = str(c)
        if mono:
            body = mono if c == 1 else f"{body}*{mono}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def format_poly(p: PolyElement, scale: int = 1, latex: bool = False) -> str:
    """Render ``p / scale`` (scale a positive integer), terms in descending grlex."""
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    out = []
    for exps, c in p.terms():
        mono = _fmt_monomial(exps, names, latex)
        out.append(_fmt_coeff_term(Fraction(int(c), scale), mono, not out, latex))
    return "".join(out)


def _is_single_term(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            return False
    return True


def format_rf(x: RF, latex: bool = False) -> str:
    if x.den.is_ground:
        return format_poly(x.num, int(x.den.LC), latex)
    num, den = format_poly(x.num, latex=latex), format_poly(x.den, latex=latex)
    if latex:
        return rf"\frac{{{num}}}{{{den}}}"
    if not _is_single_term(num) or num.startswith("-"):
        num = f"({num})"
    return f"{num}/({den})"


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class DiffField:
    """Common machinery; subclasses fix the generator and the derivation."""

    variant = ""
    generator: str | None = None

    def __init__(self, params: Sequence[str] = ()):
        self.params = tuple(params)
        gens = self.params + ((self.generator,) if self.generator else ())
        if len(set(gens)) != len(gens):
            raise MathDomainError(f"repeated variable names in {gens}")
        self.ring = PolyRing(gens, ZZ, grlex) if gens else PolyRing("", ZZ, grlex)
        self._zero = FieldElement(self, self._lift(RF(self.ring.zero, self.ring.one)))
        self._one = FieldElement(self, self._lift(RF(self.ring.one, self.ring.one)))

    # payload hooks; the defaults treat the payload as a single RF
    def _lift(self, rf: RF):
        return rf

    def _add(self, x, y):
        return _rf_add(x, y)

    def _neg(self, x):
        return _rf_neg(x)

    def _mul(self, x, y):
        return _rf_mul(x, y)

    def _inv(self, x):
        return _rf_inv(x)

    def _is_zero(self, x) -> bool:
        return not x.num

    def _derive(self, x):
        raise NotImplementedError

    def _is_constant(self, x) -> bool:
        raise NotImplementedError

    def _to_constant(self, x) -> RF:
        raise NotImplementedError

    def _format(self, x, latex=False) -> str:
        return format_rf(x, latex)

    # public API
    @property
    def constants(self) -> "ConstantsField":
        raise NotImplementedError

    @property
    def is_constants(self) -> bool:
        return self.variant == "constants"

    def zero(self) -> "FieldElement":
        return self._zero

    def one(self) -> "FieldElement":
        return self._one

    def from_rational(self, value) -> "FieldElement":
        return FieldElement(self, self._lift(_rf_const(self.ring, value)))

    def param(self, name: str) -> "FieldElement":
        if name not in self.params:
            raise KeyError(name)
        return FieldElement(self, self._lift(RF(self.ring.gens[self.params.index(name)], self.ring.one)))

    def symbol(self, name: str) -> "FieldElement":
        """Element for a parameter or generator name used in session texts."""
        if name in self.params:
            return self.param(name)
        raise KeyError(name)

    def symbol_names(self) -> tuple[str, ...]:
        return self.params

    def embed(self, c: "FieldElement") -> "FieldElement":
        """Canonical inclusion C -> K."""
        if c.field == self:
            return c
        if c.field != self.constants:
            raise FieldMismatch(f"cannot embed {c.field} into {self}")
        return FieldElement(self, self._lift(_rf_set_ring(c.data, self.ring)))

    def _key(self):
        return (self.variant, self.params)

    def __eq__(self, other):
        return self is other or (isinstance(other, DiffField) and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return self.declaration()

    def declaration(self) -> str:
        raise NotImplementedError


class ConstantsField(DiffField):
    """Q(c1, ..., ck) with the zero derivation."""

    variant = "constants"

    @property
    def constants(self):
        return self

    def _derive(self, x):
        return RF(self.ring.zero, self.ring.one)

    def _is_constant(self, x):
        return True

    def _to_constant(self, x):
        return x

    def canonicalize(self, num, den=1) -> "FieldElement":
        return FieldElement(self, _cancel(self.ring(num), self.ring(den)))

    def declaration(self):
        return "field constants" + (f"({', '.join(self.params)})" if self.params else "")


class _ExtensionField(DiffField):
    def __init__(self, params: Sequence[str] = ()):
        super().__init__(params)
        self._constants = ConstantsField(self.params)
        self._gen_index = len(self.params)

    @property
    def constants(self):
        return self._constants

    def _rf_is_constant(self, x: RF) -> bool:
        i = self._gen_index
        return x.num.degree(i) <= 0 and x.den.degree(i) <= 0

    def _rf_to_constant(self, x: RF) -> RF:
        if not self._rf_is_constant(x):
            raise MathDomainError("element is not a constant")
        return _rf_set_ring(x, self._constants.ring)


class ExponentialField(_ExtensionField):
    """C(E) with dE = E."""

    variant = "exponential"
    generator = "E"

    def _derive(self, x):
        e = self.ring.gens[self._gen_index]
        d = _rf_diff(x, self._gen_index)
        return _rf_mul(d, RF(e, self.ring.one))

    def _is_constant(self, x):
        return self._rf_is_constant(x)

    def _to_constant(self, x):
        return self._rf_to_constant(x)

    def symbol(self, name):
        if name == "E":
            return FieldElement(self, RF(self.ring.gens[self._gen_index], self.ring.one))
        return super().symbol(name)

    def symbol_names(self):
        return self.params + ("E",)

    def gen(self) -> "FieldElement":
        return self.symbol("E")

    def canonicalize(self, num, den=1) -> "FieldElement":
        return FieldElement(self, _cancel(self.ring(num), self.ring(den)))

    def declaration(self):
        return "field exponential" + (f"({', '.join(self.params)})" if self.params else "")


class EllipticField(_ExtensionField):
    """C(wp)[wpd] modulo the Weierstrass relation wpd^2 = 4 wp^3 - a wp - b.

    ``invariants`` are (a, b) as elements of the constants field; by default
    they are the parameters g2, g3 themselves.
    """

    variant = "elliptic"
    generator = "wp"

    def __init__(self, params: Sequence[str] = ("g2", "g3"), invariants=None):
        super().__init__(params)
        C = self._constants
        if invariants is None:
            invariants = (C.param(self.params[0]), C.param(self.params[1]))
        a, b = (C.from_rational(v) if not isinstance(v, FieldElement) else v for v in invariants)
        if a.field != C or b.field != C:
            raise FieldMismatch("Weierstrass invariants must live in the constants field")
        self.invariants = (a, b)
        if all(v.data.num.is_ground and v.data.den.is_ground for v in self.invariants):
            disc = a ** 3 - 27 * b ** 2
            if disc.is_zero():
                raise MathDomainError("singular curve: a^3 - 27 b^2 = 0")
        wp = RF(self.ring.gens[self._gen_index], self.ring.one)
        A, B = (_rf_set_ring(v.data, self.ring) for v in self.invariants)
        four_wp3 = _rf_mul(_rf_const(self.ring, 4), _rf_mul(wp, _rf_mul(wp, wp)))
        # wpd^2 and d(wpd) as elements of C(wp)
        self._rel = _rf_add(four_wp3, _rf_neg(_rf_add(_rf_mul(A, wp), B)))
        six_wp2 = _rf_mul(_rf_const(self.ring, 6), _rf_mul(wp, wp))
        self._dwpd = _rf_add(six_wp2, _rf_neg(_rf_mul(_rf_const(self.ring, Fraction(1, 2)), A)))
        self._raw_ring = PolyRing(tuple(map(str, self.ring.symbols)) + ("wpd",), ZZ, grlex)

    def _key(self):
        return (self.variant, self.params, tuple(v.data for v in self.invariants))

    def _zero_rf(self):
        return RF(self.ring.zero, self.ring.one)

    def _lift(self, rf):
        return (rf, self._zero_rf())

    def _add(self, x, y):
        return (_rf_add(x[0], y[0]), _rf_add(x[1], y[1]))

    def _neg(self, x):
        return (_rf_neg(x[0]), _rf_neg(x[1]))

    def _mul(self, x, y):
        (a, b), (c, d) = x, y
        if not b.num and not d.num:
            return (_rf_mul(a, c), b)
        ac = _rf_mul(a, c)
        bd = _rf_mul(_rf_mul(b, d), self._rel)
        return (_rf_add(ac, bd), _rf_add(_rf_mul(a, d), _rf_mul(b, c)))

    def _inv(self, x):
        a, b = x
        if not b.num:
            return (_rf_inv(a), b)
        # (a + b y)^-1 = (a - b y) / (a^2 - b^2 y^2)
        norm = _rf_add(_rf_mul(a, a), _rf_neg(_rf_mul(_rf_mul(b, b), self._rel)))
        inv = _rf_inv(norm)
        return (_rf_mul(a, inv), _rf_neg(_rf_mul(b, inv)))

    def _is_zero(self, x):
        return not x[0].num and not x[1].num

    def _derive(self, x):
        a, b = x
        i = self._gen_index
        # d(a(wp)) = a'(wp) wpd ; d(b(wp) wpd) = b'(wp) wpd^2 + b d(wpd)
        db = _rf_diff(b, i)
        first = _rf_add(_rf_mul(db, self._rel), _rf_mul(b, self._dwpd))
        return (first, _rf_diff(a, i))

    def _is_constant(self, x):
        return not x[1].num and self._rf_is_constant(x[0])

    def _to_constant(self, x):
        if x[1].num:
            raise MathDomainError("element is not a constant")
        return self._rf_to_constant(x[0])

    def _format(self, x, latex=False):
        a, b = x
        mul = " " if latex else "*"
        y = r"\wp'" if latex else "wpd"
        if not b.num:
            return format_rf(a, latex)
        bt = format_rf(b, latex)
        if bt == "1":
            yb = y
        elif bt == "-1":
            yb = f"-{y}"
        elif _is_single_term(bt) and b.den.is_ground:
            yb = f"{bt}{mul}{y}"
        else:
            yb = (rf"\left({bt}\right) {y}" if latex else f"({bt})*{y}")
        if not a.num:
            return yb
        at = format_rf(a, latex)
        return f"{at} - {yb[1:]}" if yb.startswith("-") else f"{at} + {yb}"

    def symbol(self, name):
        if name == "wp":
            return FieldElement(self, self._lift(RF(self.ring.gens[self._gen_index], self.ring.one)))
        if name == "wpd":
            return FieldElement(self, (self._zero_rf(), RF(self.ring.one, self.ring.one)))
        return super().symbol(name)

    def symbol_names(self):
        return self.params + ("wp", "wpd")

    @property
    def raw_ring(self) -> PolyRing:
        """Z[params, wp, wpd] for ``canonicalize`` inputs."""
        return self._raw_ring

    def canonicalize(self, num, den=1) -> "FieldElement":
        """Canonical element for num/den given as polynomials in wp and wpd."""
        R = self._raw_ring
        num, den = R(num), R(den)
        y_index = R.ngens - 1

        def split(p):
            # p = sum_k c_k wpd^k ; fold with wpd^2 -> relation
            parts = {}
            for exps, c in p.terms():
                k = exps[y_index]
                parts.setdefault(k, []).append((exps[:-1], c))
            acc = self._zero
            ypow = self._one
            y = self.symbol("wpd")
            for k in range(max(parts, default=0) + 1):
                if k in parts:
                    coeff = FieldElement(self, self._lift(RF(self.ring.from_terms(parts[k]), self.ring.one)))
                    acc = acc + coeff * ypow
                ypow = ypow * y
            return acc

        d = split(den)
        if d.is_zero():
            raise DivisionByZero("denominator reduces to zero")
        return split(num) / d

    def declaration(self):
        a, b = self.invariants
        return f"field elliptic({a.format()}, {b.format()})"


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class FieldElement:
    """Immutable canonical element of a ``DiffField``."""

    __slots__ = ("field", "data")

    def __init__(self, field: DiffField, data):
        self.field = field
        self.data = data

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return self, other
            if other.field == self.field.constants:
                return self, self.field.embed(other)
            if self.field == other.field.constants:
                return other.field.embed(self), other
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if isinstance(other, (int, Fraction)):
            return self, self.field.from_rational(other)
        return None, None

    def __add__(self, other):
        x, y = self._coerce(other)
        if x is None:
            return NotImplemented
        return FieldElement(x.field, x.field._add(x.data, y.data))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.data))

    def __sub__(self, other):
        x, y = self._coerce(other)
        if x is None:
            return NotImplemented
        return FieldElement(x.field, x.field._add(x.data, x.field._neg(y.data)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y = self._coerce(other)
        if x is None:
            return NotImplemented
        return FieldElement(x.field, x.field._mul(x.data, y.data))

    __rmul__ = __mul__

    def __truediv__(self, other):
        x, y = self._coerce(other)
        if x is None:
            return NotImplemented
        return FieldElement(x.field, x.field._mul(x.data, x.field._inv(y.data)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            try:
                x, y = self._coerce(other)
            except FieldMismatch:
                return False
            return x.data == y.data
        return self.data == other.data

    def __hash__(self):
        if self.field.is_constants:
            return hash(self.data)
        # constants hash like their image in C so that C and K keys agree
        if self.is_constant():
            return hash(self.to_constant().data)
        return hash(self.data)

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.field._is_zero(self.data)

    def is_one(self) -> bool:
        return self == self.field.one()

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.data))

    def derive(self) -> "FieldElement":
        return FieldElement(self.field, self.field._derive(self.data))

    def is_constant(self) -> bool:
        return self.field._is_constant(self.data)

    def to_constant(self) -> "FieldElement":
        """Project into the constants field; raises if not constant."""
        C = self.field.constants
        if C is self.field:
            return self
        return FieldElement(C, self.field._to_constant(self.data))

    def format(self, latex: bool = False) -> str:
        return self.field._format(self.data, latex)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"FieldElement({self.format()!r})"


def derive(a: FieldElement) -> FieldElement:
    return a.derive()


def invert(a: FieldElement) -> FieldElement:
    return a.inverse()
