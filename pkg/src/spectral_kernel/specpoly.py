"""Sparse polynomials in l, mu1, ..., mu_{t-1} and the weighted product order.

A monomial is a plain tuple ``(k, a1, ..., a_{t-1})`` standing for
``l^k * mu1^a1 * ... * mu_{t-1}^a_{t-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .diffield import DiffField, FieldElement, _is_single_term
from .errors import FieldMismatch, MathDomainError

Monomial = tuple


@dataclass(frozen=True)
class WeightedOrder:
    """Product order: mu-parts by weight then lex, ties broken by the l exponent.

    ``weights[i]`` is the weight of mu_{i+1}, i.e. the order of G_{i+1};
    ``n`` is the weight of l and is only used by :meth:`weight`.
    """

    n: int
    weights: tuple[int, ...]
    _lex: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if self.n < 1 or any(w <= 0 for w in ws):
            raise MathDomainError("weights must be positive")
        classes = [w % self.n for w in ws]
        if len(set(classes)) != len(classes) or 0 in classes:
            raise MathDomainError(f"weights {ws} are not distinct non-zero classes mod {self.n}")
        # variables read from the heaviest mu down for the lex tie-break
        object.__setattr__(self, "_lex", tuple(sorted(range(len(ws)), key=lambda i: -ws[i])))

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def mu_weight(self, m: Monomial) -> int:
        return sum(a * w for a, w in zip(m[1:], self.weights))

    def weight(self, m: Monomial) -> int:
        return m[0] * self.n + self.mu_weight(m)

    def key(self, m: Monomial) -> tuple:
        return _order_key(self, m)

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


@lru_cache(maxsize=65536)
def _order_key(order: WeightedOrder, m: Monomial) -> tuple:
    return (order.mu_weight(m), tuple(m[1 + i] for i in order._lex), m[0])


class DegLexOrder:
    """Graded lex on (l, mu1, ...); used where any monomial order will do."""

    @staticmethod
    def key(m: Monomial) -> tuple:
        return (sum(m), m)


DEGLEX = DegLexOrder()


def mono_weight(m: Monomial, order: WeightedOrder) -> int:
    return order.weight(m)


def mono_compare(a: Monomial, b: Monomial, order: WeightedOrder) -> int:
    """-1, 0 or 1 as a is smaller than, equal to or bigger than b."""
    return order.compare(a, b)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_of_weight(W: int, order: WeightedOrder) -> Monomial | None:
    """The unique mu-linear monomial of weight W, or None."""
    if W < 0:
        raise MathDomainError("negative weight")
    n, t1 = order.n, order.nvars
    if W % n == 0:
        return (W // n,) + (0,) * t1
    for i, w in enumerate(order.weights):
        if w % n == W % n:
            a = (W - w) // n
            if a < 0:
                return None
            exps = [0] * t1
            exps[i] = 1
            return (a,) + tuple(exps)
    return None


def join_fields(F: DiffField, G: DiffField) -> DiffField:
    """Smallest of the two coefficient fields containing both (C embeds in K)."""
    if F == G:
        return F
    if F == G.constants:
        return G
    if G == F.constants:
        return F
    raise FieldMismatch(f"{F} vs {G}")


class SpectralPolynomial:
    """Polynomial in l, mu1..mu_{nvars} with coefficients in ``field`` (C or K)."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: DiffField, nvars: int, terms: dict | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars + 1:
                raise MathDomainError(f"monomial {m} does not have {nvars + 1} exponents")
            if not isinstance(c, FieldElement):
                c = field.from_rational(c)
            elif c.field != field:
                c = field.embed(c)
            if not c.is_zero():
                clean[tuple(m)] = c
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars)

    @classmethod
    def const(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * (nvars + 1): c})

    @classmethod
    def monomial(cls, field, nvars, m, c=1):
        return cls(field, nvars, {tuple(m): c})

    @classmethod
    def lam(cls, field, nvars):
        return cls.monomial(field, nvars, (1,) + (0,) * nvars)

    @classmethod
    def mu(cls, field, nvars, i):
        """mu_i for 1 <= i <= nvars."""
        if not 1 <= i <= nvars:
            raise MathDomainError(f"mu{i} out of range")
        exps = [0] * (nvars + 1)
        exps[i] = 1
        return cls.monomial(field, nvars, exps)

    # queries ------------------------------------------------------------
    @property
    def coefficient_ring(self) -> str:
        return "C" if self.field.is_constants else "K"

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def leading(self, order: WeightedOrder) -> tuple[Monomial, FieldElement]:
        if not self.terms:
            raise MathDomainError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def lm(self, order):
        return self.leading(order)[0]

    def lc(self, order):
        return self.leading(order)[1]

    def mu_degree(self) -> int:
        return max((sum(m[1:]) for m in self.terms), default=-1)

    def is_mu_linear(self) -> bool:
        return self.mu_degree() <= 1

    def lambda_degree(self) -> int:
        return max((m[0] for m in self.terms), default=-1)

    def is_constant_coefficient(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def to_constants(self) -> "SpectralPolynomial":
        """Same polynomial over C; raises if a coefficient is not constant."""
        C = self.field.constants
        return SpectralPolynomial(C, self.nvars, {m: c.to_constant() for m, c in self.terms.items()})

    def over(self, field: DiffField) -> "SpectralPolynomial":
        return SpectralPolynomial(field, self.nvars, self.terms)

    def mu_coefficients(self) -> list["SpectralPolynomial"]:
        """For a mu-linear polynomial: [q0(l), q1(l), ...] with self = q0 + sum qi mu_i."""
        if not self.is_mu_linear():
            raise MathDomainError("polynomial is not linear in mu")
        parts = [dict() for _ in range(self.nvars + 1)]
        for m, c in self.terms.items():
            i = next((j for j in range(1, self.nvars + 1) if m[j]), 0)
            parts[i][(m[0],) + (0,) * self.nvars] = c
        return [SpectralPolynomial(self.field, self.nvars, p) for p in parts]

    # arithmetic ---------------------------------------------------------
    def _other(self, other):
        if isinstance(other, SpectralPolynomial):
            if other.nvars != self.nvars:
                raise MathDomainError("polynomials live in rings of different arity")
            return other
        if isinstance(other, FieldElement):
            return SpectralPolynomial.const(join_fields(self.field, other.field), self.nvars, other)
        if isinstance(other, (int, Fraction)):
            return SpectralPolynomial.const(self.field, self.nvars, other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        F = join_fields(self.field, other.field)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return SpectralPolynomial(F, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SpectralPolynomial(self.field, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        F = join_fields(self.field, other.field)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return SpectralPolynomial(F, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise MathDomainError("negative power of a polynomial")
        out = SpectralPolynomial.const(self.field, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "SpectralPolynomial":
        return self * c

    def shift(self, m: Monomial, c=None) -> "SpectralPolynomial":
        """Multiply by the monomial m (and optionally the coefficient c)."""
        out = {}
        for mm, cc in self.terms.items():
            out[tuple(a + b for a, b in zip(mm, m))] = cc if c is None else cc * c
        F = self.field if c is None or not isinstance(c, FieldElement) else join_fields(self.field, c.field)
        return SpectralPolynomial(F, self.nvars, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = self._other(other)
        if not isinstance(other, SpectralPolynomial):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def derive(self) -> "SpectralPolynomial":
        return poly_derive(self)

    # rendering ----------------------------------------------------------
    def sorted_terms(self, order: WeightedOrder | None = None):
        key = order.key if order is not None else (lambda m: (sum(m[1:]), m[1:][::-1], m[0]))
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def format(self, order: WeightedOrder | None = None, labels: Sequence[int] | None = None,
               latex: bool = False) -> str:
        return format_polynomial(self, order, labels, latex)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"SpectralPolynomial({self.format()!r})"


def _mono_text(m: Monomial, labels, latex: bool) -> str:
    parts = []
    names = [r"\lambda" if latex else "l"] + [
        (rf"\mu_{{{lab}}}" if latex else f"mu{lab}") for lab in labels
    ]
    for e, name in zip(m, names):
        if e == 0:
            continue
        if e == 1:
            parts.append(name)
        else:
            parts.append(f"{name}^{{{e}}}" if latex else f"{name}^{e}")
    return (" " if latex else "*").join(parts)


def format_polynomial(p: SpectralPolynomial, order: WeightedOrder | None = None,
                      labels: Sequence[int] | None = None, latex: bool = False) -> str:
    """Plain text (l, mu1, ...) or LaTeX; terms in decreasing order."""
    if labels is None:
        labels = range(1, p.nvars + 1)
    labels = list(labels)
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms(order):
        mono = _mono_text(m, labels, latex)
        text = c.format(latex)
        single = _is_single_term(text)
        neg = single and text.startswith("-")
        if neg:
            text = text[1:]
        if mono:
            if text == "1":
                text = mono
            elif single:
                text = f"{text} {mono}" if latex else f"{text}*{mono}"
            else:
                text = rf"\left({text}\right) {mono}" if latex else f"({text})*{mono}"
        elif out and not single and text.startswith("-"):
            text = rf"\left({text}\right)" if latex else f"({text})"
        if not out:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)


# ---------------------------------------------------------------------------
# division, S-polynomials, Groebner criterion
# ---------------------------------------------------------------------------

def poly_divide(p: SpectralPolynomial, basis: Sequence[SpectralPolynomial], order: WeightedOrder):
    """Multivariate division: p = sum q_i * basis_i + r.

    At every step the largest reducible monomial of the running remainder is
    reduced by the first basis element whose leading monomial divides it.
    Returns ``(quotients, r)``.
    """
    if any(b.is_zero() for b in basis):
        raise MathDomainError("division by the zero polynomial")
    F = p.field
    for b in basis:
        F = join_fields(F, b.field)
    leads = [b.leading(order) for b in basis]
    inverses = [lc.inverse() for _, lc in leads]
    rem = dict(SpectralPolynomial(F, p.nvars, p.terms).terms)
    quots: list[dict] = [{} for _ in basis]
    irreducible: set = set()
    while True:
        candidates = [m for m in rem if m not in irreducible]
        if not candidates:
            break
        m = max(candidates, key=order.key)
        hit = next((i for i, (lm, _) in enumerate(leads) if mono_divides(lm, m)), None)
        if hit is None:
            irreducible.add(m)
            continue
        c = rem[m] * inverses[hit]
        shift = tuple(a - b for a, b in zip(m, leads[hit][0]))
        q = quots[hit]
        q[shift] = q[shift] + c if shift in q else c
        for bm, bc in basis[hit].terms.items():
            mm = tuple(a + b for a, b in zip(bm, shift))
            v = rem[mm] - c * bc if mm in rem else -(c * bc)
            if v.is_zero():
                rem.pop(mm, None)
            else:
                rem[mm] = v
    return ([SpectralPolynomial(F, p.nvars, q) for q in quots],
            SpectralPolynomial(F, p.nvars, rem))


def normal_form(p, basis, order) -> SpectralPolynomial:
    return poly_divide(p, basis, order)[1]


def exact_quotient(a: SpectralPolynomial, b: SpectralPolynomial, order: WeightedOrder) -> SpectralPolynomial:
    (q,), r = poly_divide(a, [b], order)
    if not r.is_zero():
        raise MathDomainError("division is not exact")
    return q


def s_polynomial(f: SpectralPolynomial, g: SpectralPolynomial, order: WeightedOrder) -> SpectralPolynomial:
    """lcm/lm(f) * lc(g) * f - lcm/lm(g) * lc(f) * g."""
    (mf, cf), (mg, cg) = f.leading(order), g.leading(order)
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    uf = tuple(a - b for a, b in zip(lcm, mf))
    ug = tuple(a - b for a, b in zip(lcm, mg))
    return f.shift(uf, cg) - g.shift(ug, cf)


def is_groebner(basis: Sequence[SpectralPolynomial], order: WeightedOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    basis = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not normal_form(s_polynomial(basis[i], basis[j], order), basis, order).is_zero():
                return False
    return True


def poly_derive(p: SpectralPolynomial) -> SpectralPolynomial:
    """Extended derivation: l and every mu are constants."""
    return SpectralPolynomial(p.field, p.nvars, {m: c.derive() for m, c in p.terms.items()})


def mu_linear_combination(field: DiffField, coords: Iterable[SpectralPolynomial], nvars: int) -> SpectralPolynomial:
    """sum_i coords[i](l) * mu_i with mu_0 = 1."""
    out = SpectralPolynomial.zero(field, nvars)
    for i, q in enumerate(coords):
        out = out + (q if i == 0 else q * SpectralPolynomial.mu(field, nvars, i))
    return out
