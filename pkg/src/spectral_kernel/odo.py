"""Ordinary differential operators K[D] and Goodearl bases of centralizers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .diffield import DiffField, FieldElement, _is_single_term as _single
from .errors import (
    DuplicateOrderClass,
    FieldMismatch,
    MathDomainError,
    NotCommuting,
    NotNormalForm,
    NotSubgroup,
)

NEG_INF = -math.inf  # ord(0)


class DiffOperator:
    """sum_i coeffs[i] * D^i with coefficients in a differential field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: DiffField, coeffs: Sequence = ()):
        cs = [c if isinstance(c, FieldElement) else field.from_rational(c) for c in coeffs]
        cs = [field.embed(c) if c.field != field else c for c in cs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def d(cls, field: DiffField) -> "DiffOperator":
        return cls(field, [0, 1])

    @classmethod
    def scalar(cls, field: DiffField, c) -> "DiffOperator":
        return cls(field, [c])

    @property
    def order(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> FieldElement:
        if not self.coeffs:
            raise MathDomainError("the zero operator has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lift(self, other):
        if isinstance(other, DiffOperator):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        return DiffOperator(self.field, [other])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOperator(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return op_mul(self, self._lift(other))

    def __rmul__(self, other):
        return op_mul(self._lift(other), self)

    def __pow__(self, k: int):
        return op_pow(self, k)

    def __eq__(self, other):
        if isinstance(other, DiffOperator):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, c: FieldElement) -> "DiffOperator":
        """Left multiplication by a field element."""
        return DiffOperator(self.field, [c * a for a in self.coeffs])

    def format(self, latex: bool = False) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            d = "" if i == 0 else ((r"\partial" if latex else "D") + ("" if i == 1 else (f"^{{{i}}}" if latex else f"^{i}")))
            text = c.format(latex)
            neg = text.startswith("-") and _single(text)
            if neg:
                text = text[1:]
            if d:
                if text == "1":
                    text = d
                elif _single(text):
                    text = f"{text} {d}" if latex else f"{text}*{d}"
                else:
                    text = rf"\left({text}\right) {d}" if latex else f"({text})*{d}"
            if not parts:
                parts.append(f"-{text}" if neg else text)
            else:
                parts.append(f" - {text}" if neg else f" + {text}")
        return "".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"DiffOperator({self.format()!r})"


def _check_same_field(P: DiffOperator, Q: DiffOperator):
    if P.field != Q.field:
        raise FieldMismatch(f"{P.field} vs {Q.field}")


def op_mul(P: DiffOperator, Q: DiffOperator) -> DiffOperator:
    """Product P*Q via D^i b = sum_k C(i,k) b^(k) D^(i-k)."""
    _check_same_field(P, Q)
    if P.is_zero() or Q.is_zero():
        return DiffOperator(P.field)
    n, m = len(P.coeffs) - 1, len(Q.coeffs) - 1
    zero = P.field.zero()
    # derivs[k][j] = k-th derivative of the j-th coefficient of Q
    derivs = [list(Q.coeffs)]
    for _ in range(n):
        derivs.append([c.derive() for c in derivs[-1]])
    out = [zero] * (n + m + 1)
    for i, a in enumerate(P.coeffs):
        if a.is_zero():
            continue
        for k in range(i + 1):
            binom = comb(i, k)
            for j, b in enumerate(derivs[k]):
                if b.is_zero():
                    continue
                term = a * b
                out[i - k + j] = out[i - k + j] + (term * binom if binom != 1 else term)
    return DiffOperator(P.field, out)


def op_mul_top(P: DiffOperator, Q: DiffOperator, h: int) -> DiffOperator:
    """The top h coefficients of P*Q, exact; lower coefficients are dropped.

    The coefficient of D^(p+q-s) only involves the top s+1 coefficients of
    each factor, so truncated factors are enough.
    """
    _check_same_field(P, Q)
    if P.is_zero() or Q.is_zero():
        return DiffOperator(P.field)
    p, q = P.order, Q.order
    zero = P.field.zero()
    out = [zero] * (p + q + 1)
    lo = p + q - h + 1
    derivs = [list(Q.coeffs)]
    for i in range(p, max(p - h, -1), -1):
        a = P.coeffs[i]
        if a.is_zero():
            continue
        for k in range(i + 1):
            if i - k + q < lo:
                break
            while len(derivs) <= k:
                derivs.append([c.derive() if j >= q - h else zero for j, c in enumerate(derivs[-1])])
            binom = comb(i, k)
            for j in range(q, -1, -1):
                pos = i - k + j
                if pos < lo:
                    break
                b = derivs[k][j]
                if not b.is_zero():
                    out[pos] = out[pos] + a * b * binom
    return DiffOperator(P.field, out)


def op_commutator(P: DiffOperator, Q: DiffOperator) -> DiffOperator:
    return op_mul(P, Q) - op_mul(Q, P)


def op_pow(P: DiffOperator, k: int) -> DiffOperator:
    if k < 0:
        raise MathDomainError("negative operator power")
    result = DiffOperator(P.field, [1])
    for _ in range(k):
        result = op_mul(P, result)
    return result


def is_normal_form(L: DiffOperator) -> bool:
    if L.is_zero():
        return False
    n = L.order
    if not L.lc.is_one():
        return False
    return n == 0 or L.coeff(n - 1).is_zero()


@dataclass(frozen=True, eq=False)
class GoodearlBasis:
    """A C[L]-module basis {G0 = 1, G1, ..., G_{t-1}} of a commutative algebra containing L.

    ``gens`` are sorted by increasing order (G0 first); ``labels[i]`` is the
    display index of ``gens[i]`` (defaults to its position).
    """

    L: DiffOperator
    gens: tuple[DiffOperator, ...]
    labels: tuple[int, ...]
    orders: tuple[int, ...]
    order_group: tuple[int, ...]
    class_map: dict
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.L.order

    @property
    def t(self) -> int:
        return len(self.gens)

    @property
    def rank(self) -> int:
        return self.n // self.t

    @property
    def field(self) -> DiffField:
        return self.L.field

    def index_of_label(self, label: int) -> int:
        return self.labels.index(label)

    def L_power(self, k: int) -> DiffOperator:
        key = ("L", k)
        if key not in self._cache:
            self._cache[key] = DiffOperator(self.field, [1]) if k == 0 else op_mul(self.L, self.L_power(k - 1))
        return self._cache[key]

    def L_power_times(self, k: int, i: int) -> DiffOperator:
        """L^k * G_i, cached."""
        if i == 0:
            return self.L_power(k)
        key = ("LG", k, i)
        if key not in self._cache:
            self._cache[key] = self.gens[i] if k == 0 else op_mul(self.L, self.L_power_times(k - 1, i))
        return self._cache[key]

    def sub_basis(self, indices: Sequence[int]) -> "GoodearlBasis":
        """Basis of the subalgebra spanned by the chosen positions (0 must be included)."""
        idx = sorted(set(indices) | {0})
        return make_goodearl_basis(
            self.L, [self.gens[i] for i in idx], labels=[self.labels[i] for i in idx]
        )


def make_goodearl_basis(L: DiffOperator, gens: Sequence[DiffOperator], labels=None,
                        check_commuting: bool = True) -> GoodearlBasis:
    """Validate and package a Goodearl basis.

    Checks normal form of L, G0 = 1, [L, Gi] = 0, distinct order classes and
    that the classes form a subgroup of Z_n. Order minimality is not checked.
    """
    if not is_normal_form(L) or L.order < 1:
        raise NotNormalForm(f"L = {L} is not in normal form")
    gens = list(gens)
    if not gens or gens[0] != DiffOperator(L.field, [1]):
        raise MathDomainError("the basis must start with G0 = 1")
    for g in gens:
        _check_same_field(L, g)
    if labels is None:
        rest = sorted(range(1, len(gens)), key=lambda i: gens[i].order)
        order = [0] + rest
        labels = list(range(len(gens)))
    else:
        if len(labels) != len(gens):
            raise MathDomainError("labels and gens differ in length")
        order = [0] + sorted(range(1, len(gens)), key=lambda i: gens[i].order)
        labels = [labels[i] for i in order]
    gens = [gens[i] for i in order]
    n = L.order
    if check_commuting:
        for i, g in enumerate(gens[1:], start=1):
            if not op_commutator(L, g).is_zero():
                raise NotCommuting(labels[i])
    orders = [g.order for g in gens]
    if any(o == NEG_INF for o in orders):
        raise MathDomainError("zero operator in basis")
    class_map = {}
    for i, o in enumerate(orders):
        r = o % n
        if r in class_map:
            raise DuplicateOrderClass(labels[class_map[r]], labels[i], r)
        class_map[r] = i
    group = set(class_map)
    for a in group:
        for b in group:
            if (a + b) % n not in group:
                raise NotSubgroup(f"order classes {sorted(group)} are not closed under addition mod {n}")
    return GoodearlBasis(
        L=L,
        gens=tuple(gens),
        labels=tuple(labels),
        orders=tuple(orders),
        order_group=tuple(sorted(group)),
        class_map=class_map,
    )
