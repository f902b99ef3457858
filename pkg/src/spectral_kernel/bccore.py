"""Burchnall-Chaundy ideals from a Goodearl basis.

The evaluation map sends l to L and mu_i to G_i.  Module reduction writes a
centralizer element as sum_i p_i(L) G_i; applying it to every product
G_i G_j yields the relations R_{i,j} = mu_i mu_j - sum_l p_l(l) mu_l, which
form a Groebner basis of the kernel of the evaluation map.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import ArityMismatch, InputNotReduced, MathDomainError, NotInCentralizerSpan
from .odo import DiffOperator, GoodearlBasis, op_mul, op_mul_top
from .specpoly import (
    SpectralPolynomial,
    WeightedOrder,
    format_polynomial,
    mono_divides,
    mu_linear_combination,
    poly_divide,
)


def _self_check() -> bool:
    return os.environ.get("SPECTRAL_KERNEL_SELF_CHECK", "") not in ("", "0")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SPECTRAL_KERNEL_THREADS", "4")))
    except ValueError:
        return 1


def weighted_order(basis: GoodearlBasis) -> WeightedOrder:
    return WeightedOrder(basis.n, basis.orders[1:])


def _mu_product(basis: GoodearlBasis, alpha: tuple) -> DiffOperator:
    key = ("mu", alpha)
    cache = basis._cache
    if key in cache:
        return cache[key]
    nz = [i for i, a in enumerate(alpha) if a]
    if not nz:
        out = DiffOperator(basis.field, [1])
    elif sum(alpha) == 1:
        out = basis.gens[nz[0] + 1]
    else:
        i = nz[0]
        rest = list(alpha)
        rest[i] -= 1
        out = op_mul(basis.gens[i + 1], _mu_product(basis, tuple(rest)))
    cache[key] = out
    return out


def phi_L(p: SpectralPolynomial, basis: GoodearlBasis) -> DiffOperator:
    """Evaluate p at l = L, mu_i = G_i."""
    if p.nvars != basis.t - 1:
        raise ArityMismatch(f"polynomial has {p.nvars} mu variables, basis has {basis.t - 1}")
    K = basis.field
    acc = DiffOperator(K)
    for m, c in p.terms.items():
        if not c.is_constant():
            raise MathDomainError("evaluation needs constant coefficients")
        k, alpha = m[0], m[1:]
        if sum(alpha) <= 1:
            i = next((j + 1 for j, a in enumerate(alpha) if a), 0)
            op = basis.L_power_times(k, i)
        else:
            op = _mu_product(basis, alpha)
            if k:
                op = op_mul(basis.L_power(k), op)
        acc = acc + op.scale(K.embed(c.to_constant()))
    return acc


def phi_L_top(p: SpectralPolynomial, basis: GoodearlBasis, h: int = 2) -> DiffOperator:
    """The top h coefficients of phi_L(p), without expanding the full operator.

    Exact (truncation commutes with the leading part of a product), so the
    order and leading terms agree with phi_L; meant for high weights.
    """
    if p.nvars != basis.t - 1:
        raise ArityMismatch(f"polynomial has {p.nvars} mu variables, basis has {basis.t - 1}")
    if h < 1:
        raise MathDomainError("need at least one coefficient")
    K = basis.field

    def top(op: DiffOperator) -> DiffOperator:
        o = op.order
        return DiffOperator(K, [c if i > o - h else K.zero() for i, c in enumerate(op.coeffs)])

    Lt = top(basis.L)
    acc = DiffOperator(K)
    for m, c in p.terms.items():
        if not c.is_constant():
            raise MathDomainError("evaluation needs constant coefficients")
        op = DiffOperator(K, [1])
        factors = [Lt] * m[0]
        for i, a in enumerate(m[1:], start=1):
            factors += [top(basis.gens[i])] * a
        for f in factors:
            op = op_mul_top(f, op, h)
        acc = acc + op.scale(K.embed(c.to_constant()))
    return top(acc) if not acc.is_zero() else acc


@dataclass(frozen=True)
class ModuleCoordinates:
    """P = sum_i coords[i](L) * G_i, each coordinate a polynomial in l over C."""

    coords: tuple[SpectralPolynomial, ...]
    labels: tuple[int, ...]

    def as_polynomial(self) -> SpectralPolynomial:
        C = self.coords[0].field
        return mu_linear_combination(C, self.coords, len(self.coords) - 1)

    def format(self, latex: bool = False) -> str:
        if latex:
            return r",\quad ".join(f"p_{{{lab}}} = {c.format(latex=True)}"
                                   for lab, c in zip(self.labels, self.coords))
        return ", ".join(f"p{lab} = {c.format()}" for lab, c in zip(self.labels, self.coords))


def reduce_as_module(P: DiffOperator, basis: GoodearlBasis) -> ModuleCoordinates:
    """Coordinates of P in the C[L]-basis; raises NotInCentralizerSpan otherwise.

    The loop runs until P vanishes (rather than while ord(P) >= n) so that
    elements of order below n, constants included, are handled.
    """
    if P.field != basis.field:
        raise MathDomainError("operator and basis live over different fields")
    n, t = basis.n, basis.t
    C = basis.field.constants
    coords: list[dict] = [{} for _ in range(t)]
    R = P
    while not R.is_zero():
        o = R.order
        r = o % n
        if r not in basis.class_map:
            raise NotInCentralizerSpan(f"order {o} has class {r}, not in the order group {list(basis.order_group)}",
                                       order=o, residue=r)
        i = basis.class_map[r]
        if o < basis.orders[i]:
            raise NotInCentralizerSpan(
                f"order {o} is below ord(G{basis.labels[i]}) = {basis.orders[i]}", order=o, residue=r)
        k = (o - basis.orders[i]) // n
        term = basis.L_power_times(k, i)
        ratio = R.lc / term.lc
        if not ratio.is_constant():
            raise NotInCentralizerSpan(f"leading coefficient at order {o} is not a constant",
                                       order=o, residue=r)
        c = ratio.to_constant()
        coords[i][k] = coords[i][k] + c if k in coords[i] else c
        R = R - term.scale(ratio)
    nv = t - 1
    out = ModuleCoordinates(
        tuple(SpectralPolynomial(C, nv, {(k,) + (0,) * nv: c for k, c in d.items()}) for d in coords),
        basis.labels,
    )
    if _self_check() and phi_L(out.as_polynomial(), basis) != P:
        raise AssertionError("module reduction does not re-expand to the input operator")
    return out


@dataclass(frozen=True, eq=False)
class BCBasis:
    """Relations R_{i,j} keyed by the (label_i, label_j) pair, i <= j."""

    relations: dict
    order: WeightedOrder
    source: GoodearlBasis

    @property
    def polys(self) -> list[SpectralPolynomial]:
        return [self.relations[k] for k in sorted(self.relations)]

    @property
    def labels(self) -> tuple[int, ...]:
        return self.source.labels[1:]

    @property
    def nvars(self) -> int:
        return self.source.t - 1

    def format(self, latex: bool = False) -> str:
        lines = []
        for (i, j), R in sorted(self.relations.items()):
            body = format_polynomial(R, self.order, self.labels, latex)
            if latex:
                lines.append(f"R_{{{i},{j}}} = {body}")
            else:
                name = f"R{i}{j}" if max(i, j) < 10 else f"R{i},{j}"
                lines.append(f"{name} = {body}")
        return "\n".join(lines)


def _relation(basis: GoodearlBasis, i: int, j: int) -> SpectralPolynomial:
    coords = reduce_as_module(op_mul(basis.gens[i], basis.gens[j]), basis)
    C = basis.field.constants
    nv = basis.t - 1
    return SpectralPolynomial.mu(C, nv, i) * SpectralPolynomial.mu(C, nv, j) - coords.as_polynomial()


def bc_ideal(basis: GoodearlBasis) -> BCBasis:
    """Groebner basis {R_{i,j} : 1 <= i <= j <= t-1} of the Burchnall-Chaundy ideal."""
    if basis.t < 2:
        raise MathDomainError("the basis has no generator besides 1")
    pairs = [(i, j) for i in range(1, basis.t) for j in range(i, basis.t)]
    # warm the L-power cache before fanning out
    top = max(basis.orders[i] + basis.orders[j] for i, j in pairs)
    basis.L_power(max(0, (top - 1) // basis.n))
    with ThreadPoolExecutor(max_workers=min(_threads(), len(pairs))) as pool:
        polys = list(pool.map(lambda ij: _relation(basis, *ij), pairs))
    labels = basis.labels
    relations = {(labels[i], labels[j]): R for (i, j), R in zip(pairs, polys)}
    return BCBasis(relations=relations, order=weighted_order(basis), source=basis)


def bc_membership(p: SpectralPolynomial, bc: BCBasis) -> tuple[bool, SpectralPolynomial]:
    """(p in ideal, normal form); the normal form is linear in mu."""
    if p.nvars != bc.nvars:
        raise ArityMismatch(f"polynomial has {p.nvars} mu variables, the ideal has {bc.nvars}")
    _, nf = poly_divide(p, bc.polys, bc.order)
    return nf.is_zero(), nf


def is_reduced(p: SpectralPolynomial, bc: BCBasis) -> bool:
    leads = [R.lm(bc.order) for R in bc.polys]
    return not any(mono_divides(lm, m) for m in p.terms for lm in leads)


def quotient_product_normal_form(f1: SpectralPolynomial, f2: SpectralPolynomial, bc: BCBasis) -> SpectralPolynomial:
    """Normal form of f1*f2 for reduced f1, f2."""
    for f in (f1, f2):
        if f.nvars != bc.nvars:
            raise ArityMismatch("arity mismatch")
        if not is_reduced(f, bc):
            raise InputNotReduced(f"{f} is not reduced modulo the ideal")
    return poly_divide(f1 * f2, bc.polys, bc.order)[1]
