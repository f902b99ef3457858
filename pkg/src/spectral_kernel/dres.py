"""Differential resultants, used as an independent cross-check of the BC ideal.

For operators P, Q of orders p, q with coefficients in K[l, mu] the
resultant is the determinant of the (p+q) x (p+q) matrix whose rows are the
coefficient vectors of D^i P (i < q) followed by D^j Q (j < p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .diffield import RF, FieldElement
from .errors import MathDomainError, NonConstantResultant, ZeroInput
from .odo import DiffOperator
from .specpoly import DEGLEX, SpectralPolynomial, exact_quotient, poly_derive


@dataclass(frozen=True)
class SpectralOperator:
    """sum_k coeffs[k] * D^k with coefficients in K[l, mu1, ...]; l and mu are constants."""

    coeffs: tuple[SpectralPolynomial, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def shift(self) -> "SpectralOperator":
        """D * self."""
        cs = list(self.coeffs)
        out = [poly_derive(c) for c in cs] + [cs[-1] * 0]
        for k, c in enumerate(cs):
            out[k + 1] = out[k + 1] + c
        return SpectralOperator(tuple(out))


def shifted(P: DiffOperator, nvars: int, var: int) -> SpectralOperator:
    """P - v with v = l (var = 0) or v = mu_var."""
    K = P.field
    coeffs = [SpectralPolynomial.const(K, nvars, c) for c in P.coeffs]
    v = SpectralPolynomial.lam(K, nvars) if var == 0 else SpectralPolynomial.mu(K, nvars, var)
    coeffs[0] = coeffs[0] - v
    return SpectralOperator(tuple(coeffs))


def resultant_matrix(P: SpectralOperator, Q: SpectralOperator) -> list[list[SpectralPolynomial]]:
    p, q = P.order, Q.order
    if p < 1 or q < 1:
        raise MathDomainError("both operators need positive order")
    N = p + q
    zero = P.coeffs[0] * 0
    rows = []
    for op, count in ((P, q), (Q, p)):
        cur = op
        for _ in range(count):
            row = [zero] * N
            for k, c in enumerate(cur.coeffs):
                row[N - 1 - k] = c
            rows.append(row)
            cur = cur.shift()
    return rows


def bareiss_det(M: Sequence[Sequence], exact_div: Callable, is_zero: Callable, one):
    """Fraction-free elimination; entries need +, -, * and an exact division."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if is_zero(A[k][k]):
            swap = next((r for r in range(k + 1, n) if not is_zero(A[r][k])), None)
            if swap is None:
                return A[k][k] * 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = exact_div(A[i][j] * piv - A[i][k] * A[k][j], prev)
        prev = piv
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def cofactor_det(M: Sequence[Sequence], one):
    """Laplace expansion along the first row; only for small test matrices."""
    n = len(M)
    if n == 0:
        return one
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in M[1:])]
        term = M[0][j] * cofactor_det(minor, one)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _poly_exact_div(a: SpectralPolynomial, b: SpectralPolynomial) -> SpectralPolynomial:
    if len(b.terms) == 1 and all(e == 0 for e in next(iter(b.terms))):
        return a * next(iter(b.terms.values())).inverse()
    return exact_quotient(a, b, DEGLEX)


def diff_resultant(P: SpectralOperator, Q: SpectralOperator) -> SpectralPolynomial:
    """Determinant of the resultant matrix, returned over the constants field."""
    M = resultant_matrix(P, Q)
    F = M[0][0].field
    one = SpectralPolynomial.const(F, M[0][0].nvars, 1)
    det = bareiss_det(M, _poly_exact_div, lambda x: x.is_zero(), one)
    if not det.is_constant_coefficient():
        raise NonConstantResultant("the resultant has non-constant coefficients")
    return det.to_constants()


# ---------------------------------------------------------------------------
# square-free part over C = Q(params)
# ---------------------------------------------------------------------------

def _to_sympy(f: SpectralPolynomial):
    C = f.field
    params = tuple(str(s) for s in C.ring.symbols) if C.params else ()
    names = params + ("l",) + tuple(f"mu{i}" for i in range(1, f.nvars + 1))
    R = PolyRing(names, ZZ, grlex)
    den = C.ring.one
    for c in f.terms.values():
        d = c.data.den
        den = den.lcm(d) if not d.is_one else den
    out = R.zero
    for m, c in f.terms.items():
        num = (c.data.num * den).exquo(c.data.den)
        for exps, coef in num.terms():
            out += R({tuple(exps) + tuple(m): coef})
    return out, len(params)


def _from_sympy(F, f: SpectralPolynomial) -> SpectralPolynomial:
    C = f.field
    k = len(C.params)
    terms: dict = {}
    for exps, coef in F.terms():
        pe, m = exps[:k], tuple(exps[k:])
        terms.setdefault(m, C.ring.zero)
        terms[m] = terms[m] + C.ring({pe: coef}) if k else terms[m] + C.ring(coef)
    return SpectralPolynomial(C, f.nvars, {m: FieldElement(C, RF(p, C.ring.one)) for m, p in terms.items()})


def squarefree_part(f: SpectralPolynomial) -> SpectralPolynomial:
    """f / gcd(f, df/dl, df/dmu_i), made monic in its mu-leading term."""
    if f.is_zero():
        raise ZeroInput("square-free part of zero")
    if not f.field.is_constants:
        f = f.to_constants()
    F, k = _to_sympy(f)
    R = F.ring
    g = F
    for idx in range(k, R.ngens):
        dF = F.diff(R.gens[idx])
        if dF:
            g = g.gcd(dF)
    sf = _from_sympy(F.exquo(g), f)
    lead = max(sf.terms, key=_mu_first)
    return sf * sf.terms[lead].inverse()


def _mu_first(m) -> tuple:
    return (sum(m[1:]), m[1:], m[0])
