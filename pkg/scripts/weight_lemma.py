"""Tabulate the unique mu-linear monomial T_W of each weight W and check ord(phi_L(T_W)) = W.

    python3 scripts/weight_lemma.py elliptic --max-weight 60
"""

import argparse
import time

from spectral_kernel.bccore import phi_L_top, weighted_order
from spectral_kernel.catalog import CATALOG
from spectral_kernel.parser import parse_session
from spectral_kernel.specpoly import SpectralPolynomial, format_polynomial, monomial_of_weight


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("example", choices=sorted(CATALOG))
    ap.add_argument("--max-weight", type=int, default=200)
    ap.add_argument("--top", type=int, default=2, help="number of exact leading coefficients to carry")
    args = ap.parse_args()

    B = parse_session(CATALOG[args.example]).goodearl_basis()
    order = weighted_order(B)
    C, nv = B.field.constants, B.t - 1
    t0 = time.perf_counter()
    mismatches = 0
    for W in range(args.max_weight + 1):
        T = monomial_of_weight(W, order)
        if T is None:
            print(f"{W:4d}  -")
            continue
        mono = SpectralPolynomial.monomial(C, nv, T)
        got = phi_L_top(mono, B, args.top).order
        mismatches += got != W
        print(f"{W:4d}  {format_polynomial(mono, order, B.labels[1:]):<14} ord {got}")
    print(f"{mismatches} mismatches, {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
