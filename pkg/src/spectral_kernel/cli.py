"""spectral-kernel: command line front-end.

Exit codes: 0 success, 1 usage, 2 session parse error, 3 math-domain error
(including a failed ``verify``).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .bccore import BCBasis, bc_ideal, bc_membership, phi_L, reduce_as_module
from .catalog import CATALOG
from .dres import diff_resultant, shifted, squarefree_part
from .errors import KernelError, SessionError
from .odo import GoodearlBasis
from .parser import Session, parse_session
from .specpoly import format_polynomial, is_groebner

# resultant cross-check is skipped above this matrix size
MAX_RESULTANT_SIZE = 14


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="spectral-kernel",
                   description="Burchnall-Chaundy ideals of commuting differential operators.")
    p.add_argument("command", choices=["bc-ideal", "reduce", "member", "verify", "example"])
    p.add_argument("name", nargs="?", help="catalog entry for 'example' (" + ", ".join(CATALOG) + ")")
    p.add_argument("--input", help="session file (default: stdin)")
    p.add_argument("--format", choices=["text", "json", "latex"], default="text")
    p.add_argument("--target", help="operator expression for 'reduce'")
    p.add_argument("--poly", help="polynomial in l, mu1, ... for 'member'")
    return p


# ---------------------------------------------------------------------------
# rendering helpers
# ---------------------------------------------------------------------------

def field_json(session: Session) -> dict:
    F = session.field
    out = {"variant": F.variant, "params": list(F.params)}
    if F.variant == "elliptic":
        out["invariants"] = [v.format() for v in F.invariants]
    out["declaration"] = session.field_decl
    return out


def bc_json(session: Session, bc: BCBasis) -> dict:
    B = bc.source
    relations = []
    for (i, j), R in sorted(bc.relations.items()):
        terms = [{"lambda": m[0], "mu": list(m[1:]), "coeff": c.format()} for m, c in R.sorted_terms(bc.order)]
        relations.append({"i": i, "j": j, "terms": terms})
    return {
        "field": field_json(session),
        "n": B.n,
        "t": B.t,
        "rank": B.rank,
        "orderGroup": list(B.order_group),
        "relations": relations,
    }


def _latex_block(lines: list[str]) -> str:
    body = " \\\\\n".join(line.replace(" = ", " &= ", 1) for line in lines)
    return "\\begin{align*}\n" + body + "\n\\end{align*}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_bc_ideal(session: Session, fmt: str = "text") -> str:
    bc = bc_ideal(session.goodearl_basis())
    if fmt == "json":
        return json.dumps(bc_json(session, bc), indent=2)
    if fmt == "latex":
        return _latex_block(bc.format(latex=True).splitlines())
    return bc.format()


def cmd_reduce(session: Session, target: str, fmt: str = "text") -> str:
    B = session.goodearl_basis()
    coords = reduce_as_module(session.operator(target), B)
    if fmt == "json":
        return json.dumps({
            "target": target,
            "coordinates": [
                {"label": lab, "poly": c.format(), "terms": [{"lambda": m[0], "coeff": v.format()}
                                                             for m, v in c.sorted_terms()]}
                for lab, c in zip(coords.labels, coords.coords)
            ],
        }, indent=2)
    if fmt == "latex":
        return _latex_block([f"p_{{{lab}}} = {c.format(latex=True)}" for lab, c in zip(coords.labels, coords.coords)])
    return coords.format()


def cmd_member(session: Session, poly: str, fmt: str = "text") -> str:
    bc = bc_ideal(session.goodearl_basis())
    p = session.polynomial(poly)
    ok, nf = bc_membership(p, bc)
    if fmt == "json":
        return json.dumps({"member": ok, "normalForm": format_polynomial(nf, bc.order, bc.labels)}, indent=2)
    if fmt == "latex":
        body = format_polynomial(nf, bc.order, bc.labels, latex=True)
        return ("p \\in \\mathrm{bc}(L)" if ok else "p \\notin \\mathrm{bc}(L)") + f",\\quad \\mathrm{{NF}}(p) = {body}"
    body = format_polynomial(nf, bc.order, bc.labels)
    return f"member; normal form: {body}" if ok else f"NOT a member; normal form: {body}"


def verify_checks(session: Session) -> list[tuple[str, bool, str]]:
    """(name, passed, detail) for every check that applies to the session."""
    results = []
    start = time.perf_counter()
    B: GoodearlBasis = session.goodearl_basis()
    results.append(("goodearl basis", True, f"n={B.n}, t={B.t}, rank={B.rank}, order group {list(B.order_group)}"))
    if B.t < 2:
        return results
    bc = bc_ideal(B)
    results.append(("groebner basis", is_groebner(bc.polys, bc.order), f"{len(bc.polys)} relations"))
    for (i, j), R in sorted(bc.relations.items()):
        results.append((f"phi_L(R{i},{j}) = 0", phi_L(R, B).is_zero(), ""))
    nv = B.t - 1
    for idx in range(1, B.t):
        size = B.n + B.orders[idx]
        lab = B.labels[idx]
        if size > MAX_RESULTANT_SIZE:
            results.append((f"resultant(L - l, G{lab} - mu{lab})", True, f"skipped, matrix size {size}"))
            continue
        r = diff_resultant(shifted(B.L, nv, 0), shifted(B.gens[idx], nv, idx))
        sf = squarefree_part(r)
        ok, _ = bc_membership(sf, bc)
        results.append((f"resultant(L - l, G{lab} - mu{lab})", ok,
                        "square-free part in bc(L)" if ok else "square-free part NOT in bc(L)"))
    results.append(("elapsed", True, f"{time.perf_counter() - start:.2f} s"))
    return results


def cmd_verify(session: Session, fmt: str = "text") -> tuple[str, bool]:
    results = verify_checks(session)
    passed = all(ok for _, ok, _ in results)
    if fmt == "json":
        return json.dumps({"passed": passed, "checks": [
            {"name": n, "passed": ok, "detail": d} for n, ok, d in results]}, indent=2), passed
    lines = []
    for name, ok, detail in results:
        if name == "elapsed":
            lines.append(f"elapsed: {detail}")
            continue
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    lines.append("all checks passed" if passed else "some checks FAILED")
    return "\n".join(lines), passed


def cmd_example(name: str | None) -> str:
    if name is None or name not in CATALOG:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(CATALOG)}")
    return CATALOG[name].rstrip("\n")


def _read_session(path: str | None) -> Session:
    try:
        if path is None:
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SessionError(f"input is not valid UTF-8: {exc}") from exc
    return parse_session(text)


def run(args: argparse.Namespace) -> int:
    if args.command == "example":
        print(cmd_example(args.name))
        return 0
    if args.name is not None:
        raise UsageError(f"unexpected argument {args.name!r}")
    if args.command == "reduce" and not args.target:
        raise UsageError("reduce needs --target")
    if args.command == "member" and not args.poly:
        raise UsageError("member needs --poly")
    session = _read_session(args.input)
    if args.command == "bc-ideal":
        print(cmd_bc_ideal(session, args.format))
    elif args.command == "reduce":
        print(cmd_reduce(session, args.target, args.format))
    elif args.command == "member":
        print(cmd_member(session, args.poly, args.format))
    else:
        text, passed = cmd_verify(session, "json" if args.format == "json" else "text")
        print(text)
        return 0 if passed else 3
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except UsageError as exc:
        print(f"spectral-kernel: error: {exc}", file=sys.stderr)
        return 1
    except KernelError as exc:
        kind = "parse error" if isinstance(exc, SessionError) else "Error"
        print(f"{kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
