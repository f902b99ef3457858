"""Session texts: field declaration, operator bindings and a basis line.

    field exponential            # or: field elliptic(-g2, -g3) / field constants(c)
    L  = D^3 + 6/cosh(x)^2*D
    G1 = ...
    basis L: G1, G2

Expressions are kept as small syntax trees (tuples) so that a session can be
rendered back to text; evaluation happens once, at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .diffield import ConstantsField, DiffField, EllipticField, ExponentialField, FieldElement
from .errors import (
    MathDomainError,
    NonIntegerExponent,
    SessionSyntaxError,
    SugarOutsideField,
    UnknownSymbol,
)
from .odo import DiffOperator, GoodearlBasis, make_goodearl_basis
from .specpoly import SpectralPolynomial

SUGAR = ("cosh", "sinh", "sech")
RESERVED = {"D", "x", "field", "basis", "l", *SUGAR}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> list[Token]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        num, name, op = m.groups()
        if op is not None and op not in "+-*/^(),=:":
            raise SessionSyntaxError(f"unexpected character {op!r}", line, col0 + start)
        kind = "num" if num is not None else "name" if name is not None else "op"
        out.append(Token(kind, m.group(m.lastindex), line, col0 + start))
        pos = m.end()
    out.append(Token("end", "", line, col0 + len(text)))
    return out


# ---------------------------------------------------------------------------
# syntax trees
# ---------------------------------------------------------------------------
# ("num", int, pos) | ("name", str, pos) | ("call", fname, arg, pos) | ("neg", e) | (op, a, b)

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return SessionSyntaxError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            found = self.tok.text or "end of line"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "end"

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            inner = self.unary()
            return ("neg", inner) if op == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return ("^", base, self.unary())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ("num", int(t.text), (t.line, t.col))
        if t.kind == "name":
            self.advance()
            if self.tok.text == "(" and self.tok.kind == "op":
                self.advance()
                arg = self.expr()
                self.expect(")")
                return ("call", t.text, arg, (t.line, t.col))
            return ("name", t.text, (t.line, t.col))
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error(f"unexpected {t.text or 'end of line'!r}")


def parse_expression(text: str, line: int = 1, col0: int = 1):
    p = _Parser(tokenize(text, line, col0))
    node = p.expr()
    if not p.at_end():
        raise p.error(f"unexpected {p.tok.text!r}")
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def render_expr(node, parent: int = 0, right: bool = False) -> str:
    kind = node[0]
    if kind == "num":
        return str(node[1])
    if kind == "name":
        return node[1]
    if kind == "call":
        return f"{node[1]}({render_expr(node[2])})"
    if kind == "neg":
        text = "-" + render_expr(node[1], _PREC["neg"])
        return f"({text})" if parent > _PREC["+"] else text
    op, a, b = node
    prec = _PREC[op]
    if op == "^":
        text = f"{render_expr(a, prec + 1)}^{render_expr(b, prec)}"
    else:
        sep = f" {op} " if prec == 1 else op
        text = f"{render_expr(a, prec)}{sep}{render_expr(b, prec, right=True)}"
    if prec < parent or (right and prec == parent and op != "^"):
        return f"({text})"
    return text


def _where(node) -> tuple[int, int]:
    if node[0] in ("num", "name"):
        return node[2]
    if node[0] == "call":
        return node[3]
    return _where(node[1])


def _names(node) -> Iterator[str]:
    kind = node[0]
    if kind == "name":
        yield node[1]
    elif kind == "call":
        yield from _names(node[2])
    elif kind == "neg":
        yield from _names(node[1])
    elif kind != "num":
        yield from _names(node[1])
        yield from _names(node[2])


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _int_exponent(value, node) -> int:
    line, col = _where(node)
    c = value.coeff(0) if isinstance(value, DiffOperator) else value
    ok = (not isinstance(value, DiffOperator) or value.order <= 0)
    if ok and isinstance(c, FieldElement) and c.is_constant():
        q = c.to_constant()
        if q.data.num.is_ground and q.data.den.is_ground:
            frac = Fraction(int(q.data.num.LC) if q.data.num else 0, int(q.data.den.LC))
            if frac.denominator == 1:
                return int(frac)
    if isinstance(value, SpectralPolynomial) and value.is_constant_coefficient() and len(value.terms) <= 1:
        if not value.terms:
            return 0
        (m, c), = value.terms.items()
        if not any(m):
            return _int_exponent(c, node)
    raise NonIntegerExponent(f"line {line}, col {col}: exponent must be an integer constant")


def _sugar(fname: str, E: FieldElement) -> FieldElement:
    inv = E.inverse()
    if fname == "cosh":
        return (E + inv) / 2
    if fname == "sinh":
        return (E - inv) / 2
    return 2 / (E + inv)


class OperatorEvaluator:
    """Evaluates trees to DiffOperators over ``field`` given earlier bindings."""

    def __init__(self, field: DiffField, bindings: dict | None = None):
        self.field = field
        self.bindings = bindings or {}

    def scalar(self, c) -> DiffOperator:
        return DiffOperator(self.field, [c])

    def __call__(self, node) -> DiffOperator:
        kind = node[0]
        K = self.field
        if kind == "num":
            return self.scalar(node[1])
        if kind == "name":
            name = node[1]
            if name == "D":
                return DiffOperator.d(K)
            if name in self.bindings:
                return self.bindings[name]
            try:
                return self.scalar(K.symbol(name))
            except KeyError:
                line, col = node[2]
                raise UnknownSymbol(f"line {line}, col {col}: unknown symbol {name!r}") from None
        if kind == "call":
            fname, arg, (line, col) = node[1], node[2], node[3]
            if fname not in SUGAR:
                raise UnknownSymbol(f"line {line}, col {col}: unknown function {fname!r}")
            if not isinstance(K, ExponentialField):
                raise SugarOutsideField(f"line {line}, col {col}: {fname}(x) needs the exponential field")
            if arg[0] != "name" or arg[1] != "x":
                raise SessionSyntaxError(f"{fname} takes the variable x", *_where(arg))
            return self.scalar(_sugar(fname, K.gen()))
        if kind == "neg":
            return -self(node[1])
        op, a, b = node
        if op == "^":
            base = self(a)
            k = _int_exponent(self(b), b)
            if k < 0:
                if base.order != 0:
                    raise NonIntegerExponent(
                        "line {}, col {}: negative powers apply only to field elements".format(*_where(b)))
                return self.scalar(base.coeff(0).inverse() ** (-k))
            return base ** k
        x, y = self(a), self(b)
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if y.is_zero():
            raise MathDomainError("division by zero")
        if y.order != 0:
            line, col = _where(b)
            raise SessionSyntaxError("only division by field elements is allowed", line, col)
        return x.scale(y.coeff(0).inverse())


class PolynomialEvaluator:
    """Evaluates trees to polynomials in l, mu<label> over the constants field."""

    def __init__(self, constants: DiffField, labels: tuple[int, ...]):
        self.C = constants
        self.labels = labels

    def __call__(self, node) -> SpectralPolynomial:
        kind = node[0]
        C, nv = self.C, len(self.labels)
        if kind == "num":
            return SpectralPolynomial.const(C, nv, node[1])
        if kind == "name":
            name = node[1]
            if name in ("l", "lambda"):
                return SpectralPolynomial.lam(C, nv)
            m = re.fullmatch(r"mu(\d+)", name)
            if m and int(m.group(1)) in self.labels:
                return SpectralPolynomial.mu(C, nv, self.labels.index(int(m.group(1))) + 1)
            if name in C.params:
                return SpectralPolynomial.const(C, nv, C.param(name))
            line, col = node[2]
            raise UnknownSymbol(f"line {line}, col {col}: unknown symbol {name!r}")
        if kind == "call":
            line, col = node[3]
            raise UnknownSymbol(f"line {line}, col {col}: no functions in polynomial expressions")
        if kind == "neg":
            return -self(node[1])
        op, a, b = node
        if op == "^":
            k = _int_exponent(self(b), b)
            if k < 0:
                raise NonIntegerExponent("line {}, col {}: negative exponent".format(*_where(b)))
            return self(a) ** k
        x, y = self(a), self(b)
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if y.is_zero():
            raise MathDomainError("division by zero")
        if any(any(m) for m in y.terms):
            raise SessionSyntaxError("only division by constants is allowed", *_where(b))
        return x * next(iter(y.terms.values())).inverse()


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------

@dataclass
class Session:
    field: DiffField
    field_decl: str
    bindings: dict = field(default_factory=dict)   # name -> DiffOperator
    trees: dict = field(default_factory=dict)      # name -> syntax tree
    basis: tuple[str, tuple[str, ...]] | None = None

    @property
    def L(self) -> DiffOperator:
        name = self.basis[0] if self.basis else "L"
        if name not in self.bindings:
            raise SessionSyntaxError("no operator L in the session")
        return self.bindings[name]

    def labels(self) -> tuple[int, ...]:
        """Display labels of the basis generators: trailing digits of the name if unique."""
        names = self.basis[1]
        digits = [re.search(r"(\d+)$", n) for n in names]
        if all(digits):
            labs = [int(d.group(1)) for d in digits]
            if len(set(labs)) == len(labs) and 0 not in labs:
                return tuple(labs)
        return tuple(range(1, len(names) + 1))

    def goodearl_basis(self) -> GoodearlBasis:
        if self.basis is None:
            raise SessionSyntaxError("the session has no basis line")
        gens = [DiffOperator(self.field, [1])] + [self.bindings[n] for n in self.basis[1]]
        return make_goodearl_basis(self.L, gens, labels=(0,) + self.labels())

    def operator(self, text: str) -> DiffOperator:
        return OperatorEvaluator(self.field, self.bindings)(parse_expression(text))

    def polynomial(self, text: str, labels: tuple[int, ...] | None = None) -> SpectralPolynomial:
        labels = self.labels() if labels is None else labels
        return PolynomialEvaluator(self.field.constants, labels)(parse_expression(text))


def _parse_field(rest: list[Token], line: int) -> tuple[DiffField, str]:
    if not rest or rest[0].kind != "name":
        raise SessionSyntaxError("expected a field variant", line, rest[0].col if rest else 1)
    variant = rest[0]
    p = _Parser(rest)
    p.advance()
    args = []
    if p.tok.text == "(":
        p.advance()
        args.append(p.expr())
        while p.tok.text == ",":
            p.advance()
            args.append(p.expr())
        p.expect(")")
    if not p.at_end():
        raise p.error(f"unexpected {p.tok.text!r}")
    kind = variant.text
    if kind in ("exponential", "constants"):
        names = []
        for a in args:
            if a[0] != "name":
                raise SessionSyntaxError("parameters must be plain names", *_where(a))
            names.append(a[1])
        _check_param_names(names, line)
        F = ExponentialField(names) if kind == "exponential" else ConstantsField(names)
    elif kind == "elliptic":
        if len(args) != 2:
            raise SessionSyntaxError("elliptic takes two invariants", variant.line, variant.col)
        names: list[str] = []
        for a in args:
            for n in _names(a):
                if n not in names:
                    names.append(n)
        _check_param_names(names, line)
        C = ConstantsField(names)
        ev = OperatorEvaluator(C)
        inv = []
        for a in args:
            op = ev(a)
            inv.append(op.coeff(0))
        F = EllipticField(names, invariants=tuple(inv))
    else:
        raise SessionSyntaxError(f"unknown field variant {kind!r}", variant.line, variant.col)
    return F, F.declaration()


def _check_param_names(names, line):
    for n in names:
        if n in RESERVED or n in ("E", "wp", "wpd"):
            raise SessionSyntaxError(f"{n!r} cannot be a parameter name", line, 1)
    if len(set(names)) != len(names):
        raise SessionSyntaxError("repeated parameter name", line, 1)


def parse_session(text: str) -> Session:
    session: Session | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        toks = tokenize(body, lineno)
        head = toks[0]
        if head.kind == "name" and head.text == "field" and toks[1].text != "=":
            if session is not None:
                raise SessionSyntaxError("only one field declaration is allowed", lineno, head.col)
            F, decl = _parse_field(toks[1:], lineno)
            session = Session(F, decl)
            continue
        if session is None:
            raise SessionSyntaxError("the session must start with a field declaration", lineno, head.col)
        if head.kind == "name" and head.text == "basis" and toks[1].text != "=":
            session.basis = _parse_basis(toks[1:], session, lineno)
            continue
        if head.kind != "name" or toks[1].text != "=":
            raise SessionSyntaxError("expected 'NAME = expression'", lineno, head.col)
        name = head.text
        if name in RESERVED or name in session.field.symbol_names() or name == "E":
            raise SessionSyntaxError(f"{name!r} is reserved", lineno, head.col)
        if name in session.bindings:
            raise SessionSyntaxError(f"{name!r} is already bound", lineno, head.col)
        p = _Parser(toks[2:])
        tree = p.expr()
        if not p.at_end():
            raise p.error(f"unexpected {p.tok.text!r}")
        session.bindings[name] = OperatorEvaluator(session.field, session.bindings)(tree)
        session.trees[name] = tree
    if session is None:
        raise SessionSyntaxError("empty session", 1, 1)
    return session


def _parse_basis(toks: list[Token], session: Session, line: int):
    if toks[0].kind != "name":
        raise SessionSyntaxError("expected the name of L", line, toks[0].col)
    L = toks[0]
    if toks[1].text != ":":
        raise SessionSyntaxError("expected ':'", line, toks[1].col)
    gens = []
    rest = toks[2:]
    i = 0
    while rest[i].kind != "end":
        t = rest[i]
        if t.kind != "name":
            raise SessionSyntaxError(f"unexpected {t.text!r}", line, t.col)
        gens.append(t)
        i += 1
        if rest[i].kind == "end":
            break
        if rest[i].text != ",":
            raise SessionSyntaxError("expected ','", line, rest[i].col)
        i += 1
    for t in [L] + gens:
        if t.text not in session.bindings:
            raise UnknownSymbol(f"line {t.line}, col {t.col}: {t.text!r} is not bound")
    if session.basis is not None:
        raise SessionSyntaxError("only one basis line is allowed", line, 1)
    return (L.text, tuple(t.text for t in gens))


def render_session(session: Session) -> str:
    lines = [session.field_decl]
    for name, tree in session.trees.items():
        lines.append(f"{name} = {render_expr(tree)}")
    if session.basis is not None:
        L, gens = session.basis
        lines.append(f"basis {L}: {', '.join(gens)}".rstrip())
    return "\n".join(lines) + "\n"
