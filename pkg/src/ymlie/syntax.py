"""Plain-text expression grammar and its printer.

::

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := rational | 'x' digit | 'A[' int ',' int ']'
             | 'd(' expr ',' digit ')' | 'p(' name ')'
             | 'fn(' name ';' ints ';' ints ';' ints ';' pairs ';' int ')'
             | '(' expr ')'
    rational := int ['/' int]

``d(e, mu)`` is the total derivative D_mu.  ``fn(...)`` spells a formal
function atom: name, upper indices, lower indices, x-derivatives,
field derivatives as ``n.alpha`` pairs, and the number of field multiplets it
depends on, e.g. ``fn(H;0;;1;2.3;3)`` is d/dx^1 d/dA_2^3 of H^0.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import groupby
from typing import List, Optional

from . import symkernel as sk
from .symkernel import Coordinate, Expr, FormalFunc, Jet, Param


class ExprSyntaxError(ValueError):
    """Text that does not parse; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UnknownSymbolError(ExprSyntaxError):
    pass


class IndexRangeError(ExprSyntaxError):
    pass


class MalformedRationalError(ExprSyntaxError):
    pass


# --------------------------------------------------------------------------
# printing


def _ints(xs) -> str:
    return ",".join(str(x) for x in xs)


def atom_to_text(a) -> str:
    kind = a[0]
    if kind == sk.COORD:
        return f"x{a[1]}"
    if kind == sk.JET:
        s = f"A[{a[1]},{a[2]}]"
        for lam in a[3]:
            s = f"d({s},{lam})"
        return s
    if kind == sk.PARAM:
        return f"p({a[1]})"
    pairs = ",".join(f"{n}.{al}" for n, al in a[5])
    return f"fn({a[1]};{_ints(a[2])};{_ints(a[3])};{_ints(a[4])};{pairs};{a[6]})"


def _coef_text(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def to_text(e: Expr) -> str:
    """Canonical one-line rendering; ``parse(to_text(e)) == e``."""
    if not e.terms:
        return "0"
    parts: List[str] = []
    for m, c in e.sorted_terms():
        neg = c < 0
        mag = -c if neg else c
        factors = [atom_to_text(a) for a in m]
        if mag != 1 or not factors:
            factors.insert(0, _coef_text(mag))
        body = "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<num>\d+(?:/\d*)?(?:\.\d*)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[-+*(),\[\];.])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


class Parser:
    """Recursive-descent parser; ``n_fields`` bounds algebra indices."""

    def __init__(self, text: str, n_fields: Optional[int] = None, line: int = 1,
                 col_offset: int = 0, order: int = sk.DEFAULT_ORDER):
        self.text = text
        self.n_fields = n_fields
        self.line = line
        self.col_offset = col_offset
        self.order = order
        self.toks = self._lex(text)
        self.i = 0

    def _err(self, cls, msg, pos):
        return cls(msg, self.line, self.col_offset + pos + 1)

    def _lex(self, text):
        toks = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise self._err(UnknownSymbolError, f"unexpected character {text[pos]!r}", pos)
            kind = mt.lastgroup
            if kind != "ws":
                toks.append(_Tok(kind, mt.group(), pos))
            pos = mt.end()
        toks.append(_Tok("end", "", len(text)))
        return toks

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            found = t.text or "end of input"
            raise self._err(ExprSyntaxError, f"expected {text!r}, found {found!r}", t.pos)
        return t

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise self._err(ExprSyntaxError, f"unexpected {t.text!r}", t.pos)
        return e

    def expr(self) -> Expr:
        acc = sk.Accumulator()
        sign = 1
        if self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            sign = -1 if self.next().text == "-" else 1
        acc.add(self.term(), sign)
        while self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            sign = -1 if self.next().text == "-" else 1
            acc.add(self.term(), sign)
        return acc.result()

    def term(self) -> Expr:
        e = self.factor()
        while self.peek().text == "*":
            self.next()
            e = e * self.factor()
        return e

    def rational(self, t) -> Fraction:
        text = t.text
        if "." in text or text.endswith("/"):
            raise self._err(MalformedRationalError, f"malformed rational {text!r}", t.pos)
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise self._err(MalformedRationalError, f"zero denominator in {text!r}", t.pos)
            return Fraction(int(num), int(den))
        return Fraction(int(text))

    def integer(self) -> int:
        t = self.next()
        if t.kind != "num" or not t.text.isdigit():
            raise self._err(ExprSyntaxError, f"expected an integer, found {t.text!r}", t.pos)
        return int(t.text)

    def spacetime(self, value, pos) -> int:
        if not 0 <= value <= 3:
            raise self._err(IndexRangeError, f"spacetime index {value} out of range 0..3", pos)
        return value

    def algebra(self, value, pos) -> int:
        if self.n_fields is not None and not 0 <= value < self.n_fields:
            raise self._err(IndexRangeError,
                            f"algebra index {value} out of range 0..{self.n_fields - 1}", pos)
        return value

    def factor(self) -> Expr:
        t = self.next()
        if t.kind == "num":
            return Expr.const(self.rational(t))
        if t.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            name = t.text
            if re.fullmatch(r"x\d+", name):
                return sk.coord(self.spacetime(int(name[1:]), t.pos))
            if name == "A":
                self.expect("[")
                pa = self.peek().pos
                a = self.algebra(self.integer(), pa)
                self.expect(",")
                pn = self.peek().pos
                nu = self.spacetime(self.integer(), pn)
                self.expect("]")
                return Expr.atom(Jet(a, nu))
            if name == "d":
                self.expect("(")
                inner = self.expr()
                self.expect(",")
                pl = self.peek().pos
                lam = self.spacetime(self.integer(), pl)
                self.expect(")")
                return sk.total_derivative(inner, lam, self.order)
            if name == "p":
                self.expect("(")
                nt = self.next()
                if nt.kind != "name":
                    raise self._err(ExprSyntaxError, "expected a parameter name", nt.pos)
                self.expect(")")
                return Expr.atom(Param(nt.text))
            if name == "fn":
                return Expr.atom(self.formal())
            raise self._err(UnknownSymbolError, f"unknown symbol {name!r}", t.pos)
        found = t.text or "end of input"
        raise self._err(ExprSyntaxError, f"unexpected {found!r}", t.pos)

    def _int_list(self, stop=";"):
        out = []
        while self.peek().text != stop:
            out.append(self.integer())
            if self.peek().text == ",":
                self.next()
        self.expect(stop)
        return tuple(out)

    def formal(self) -> FormalFunc:
        self.expect("(")
        nt = self.next()
        if nt.kind != "name":
            raise self._err(ExprSyntaxError, "expected a function name", nt.pos)
        self.expect(";")
        upper = self._int_list()
        lower = self._int_list()
        xd = self._int_list()
        pairs = []
        while self.peek().text != ";":
            # the lexer reads "2.3" as one malformed number token; split it
            t = self.next()
            m = re.fullmatch(r"(\d+)\.(\d+)", t.text)
            if not m:
                raise self._err(ExprSyntaxError, f"expected n.alpha pair, found {t.text!r}",
                                t.pos)
            pairs.append((int(m.group(1)), self.spacetime(int(m.group(2)), t.pos)))
            if self.peek().text == ",":
                self.next()
        self.expect(";")
        nf = self.integer()
        self.expect(")")
        for mu in xd:
            self.spacetime(mu, nt.pos)
        try:
            return FormalFunc(nt.text, upper, lower, xd, pairs, nf)
        except ValueError as exc:
            raise self._err(ExprSyntaxError, str(exc), nt.pos) from None


def parse(text: str, n_fields: Optional[int] = None, **kw) -> Expr:
    return Parser(text, n_fields, **kw).parse()


def monomial_text(m) -> str:
    if not m:
        return "1"
    out = []
    for a, grp in groupby(m):
        k = len(list(grp))
        out.append(atom_to_text(a) if k == 1 else "*".join([atom_to_text(a)] * k))
    return "*".join(out)
