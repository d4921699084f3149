"""Expression grammar shared by the CLI.

    sum      := ['+'|'-'] tensor (('+'|'-') tensor)*
    tensor   := product ('#' product)*
    product  := unary (('.'|'*'|'/'|<juxtaposition>) unary)*
    unary    := '-' unary | power
    power    := postfix ['^' ['-'] INT]
    postfix  := atom "'"*
    atom     := INT | 'q' | 'x' | ('u'|'w') '(' INT ',' INT ')' | '(' sum ')'

``/`` only divides by scalars; negative powers only apply to scalars.
"""

from __future__ import annotations

import re

from .algebra import Gen, StarPolynomial, tensor
from .errors import ParseError, UnknownGenerator
from .presentations import CIRCLE
from .scalars import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")
_FAMILIES = ("u", "w")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        num, name, sym = m.groups()
        start = m.start(1 if num else 2 if name else 3)
        if num:
            out.append(_Tok("int", num, start))
        elif name:
            out.append(_Tok("name", name, start))
        else:
            out.append(_Tok("sym", sym, start))
        pos = m.end()
    out.append(_Tok("end", "", len(text.rstrip()) if text.strip() else len(text)))
    return out


def _location(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, level: int | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.level = level if level is not None else self._infer_level()

    def _infer_level(self) -> int:
        best = 1
        t = self.toks
        for k in range(len(t) - 5):
            if (t[k].kind == "name" and t[k].text in _FAMILIES and t[k + 1].text == "("
                    and t[k + 2].kind == "int" and t[k + 3].text == "," and t[k + 4].kind == "int"):
                best = max(best, int(t[k + 2].text), int(t[k + 4].text))
        return best

    # helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, pos: int | None = None):
        pos = self.peek().pos if pos is None else pos
        line, col = _location(self.text, pos)
        raise ParseError(msg, line, col)

    def expect(self, sym: str, opened: _Tok | None = None) -> _Tok:
        tok = self.peek()
        if tok.text != sym or tok.kind == "end":
            if opened is not None and tok.kind == "end":
                self.error(f"unclosed '{opened.text}'", opened.pos)
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            self.error(f"expected {sym!r}, found {found}")
        return self.next()

    # grammar
    def parse(self) -> StarPolynomial:
        if self.peek().kind == "end":
            self.error("empty expression")
        p = self.sum()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return p

    def sum(self) -> StarPolynomial:
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "sym":
            sign = -1 if self.next().text == "-" else 1
        acc = self.tensor()
        acc = -acc if sign < 0 else acc
        while self.peek().kind == "sym" and self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.tensor()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def tensor(self) -> StarPolynomial:
        factors = [self.product()]
        while self.peek().text == "#" and self.peek().kind == "sym":
            self.next()
            factors.append(self.product())
        return factors[0] if len(factors) == 1 else tensor(*factors)

    def _starts_atom(self, tok: _Tok) -> bool:
        return tok.kind in ("int", "name") or tok.text == "("

    def product(self) -> StarPolynomial:
        acc = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in (".", "*"):
                self.next()
                acc = acc * self.unary()
            elif tok.kind == "sym" and tok.text == "/":
                self.next()
                den = self.unary()
                if den.letters():
                    self.error("can only divide by a scalar", tok.pos)
                c = den.coefficient(())
                if not c:
                    self.error("division by zero", tok.pos)
                acc = acc.scale(c.inverse())
            elif self._starts_atom(tok):
                acc = acc * self.unary()
            else:
                return acc

    def unary(self) -> StarPolynomial:
        if self.peek().kind == "sym" and self.peek().text == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> StarPolynomial:
        base = self.postfix()
        if self.peek().kind == "sym" and self.peek().text == "^":
            caret = self.next()
            neg = False
            if self.peek().text == "-":
                self.next()
                neg = True
            tok = self.next()
            if tok.kind != "int":
                self.error("expected an integer exponent", tok.pos)
            k = int(tok.text)
            if neg:
                if base.letters():
                    self.error("negative powers need a scalar base", caret.pos)
                c = base.coefficient(())
                if not c:
                    self.error("division by zero", caret.pos)
                return StarPolynomial.constant(c ** (-k))
            return base ** k
        return base

    def postfix(self) -> StarPolynomial:
        p = self.atom()
        while self.peek().kind == "sym" and self.peek().text == "'":
            self.next()
            p = p.star()
        return p

    def atom(self) -> StarPolynomial:
        tok = self.next()
        if tok.kind == "int":
            return StarPolynomial.constant(int(tok.text))
        if tok.kind == "name":
            if tok.text == "q":
                return StarPolynomial.constant(RatFunc.q())
            if tok.text == "x":
                return StarPolynomial.letter(CIRCLE)
            if tok.text in _FAMILIES:
                return self.generator(tok)
            raise UnknownGenerator(f"unknown generator {tok.text!r} at "
                                   f"line {_location(self.text, tok.pos)[0]}, "
                                   f"column {_location(self.text, tok.pos)[1]}")
        if tok.text == "(":
            inner = self.sum()
            self.expect(")", tok)
            return inner
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        self.error(f"unexpected {found}", tok.pos)

    def generator(self, name: _Tok) -> StarPolynomial:
        opened = self.expect("(")
        i = self._index(opened)
        self.expect(",", opened)
        j = self._index(opened)
        self.expect(")", opened)
        n = self.level
        if not (1 <= i <= n and 1 <= j <= n):
            raise UnknownGenerator(f"{name.text}({i},{j}) is not a generator at level {n}")
        return StarPolynomial.letter(Gen(1, False, name.text, n, i, j))

    def _index(self, opened) -> int:
        tok = self.peek()
        if tok.kind == "end":
            self.error(f"unclosed '{opened.text}'", opened.pos)
        if tok.kind != "int":
            self.error("expected an integer index")
        return int(self.next().text)


def parse_expression(text: str, n: int | None = None) -> StarPolynomial:
    """Parse ``text``; generators live at level ``n`` (default: largest index used)."""
    return _Parser(text, n).parse()


def parse_ratfunc(text: str) -> RatFunc:
    p = parse_expression(text)
    if p.letters():
        raise ParseError("expected a scalar in q", 1, 1)
    return p.coefficient(()) or RatFunc.const(0)
