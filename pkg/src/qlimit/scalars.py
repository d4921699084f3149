"""Exact arithmetic in the rational function field Q(q).

Polynomials in ``q`` are tuples of :class:`fractions.Fraction` coefficients,
lowest degree first, with no trailing zeros; ``()`` is the zero polynomial.
A :class:`RatFunc` is a reduced fraction of two such polynomials whose
denominator is monic. Equal field elements therefore have identical
representations, so ``==`` and ``hash`` are structural.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, EvaluationPole

Poly = tuple  # tuple[Fraction, ...], low degree first

_ZERO: Poly = ()
_ONE: Poly = (Fraction(1),)


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------

def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pscale(a: Poly, c) -> Poly:
    if not c:
        return _ZERO
    return tuple(x * c for x in a)


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return _ZERO
    if len(a) == 1:
        return pscale(b, a[0])
    if len(b) == 1:
        return pscale(a, b[0])
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(b):
        return _ZERO, a
    rem = list(a)
    lead = b[-1]
    db = len(b) - 1
    quot = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        c = c / lead
        quot[k - db] = c
        for i, y in enumerate(b):
            rem[k - db + i] -= c * y
    return _trim(quot), _trim(rem[:db])


def pmonic(a: Poly) -> Poly:
    if not a or a[-1] == 1:
        return a
    lead = a[-1]
    return tuple(x / lead for x in a)


def _valuation(a: Poly) -> int:
    for i, x in enumerate(a):
        if x:
            return i
    return len(a)


def _is_monomial(a: Poly) -> bool:
    return _valuation(a) == len(a) - 1


def pgcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over Q."""
    if not a:
        return pmonic(b)
    if not b:
        return pmonic(a)
    # monomial fast path: gcd(q^k, f) = q^min(k, ord f)
    if _is_monomial(a) or _is_monomial(b):
        k = min(_valuation(a), _valuation(b))
        return (Fraction(0),) * k + _ONE
    while b:
        _, r = pdivmod(a, b)
        a, b = b, pmonic(r)
    return pmonic(a)


def peval(a: Poly, x):
    acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pdegree(a: Poly) -> int:
    return len(a) - 1


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class RatFunc:
    """An element of Q(q) in reduced form with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if not den:
            raise DivisionByZero("zero denominator")
        n, d = _reduce(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _make(cls, num: Poly, den: Poly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def q(cls) -> "RatFunc":
        return cls._make((Fraction(0), Fraction(1)), _ONE)

    @classmethod
    def const(cls, c) -> "RatFunc":
        c = _as_fraction(c)
        return cls._make((c,) if c else _ZERO, _ONE)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0] if self.num else Fraction(0)

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den == _ONE and self.num == ((Fraction(other),) if other else _ZERO)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = padd(self.num, other.num)
            if self.den == _ONE:
                return RatFunc._make(num, _ONE)
            return RatFunc._from_unreduced(num, self.den)
        num = padd(pmul(self.num, other.den), pmul(other.num, self.den))
        return RatFunc._from_unreduced(num, pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(pneg(self.num), self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if self.den == _ONE and other.den == _ONE:
            return RatFunc._make(pmul(self.num, other.num), _ONE)
        return RatFunc._from_unreduced(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(q)")
        lead = self.num[-1]
        return RatFunc._make(pscale(self.den, 1 / lead), pmonic(self.num))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @classmethod
    def _from_unreduced(cls, num: Poly, den: Poly) -> "RatFunc":
        n, d = _reduce(num, den)
        return cls._make(n, d)

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, q0):
        """Value at ``q0``; exact for rationals, float/complex otherwise."""
        if isinstance(q0, (int, Fraction)):
            q0 = Fraction(q0)
            d = peval(self.den, q0)
            if d == 0:
                raise EvaluationPole(f"{self} has a pole at q={q0}")
            return peval(self.num, q0) / d
        if isinstance(q0, float):
            if peval(self.den, Fraction(q0)) == 0:
                raise EvaluationPole(f"{self} has a pole at q={q0}")
            return peval(self.num, q0) / peval(self.den, q0)
        d = peval(self.den, q0)
        if d == 0:
            raise EvaluationPole(f"{self} has a pole at q={q0}")
        return peval(self.num, q0) / d

    # -- printing -----------------------------------------------------------
    def __str__(self):
        n = _poly_str(self.num)
        if self.den == _ONE:
            return n
        if len(self.num) > 1 and _valuation(self.num) != len(self.num) - 1:
            n = f"({n})"
        return f"{n}/({_poly_str(self.den)})"

    def __repr__(self):
        return f"RatFunc({self})"

    def is_unit_monomial(self) -> bool:
        """True for ±c·q^k with rational c (Laurent monomial)."""
        return _is_monomial(self.num) and _is_monomial(self.den)


def _coerce_poly(x) -> Poly:
    if isinstance(x, tuple):
        return _trim(tuple(_as_fraction(c) for c in x))
    if isinstance(x, (list,)):
        return _trim(tuple(_as_fraction(c) for c in x))
    c = _as_fraction(x)
    return (c,) if c else _ZERO


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc.const(x)
    return NotImplemented


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not num:
        return _ZERO, _ONE
    if den == _ONE:
        return num, den
    g = pgcd(num, den)
    if len(g) > 1:
        num, _ = pdivmod(num, g)
        den, _ = pdivmod(den, g)
    lead = den[-1]
    if lead != 1:
        num = pscale(num, 1 / lead)
        den = pscale(den, 1 / lead)
    return num, den


def _poly_str(a: Poly) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ZERO = RatFunc._make(_ZERO, _ONE)
ONE = RatFunc._make(_ONE, _ONE)
Q = RatFunc.q()


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

def rf_reduce(num, den) -> RatFunc:
    """Canonical reduced form of ``num/den``; both are coefficient sequences."""
    return RatFunc(num, den)


def rf_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not _coerce(b):
            raise DivisionByZero("division by zero in Q(q)")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(f: RatFunc, q0):
    return f.evaluate(q0)


def minus_q_power(k: int) -> RatFunc:
    """(-q)^k as an element of Q(q)."""
    c = Fraction(-1) ** k
    if k >= 0:
        return RatFunc._make((Fraction(0),) * k + (c,), _ONE)
    return RatFunc._make((c,), (Fraction(0),) * (-k) + _ONE)
