"""The free associative *-algebra over Q(q), with tensor powers.

A :class:`Gen` is a letter: a named, indexed generator (``u(i,j)`` at some
level, ``w(i,j)``, or the circle generator ``x``) together with an adjoint
flag and a tensor leg. Field order is chosen so that plain tuple comparison
is the generator order used by the rewriting engine::

    leg-1 letters < leg-2 letters < leg-3 letters
    unstarred < starred
    then row-major in (i, j)

A word is a tuple of letters; the empty word is the unit. Tensor powers live
in the same free algebra: letters of different legs commute, and every stored
word keeps its letters grouped by leg (stable sort), which is the
cross-commutation normal form.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import ContextMismatch
from .scalars import ONE, ZERO, RatFunc, _coerce


class Gen(NamedTuple):
    leg: int
    starred: bool
    name: str
    level: int
    i: int
    j: int

    def star(self) -> "Gen":
        return self._replace(starred=not self.starred)

    def base(self) -> "Gen":
        """The unstarred leg-1 version of this letter."""
        if self.leg == 1 and not self.starred:
            return self
        return self._replace(leg=1, starred=False)

    def at_leg(self, leg: int) -> "Gen":
        return self._replace(leg=leg)

    @property
    def family(self) -> tuple[str, int]:
        return (self.name, self.level)

    def __str__(self):
        s = self.name if not self.i else f"{self.name}({self.i},{self.j})"
        return s + ("'" if self.starred else "")

    def __repr__(self):
        lv = f"^{self.level}" if self.level else ""
        leg = f"@{self.leg}" if self.leg != 1 else ""
        return f"{self.name}{lv}({self.i},{self.j}){'*' if self.starred else ''}{leg}"


def gen(name: str, i: int = 0, j: int = 0, level: int = 0, starred: bool = False,
        leg: int = 1) -> Gen:
    return Gen(leg, starred, name, level, i, j)


def u(i, j, n, starred=False, leg=1) -> Gen:
    return Gen(leg, starred, "u", n, i, j)


def w(i, j, n, starred=False, leg=1) -> Gen:
    return Gen(leg, starred, "w", n, i, j)


Word = tuple  # tuple[Gen, ...]


def word_key(word: Word):
    """Sort key of the degree-lexicographic term order."""
    return (len(word), word)


def word_star(word: Word) -> Word:
    return tuple(g.star() for g in reversed(word))


def leg_sorted(word: Word) -> Word:
    """Cross-commutation normal form: group letters by leg, order kept."""
    for a, b in zip(word, word[1:]):
        if a.leg > b.leg:
            return tuple(sorted(word, key=lambda g: g.leg))
    return word


def word_str(word: Word) -> str:
    if not word:
        return "1"
    legs = {g.leg for g in word}
    if len(legs) == 1 and 1 in legs:
        return ".".join(str(g) for g in word)
    top = max(legs)
    blocks = []
    for leg in range(1, top + 1):
        part = [g for g in word if g.leg == leg]
        blocks.append(".".join(str(g) for g in part) if part else "1")
    return " # ".join(blocks)


class StarPolynomial:
    """Finite Q(q)-linear combination of words.

    ``terms`` maps each word to its nonzero coefficient. Instances are
    treated as immutable.
    """

    __slots__ = ("terms", "_hash", "_families")

    def __init__(self, terms: Mapping[Word, RatFunc] | None = None):
        clean = {}
        if terms:
            for word, c in terms.items():
                c = _coerce(c)
                if c:
                    clean[word] = c
        self.terms = clean
        self._hash = None
        self._families = None

    @classmethod
    def _raw(cls, terms: dict) -> "StarPolynomial":
        obj = object.__new__(cls)
        obj.terms = terms
        obj._hash = None
        obj._families = None
        return obj

    @classmethod
    def constant(cls, c) -> "StarPolynomial":
        c = _coerce(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def letter(cls, g: Gen) -> "StarPolynomial":
        return cls._raw({(g,): ONE})

    @classmethod
    def monomial(cls, word: Iterable[Gen], c=ONE) -> "StarPolynomial":
        return cls({leg_sorted(tuple(word)): c})

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Word, RatFunc]]:
        """Terms in descending term order (canonical presentation)."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def leading(self) -> tuple[Word, RatFunc]:
        word = max(self.terms, key=word_key)
        return word, self.terms[word]

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word: Word) -> RatFunc:
        return self.terms.get(word, ZERO)

    def letters(self) -> set[Gen]:
        return {g for word in self.terms for g in word}

    def families(self) -> frozenset:
        if self._families is None:
            self._families = frozenset(g.family for word in self.terms for g in word)
        return self._families

    def legs(self) -> set[int]:
        return {g.leg for word in self.terms for g in word}

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, StarPolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, RatFunc)):
            return self.terms == StarPolynomial.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for word, c in other.terms.items():
            s = out.get(word)
            if s is None:
                out[word] = c
            else:
                s = s + c
                if s:
                    out[word] = s
                else:
                    del out[word]
        return StarPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return StarPolynomial._raw({w_: -c for w_, c in self.terms.items()})

    def __sub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "StarPolynomial":
        c = _coerce(c)
        if not c:
            return ZERO_POLY
        if c == ONE:
            return self
        return StarPolynomial._raw({w_: x * c for w_, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, RatFunc)):
            return self.scale(other)
        if not isinstance(other, StarPolynomial):
            return NotImplemented
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, RatFunc)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ONE_POLY
        for _ in range(k):
            out = out * self
        return out

    def star(self) -> "StarPolynomial":
        return poly_star(self)

    # -- printing -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k, (word, c) in enumerate(self.sorted_terms()):
            cs = str(c)
            neg = cs.startswith("-") and " " not in cs
            if neg:
                cs = cs[1:]
            if " " in cs:
                cs = f"({cs})"
            body = word_str(word) if word else ""
            if not body:
                term = cs
            elif cs == "1":
                term = body
            else:
                term = f"{cs}*{body}"
            if k == 0:
                out.append(("-" if neg else "") + term)
            else:
                out.append((" - " if neg else " + ") + term)
        return "".join(out)

    def __repr__(self):
        return f"StarPolynomial({self})"


def as_poly(x):
    if isinstance(x, StarPolynomial):
        return x
    if isinstance(x, (int, RatFunc)):
        return StarPolynomial.constant(x)
    if isinstance(x, Gen):
        return StarPolynomial.letter(x)
    return NotImplemented


ZERO_POLY = StarPolynomial._raw({})
ONE_POLY = StarPolynomial._raw({(): ONE})


def _check_context(p: StarPolynomial, r: StarPolynomial) -> None:
    fp, fr = p.families(), r.families()
    if fp and fr and (len(fp | fr) > 1):
        raise ContextMismatch(
            f"cannot multiply polynomials over different generator families "
            f"{sorted(fp)} and {sorted(fr)}")


def poly_mul(p: StarPolynomial, r: StarPolynomial) -> StarPolynomial:
    """Concatenation product, with letters regrouped by tensor leg."""
    if not p.terms or not r.terms:
        return ZERO_POLY
    _check_context(p, r)
    out: dict = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in r.terms.items():
            word = leg_sorted(w1 + w2) if w1 and w2 else w1 + w2
            c = c1 * c2
            s = out.get(word)
            if s is None:
                out[word] = c
            else:
                s = s + c
                if s:
                    out[word] = s
                else:
                    del out[word]
    return StarPolynomial._raw(out)


def poly_star(p: StarPolynomial) -> StarPolynomial:
    # q is a real parameter: coefficient conjugation is the identity
    return StarPolynomial._raw({leg_sorted(word_star(w_)): c for w_, c in p.terms.items()})


def relabel_legs(p: StarPolynomial, mapping: Callable[[int], int]) -> StarPolynomial:
    return StarPolynomial._raw(
        {leg_sorted(tuple(g.at_leg(mapping(g.leg)) for g in w_)): c for w_, c in p.terms.items()})


def shift_legs(p: StarPolynomial, offset: int) -> StarPolynomial:
    if not offset:
        return p
    return relabel_legs(p, lambda leg: leg + offset)


def tensor_product(p: StarPolynomial, r: StarPolynomial) -> StarPolynomial:
    """``p ⊗ r`` for polynomials already carrying disjoint leg tags."""
    lp, lr = p.legs(), r.legs()
    if lp & lr:
        raise ContextMismatch(f"leg collision in tensor product: legs {sorted(lp & lr)}")
    if lp and lr and max(lp) > min(lr):
        raise ContextMismatch("left tensor factor must use lower legs than the right factor")
    return poly_mul(p, r)


def tensor(*factors: StarPolynomial) -> StarPolynomial:
    """Tensor product of plain (or tensor) polynomials, shifting legs left to right."""
    out = ONE_POLY
    offset = 0
    for f in factors:
        f = as_poly(f)
        out = tensor_product(out, shift_legs(f, offset))
        offset += max(f.legs(), default=1)
    return out


def substitute(p: StarPolynomial, image: Callable[[Gen], StarPolynomial]) -> StarPolynomial:
    """Multiplicative, *-compatible extension of a letter map.

    ``image`` is called on unstarred letters (any leg); starred letters get
    the adjoint of the image.
    """
    cache: dict[Gen, StarPolynomial] = {}

    def img(g: Gen) -> StarPolynomial:
        r = cache.get(g)
        if r is None:
            if g.starred:
                r = poly_star(img(g.star()))
            else:
                r = image(g)
            cache[g] = r
        return r

    out = ZERO_POLY
    for word, c in p.terms.items():
        term = StarPolynomial._raw({(): c})
        for g in word:
            term = poly_mul(term, img(g))
            if not term.terms:
                break
        out = out + term
    return out


def word_poly(word: Iterable[Gen]) -> StarPolynomial:
    return StarPolynomial.monomial(word)


def all_words(letters: list[Gen], max_degree: int) -> list[Word]:
    """Every word of length ≤ ``max_degree``, in increasing term order."""
    out: list[Word] = [()]
    layer: list[Word] = [()]
    ordered = sorted(letters)
    for _ in range(max_degree):
        layer = [w_ + (g,) for w_ in layer for g in ordered]
        out.extend(layer)
    return out
