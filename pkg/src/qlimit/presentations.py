"""Presented *-algebras: generator lists plus relation lists.

The structural generators 0 and 1 are not stored: the unit is the empty word
and 0 is the zero polynomial, so every relation on them holds by
construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ONE_POLY, Gen, StarPolynomial, gen, poly_star, u, w
from .scalars import ONE, ZERO, RatFunc, minus_q_power

ALGEBRAIC = "algebraic"
NORM_BOUND = "norm_bound"


@dataclass(frozen=True)
class Relation:
    kind: str
    label: str
    body: StarPolynomial | None = None
    subject: Gen | None = None
    bound: Fraction | None = None

    def __post_init__(self):
        if self.kind == ALGEBRAIC:
            if self.body is None or self.body.is_zero():
                raise ValueError(f"relation {self.label!r}: trivial algebraic relation")
        elif self.kind == NORM_BOUND:
            if self.subject is None or self.bound is None or self.bound <= 0:
                raise ValueError(f"relation {self.label!r}: norm bound must be positive")
        else:
            raise ValueError(f"unknown relation kind {self.kind!r}")

    @property
    def is_algebraic(self) -> bool:
        return self.kind == ALGEBRAIC

    def __str__(self):
        if self.is_algebraic:
            return f"{self.body} = 0"
        return f"||{self.subject}|| <= {self.bound}"


def algebraic(body: StarPolynomial, label: str) -> Relation:
    return Relation(ALGEBRAIC, label, body=body)


def norm_bound(subject: Gen, bound=1, label: str = "") -> Relation:
    return Relation(NORM_BOUND, label or f"norm {subject}", subject=subject,
                    bound=Fraction(bound))


class Presentation:
    """A generator list with relations; relations may be built lazily.

    Large levels (the SU_q(5) determinant family has 5^5 members) are only
    expanded when a caller actually asks for ``relations``.
    """

    def __init__(self, name: str, level: int, generators: list[Gen], relations=None,
                 weakly_admissible: bool = True, admissibility_note: str = "",
                 meta: dict | None = None, factory=None):
        self.name = name
        self.level = level
        self.generators = list(generators)
        self._relations = list(relations) if relations is not None else None
        self._factory = factory
        self.weakly_admissible = weakly_admissible
        self.admissibility_note = admissibility_note
        self.meta = dict(meta or {})

    @property
    def relations(self) -> list[Relation]:
        if self._relations is None:
            self._relations = list(self._factory()) if self._factory else []
            self.check()
        return self._relations

    @property
    def algebraic_relations(self) -> list[Relation]:
        return [r for r in self.relations if r.is_algebraic]

    @property
    def norm_relations(self) -> list[Relation]:
        return [r for r in self.relations if not r.is_algebraic]

    @property
    def letters(self) -> list[Gen]:
        """Generators and their adjoints, in term order."""
        return sorted(self.generators + [g.star() for g in self.generators])

    @property
    def star_closed(self) -> bool:
        return is_star_closed(self.algebraic_relations)

    def check(self) -> None:
        known = set(self.generators)
        for r in self._relations or ():
            used = r.body.letters() if r.is_algebraic else {r.subject}
            for g in used:
                if g.base() not in known:
                    raise ValueError(f"relation {r.label!r} uses unknown generator {g!r}")

    def __repr__(self):
        return f"Presentation({self.name}, n={self.level}, {len(self.generators)} generators)"


def _monic(p: StarPolynomial) -> StarPolynomial:
    _, c = p.leading()
    return p.scale(c.inverse())


def is_star_closed(relations: list[Relation]) -> bool:
    """Every f* equals some relation up to a nonzero scalar."""
    normed = {_monic(r.body) for r in relations}
    return all(_monic(poly_star(r.body)) in normed for r in relations)


def star_close(relations: list[Relation]) -> list[Relation]:
    out = list(relations)
    normed = {_monic(r.body) for r in relations}
    for r in relations:
        s = poly_star(r.body)
        m = _monic(s)
        if m not in normed:
            normed.add(m)
            out.append(algebraic(s, r.label + "*"))
    return out


# ---------------------------------------------------------------------------
# E-symbol
# ---------------------------------------------------------------------------

def inversion_count(t) -> int:
    t = tuple(t)
    return sum(1 for a in range(len(t)) for b in range(a + 1, len(t)) if t[a] > t[b])


def e_symbol(t, n: int) -> RatFunc:
    t = tuple(t)
    if len(t) != n:
        raise IndexError(f"E-symbol at level {n} needs {n} indices, got {len(t)}")
    for x in t:
        if not 1 <= x <= n:
            raise IndexError(f"index {x} out of range 1..{n}")
    if len(set(t)) < n:
        return ZERO
    return minus_q_power(inversion_count(t))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def unitarity_relations(n: int) -> list[Relation]:
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            body = sum((StarPolynomial.monomial((u(i, k, n), u(j, k, n, True)))
                        for k in range(1, n + 1)), StarPolynomial())
            if i == j:
                body = body - ONE_POLY
            rels.append(algebraic(body, f"row({i},{j})"))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            body = sum((StarPolynomial.monomial((u(k, i, n, True), u(k, j, n)))
                        for k in range(1, n + 1)), StarPolynomial())
            if i == j:
                body = body - ONE_POLY
            rels.append(algebraic(body, f"col({i},{j})"))
    return rels


def determinant_relation(jt, n: int) -> StarPolynomial:
    """Σ_i E_i u(j1,i1)…u(jn,in) − E_j·1 for one j-tuple."""
    terms = {}
    for perm in itertools.permutations(range(1, n + 1)):
        word = tuple(u(jt[a], perm[a], n) for a in range(n))
        terms[word] = e_symbol(perm, n)
    body = StarPolynomial(terms)
    ej = e_symbol(jt, n)
    if ej:
        body = body - StarPolynomial.constant(ej)
    return body


def determinant_relations(n: int, tuples: str = "all") -> list[Relation]:
    rels = []
    for jt in itertools.product(range(1, n + 1), repeat=n):
        if tuples == "distinct" and len(set(jt)) < n:
            continue
        body = determinant_relation(jt, n)
        if body:
            rels.append(algebraic(body, "det(" + ",".join(map(str, jt)) + ")"))
    return rels


def build_suq(n: int, det_tuples: str = "all") -> Presentation:
    if n < 1:
        raise IndexError("SU_q(n) needs n >= 1")
    if det_tuples not in ("all", "distinct"):
        raise ValueError("det_tuples must be 'all' or 'distinct'")
    def factory():
        base = unitarity_relations(n) + determinant_relations(n, det_tuples)
        pres.meta["base_relation_count"] = len(base)
        return star_close(base)

    pres = Presentation(
        name="suq", level=n,
        generators=[u(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)],
        weakly_admissible=True,
        admissibility_note="unitarity bounds generator norms",
        meta={"det_tuples": det_tuples},
        factory=factory,
    )
    return pres


def build_contraction(n: int) -> Presentation:
    if n < 1:
        raise IndexError("contraction system needs n >= 1")
    gens = [w(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)]
    return Presentation(
        name="contraction", level=n, generators=gens,
        relations=[norm_bound(g, 1, f"norm({g.i},{g.j})") for g in gens],
        weakly_admissible=True,
        admissibility_note="norm-bound relations only, each generator bounded by 1",
    )


CIRCLE = gen("x")


def build_circle() -> Presentation:
    x, xs = StarPolynomial.letter(CIRCLE), StarPolynomial.letter(CIRCLE.star())
    return Presentation(
        name="circle", level=1, generators=[CIRCLE],
        relations=[algebraic(xs * x - ONE_POLY, "x'x=1"), algebraic(x * xs - ONE_POLY, "xx'=1")],
        weakly_admissible=True,
        admissibility_note="unitarity is algebraic and bounds the generator norm",
    )


def build_preset(name: str, n: int = 2, det_tuples: str = "all") -> Presentation:
    if name == "suq":
        return build_suq(n, det_tuples)
    if name == "contraction":
        return build_contraction(n)
    if name == "circle":
        return build_circle()
    raise ValueError(f"unknown preset {name!r}")

