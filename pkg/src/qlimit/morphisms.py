"""Generator-defined *-homomorphisms and the checks built on them.

The named maps are the comultiplication ``Δ_n``, the connecting surjection
``θ_n`` (level n → n−1), the naive section ``s`` (level n−1 → n) and
``π_n`` from the contraction system onto SU_q(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    ONE_POLY, ZERO_POLY, Gen, StarPolynomial, all_words, shift_legs,
    substitute, tensor,
)
from .errors import MorphismDomainError
from .presentations import Presentation, build_contraction, build_suq
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, timed
from .rewrite import (
    Certificate, NotFoundAtBound, RewriteSystem, _Echelon, complete_bounded,
    orient, span_membership,
)


@dataclass
class GenMorphism:
    name: str
    source: Presentation
    target: Presentation
    images: dict  # unstarred leg-1 Gen -> StarPolynomial
    legs_out: int = 1

    def __post_init__(self):
        for g in self.source.generators:
            if g not in self.images:
                raise MorphismDomainError(f"{self.name}: no image for {g!r}")

    def image(self, g: Gen) -> StarPolynomial:
        try:
            return self.images[g]
        except KeyError:
            raise MorphismDomainError(f"{self.name}: {g!r} is not a source generator") from None

    def __call__(self, p: StarPolynomial) -> StarPolynomial:
        return apply(self, p)


class _Identity:
    name = "id"
    legs_out = 1


IDENTITY = _Identity()


@dataclass
class TensorMorphism:
    """Legwise tensor product ``f_1 ⊗ f_2 ⊗ …`` of morphisms (or ``IDENTITY``)."""

    factors: tuple

    @property
    def name(self):
        return "(" + "⊗".join(f.name for f in self.factors) + ")"

    def __call__(self, p: StarPolynomial) -> StarPolynomial:
        offsets = [0]
        for f in self.factors:
            offsets.append(offsets[-1] + f.legs_out)

        def image(g: Gen) -> StarPolynomial:
            if not 1 <= g.leg <= len(self.factors):
                raise MorphismDomainError(f"{self.name}: letter on leg {g.leg}")
            f = self.factors[g.leg - 1]
            off = offsets[g.leg - 1]
            if f is IDENTITY:
                return StarPolynomial.letter(g.at_leg(1 + off))
            return shift_legs(f.image(g.base()), off)

        return substitute(p, image)


def apply(m, p: StarPolynomial) -> StarPolynomial:
    if isinstance(m, TensorMorphism):
        return m(p)

    def image(g: Gen) -> StarPolynomial:
        if g.leg != 1:
            raise MorphismDomainError(f"{m.name}: letter {g!r} is not in the plain algebra")
        return m.image(g)

    return substitute(p, image)


# ---------------------------------------------------------------------------
# named maps
# ---------------------------------------------------------------------------

def _letter(name, i, j, n):
    return StarPolynomial.letter(Gen(1, False, name, n, i, j))


@lru_cache(maxsize=None)
def _pres(family: str, n: int) -> Presentation:
    return build_suq(n) if family == "u" else build_contraction(n)


def comultiplication(n: int) -> GenMorphism:
    if n < 1:
        raise IndexError("comultiplication needs n >= 1")
    P = _pres("u", n)
    images = {}
    for g in P.generators:
        images[g] = sum((tensor(_letter("u", g.i, k, n), _letter("u", k, g.j, n))
                         for k in range(1, n + 1)), ZERO_POLY)
    return GenMorphism(f"Delta_{n}", P, P, images, legs_out=2)


def projection_theta(n: int, family: str = "u") -> GenMorphism:
    if n < 2:
        raise IndexError("theta_n is defined for n >= 2")
    src, tgt = _pres(family, n), _pres(family, n - 1)
    images = {}
    for g in src.generators:
        if g.i <= n - 1 and g.j <= n - 1:
            images[g] = _letter(family, g.i, g.j, n - 1)
        else:
            images[g] = ONE_POLY if g.i == g.j else ZERO_POLY
    return GenMorphism(f"theta_{n}" + ("" if family == "u" else "[w]"), src, tgt, images)


def section_naive(n: int, family: str = "u") -> GenMorphism:
    """The section ``s_{n-1}``: level n−1 → level n, ``x(i,j) ↦ x(i,j)``."""
    if n < 2:
        raise IndexError("sections are defined for n >= 2")
    src, tgt = _pres(family, n - 1), _pres(family, n)
    images = {g: _letter(family, g.i, g.j, n) for g in src.generators}
    return GenMorphism(f"s_{n - 1}" + ("" if family == "u" else "[w]"), src, tgt, images)


def pi(n: int) -> GenMorphism:
    if n < 1:
        raise IndexError("pi_n needs n >= 1")
    src, tgt = _pres("w", n), _pres("u", n)
    images = {g: _letter("u", g.i, g.j, n) for g in src.generators}
    return GenMorphism(f"pi_{n}", src, tgt, images)


# ---------------------------------------------------------------------------
# rewrite systems per level (cached)
# ---------------------------------------------------------------------------

DEFAULT_DEGREE = {1: 3, 2: 4, 3: 3}


def default_degree(n: int) -> int:
    return DEFAULT_DEGREE.get(n, 3)


@lru_cache(maxsize=None)
def level_system(family: str, n: int, degree: int | None = None,
                 det_tuples: str = "all") -> RewriteSystem:
    """Oriented (and, for degree ≥ 2, bounded-completed) system of a level."""
    if family == "w":
        return orient([])
    P = build_suq(n, det_tuples)
    S = orient(P.relations)
    if degree is None:
        degree = default_degree(n)
    if degree >= 2:
        S, _ = complete_bounded(S, degree, max_rules=5000)
    return S


def target_system(m, degree: int | None = None) -> RewriteSystem:
    fam = m.target.generators[0].name if m.target.generators else "u"
    S = level_system(fam, m.target.level, degree)
    return S.tensor_power(m.legs_out) if m.legs_out > 1 else S


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def well_defined(m: GenMorphism, S_target: RewriteSystem | None = None,
                 degree: int | None = None, witness_search: bool = True) -> CheckReport:
    """Do the images of the source relations lie in the target ideal?"""
    with timed() as t:
        S = S_target if S_target is not None else target_system(m, degree)
        verdicts, residues = [], []
        for rel in m.source.relations:
            if not rel.is_algebraic:
                verdicts.append((rel.label, "deferred"))
                continue
            nf = S.normal_form(apply(m, rel.body))
            if nf.is_zero():
                verdicts.append((rel.label, "zero"))
            else:
                verdicts.append((rel.label, "nonzero"))
                residues.append((rel, nf))
        status, witness, residual = PASS, None, None
        if residues:
            status = INCONCLUSIVE
            if witness_search:
                from .numeric import find_witness
                for rel, nf in residues:
                    found = find_witness(m.target, apply(m, rel.body), legs=m.legs_out)
                    if found is not None:
                        status = FAIL
                        witness = f"relation {rel.label}: {found[0]}"
                        residual = found[1]
                        break
    deferred = sum(1 for _, v in verdicts if v == "deferred")
    details = [f"{label}: {v}" for label, v in verdicts]
    details += [f"residual normal form of {rel.label}: {nf}" for rel, nf in residues[:5]]
    return CheckReport(
        f"welldef:{m.name}", status, witness=witness, residual=residual,
        degree_bound=_status_degree(S.confluence_status),
        confluence_status=S.confluence_status, runtime_ms=t["ms"], details=details,
        data={"relations": len(verdicts), "deferred_norm_bounds": deferred,
              "nonzero": len(residues),
              **({"note": "norm bounds deferred to numeric module"} if deferred else {})},
    )


def _status_degree(status: str) -> int | None:
    if "(" in status:
        return int(status.split("(")[1].rstrip(")"))
    return None


def level_generators(family: str, n: int, starred: bool = True) -> list[Gen]:
    gens = list(_pres(family, n).generators)
    return gens + [g.star() for g in gens] if starred else gens


def diagram_check(n: int) -> CheckReport:
    """(θ_n ⊗ θ_n)∘Δ_n = Δ_{n-1}∘θ_n on every generator, by free equality."""
    if n < 2:
        raise IndexError("diagram check needs n >= 2")
    with timed() as t:
        delta_n, delta_m = comultiplication(n), comultiplication(n - 1)
        th = projection_theta(n)
        thth = TensorMorphism((th, th))
        bad = []
        for g in level_generators("u", n):
            p = StarPolynomial.letter(g)
            lhs = thth(apply(delta_n, p))
            rhs = apply(delta_m, apply(th, p))
            if lhs != rhs:
                bad.append((g, lhs, rhs))
    status = FAIL if bad else PASS
    witness = f"{bad[0][0]}: {bad[0][1]} != {bad[0][2]}" if bad else None
    return CheckReport(f"diagram:n={n}", status, witness=witness, runtime_ms=t["ms"],
                       data={"generators": 2 * n * n, "mode": "free-algebra equality"})


def coassociativity_check(n: int) -> CheckReport:
    if n < 1:
        raise IndexError("coassociativity check needs n >= 1")
    with timed() as t:
        d = comultiplication(n)
        left = TensorMorphism((d, IDENTITY))
        right = TensorMorphism((IDENTITY, d))
        bad = []
        for g in level_generators("u", n):
            p = StarPolynomial.letter(g)
            dp = apply(d, p)
            a, b = left(dp), right(dp)
            expected = three_leg_sum(g.i, g.j, n)
            if g.starred:
                expected = expected.star()
            if not (a == b == expected):
                bad.append((g, a, b))
    status = FAIL if bad else PASS
    witness = f"{bad[0][0]}: {bad[0][1]} != {bad[0][2]}" if bad else None
    return CheckReport(f"coassoc:n={n}", status, witness=witness, runtime_ms=t["ms"],
                       data={"generators": 2 * n * n, "mode": "free-algebra equality"})


def three_leg_sum(i: int, j: int, n: int) -> StarPolynomial:
    return sum((tensor(_letter("u", i, k, n), _letter("u", k, l, n), _letter("u", l, j, n))
                for k in range(1, n + 1) for l in range(1, n + 1)), ZERO_POLY)


# ---------------------------------------------------------------------------
# density certificates
# ---------------------------------------------------------------------------

@dataclass
class DensityResult:
    n: int
    side: str
    degree_bound: int
    found_at: int | None
    certificates: list
    missing: list

    @property
    def found(self) -> bool:
        return self.found_at is not None


def _spanner(delta: GenMorphism, a, b, side: str) -> StarPolynomial:
    da = apply(delta, StarPolynomial.monomial(a))
    bp = StarPolynomial.monomial(b)
    extra = tensor(bp, ONE_POLY) if side == "left" else tensor(ONE_POLY, bp)
    return da * extra


def density_certificate(n: int, side: str, degree_bound: int,
                        S: RewriteSystem | None = None) -> DensityResult:
    """Search for elementary tensors in Δ(A)(A⊗1) (left) or Δ(A)(1⊗A) (right).

    Targets are ``1⊗u(i,j)`` for the left set and ``u(i,j)⊗1`` for the right
    set. Spanners ``Δ(a)(b⊗1)`` / ``Δ(a)(1⊗b)`` run over irreducible words
    ``a, b`` of degree ≤ the bound, raising the bound one step at a time.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    S1 = S if S is not None else level_system("u", n)
    S2 = S1.tensor_power(2)
    delta = comultiplication(n)
    letters = level_generators("u", n)
    targets = []
    for g in _pres("u", n).generators:
        p = StarPolynomial.letter(g)
        targets.append(tensor(ONE_POLY, p) if side == "left" else tensor(p, ONE_POLY))
    echelon = _Echelon()
    spanners, labels, nfs = [], [], []
    seen: set = set()
    found_at, certs, missing = None, [], list(range(len(targets)))
    for d in range(0, degree_bound + 1):
        words = [wd for wd in all_words(letters, d) if S1.is_irreducible(wd)]
        for a in words:
            for b in words:
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                sp = _spanner(delta, a, b, side)
                nf = S2.normal_form(sp)
                idx = len(spanners)
                spanners.append(sp)
                nfs.append(nf)
                labels.append(_span_label(a, b, side))
                echelon.add(nf.terms, idx)
        certs = []
        still = []
        for ti in missing:
            res = span_membership(targets[ti], spanners, d, S2, labels=labels,
                                  echelon=echelon, reduced_spanners=nfs)
            if isinstance(res, Certificate) and res.verified:
                certs.append(res)
            else:
                still.append(ti)
        if not still:
            found_at = d
            # recompute the full certificate list at this degree for the report
            certs = [span_membership(t_, spanners, d, S2, labels=labels, echelon=echelon,
                                     reduced_spanners=nfs) for t_ in targets]
            missing = []
            break
        missing = still
    return DensityResult(n, side, degree_bound, found_at, certs, [targets[i] for i in missing])


def _span_label(a, b, side):
    from .algebra import word_str
    sa, sb = word_str(a), word_str(b)
    return f"D({sa})({sb}#1)" if side == "left" else f"D({sa})(1#{sb})"


def density_report(n: int, side: str, degree_bound: int,
                   S: RewriteSystem | None = None) -> CheckReport:
    with timed() as t:
        S1 = S if S is not None else level_system("u", n)
        res = density_certificate(n, side, degree_bound, S1)
    data = {"n": n, "side": side, "bound": degree_bound}
    if res.found:
        data["found_at_degree"] = res.found_at
        data["certificate_terms"] = sum(len(c.coefficients) for c in res.certificates)
        details = [f"{c.target}: " + " + ".join(f"({x})*{lab}" for (_, x), lab in
                                               zip(c.coefficients, c.labels))
                   for c in res.certificates]
        return CheckReport(f"density:n={n}:{side}", PASS, degree_bound=degree_bound,
                           confluence_status=S1.confluence_status, runtime_ms=t["ms"],
                           details=details, data=data)
    data["missing_targets"] = len(res.missing)
    return CheckReport(f"density:n={n}:{side}", INCONCLUSIVE, degree_bound=degree_bound,
                       confluence_status=S1.confluence_status, runtime_ms=t["ms"],
                       details=[f"not found at bound: {p}" for p in res.missing], data=data)
