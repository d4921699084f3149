"""Inverse systems of presented algebras and their coherent elements.

An :class:`InverseSystem` is a tower of presentations indexed by level
``1, 2, …`` joined by connecting maps ``θ_n`` (level n → n−1), optionally
with sections ``s_{n-1}`` (level n−1 → n). Elements of the limit are handled
through finite descriptions (:class:`CoherentElement`): one polynomial at a
base level, lower levels by θ-images, higher levels by section images when a
section tail is available.

Limit generators of the contraction (W) tower are the sequences
``γ_i(w^i(a,b))``; they are labelled by ``Gen('w', level=0, i=a, j=b)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .algebra import ONE_POLY, ZERO_POLY, Gen, StarPolynomial, substitute
from .errors import CoherenceError, NotARepresentation, SectionsUnavailable
from .morphisms import (
    IDENTITY, GenMorphism, TensorMorphism, _pres, apply, comultiplication,
    diagram_check, level_system, projection_theta, section_naive, well_defined,
)
from .numeric import (
    ACCEPT_TOL, REJECT_TOL, MatrixRep, contraction_rep_build, evaluate,
    find_witness, opnorm, rep_residual,
)
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, combine, timed
from .rewrite import RewriteSystem

VIA_SECTIONS = "via_sections"
_THETA_REPORTS: dict = {}
TRUNCATED = "truncated"


class InverseSystem:
    """Tower ``{A_n, θ_n}``; ``family`` is ``'u'`` (SU_q) or ``'w'`` (contractions)."""

    def __init__(self, family: str, depth: int, sections: str | None = None,
                 degree: int | None = None, thetas: dict | None = None,
                 validate: bool = True):
        if family not in ("u", "w"):
            raise ValueError("family must be 'u' or 'w'")
        self.family = family
        self.depth = depth
        self.sections = sections
        self.degree = degree
        self._thetas = dict(thetas or {})
        self._systems: dict[int, RewriteSystem] = {}
        if sections not in (None, "naive"):
            raise ValueError(f"unknown section scheme {sections!r}")
        if sections:
            for n in range(2, depth + 1):
                if not sections_are_right_inverse(self, n):
                    raise ValueError(f"theta_{n} o s_{n - 1} is not the identity")
        if validate:
            for n in range(2, depth + 1):
                rep = self.theta_report(n)
                if rep.status != PASS:
                    raise ValueError(f"theta_{n} is not well defined: {rep.witness}")

    def theta_report(self, n: int) -> CheckReport:
        """well_defined(θ_n) against level n−1; cached for the standard maps."""
        if n in self._thetas:
            return well_defined(self._thetas[n], self.system(n - 1))
        key = (self.family, n, self.degree)
        rep = _THETA_REPORTS.get(key)
        if rep is None:
            rep = _THETA_REPORTS[key] = well_defined(self.theta(n), self.system(n - 1))
        return rep

    @classmethod
    def suq(cls, depth: int, sections: str | None = None, **kw) -> "InverseSystem":
        return cls("u", depth, sections, **kw)

    @classmethod
    def contraction(cls, depth: int, **kw) -> "InverseSystem":
        return cls("w", depth, "naive", **kw)

    @property
    def has_delta(self) -> bool:
        return self.family == "u"

    def presentation(self, n: int):
        return _pres(self.family, n)

    def theta(self, n: int) -> GenMorphism:
        return self._thetas.get(n) or projection_theta(n, self.family)

    def section(self, n: int) -> GenMorphism:
        """``s_{n-1}``: level n−1 → n."""
        if not self.sections:
            raise SectionsUnavailable("this inverse system has no sections")
        return section_naive(n, self.family)

    def system(self, n: int) -> RewriteSystem:
        S = self._systems.get(n)
        if S is None:
            S = level_system(self.family, n, self.degree)
            self._systems[n] = S
        return S

    def nf(self, n: int, p: StarPolynomial) -> StarPolynomial:
        return self.system(n).normal_form(p)

    def down(self, p: StarPolynomial, frm: int, to: int) -> StarPolynomial:
        """θ_{to+1} ∘ … ∘ θ_{frm}."""
        for k in range(frm, to, -1):
            p = apply(self.theta(k), p)
        return p

    def up(self, p: StarPolynomial, frm: int, to: int) -> StarPolynomial:
        """s_{to-1} ∘ … ∘ s_{frm}."""
        for k in range(frm + 1, to + 1):
            p = apply(self.section(k), p)
        return p

    def transport(self, p: StarPolynomial, frm: int, to: int) -> StarPolynomial:
        return self.down(p, frm, to) if to <= frm else self.up(p, frm, to)

    def tensor_square(self) -> "TensorSquareSystem":
        return TensorSquareSystem(self)


class TensorSquareSystem:
    """The tower ``{A_n ⊗ A_n, θ_n ⊗ θ_n}``."""

    family = "u⊗u"
    sections = None

    def __init__(self, base: InverseSystem):
        self.base = base
        self.depth = base.depth
        self._systems: dict[int, RewriteSystem] = {}

    def theta(self, n: int) -> TensorMorphism:
        th = self.base.theta(n)
        return TensorMorphism((th, th))

    def system(self, n: int) -> RewriteSystem:
        S = self._systems.get(n)
        if S is None:
            S = self.base.system(n).tensor_power(2)
            self._systems[n] = S
        return S

    def nf(self, n: int, p: StarPolynomial) -> StarPolynomial:
        return self.system(n).normal_form(p)

    def down(self, p, frm, to):
        for k in range(frm, to, -1):
            p = apply(self.theta(k), p)
        return p


def sections_are_right_inverse(sys_: InverseSystem, n: int) -> bool:
    """θ_n ∘ s_{n−1} = id on the generators of level n−1."""
    s, th = sys_.section(n), sys_.theta(n)
    return all(apply(th, s.image(g)) == StarPolynomial.letter(g)
               for g in sys_.presentation(n - 1).generators)


# ---------------------------------------------------------------------------
# coherent elements
# ---------------------------------------------------------------------------

@dataclass
class CoherentElement:
    system: object
    base_level: int
    base_poly: StarPolynomial
    tail_rule: str = TRUNCATED
    explicit: dict = field(default_factory=dict)  # level -> given component

    def __post_init__(self):
        self.explicit.setdefault(self.base_level, self.base_poly)
        self._cache = dict(self.explicit)

    @classmethod
    def from_sequence(cls, system, components: dict, tail_rule: str = TRUNCATED):
        top = max(components)
        return cls(system, top, components[top], tail_rule, dict(components))

    @classmethod
    def constant(cls, system, c=1, level: int = 1):
        tail = VIA_SECTIONS if getattr(system, "sections", None) else TRUNCATED
        return cls(system, level, ONE_POLY.scale(c) if c else ZERO_POLY, tail)

    def component(self, k: int) -> StarPolynomial:
        hit = self._cache.get(k)
        if hit is not None:
            return hit
        if k < 1:
            raise IndexError("levels start at 1")
        if k < self.base_level:
            p = apply(self.system.theta(k + 1), self.component(k + 1))
        elif self.tail_rule == VIA_SECTIONS:
            p = apply(self.system.section(k), self.component(k - 1))
        else:
            raise CoherenceError(f"component at level {k} lies beyond a truncated tail")
        self._cache[k] = p
        return p

    def sequence(self, depth: int) -> list[StarPolynomial]:
        return [self.component(k) for k in range(1, depth + 1)]

    def __mul__(self, other: "CoherentElement") -> "CoherentElement":
        if self.system is not other.system:
            raise CoherenceError("elements of different inverse systems")
        top = max(self.base_level, other.base_level)
        tail = VIA_SECTIONS if (self.tail_rule == other.tail_rule == VIA_SECTIONS) else TRUNCATED
        if tail == TRUNCATED and (self.base_level != top and self.tail_rule == TRUNCATED
                                  or other.base_level != top and other.tail_rule == TRUNCATED):
            raise CoherenceError("cannot lift a truncated element above its base level")
        return CoherentElement(self.system, top, self.component(top) * other.component(top), tail)

    def star(self) -> "CoherentElement":
        return CoherentElement(self.system, self.base_level, self.base_poly.star(), self.tail_rule,
                               {k: v.star() for k, v in self.explicit.items()})

    def __str__(self):
        return f"<{self.base_poly} @ level {self.base_level}, tail={self.tail_rule}>"


def _nonzero_witness(system, level: int, diff: StarPolynomial):
    """A reason ``diff`` is nonzero in the level-``level`` algebra, or None."""
    if not diff.letters():
        return f"nonzero scalar {diff}", None
    fam = getattr(system, "family", "u")
    if fam == "w":
        return "contraction level has no algebraic relations", None
    if fam == "u":
        found = find_witness(_pres("u", level), diff)
        if found:
            return found
    return None


def check_coherence(e: CoherentElement, depth: int) -> CheckReport:
    """θ-compatibility of consecutive components, compared in normal form."""
    sys_ = e.system
    with timed() as t:
        top = depth if e.tail_rule == VIA_SECTIONS else min(e.base_level, depth)
        status, witness, residual = PASS, None, None
        details = []
        for k in range(top, 1, -1):
            hi, lo = e.component(k), e.component(k - 1)
            diff = sys_.nf(k - 1, apply(sys_.theta(k), hi)) - sys_.nf(k - 1, lo)
            if diff.is_zero():
                continue
            found = _nonzero_witness(sys_, k - 1, diff)
            details.append(f"level {k}->{k - 1}: theta({hi}) - ({lo}) = {diff}")
            if found:
                status = FAIL
                witness = f"theta_{k}({hi}) != {lo}: {found[0]}"
                residual = found[1]
                break
            status = INCONCLUSIVE
    return CheckReport("coherence", status, witness=witness, residual=residual,
                       runtime_ms=t["ms"], details=details,
                       data={"depth": depth, "bound": top, "base_level": e.base_level,
                             "tail": e.tail_rule})


def gamma_split(sys_: InverseSystem, i: int, g: Gen) -> CoherentElement:
    """The coherent generator sequence ``γ_i(g)``."""
    if not sys_.sections:
        raise SectionsUnavailable("gamma_i needs sections")
    if g.level != i or g.name != sys_.family:
        raise ValueError(f"{g!r} is not a level-{i} generator of the {sys_.family} tower")
    return CoherentElement(sys_, i, StarPolynomial.letter(g), VIA_SECTIONS)


def project(e: CoherentElement, i: int) -> StarPolynomial:
    """``p_i``: the level-i component."""
    return e.component(i)


def limit_label(e: CoherentElement, depth: int | None = None) -> Gen | None:
    """The limit generator a coherent generator sequence stands for (level 0)."""
    top = e.component(max(e.base_level, depth or 0))
    letters = top.letters()
    if len(top) == 1 and len(letters) == 1:
        g = next(iter(letters))
        return g._replace(level=0)
    return None


def iota(sys_: InverseSystem, g) -> CoherentElement:
    """ι: a compatible generator sequence (dict level -> generator) into the limit."""
    if isinstance(g, CoherentElement):
        e = g
        comps = {k: e.component(k) for k in range(1, e.base_level + 1)}
        tail = e.tail_rule
    else:
        comps = {k: (StarPolynomial.letter(v) if isinstance(v, Gen) else v) for k, v in g.items()}
        tail = VIA_SECTIONS if sys_.sections else TRUNCATED
    levels = sorted(comps)
    for k in levels:
        c = comps[k]
        if not _is_generator_or_unit(c, sys_.family, k):
            raise CoherenceError(f"level-{k} entry {c} is not a generator, 0 or 1")
    for a, b in zip(levels, levels[1:]):
        if b != a + 1:
            raise CoherenceError(f"sequence skips levels {a}..{b}")
        if apply(sys_.theta(b), comps[b]) != comps[a]:
            raise CoherenceError(
                f"theta_{b}({comps[b]}) = {apply(sys_.theta(b), comps[b])} != {comps[a]}")
    top = levels[-1]
    base = comps[top]
    comps_below = {k: v for k, v in comps.items()}
    e = CoherentElement(sys_, top, base, tail, comps_below)
    if levels[0] > 1:
        for k in range(levels[0], 1, -1):
            e.component(k - 1)
    return e


def _is_generator_or_unit(c: StarPolynomial, family: str, level: int) -> bool:
    if c.is_zero() or c == ONE_POLY:
        return True
    if len(c) != 1:
        return False
    (word, coeff), = c.terms.items()
    return (len(word) == 1 and coeff == 1 and not word[0].starred
            and word[0].name == family and word[0].level == level)


# ---------------------------------------------------------------------------
# relations along iterated sections
# ---------------------------------------------------------------------------

def hypothesis_check(sys_: InverseSystem, depth: int, degree: int | None = None,
                     samples: int = 8, seed: int = 0) -> CheckReport:
    """Do the iterated θ/s images of G_i satisfy R_i at every level j ≤ depth?"""
    if not sys_.sections:
        raise SectionsUnavailable("the section check needs a tower with sections")
    with timed() as t:
        parts = []
        for i in range(1, depth + 1):
            rels = sys_.presentation(i).relations
            for j in range(1, depth + 1):
                if j == i:
                    continue
                parts.append(_hyp_pair(sys_, i, j, rels, samples, seed))
    if not parts:
        return CheckReport("sections_respect_relations", PASS, runtime_ms=t["ms"],
                           data={"depth": depth, "note": "no iteration at depth 1"})
    rep = combine("sections_respect_relations", parts, runtime_ms=t["ms"])
    rep.data.update({"depth": depth, "family": sys_.family,
                     "sections": sys_.sections})
    fails = [p for p in parts if p.status == FAIL]
    if fails:
        # report the failure landing at the deepest level
        top = max(fails, key=lambda p: (p.data["j"], p.data["i"]))
        rep.witness = f"{top.check}: {top.witness}"
        rep.residual = top.residual
    rep.parts = parts
    return rep


def _hyp_pair(sys_, i, j, rels, samples, seed) -> CheckReport:
    S = sys_.system(j)
    checked, norm_samples, worst_norm = 0, 0, -np.inf
    status, witness, residual, details = PASS, None, None, []
    pres_j = sys_.presentation(j)
    for rel in rels:
        checked += 1
        if rel.is_algebraic:
            img = sys_.transport(rel.body, i, j)
            nf = S.normal_form(img)
            if nf.is_zero():
                continue
            details.append(f"{rel.label}: image normal form {nf}")
            found = find_witness(pres_j, img, samples=samples, seed=seed)
            if found:
                status = FAIL
                witness = f"relation {rel.label} of level {i} at level {j}: {found[0]}"
                residual = found[1]
                break
            status = INCONCLUSIVE
        else:
            img = sys_.transport(StarPolynomial.letter(rel.subject), i, j)
            if _norm_symbolic_ok(img, rel.bound, pres_j):
                # numeric discharge of the same bound on sampled contractions
                for k in range(samples):
                    rep = contraction_rep_build(j, 1 + k % 3, seed + 1000 * j + k, pres_j)
                    val = opnorm(rep.evaluate(img)) - float(rel.bound)
                    worst_norm = max(worst_norm, val)
                    norm_samples += 1
                continue
            worst = -np.inf
            for k in range(samples):
                rep = contraction_rep_build(j, 1 + k % 3, seed + k, pres_j)
                val = opnorm(rep.evaluate(img)) - float(rel.bound)
                worst = max(worst, val)
                if val > REJECT_TOL:
                    status, witness, residual = FAIL, f"{rel.label} violated by {rep}", val
                    break
            if status == FAIL:
                break
            status = INCONCLUSIVE
            details.append(f"{rel.label}: no violation found in {samples} samples")
    data = {"i": i, "j": j, "relations": checked, "direction": "down" if j < i else "up"}
    if norm_samples:
        data["norm_samples"] = norm_samples
        data["max_norm_excess"] = f"{worst_norm:.3e}"
    if status == INCONCLUSIVE:
        data["bound"] = f"confluence {S.confluence_status}, {samples} witness samples"
    return CheckReport(f"sections_respect_relations:i={i}:j={j}", status, witness=witness, residual=residual,
                       confluence_status=S.confluence_status, details=details, data=data)


def _norm_symbolic_ok(img: StarPolynomial, bound, pres) -> bool:
    if not img.letters():
        c = img.coefficient(())
        return (not c) or (c.is_constant() and abs(c.constant_value()) <= bound)
    if len(img) != 1:
        return False
    (word, c), = img.terms.items()
    if len(word) != 1 or c != 1:
        return False
    g = word[0].base()
    bounds = [r.bound for r in pres.norm_relations if r.subject == g]
    return bool(bounds) and min(bounds) <= bound


# ---------------------------------------------------------------------------
# validation of a tower
# ---------------------------------------------------------------------------

def validate_system(sys_: InverseSystem, depth: int, degree: int | None = None) -> CheckReport:
    with timed() as t:
        parts = []
        for k in range(2, depth + 1):
            parts.append(sys_.theta_report(k))
        if sys_.has_delta:
            for k in range(1, depth + 1):
                parts.append(well_defined(comultiplication(k), sys_.system(k).tensor_power(2)))
            for k in range(2, depth + 1):
                parts.append(diagram_check(k))
        if sys_.sections:
            ok = all(sections_are_right_inverse(sys_, k) for k in range(2, depth + 1))
            parts.append(CheckReport("theta_o_section=id", PASS if ok else FAIL,
                                     witness=None if ok else "theta o s differs from id"))
            bad = _split_failures(sys_, depth)
            parts.append(CheckReport("p_i_o_gamma_i=id", FAIL if bad else PASS,
                                     witness=bad[0] if bad else None))
    rep = combine(f"system:{sys_.family}:N={depth}", parts, runtime_ms=t["ms"])
    rep.data["depth"] = depth
    return rep


def _split_failures(sys_, depth):
    bad = []
    for i in range(1, depth + 1):
        for g in sys_.presentation(i).generators:
            e = gamma_split(sys_, i, g)
            if project(e, i) != StarPolynomial.letter(g):
                bad.append(f"p_{i}(gamma_{i}({g})) != {g}")
    return bad


# ---------------------------------------------------------------------------
# κ and the limit comultiplication
# ---------------------------------------------------------------------------

def limit_rep(rep: MatrixRep) -> dict:
    """Images of limit generators (level-0 labels) read off a level-L rep."""
    return {g._replace(level=0): m for g, m in rep.images.items()}


def rho_of(rep: MatrixRep, g: Gen) -> np.ndarray:
    m = rep.images[g._replace(level=rep.presentation.level, leg=1, starred=False)]
    return m.conj().T if g.starred else m


def kappa_factor(rho: MatrixRep, e: CoherentElement, tol: float = ACCEPT_TOL) -> np.ndarray:
    """κ(e) = ρ(e): evaluate the component at ρ's level through ρ∘γ."""
    res = rep_residual(rho, tol)
    if not res.passed:
        raise NotARepresentation(f"rho violates relations (max residual {res.max_residual:.3e})")
    L = rho.presentation.level
    if e.base_level > L and e.tail_rule != VIA_SECTIONS:
        raise CoherenceError("element lives above the representation's level")
    if e.base_level > L:
        raise ValueError(f"representation covers levels up to {L}, element needs {e.base_level}")
    return evaluate(e.component(L), [rho])


def random_coherent_words(sys_: InverseSystem, count: int, max_level: int, seed: int,
                          max_len: int = 4):
    """Seeded products of limit generators; returns (element, [limit letters])."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        letters, e = [], None
        for _ in range(rng.randint(1, max_len)):
            a, b = rng.randint(1, max_level), rng.randint(1, max_level)
            lvl = max(a, b)
            g = Gen(1, False, sys_.family, lvl, a, b)
            piece = gamma_split(sys_, lvl, g)
            starred = rng.random() < 0.3
            if starred:
                piece = piece.star()
            letters.append(Gen(1, starred, sys_.family, 0, a, b))
            e = piece if e is None else e * piece
        out.append((e, letters))
    return out


def direct_eval(rho: MatrixRep, letters) -> np.ndarray:
    m = np.eye(rho.dim, dtype=complex)
    for g in letters:
        m = m @ rho_of(rho, g)
    return m


def limit_delta_apply(sys_: InverseSystem, e: CoherentElement, depth: int | None = None) -> CoherentElement:
    """Apply Δ levelwise; the result lives in the tensor-square tower."""
    if not sys_.has_delta:
        raise ValueError("this tower carries no comultiplication")
    sq = sys_.tensor_square()
    top = e.base_level
    comps = {k: apply(comultiplication(k), e.component(k)) for k in range(1, top + 1)}
    out = CoherentElement(sq, top, comps[top], TRUNCATED, comps)
    for k in range(top, 1, -1):
        lhs = sq.nf(k - 1, apply(sq.theta(k), comps[k]))
        if lhs != sq.nf(k - 1, comps[k - 1]):
            raise CoherenceError(f"Delta image not coherent between levels {k} and {k - 1}")
    return out


def generator_sequence(sys_: InverseSystem, g: Gen, depth: int) -> CoherentElement:
    """(g^n)_n for n ≤ depth as an explicit coherent generator sequence (SU_q tower)."""
    comps = {}
    for n in range(1, depth + 1):
        if g.i <= n and g.j <= n:
            comps[n] = StarPolynomial.letter(g._replace(level=n))
        else:
            comps[n] = ONE_POLY if g.i == g.j else ZERO_POLY
    return CoherentElement.from_sequence(sys_, comps)
