"""Concrete matrix representations used as numerical oracles.

Three families are available: classical SU(n) points at q = 1 (1×1 images
``u(i,j) ↦ g_ij``), diagonal torus characters valid at every q, and seeded
random contractions for the W system. Residuals use the operator norm
(largest singular value).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Gen, StarPolynomial
from .errors import NotARepresentation
from .presentations import Presentation
from .scalars import RatFunc

ACCEPT_TOL = 1e-9
REJECT_TOL = 1e-6


@dataclass
class MatrixRep:
    presentation: Presentation
    dim: int
    images: dict  # unstarred leg-1 Gen -> (dim, dim) complex array
    q_value: float = 1.0
    seed: int | None = None
    label: str = ""
    _coeffs: dict = field(default_factory=dict, repr=False)

    def image(self, g: Gen) -> np.ndarray:
        m = self.images[g.base()]
        return m.conj().T if g.starred else m

    def coeff(self, c: RatFunc):
        v = self._coeffs.get(c)
        if v is None:
            if self.q_value == 1.0:
                v = float(c.evaluate(Fraction(1)))
            else:
                v = c.evaluate(float(self.q_value))
            self._coeffs[c] = v
        return v

    def evaluate(self, p: StarPolynomial) -> np.ndarray:
        return evaluate(p, [self])

    def __str__(self):
        return self.label or f"rep(dim={self.dim}, q={self.q_value}, seed={self.seed})"


def evaluate(p: StarPolynomial, reps) -> np.ndarray:
    """Evaluate a (tensor) polynomial; leg k uses ``reps[k-1]``, legs combine by kron."""
    reps = list(reps)
    dims = [r.dim for r in reps]
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    for word, c in p.terms.items():
        blocks = []
        for k, rep in enumerate(reps, start=1):
            m = np.eye(rep.dim, dtype=complex)
            for g in word:
                if g.leg == k:
                    m = m @ rep.image(g)
            blocks.append(m)
        for g in word:
            if g.leg > len(reps):
                raise ValueError(f"no representation supplied for leg {g.leg}")
        term = blocks[0]
        for b in blocks[1:]:
            term = np.kron(term, b)
        out += reps[0].coeff(c) * term
    return out


def opnorm(m: np.ndarray) -> float:
    if m.size == 1:
        return float(abs(m.reshape(-1)[0]))
    return float(np.linalg.norm(m, 2))


# ---------------------------------------------------------------------------
# classical points
# ---------------------------------------------------------------------------

@dataclass
class ClassicalPoint:
    g: np.ndarray
    label: str = ""

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def residuals(self) -> tuple[float, float]:
        n = self.n
        return (float(np.linalg.norm(self.g @ self.g.conj().T - np.eye(n), 2)),
                float(abs(np.linalg.det(self.g) - 1)))


def random_special_unitary(n: int, seed: int) -> ClassicalPoint:
    if n < 1:
        raise IndexError("n must be >= 1")
    rng = np.random.default_rng(seed)
    while True:
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        qm, r = np.linalg.qr(z)
        d = np.diag(r)
        if np.min(np.abs(d)) > 1e-8:
            break
    qm = qm * (d / np.abs(d))
    det = np.linalg.det(qm)
    qm[:, -1] *= np.conj(det) / abs(det)
    return ClassicalPoint(qm, f"SU({n}) seed={seed}")


def cyclic_permutation_point(n: int) -> ClassicalPoint:
    """The cyclic permutation matrix e_k ↦ e_{k+1}, sign-fixed into SU(n)."""
    g = np.zeros((n, n), dtype=complex)
    for k in range(n):
        g[(k + 1) % n, k] = 1.0
    if n % 2 == 0:
        g[0, :] *= -1  # the n-cycle has sign (-1)^(n-1)
    rows = ";".join(",".join(_fmt_entry(x) for x in row) for row in g)
    return ClassicalPoint(g, f"cyclic permutation point [{rows}]")


def _fmt_entry(x: complex) -> str:
    x = complex(x) + 0.0  # drop negative zeros
    if abs(x.imag) < 1e-15:
        return f"{x.real:g}"
    return f"{x.real:g}{x.imag:+g}i"


def block_embed(pt: ClassicalPoint) -> ClassicalPoint:
    n = pt.n
    g = np.eye(n + 1, dtype=complex)
    g[:n, :n] = pt.g
    return ClassicalPoint(g, f"diag({pt.label},1)")


def classical_rep(pt: ClassicalPoint, pres: Presentation) -> MatrixRep:
    images = {g: np.array([[pt.g[g.i - 1, g.j - 1]]]) for g in pres.generators}
    return MatrixRep(pres, 1, images, q_value=1.0, label=pt.label or "classical point")


def _point_rep(pt: ClassicalPoint, name: str = "u") -> MatrixRep:
    n = pt.n
    images = {Gen(1, False, name, n, i, j): np.array([[pt.g[i - 1, j - 1]]])
              for i in range(1, n + 1) for j in range(1, n + 1)}
    return MatrixRep(None, 1, images, q_value=1.0, label=pt.label)


def classical_eval(pt, p: StarPolynomial) -> complex:
    """Evaluate at q = 1; ``pt`` is a point or a tuple of points (one per leg)."""
    pts = pt if isinstance(pt, (tuple, list)) else (pt,)
    reps = [_point_rep(x) for x in pts]
    legs = p.legs()
    if legs and max(legs) > len(reps):
        raise ValueError("not enough points for the tensor legs of the polynomial")
    levels = {g.level for g in p.letters()}
    for x in pts:
        if levels and levels != {x.n}:
            raise ValueError(f"polynomial levels {sorted(levels)} do not match point size {x.n}")
    return complex(evaluate(p, reps)[0, 0])


def delta_pointwise_check(g: ClassicalPoint, h: ClassicalPoint, n: int) -> float:
    from .morphisms import apply, comultiplication

    if g.n != n or h.n != n:
        raise ValueError("points must be n×n")
    gh = g.g @ h.g
    delta = comultiplication(n)
    worst = 0.0
    for gen in delta.source.generators:
        i, j = gen.i - 1, gen.j - 1
        direct = sum(g.g[i, k] * h.g[k, j] for k in range(n))
        via = classical_eval((g, h), apply(delta, StarPolynomial.letter(gen)))
        worst = max(worst, abs(direct - gh[i, j]), abs(via - gh[i, j]))
    return worst


def theta_embedding_check(pt: ClassicalPoint) -> float:
    from .morphisms import apply, projection_theta

    n = pt.n + 1
    big = block_embed(pt)
    th = projection_theta(n)
    worst = 0.0
    for gen in th.source.generators:
        lhs = classical_eval(big, StarPolynomial.letter(gen))
        img = apply(th, StarPolynomial.letter(gen))
        rhs = classical_eval(pt, img) if img.letters() else _scalar(img)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _scalar(p: StarPolynomial) -> complex:
    c = p.coefficient(())
    return complex(float(c.evaluate(Fraction(1)))) if c else 0j


# ---------------------------------------------------------------------------
# torus and contraction representations
# ---------------------------------------------------------------------------

def torus_rep_build(n: int, phases, q_value: float, pres: Presentation | None = None,
                    tol: float = 1e-12) -> MatrixRep:
    from .presentations import build_suq

    t = np.asarray(phases, dtype=complex)
    if t.shape != (n,):
        raise NotARepresentation(f"need {n} phases")
    if np.max(np.abs(np.abs(t) - 1)) > tol:
        raise NotARepresentation("torus phases must have modulus 1")
    if abs(np.prod(t) - 1) > tol:
        raise NotARepresentation(f"phase product {np.prod(t):.6g} != 1")
    pres = pres or build_suq(n)
    images = {g: np.array([[t[g.i - 1] if g.i == g.j else 0]], dtype=complex)
              for g in pres.generators}
    return MatrixRep(pres, 1, images, q_value=q_value,
                     label=f"torus{tuple(np.round(t, 6))} q={q_value}")


def random_torus_rep(n: int, q_value: float, seed: int, pres=None) -> MatrixRep:
    rng = np.random.default_rng(seed)
    ang = rng.uniform(0, 2 * np.pi, n)
    ang[-1] = -np.sum(ang[:-1])
    rep = torus_rep_build(n, np.exp(1j * ang), q_value, pres)
    rep.seed = seed
    return rep


def contraction_rep_build(n: int, dim: int, seed: int, pres: Presentation | None = None) -> MatrixRep:
    from .presentations import build_contraction

    if dim < 1:
        raise ValueError("dim must be >= 1")
    pres = pres or build_contraction(n)
    rng = np.random.default_rng(seed)
    images = {}
    for g in pres.generators:
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        s = np.linalg.norm(m, 2)
        images[g] = m * (rng.uniform(0.25, 0.999) / s)
    return MatrixRep(pres, dim, images, q_value=1.0, seed=seed,
                     label=f"contraction(n={n}, dim={dim}, seed={seed})")


@dataclass
class ResidualReport:
    residuals: dict  # relation label -> residual
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def rep_residual(rep: MatrixRep, tol: float = ACCEPT_TOL, pres: Presentation | None = None) -> ResidualReport:
    pres = pres or rep.presentation
    out = {}
    for rel in pres.relations:
        if rel.is_algebraic:
            out[rel.label] = opnorm(rep.evaluate(rel.body))
        else:
            out[rel.label] = opnorm(rep.image(rel.subject)) - float(rel.bound)
    return ResidualReport(out, tol)


def generator_norms(rep: MatrixRep) -> float:
    return max(opnorm(m) for m in rep.images.values())


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def witness_points(n: int, samples: int = 8, seed: int = 0) -> list[ClassicalPoint]:
    pts = [cyclic_permutation_point(n)] if n > 1 else []
    pts += [random_special_unitary(n, seed + k) for k in range(samples)]
    return pts


def find_witness(pres: Presentation, poly: StarPolynomial, legs: int = 1,
                 samples: int = 8, seed: int = 0, threshold: float = REJECT_TOL):
    """A representation of ``pres`` where ``poly`` is visibly nonzero.

    Returns ``(description, residual)`` or None. Tried in order: classical
    SU(n) points at q = 1 (cyclic permutation first), then torus characters.
    """
    if pres.name != "suq":
        return None
    n = pres.level
    for pt in witness_points(n, samples, seed):
        if legs == 1:
            val = abs(classical_eval(pt, poly))
        else:
            val = abs(classical_eval((pt,) * legs, poly))
        if val > threshold:
            return f"{pt.label} at q=1", float(val)
    for k in range(samples):
        for qv in (0.5, 0.9):
            rep = random_torus_rep(n, qv, seed + k, pres)
            val = opnorm(evaluate(poly, [rep] * legs))
            if val > threshold:
                return str(rep), float(val)
    return None


# ---------------------------------------------------------------------------
# sampling across presets
# ---------------------------------------------------------------------------

def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    qm, r = np.linalg.qr(z)
    d = np.diag(r)
    return qm * (d / np.abs(d))


def sample_reps(pres: Presentation, count: int, seed: int = 0,
                q_value: float | None = None) -> list[MatrixRep]:
    """Seeded valid representations of a preset.

    SU_q: classical points when ``q_value`` is 1 (or None), torus characters
    otherwise (both kinds when None). Circle: unitary matrices of dims 1-3.
    Contraction: random contractions of dims 1-3.
    """
    n = pres.level
    if pres.name == "suq":
        reps = []
        if q_value in (None, 1.0):
            reps += [classical_rep(random_special_unitary(n, seed + k), pres) for k in range(count)]
        if q_value != 1.0:
            qs = (0.5, 0.9) if q_value is None else (q_value,)
            reps += [random_torus_rep(n, qv, seed + k, pres) for k in range(count) for qv in qs]
        return reps
    if pres.name == "circle":
        rng = np.random.default_rng(seed)
        out = []
        for k in range(count):
            dim = 1 + k % 3
            out.append(MatrixRep(pres, dim, {pres.generators[0]: random_unitary(dim, rng)},
                                 seed=seed, label=f"unitary(dim={dim}, seed={seed}, k={k})"))
        return out
    return [contraction_rep_build(n, 1 + k % 3, seed + k, pres) for k in range(count)]


def random_ideal_elements(pres: Presentation, count: int, seed: int = 0, max_len: int = 2):
    """Seeded elements ``c·a·f·b`` of the two-sided ideal of the algebraic relations."""
    import random

    from .scalars import Q

    rels = pres.algebraic_relations
    if not rels:
        return []
    rng = random.Random(seed)
    letters = pres.letters
    coeffs = [1, -1, 2, Q, Q + 1, Q ** 2 - 3]
    out = []
    for _ in range(count):
        f = rng.choice(rels).body
        a = StarPolynomial.monomial([rng.choice(letters) for _ in range(rng.randint(0, max_len))])
        b = StarPolynomial.monomial([rng.choice(letters) for _ in range(rng.randint(0, max_len))])
        out.append((a * f * b).scale(rng.choice(coeffs)))
    return out
