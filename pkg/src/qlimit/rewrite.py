"""Noncommutative rewriting over Q(q).

Relations ``f = 0`` are oriented into rules ``lhs -> rhs`` under the
degree-lexicographic order on words (see :mod:`qlimit.algebra` for the letter
order). Reduction is leftmost: the first position of the word at which some
rule left-hand side occurs is rewritten. Because rule sets are kept
inter-reduced, at most one rule can match at a given position, so the
strategy is deterministic.

A zero normal form certifies ideal membership. A nonzero normal form proves
nothing unless the system is confluent up to the relevant degree, which is
what :func:`complete_bounded` establishes for a bounded degree.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .algebra import (
    ONE_POLY, ZERO_POLY, Gen, StarPolynomial, Word, leg_sorted, word_key,
    word_str,
)
from .errors import OrientationError
from .presentations import Relation
from .scalars import ONE, RatFunc

DEGLEX = "deglex(leg, unstarred<starred, row-major)"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: StarPolynomial
    origin: str

    def as_poly(self) -> StarPolynomial:
        return StarPolynomial._raw({self.lhs: ONE}) - self.rhs

    def __str__(self):
        return f"{word_str(self.lhs)} -> {self.rhs}"


@dataclass(frozen=True)
class Derivation:
    """How a rule entered a system; replayed by :meth:`RewriteSystem.audit`."""

    kind: str  # relation | closure | overlap | interreduce
    source: StarPolynomial
    snapshot: tuple  # rules present when the source was reduced
    pair: tuple | None = None  # (rule1, rule2, overlap length) for overlaps
    produced: StarPolynomial | None = None  # lhs - rhs at the time of addition


def rule_from(poly: StarPolynomial, origin: str) -> RewriteRule:
    if poly.is_zero():
        raise OrientationError(f"cannot orient the zero polynomial ({origin})")
    lead, c = poly.leading()
    rest = [wd for wd in poly.terms if wd != lead and word_key(wd) >= word_key(lead)]
    if rest:
        raise OrientationError(f"leading monomial of {origin} is not strictly maximal")
    inv = c.inverse()
    rhs = StarPolynomial._raw({wd: -x * inv for wd, x in poly.terms.items() if wd != lead})
    return RewriteRule(lead, rhs, origin)


class RewriteSystem:
    """An inter-reduced, ordered list of rules with a normal-form cache."""

    def __init__(self, rules=(), relations=(), confluence_status="unknown",
                 derivations=None, order=DEGLEX):
        self.rules: tuple[RewriteRule, ...] = tuple(rules)
        self.relations: tuple[StarPolynomial, ...] = tuple(relations)
        self.confluence_status = confluence_status
        self.derivations: dict[Word, Derivation] = dict(derivations or {})
        self.order = order
        self._index = {r.lhs: r for r in self.rules}
        self._lengths = sorted({len(r.lhs) for r in self.rules})
        self._memo: dict[Word, dict] = {}
        self._collapse = () in self._index
        for a in self.rules:
            for b in self.rules:
                if a is not b and _contains(a.lhs, b.lhs):
                    raise ValueError(f"rule set not inter-reduced: {a} contains {b}")

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def max_degree(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    # -- matching -----------------------------------------------------------
    def find_match(self, word: Word):
        """Leftmost occurrence ``(start, rule)`` of a rule lhs, or None."""
        n = len(word)
        index = self._index
        for s in range(n):
            for L in self._lengths:
                if s + L > n:
                    break
                r = index.get(word[s:s + L])
                if r is not None:
                    return s, r
        return None

    def is_irreducible(self, word: Word) -> bool:
        if self._collapse:
            return False
        return self.find_match(word) is None

    # -- normal forms -------------------------------------------------------
    def nf_word(self, word: Word) -> dict:
        if self._collapse:
            return {}
        memo = self._memo
        hit = memo.get(word)
        if hit is not None:
            return hit
        matches = {}
        stack = [word]
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            m = matches.get(top)
            if m is None:
                m = self.find_match(top)
                if m is None:
                    memo[top] = {top: ONE}
                    stack.pop()
                    continue
                s, rule = m
                kids = [leg_sorted(top[:s] + mid + top[s + len(rule.lhs):]) for mid in rule.rhs.terms]
                matches[top] = m = (s, rule, kids)
            s, rule, kids = m
            missing = [k for k in kids if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for kid, c in zip(kids, rule.rhs.terms.values()):
                for wd, x in memo[kid].items():
                    y = acc.get(wd)
                    acc[wd] = c * x if y is None else y + c * x
            memo[top] = {wd: x for wd, x in acc.items() if x}
            del matches[top]
            stack.pop()
        return memo[word]

    def normal_form(self, p: StarPolynomial) -> StarPolynomial:
        if self._collapse:
            return ZERO_POLY
        acc: dict = {}
        for wd, c in p.terms.items():
            for v, x in self.nf_word(wd).items():
                y = acc.get(v)
                acc[v] = c * x if y is None else y + c * x
        return StarPolynomial._raw({v: x for v, x in acc.items() if x})

    def reduces_to_zero(self, p: StarPolynomial) -> bool:
        return self.normal_form(p).is_zero()

    # -- tensor powers ------------------------------------------------------
    def tensor_power(self, k: int) -> "RewriteSystem":
        """Leg copies of every rule; legs never overlap, so status carries over."""
        rules = []
        for leg in range(1, k + 1):
            for r in self.rules:
                lhs = tuple(g.at_leg(leg) for g in r.lhs)
                rhs = StarPolynomial._raw(
                    {tuple(g.at_leg(leg) for g in wd): c for wd, c in r.rhs.terms.items()})
                rules.append(RewriteRule(lhs, rhs, f"{r.origin}@{leg}"))
        return RewriteSystem(rules, confluence_status=self.confluence_status, order=self.order)

    # -- audit ----------------------------------------------------------------
    def audit(self) -> list[str]:
        """Replay every recorded derivation; returns a list of problems."""
        problems = []
        for r in self.rules:
            d = self.derivations.get(r.lhs)
            if d is None:
                problems.append(f"no derivation for {r}")
                continue
            if d.kind == "overlap":
                r1, r2, k = d.pair
                head, tail = r1.lhs[:len(r1.lhs) - k], r2.lhs[k:]
                if r1.lhs + tail != head + r2.lhs:
                    problems.append(f"bad overlap for {r}")
                    continue
                h, t = StarPolynomial.monomial(head), StarPolynomial.monomial(tail)
                ideal_elt = h * r2.as_poly() - r1.as_poly() * t
                if d.source != ideal_elt:
                    problems.append(f"overlap source of {r} is not h*(l2-r2) - (l1-r1)*t")
            replay = RewriteSystem(d.snapshot).normal_form(d.source)
            if replay.is_zero():
                problems.append(f"derivation of {r} replays to zero")
                continue
            lead, c = replay.leading()
            if lead != r.lhs or replay.scale(c.inverse()) != d.produced:
                problems.append(f"derivation of {r} does not replay to the rule")
        return problems

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


def _contains(big: Word, small: Word) -> bool:
    n, m = len(big), len(small)
    return any(big[s:s + m] == small for s in range(n - m + 1))


class _Builder:
    """Mutable rule set that keeps itself inter-reduced while rules are added."""

    def __init__(self, system: RewriteSystem | None = None):
        self.rules: list[RewriteRule] = list(system.rules) if system else []
        self.derivations = dict(system.derivations) if system else {}
        self.relations = list(system.relations) if system else []
        self._sys = None
        self.added = 0

    def system(self, status="unknown") -> RewriteSystem:
        if self._sys is None or self._sys.confluence_status != status:
            self._sys = RewriteSystem(self.rules, self.relations, status, self.derivations)
        return self._sys

    def add(self, poly: StarPolynomial, kind: str, origin: str, pair=None) -> int:
        """Reduce ``poly`` and add it as a rule; returns the number of rules added."""
        pending = deque([(poly, kind, origin, pair)])
        count = 0
        while pending:
            f, kind, origin, pair = pending.popleft()
            snapshot = tuple(self.rules)
            r = self.system().normal_form(f)
            if r.is_zero():
                continue
            rule = rule_from(r, origin)
            keep = []
            for old in self.rules:
                if _contains(old.lhs, rule.lhs):
                    pending.append((old.as_poly(), "interreduce", old.origin, None))
                    self.derivations.pop(old.lhs, None)
                else:
                    keep.append(old)
            keep.append(rule)
            self.rules = keep
            self.derivations[rule.lhs] = Derivation(kind, f, snapshot, pair, rule.as_poly())
            self._sys = None
            count += 1
        self.added += count
        return count

    def close_relations(self) -> None:
        """Add normal forms of generating relations until all reduce to zero."""
        while True:
            sys_ = self.system()
            bad = [f for f in self.relations if not sys_.reduces_to_zero(f)]
            if not bad:
                return
            for f in bad:
                self.add(f, "closure", "closure")

    def normalize_rhs(self) -> None:
        sys_ = self.system()
        new = [RewriteRule(r.lhs, sys_.normal_form(r.rhs), r.origin) for r in self.rules]
        if any(a.rhs != b.rhs for a, b in zip(new, self.rules)):
            self.rules = new
            self._sys = None


def _finish(b: _Builder, status: str) -> RewriteSystem:
    for _ in range(50):
        b.close_relations()
        b.normalize_rhs()
        if all(b.system().reduces_to_zero(f) for f in b.relations):
            break
    return b.system(status)


def orient(relations, order: str = DEGLEX) -> RewriteSystem:
    """Rewrite system for the algebraic relations (Relation or polynomial)."""
    if order != DEGLEX:
        raise ValueError(f"unsupported term order {order!r}")
    polys = []
    b = _Builder()
    for rel in relations:
        if isinstance(rel, Relation):
            if not rel.is_algebraic:
                continue
            poly, label = rel.body, rel.label
        else:
            poly, label = rel, str(rel)
        if poly.is_zero():
            raise OrientationError(f"relation {label} is zero")
        polys.append(poly)
        b.relations.append(poly)
        b.add(poly, "relation", label)
    status = "confluent_to_degree(0)" if not polys else "unknown"
    return _finish(b, status)


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------

@dataclass
class CompletionReport:
    new_rules_added: int
    unresolved_critical_pairs: list
    degree_bound: int
    rule_budget: int
    budget_exhausted: bool = False
    pairs_checked: int = 0
    audit_problems: list = field(default_factory=list)


def overlaps(r1: RewriteRule, r2: RewriteRule):
    """Proper overlaps: a suffix of r1.lhs equal to a prefix of r2.lhs."""
    a, b = r1.lhs, r2.lhs
    for k in range(1, min(len(a), len(b))):
        if a[len(a) - k:] == b[:k]:
            yield k


def critical_pairs(rules, degree_bound: int):
    within, beyond = [], []
    for r1, r2 in itertools.product(rules, repeat=2):
        for k in overlaps(r1, r2):
            deg = len(r1.lhs) + len(r2.lhs) - k
            (within if deg <= degree_bound else beyond).append((deg, r1, r2, k))
    within.sort(key=lambda t: (t[0], word_key(t[1].lhs), word_key(t[2].lhs), t[3]))
    return within, beyond


def pair_difference(sys_: RewriteSystem, r1: RewriteRule, r2: RewriteRule, k: int):
    head = StarPolynomial.monomial(r1.lhs[:len(r1.lhs) - k])
    tail = StarPolynomial.monomial(r2.lhs[k:])
    source = r1.rhs * tail - head * r2.rhs
    return source, sys_.normal_form(source)


def complete_bounded(S: RewriteSystem, degree_bound: int, max_rules: int = 200):
    """Resolve critical pairs of degree ≤ ``degree_bound``.

    Returns the completed system and a :class:`CompletionReport`. Every added
    rule is a normal form of ``h*(l2-r2) - (l1-r1)*t`` for an overlap, hence an
    element of the ideal; the derivation is recorded for :meth:`audit`.
    """
    if degree_bound < 2:
        raise ValueError("degree bound must be at least 2")
    b = _Builder(S)
    unresolved = []
    checked = 0
    exhausted = False
    while True:
        sys_ = b.system()
        within, _ = critical_pairs(sys_.rules, degree_bound)
        progress = False
        live = set(sys_.rules)
        for deg, r1, r2, k in within:
            if r1 not in live or r2 not in live:
                continue
            checked += 1
            source, diff = pair_difference(b.system(), r1, r2, k)
            if diff.is_zero():
                continue
            if b.added >= max_rules:
                exhausted = True
                unresolved.append((deg, r1, r2, k))
                continue
            # orient the unreduced ideal element; add() reduces it again
            b.add(source, "overlap", f"overlap[{word_str(r1.lhs)}|{word_str(r2.lhs)}]", (r1, r2, k))
            progress = True
            live = set(b.rules)
        if exhausted or not progress:
            break
    b.close_relations()
    final = b.system()
    within, beyond = critical_pairs(final.rules, degree_bound)
    open_pairs = [t for t in within
                  if not pair_difference(final, t[1], t[2], t[3])[1].is_zero()]
    if not open_pairs and not exhausted:
        status = f"confluent_to_degree({degree_bound})"
    else:
        status = f"completed_partial({degree_bound})"
    final = b.system(status)
    report = CompletionReport(
        new_rules_added=b.added,
        unresolved_critical_pairs=[_pair_str(t) for t in open_pairs] + [_pair_str(t) for t in beyond],
        degree_bound=degree_bound,
        rule_budget=max_rules,
        budget_exhausted=exhausted,
        pairs_checked=checked,
    )
    return final, report


def _pair_str(t) -> str:
    deg, r1, r2, k = t
    return f"deg{deg}:{word_str(r1.lhs)}|{word_str(r2.lhs)}/{k}"


# ---------------------------------------------------------------------------
# span membership
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    target: StarPolynomial
    coefficients: list  # [(spanner index, RatFunc)]
    labels: list  # labels of the spanners used, parallel to coefficients
    verified: bool
    degree_bound: int


@dataclass
class NotFoundAtBound:
    target: StarPolynomial
    degree_bound: int
    spanners: int
    rank: int


class _Echelon:
    """Incremental row echelon form over Q(q) with combination tracking."""

    def __init__(self):
        self.rows: list[tuple[dict, dict]] = []  # (vector, combination)
        self.pivots: dict = {}  # pivot word -> row index

    def _reduce(self, vec: dict, comb: dict):
        vec, comb = dict(vec), dict(comb)
        while vec:
            hit = None
            for wd in vec:
                if wd in self.pivots:
                    hit = wd
                    break
            if hit is None:
                break
            rv, rc = self.rows[self.pivots[hit]]
            f = vec[hit]  # pivot rows are normalized to 1 at their pivot
            for wd, x in rv.items():
                y = vec.get(wd)
                z = -f * x if y is None else y - f * x
                if z:
                    vec[wd] = z
                else:
                    vec.pop(wd, None)
            for i, x in rc.items():
                y = comb.get(i)
                z = -f * x if y is None else y - f * x
                if z:
                    comb[i] = z
                else:
                    comb.pop(i, None)
        return vec, comb

    def add(self, vec: dict, index: int) -> bool:
        vec, comb = self._reduce(vec, {index: ONE})
        if not vec:
            return False
        piv = max(vec, key=word_key)
        inv = vec[piv].inverse()
        vec = {wd: x * inv for wd, x in vec.items()}
        comb = {i: x * inv for i, x in comb.items()}
        self.pivots[piv] = len(self.rows)
        self.rows.append((vec, comb))
        return True

    def express(self, vec: dict):
        """Combination c with vec = Σ c_i spanner_i, or None."""
        rest, comb = self._reduce(vec, {})
        if rest:
            return None
        return {i: -x for i, x in comb.items()}


def span_membership(target: StarPolynomial, spanners, degree_bound: int,
                    S: RewriteSystem, labels=None, echelon: _Echelon | None = None,
                    reduced_spanners=None):
    """Express ``target`` modulo ``S`` as a Q(q)-combination of ``spanners``."""
    labels = list(labels) if labels is not None else [str(i) for i in range(len(spanners))]
    nfs = reduced_spanners if reduced_spanners is not None else [S.normal_form(s) for s in spanners]
    if echelon is None:
        echelon = _Echelon()
        for i, s in enumerate(nfs):
            echelon.add(s.terms, i)
    t = S.normal_form(target)
    comb = echelon.express(t.terms)
    if comb is None:
        return NotFoundAtBound(target, degree_bound, len(nfs), len(echelon.rows))
    items = sorted(comb.items())
    combo = ZERO_POLY
    for i, c in items:
        combo = combo + nfs[i].scale(c)
    verified = S.reduces_to_zero(target - combo)
    return Certificate(target, items, [labels[i] for i, _ in items], verified, degree_bound)
