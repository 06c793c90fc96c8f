"""Brute-force verification of the theory's numbered results on concrete measures.

Every catalog entry pairs a quantifier domain (all members, all pairs, all
doubly-disjoint triples, ...) with an instance check on bit masks.  A
failing instance becomes a :class:`~combprob.report.Witness` that
:func:`replay` can re-run.  Entries whose printed statement does not hold
as written are *flagged*: each candidate reading is executed and reported,
and none of them counts towards pass/fail.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from combprob.bridges import (
    ConventionalMeasure,
    ExtendedMeasure,
    combined_to_extended,
    check_extended_axioms,
    extended_from_blocks,
    extended_to_combined,
    is_conventional,
    restrict_positive,
    restriction,
)
from combprob.errors import ConstructionError, HypothesisError
from combprob.events import Event, Space, mask_key
from combprob.measure import (
    ONE,
    ZERO,
    CombinedMeasure,
    classify_normalization,
    from_positive_values,
    positive_domain,
    validate_axioms,
    cp1_instance,
    cp2_instance,
    cp3_instance,
    cp4_instance,
    cp5_instance,
)
from combprob.rational import as_rational
from combprob.report import ClauseResult, Status, ValidationReport, Witness
from combprob.structures import EventFamily, is_set_algebra

# Largest number of tuples a single quantifier domain enumerates before it
# switches to a seeded sample.
DOMAIN_BUDGET = 1_000_000

Check = Callable[..., "tuple | None"]


class _Ctx:
    """Per-measure precomputation shared by all checks."""

    def __init__(self, m: CombinedMeasure):
        self.m = m
        self.space = m.space
        self.n = m.space.n
        self.v = m._v
        self.masks = m._ordered_masks
        self.pos, self.negm, self.zero = m._elementary
        self.half = m.space.pos_mask
        self.full = m.space.full_mask
        self.digitalized = m.is_digitalized
        self.notes: dict[str, str] = {}

    def neg(self, x: int) -> int:
        return ((x & self.half) << self.n) | (x >> self.n)

    def red(self, x: int) -> int:
        return x & ~self.neg(x)

    def ev(self, x: int) -> Event:
        return Event(self.space, x)

    def key(self, x: int):
        return mask_key(x, self.n)

    def supp(self, x: int) -> int:
        return (x | (x >> self.n)) & self.half

    @cached_property
    def reduced(self) -> list[int]:
        return [x for x in self.masks if self.red(x) == x]

    @cached_property
    def atom(self) -> dict[int, Fraction]:
        return {b: self.v[1 << b] for b in range(2 * self.n) if 1 << b in self.v}

    def asum(self, x: int) -> Fraction:
        """Atom-sum value of ``x``; an evaluation path separate from the stored table."""
        total = ZERO
        b = 0
        while x:
            if x & 1:
                total += self.atom[b]
            x >>= 1
            b += 1
        return total

    @cached_property
    def valid(self) -> bool:
        return validate_axioms(self.m).ok

    @cached_property
    def normalization(self):
        return classify_normalization(self.m)


# -- domains ---------------------------------------------------------------------------


def _members(c: _Ctx):
    return ((a,) for a in c.masks)


def _unordered_pairs(c: _Ctx):
    ms = c.masks
    for i, a in enumerate(ms):
        for b in ms[i:]:
            yield a, b


def _reduced_by_members(c: _Ctx):
    for a in c.reduced:
        for b in c.masks:
            yield a, b


def _reduced_pairs(c: _Ctx):
    rs = c.reduced
    for i, a in enumerate(rs):
        for b in rs[i:]:
            yield a, b


def _submask_pairs(c: _Ctx, top: int):
    """Pairs (C, A) of family members with C nonempty and C <= A <= top."""
    subs = [x for x in c.masks if x and not x & ~top]
    for a in subs:
        for cc in subs:
            if not cc & ~a:
                yield cc, a


def _doubly_disjoint_tuples(c: _Ctx):
    ms = [x for x in c.masks if x]
    sup = [c.supp(x) for x in ms]
    adj = [[j for j in range(i + 1, len(ms)) if not sup[i] & sup[j]] for i in range(len(ms))]
    for i, later in enumerate(adj):
        for pos, j in enumerate(later):
            yield ms[i], ms[j]
            sij = sup[i] | sup[j]
            for k in later[pos + 1:]:
                if not sij & sup[k]:
                    yield ms[i], ms[j], ms[k]


def _elementary_bits(c: _Ctx):
    return ((1 << b,) for b in range(c.n) if 1 << b in c.v and 1 << (b + c.n) in c.v)


def _nothing(c: _Ctx):
    return [()]


# -- instance checks -------------------------------------------------------------------
# Each returns None when the instance holds, else (expected, actual, note).


def _lemma_2_1(c, a):
    na = c.neg(a)
    if na not in c.v:
        return None
    if (c.v[a] == 0) != (c.v[na] == 0):
        return None, None, f"p(A) = {c.v[a]} but p(-A) = {c.v[na]}"
    return None


def _lemma_2_2(c, *parts):
    u = 0
    for x in parts:
        u |= x
    if u not in c.v:
        return None, None, f"union {c.ev(u)} is missing"
    stored = sum((c.v[x] for x in parts), ZERO)
    if c.v[u] != stored:
        return stored, c.v[u], "stored values are not additive"
    if c.digitalized:
        independent = sum((c.asum(x) for x in parts), ZERO)
        if c.v[u] != independent:
            return independent, c.v[u], "union value differs from the atom-sum oracle"
    return None


def _lemma_2_3(c, a, b):
    for x, y in ((a, b), (b, a)):
        if not c.neg(x) & y and x & c.neg(y):
            return None, None, "-A ∩ B is empty but A ∩ -B is not"
    return None


def _lemma_2_4(c, a, b):
    if c.neg(a & b) != c.neg(a) & c.neg(b):
        return c.ev(c.neg(a) & c.neg(b)), c.ev(c.neg(a & b)), "-(A ∩ B) != -A ∩ -B"
    return None


def _lemma_2_5(c, w):
    nw = c.neg(w)
    if bool(w & c.pos) != bool(nw & c.negm):
        return None, None, f"p(w) = {c.v[w]}, p(-w) = {c.v[nw]}"
    return None


def _lemma_2_6(c, a, b):
    if c.red(b) == b and not a & ~b and c.red(a) != a:
        return None, None, "a subset of a reduced event is unreduced"
    return None


def _has_pair(c, x):
    return any(x >> i & 1 and x >> (i + c.n) & 1 for i in range(c.n))


def _lemma_2_7_conditions(c, a, literal):
    pp, nn = a & c.pos, a & c.negm
    zz = a & c.zero
    cond4 = (not pp & (nn if literal else c.neg(nn))) and c.red(zz) == zz
    return [not _has_pair(c, a), not a & c.neg(a), not (a & c.half) & c.neg(a & ~c.half), cond4]


def _lemma_2_7_literal(c, a):
    conds = _lemma_2_7_conditions(c, a, literal=True)
    if len(set(conds)) > 1:
        return None, None, f"conditions 1-4 evaluate to {conds}"
    return None


def _lemma_2_7_negated(c, a):
    conds = _lemma_2_7_conditions(c, a, literal=False)
    if len(set(conds)) > 1:
        return None, None, f"conditions 1-4 evaluate to {conds}"
    return None


def _lemma_2_8(c, a):
    by_pairs = a
    for i in range(c.n):
        pair = (1 << i) | (1 << (i + c.n))
        if a & pair == pair:
            by_pairs &= ~pair
    formula = a & ~(a & c.neg(a))
    if by_pairs != formula:
        return c.ev(formula), c.ev(by_pairs), "pair deletion and A \\ (A ∩ -A) differ"
    return None


def _lemma_2_9(c, a):
    if c.red(a) != c.neg(c.red(c.neg(a))):
        return c.ev(c.neg(c.red(c.neg(a)))), c.ev(c.red(a)), "RA != -R(-A)"
    return None


def _lemma_2_10(c, a):
    z = a & c.zero
    sub = z
    while True:
        if sub not in c.v:
            return None
        if not sub:
            break
        sub = (sub - 1) & z
    if c.v[z] != 0:
        return ZERO, c.v[z], f"neutral part {c.ev(z)}"
    return None


def _lemma_2_11_reducible(c, a):
    ca = a & ~c.red(a)
    if c.red(ca) != c.red(c.neg(a)):
        return c.ev(c.red(c.neg(a))), c.ev(c.red(ca)), "CA = A \\ RA"
    return None


def _lemma_2_11_complement(c, a):
    ca = c.full & ~a
    if c.red(ca) != c.red(c.neg(a)):
        return c.ev(c.red(c.neg(a))), c.ev(c.red(ca)), "CA = Omega \\ A"
    return None


def _prop_2_1(c):
    for name, top in (("Omega_+p", c.pos), ("Omega_-p", c.negm), ("Omega_0p", c.zero)):
        fam = EventFamily.power_set(c.space, c.ev(top))
        if not is_set_algebra(fam, unit=c.ev(top)):
            return None, None, f"2^{name} is not a set algebra"
    return None


def _prop_2_2(c, a):
    if c.neg(a) not in c.v:
        return None, None, f"-A = {c.ev(c.neg(a))} is missing"
    return None


def _prop_2_3(c, a):
    if a == c.neg(a) and c.v[a] != 0:
        return ZERO, c.v[a], "A = -A"
    return None


def _prop_2_4(c, a):
    s = c.asum(a)
    if c.v[a] != s:
        return s, c.v[a], "value differs from the atom sum"
    return None


def _prop_2_5(c, a):
    if a not in c.v:
        return None, None, "subset of Omega missing from F"
    return None


def _prop_2_5_domain(c):
    return ((x,) for x in range(c.full + 1))


def _prop_2_6_domain(c):
    rep: dict[int, int] = {}
    for x in c.masks:
        r = c.red(x)
        if r in rep:
            yield x, rep[r]
        else:
            rep[r] = x


def _prop_2_6(c, a, b):
    if c.red(a) == c.red(b) and c.v[a] != c.v[b]:
        return c.v[b], c.v[a], "equivalent events with different values"
    return None


def _prop_2_7_commutative(c, a, b):
    if c.red(a | b) != c.red(b | a):
        return None, None, "A ∪_R B != B ∪_R A"
    return None


def _prop_2_7_associative(c, a, b, d):
    left = c.red(a | c.red(b | d))
    right = c.red(c.red(a | b) | d)
    if left != right:
        return c.ev(right), c.ev(left), "A ∪_R (B ∪_R C) != (A ∪_R B) ∪_R C"
    return None


def _triples(c: _Ctx):
    ms = c.masks
    total = len(ms) ** 3
    if total <= DOMAIN_BUDGET:
        return itertools.product(ms, repeat=3)
    c.notes["triples"] = f"seeded sample of {DOMAIN_BUDGET} of {total} triples"
    rng = random.Random(f"triples-{c.n}-{len(ms)}")
    return ((rng.choice(ms), rng.choice(ms), rng.choice(ms)) for _ in range(DOMAIN_BUDGET))


def _prop_2_8(c, a, b):
    u, i = a | b, a & b
    if u not in c.v or i not in c.v:
        return None, None, "A ∪ B or A ∩ B is missing"
    stored = c.v[a] + c.v[b] - c.v[i]
    if c.v[u] != stored:
        return stored, c.v[u], "inclusion-exclusion fails on stored values"
    if c.digitalized:
        independent = c.asum(a) + c.asum(b) - c.asum(i)
        if c.v[u] != independent:
            return independent, c.v[u], "union value differs from the atom-sum oracle"
    return None


def _prop_2_9_domain(c):
    ms = c.masks
    parts = [(x, x & c.pos, x & c.negm) for x in ms]
    for a, ap, an in parts:
        for b, bp, bn in parts:
            if not ap & ~bp and not bn & ~an:
                yield a, b


def _prop_2_9(c, a, b):
    if c.v[a] > c.v[b]:
        return f"<= {c.v[b]}", c.v[a], "p(A) > p(B)"
    return None


def _prop_2_10(c, cc, a):
    if not (0 < c.v[cc] <= c.v[a]):
        return f"0 < p(C) <= p(A) = {c.v[a]}", c.v[cc], "not positive and monotone"
    return None


def _prop_2_11(c, cc, a):
    if not (0 > c.v[cc] >= c.v[a]):
        return f"0 > p(C) >= p(A) = {c.v[a]}", c.v[cc], "not negative and antitone"
    return None


def _prop_2_12(c):
    if not c.digitalized:
        return None
    for sign, part, target in ((1, c.pos, ONE), (-1, c.negm, -ONE)):
        hypothesis = all(not x & ~part for x in c.masks if sign * c.v[x] > 0)
        if not hypothesis:
            continue
        normalized = any(c.v[x] == target for x in c.masks)
        complete = c.v.get(part) == target
        if normalized != complete:
            which = "positively" if sign > 0 else "negatively"
            return None, None, f"{which} normalized = {normalized} but complete = {complete}"
    return None


def _prop_2_12_applies(c):
    if not c.digitalized:
        return "hypothesis only decidable on digitalized measures"
    for sign, part in ((1, c.pos), (-1, c.negm)):
        if all(not x & ~part for x in c.masks if sign * c.v[x] > 0):
            return None
    return "neither sign hypothesis holds for this measure"


def _prop_2_13(c):
    n = c.normalization
    if n.positively_normalized != n.negatively_normalized:
        return None, None, n.diagnostic
    return None


def _prop_2_14_domain(c):
    cover = c.pos | c.negm | c.zero
    for a in c.reduced:
        if a & ~cover:
            continue
        if a & c.pos in c.v and a & c.negm in c.v and a & c.zero in c.v:
            yield (a,)


def _prop_2_14(c, a):
    expected = c.v[a & c.pos] + c.v[a & c.negm]
    if c.v[a] != expected:
        return expected, c.v[a], "p(A) != p(A_+p) + p(A_-p)"
    return None


def _cor_2_1(c, w):
    nw = c.neg(w)
    if (c.v[w] == 0) != (c.v[nw] == 0):
        return None, None, f"p(w) = {c.v[w]}, p(-w) = {c.v[nw]}"
    return None


def _cor_2_2(c):
    if 0 not in c.v:
        return None, None, "empty event missing"
    if c.v[0] != 0:
        return ZERO, c.v[0], "p(∅)"
    return None


def _cor_2_3(c):
    if c.full not in c.v:
        return None, None, "Omega missing"
    if c.v[c.full] != 0:
        return ZERO, c.v[c.full], "p(Omega)"
    return None


def _cor_2_4(c):
    if c.negm != c.neg(c.pos):
        return c.ev(c.neg(c.pos)), c.ev(c.negm), "Omega_-p != -Omega_+p"
    if c.pos in c.v and c.negm in c.v and c.v[c.negm] != -c.v[c.pos]:
        return -c.v[c.pos], c.v[c.negm], "p(Omega_-p) != -p(Omega_+p)"
    return None


def _cor_2_5(c, a, b):
    for r in (a & b, a & ~b):
        if c.red(r) != r:
            return None, None, f"{c.ev(r)} is not reduced"
    return None


def _cor_2_6(c, a):
    na = c.neg(a)
    formula = na & ~(a & na)
    if c.red(na) != formula:
        return c.ev(formula), c.ev(c.red(na)), "R(-A) != (-A) \\ (A ∩ -A)"
    return None


def _cor_2_7(c, a):
    if (c.red(a) == a) != (c.red(c.neg(a)) == c.neg(a)):
        return None, None, "A and -A differ in reducedness"
    return None


def _cor_2_8(c, cc, a):
    if c.v[cc] <= 0:
        return "> 0", c.v[cc], "nonempty subset of Omega_+p"
    return None


def _cor_2_9(c, cc, a):
    if c.v[cc] >= 0:
        return "< 0", c.v[cc], "nonempty subset of Omega_-p"
    return None


def _cor_2_10_domain(c):
    return ((a,) for a in c.masks if a & c.pos and a & c.pos in c.v)


def _cor_2_10(c, a):
    if c.v[a & c.pos] <= 0:
        return "> 0", c.v[a & c.pos], f"A_+p = {c.ev(a & c.pos)}"
    return None


def _cor_2_11_domain(c):
    return ((a,) for a in c.masks if a & c.negm and a & c.negm in c.v)


def _cor_2_11(c, a):
    if c.v[a & c.negm] >= 0:
        return "< 0", c.v[a & c.negm], f"A_-p = {c.ev(a & c.negm)}"
    return None


def _cor_2_12(c, a):
    r = c.red(a)
    if r in c.v and c.v[a] != c.v[r]:
        return c.v[r], c.v[a], f"RA = {c.ev(r)}"
    return None


def _cor_2_13_reducible(c, a):
    ca, na = a & ~c.red(a), c.neg(a)
    if ca in c.v and na in c.v and c.v[ca] != c.v[na]:
        return c.v[na], c.v[ca], "CA = A \\ RA"
    return None


def _cor_2_13_complement(c, a):
    ca, na = c.full & ~a, c.neg(a)
    if ca in c.v and na in c.v and c.v[ca] != c.v[na]:
        return c.v[na], c.v[ca], "CA = Omega \\ A"
    return None


def _cor_2_14(c, a, b):
    d = a & ~(b | c.neg(b))
    if c.red(d) != d:
        return None, None, f"A ∥ B = {c.ev(d)} is not reduced"
    return None


def _cor_2_15(c):
    n = c.normalization
    if n.positively_normalized != n.normalized:
        return None, None, "positively normalized but not normalized"
    return None


# -- theorems --------------------------------------------------------------------------


def _to_extended(c: _Ctx):
    try:
        return combined_to_extended(c.m), None
    except HypothesisError as exc:
        return None, f"{exc.hypothesis}: {exc}"
    except ValueError as exc:
        return None, str(exc)


def _thm_3_1_applies(c):
    e, why = _to_extended(c)
    return None if e is not None else f"measure is not an extended probability ({why})"


def _thm_3_1(c):
    e, _ = _to_extended(c)
    if not check_extended_axioms(e).ok:
        return None, None, "derived extended measure fails EP1-EP8"
    back = extended_to_combined(e)
    report = validate_axioms(back)
    if not report.ok:
        return None, None, f"extended measure maps to a combined measure failing {report.failures()[0].clause}"
    if any(back.values[ev] != c.v[ev.mask] for ev in back.family if ev.mask in c.v):
        return None, None, "values changed on common events"
    return None


def _thm_3_2_applies(c):
    if not c.valid:
        return "measure fails the combined axioms"
    if not c.digitalized:
        return "hypotheses need a digitalized measure"
    if not c.normalization.normalized:
        return "measure is not normalized"
    if c.pos & c.neg(c.half) or c.negm & c.half:
        return "evaluated atoms are not sign-aligned with Omega+ / Omega-"
    return None


def _thm_3_2(c):
    e, why = _to_extended(c)
    if e is None:
        return None, None, f"hypotheses hold but conversion failed: {why}"
    report = check_extended_axioms(e)
    if not report.ok:
        return None, None, f"converted measure fails {report.failures()[0].clause}"
    return None


def _positive_members(c):
    return [x for x in c.masks if not x & ~c.half]


def _thm_3_3_applies(c):
    if not c.valid:
        return "measure fails the combined axioms"
    if any(c.v[x] < 0 for x in _positive_members(c)):
        return "some positive event is negatively valued"
    if not c.normalization.positively_normalized:
        return "measure is not positively normalized"
    return None


def _thm_3_3(c):
    plus = _positive_members(c)
    conv = ConventionalMeasure(c.space, (c.ev(x) for x in plus), {c.ev(x): c.v[x] for x in plus},
                               universe=c.space.positive_half)
    if not is_conventional(conv):
        return None, None, "restriction to positive events is not a conventional probability"
    return None


def _thm_3_4_applies(c):
    return None if c.valid else "measure fails the combined axioms"


def _thm_3_4(c):
    cond = c.normalization.positively_normalized and bool(is_set_algebra(positive_domain(c.m)))
    oracle = is_conventional(restriction(c.m))
    try:
        restrict_positive(c.m)
        succeeded = True
    except HypothesisError:
        succeeded = False
    if not (cond == oracle == succeeded):
        return None, None, (f"conditions hold: {cond}; restriction is conventional: {oracle}; "
                            f"restrict_positive succeeded: {succeeded}")
    return None


# -- the catalog ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Reading:
    name: str
    check: Check
    domain: Callable[[_Ctx], Iterable[tuple]] = _members
    roles: tuple[str, ...] = ("A",)


@dataclass(frozen=True)
class CatalogEntry:
    clause: str
    statement: str
    quantifier: str
    check: Check | None = None
    domain: Callable[[_Ctx], Iterable[tuple]] = _members
    roles: tuple[str, ...] = ("A",)
    applies: Callable[[_Ctx], str | None] | None = None
    set_only: bool = False
    readings: tuple[Reading, ...] = ()
    flag_reason: str = ""

    @property
    def flagged(self) -> bool:
        return bool(self.readings)


def _needs_digitalized(c):
    return None if c.digitalized else "measure is not digitalized"


_PAIR = ("A", "B")
_SUB = ("C", "A")

CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("Lemma 2.1", "p(A) = 0 iff p(-A) = 0", "all A in F with -A in F", _lemma_2_1),
    CatalogEntry("Lemma 2.2", "additivity over pairwise doubly-disjoint events",
                 "doubly-disjoint pairs and triples of nonempty members", _lemma_2_2,
                 _doubly_disjoint_tuples, ("A1", "A2", "A3")),
    CatalogEntry("Lemma 2.3", "-A ∩ B = ∅ implies A ∩ -B = ∅", "all pairs in F, both orders",
                 _lemma_2_3, _unordered_pairs, _PAIR, set_only=True),
    CatalogEntry("Lemma 2.4", "-(A ∩ B) = -A ∩ -B", "all pairs in F", _lemma_2_4, _unordered_pairs,
                 _PAIR, set_only=True),
    CatalogEntry("Lemma 2.5", "w in Omega_+p iff -w in Omega_-p", "elementary events in F",
                 _lemma_2_5, _elementary_bits, ("w",)),
    CatalogEntry("Lemma 2.6", "subsets of reduced events are reduced", "reduced B in F, A <= B in F",
                 _lemma_2_6, _reduced_by_members, ("A", "B"), set_only=True),
    CatalogEntry("Lemma 2.7", "four characterisations of reducedness agree", "all A in F",
                 readings=(Reading("literal", _lemma_2_7_literal),
                           Reading("negated-part", _lemma_2_7_negated)),
                 flag_reason="condition 4 as printed (A_+p ∩ A_-p = ∅) is always true since the "
                             "classes are disjoint; A_+p ∩ -A_-p = ∅ is the version that characterises "
                             "reducedness"),
    CatalogEntry("Lemma 2.8", "RA = A \\ (A ∩ -A)", "all A in F", _lemma_2_8, set_only=True),
    CatalogEntry("Lemma 2.9", "RA = -R(-A)", "all A in F", _lemma_2_9, set_only=True),
    CatalogEntry("Lemma 2.10", "p(A_0p) = 0 when A_0p and its subsets are in F", "all A in F",
                 _lemma_2_10),
    CatalogEntry("Lemma 2.11", "R(CA) = R(-A)", "all A in F",
                 readings=(Reading("reducible-part", _lemma_2_11_reducible),
                           Reading("complement", _lemma_2_11_complement)),
                 flag_reason="with CA = A \\ RA the identity fails whenever RA is nonempty; "
                             "with CA read as the complement of A in Omega it holds",
                 set_only=True),
    CatalogEntry("Proposition 2.1", "powersets of Omega_+p, Omega_-p, Omega_0p are set algebras",
                 "the three evaluated classes", _prop_2_1, _nothing, ()),
    CatalogEntry("Proposition 2.2", "A in F iff -A in F", "all A in F", _prop_2_2, set_only=True),
    CatalogEntry("Proposition 2.3", "A = -A implies p(A) = 0", "all A in F", _prop_2_3),
    CatalogEntry("Proposition 2.4", "p(A) is the sum of its atoms' values", "all A in F",
                 _prop_2_4, applies=_needs_digitalized),
    CatalogEntry("Proposition 2.5", "digitalized implies F = 2^Omega", "every subset of Omega",
                 _prop_2_5, _prop_2_5_domain, applies=_needs_digitalized, set_only=True),
    CatalogEntry("Proposition 2.6", "equivalent events have equal values",
                 "every member paired with its class representative", _prop_2_6, _prop_2_6_domain, _PAIR),
    CatalogEntry("Proposition 2.7", "reduced union is commutative and associative", "pairs / triples in F",
                 readings=(Reading("commutative", _prop_2_7_commutative, _unordered_pairs, _PAIR),
                           Reading("associative", _prop_2_7_associative, _triples, ("A", "B", "C"))),
                 flag_reason="commutativity holds; associativity fails on plain sets, e.g. "
                             "{w} ∪_R ({w} ∪_R {-w}) = {w} but ({w} ∪_R {w}) ∪_R {-w} = ∅",
                 set_only=True),
    CatalogEntry("Proposition 2.8", "p(A ∪ B) = p(A) + p(B) - p(A ∩ B) for reduced A, B",
                 "all pairs of reduced members", _prop_2_8, _reduced_pairs, _PAIR),
    CatalogEntry("Proposition 2.9", "A_+p <= B_+p and B_-p <= A_-p imply p(A) <= p(B)",
                 "all ordered pairs satisfying the hypothesis", _prop_2_9, _prop_2_9_domain, _PAIR,
                 applies=_needs_digitalized),
    CatalogEntry("Proposition 2.10", "positive and monotone on subsets of Omega_+p",
                 "nonempty C <= A <= Omega_+p in F", _prop_2_10,
                 lambda c: _submask_pairs(c, c.pos), _SUB),
    CatalogEntry("Proposition 2.11", "negative and antitone on subsets of Omega_-p",
                 "nonempty C <= A <= Omega_-p in F", _prop_2_11,
                 lambda c: _submask_pairs(c, c.negm), _SUB),
    CatalogEntry("Proposition 2.12", "under the sign hypothesis, normalized iff complete",
                 "whole measure", _prop_2_12, _nothing, (), applies=_prop_2_12_applies),
    CatalogEntry("Proposition 2.13", "positively normalized iff negatively normalized", "whole measure",
                 _prop_2_13, _nothing, ()),
    CatalogEntry("Proposition 2.14", "p(A) = p(A_+p) + p(A_-p) for reduced A",
                 "reduced A in F made of elementary members, parts in F", _prop_2_14, _prop_2_14_domain),
    CatalogEntry("Corollary 2.1", "p(w) = 0 iff p(-w) = 0", "elementary events in F", _cor_2_1,
                 _elementary_bits, ("w",)),
    CatalogEntry("Corollary 2.2", "p(∅) = 0", "the empty event", _cor_2_2, _nothing, ()),
    CatalogEntry("Corollary 2.3", "p(Omega) = 0", "Omega", _cor_2_3, _nothing, ()),
    CatalogEntry("Corollary 2.4", "Omega_-p = -Omega_+p and p(Omega_-p) = -p(Omega_+p)",
                 "whole measure", _cor_2_4, _nothing, ()),
    CatalogEntry("Corollary 2.5", "A reduced implies A ∩ B and A \\ B reduced", "reduced A, any B in F",
                 _cor_2_5, _reduced_by_members, _PAIR, set_only=True),
    CatalogEntry("Corollary 2.6", "R(-A) = (-A) \\ (A ∩ -A)", "all A in F", _cor_2_6, set_only=True),
    CatalogEntry("Corollary 2.7", "A reduced iff -A reduced", "all A in F", _cor_2_7, set_only=True),
    CatalogEntry("Corollary 2.8", "nonempty A <= Omega_+p has p(A) > 0", "nonempty A <= Omega_+p in F",
                 _cor_2_8, lambda c: _submask_pairs(c, c.pos), _SUB),
    CatalogEntry("Corollary 2.9", "nonempty A <= Omega_-p has p(A) < 0", "nonempty A <= Omega_-p in F",
                 _cor_2_9, lambda c: _submask_pairs(c, c.negm), _SUB),
    CatalogEntry("Corollary 2.10", "p(A_+p) > 0", "A in F with nonempty A_+p in F", _cor_2_10,
                 _cor_2_10_domain),
    CatalogEntry("Corollary 2.11", "p(A_-p) < 0", "A in F with nonempty A_-p in F", _cor_2_11,
                 _cor_2_11_domain),
    CatalogEntry("Corollary 2.12", "p(A) = p(RA)", "all A in F with RA in F", _cor_2_12),
    CatalogEntry("Corollary 2.13", "p(CA) = p(-A)", "all A in F",
                 readings=(Reading("reducible-part", _cor_2_13_reducible),
                           Reading("complement", _cor_2_13_complement)),
                 flag_reason="follows the two readings of the reducible part CA"),
    CatalogEntry("Corollary 2.14", "A reduced implies A ∥ B reduced", "reduced A, any B in F",
                 _cor_2_14, _reduced_by_members, _PAIR, set_only=True),
    CatalogEntry("Corollary 2.15", "positively normalized iff normalized", "whole measure",
                 _cor_2_15, _nothing, ()),
    CatalogEntry("Theorem 3.1", "an extended probability is a combined probability",
                 "the extended measure obtained from this one", _thm_3_1, _nothing, (),
                 applies=_thm_3_1_applies),
    CatalogEntry("Theorem 3.2", "normalized, reduced, sign-aligned measures are extended probabilities",
                 "whole measure", _thm_3_2, _nothing, (), applies=_thm_3_2_applies),
    CatalogEntry("Theorem 3.3", "completely asymmetric positively normalized measures restrict to "
                 "conventional probability", "restriction to positive events", _thm_3_3, _nothing, (),
                 applies=_thm_3_3_applies),
    CatalogEntry("Theorem 3.4", "restriction is conventional iff positively normalized and the "
                 "positive class is an algebra", "whole measure", _thm_3_4, _nothing, (),
                 applies=_thm_3_4_applies),
)

AXIOMS: tuple[CatalogEntry, ...] = (
    CatalogEntry("CP1", "F is a set algebra holding Omega", "all pairs in F", cp1_instance,
                 _unordered_pairs, _PAIR),
    CatalogEntry("CP2", "-1 <= p(A) <= 1", "all A in F", cp2_instance),
    CatalogEntry("CP3", "additivity on doubly-disjoint pairs", "doubly-disjoint pairs", cp3_instance,
                 _unordered_pairs, _PAIR),
    CatalogEntry("CP4", "-A in F", "all A in F", cp4_instance),
    CatalogEntry("CP5", "p(A) = -p(-A)", "all A in F", cp5_instance),
)

_BY_CLAUSE = {e.clause: e for e in CATALOG + AXIOMS}


def catalog_clauses() -> list[str]:
    return [e.clause for e in CATALOG]


def _adapt(check: Check, c: _Ctx) -> Callable:
    # CP instance checks take the measure itself
    if check in (cp1_instance, cp2_instance, cp3_instance, cp4_instance, cp5_instance):
        return lambda *xs: check(c.m, *xs)
    return lambda *xs: check(c, *xs)


def _scan(c: _Ctx, label: str, roles, domain, check) -> tuple[int, int, Witness | None]:
    f = _adapt(check, c)
    first = None
    failures = checked = 0
    for args in domain(c):
        checked += 1
        bad = f(*args)
        if bad is None:
            continue
        failures += 1
        if first is None:
            expected, actual, note = bad
            first = Witness(label, tuple(zip(roles, (c.ev(x) for x in args))), expected, actual, note)
    return failures, checked, first


_SET_CACHE: dict = {}


def _run_entry(entry: CatalogEntry, c: _Ctx) -> ClauseResult:
    if entry.set_only:
        key = (entry.clause, c.space, frozenset(c.v), c.digitalized)
        hit = _SET_CACHE.get(key)
        if hit is not None:
            return hit
    if entry.applies is not None:
        why = entry.applies(c)
        if why is not None:
            return ClauseResult(entry.clause, Status.NOT_APPLICABLE, detail=why)
    if entry.flagged:
        readings = []
        first = None
        for r in entry.readings:
            c.notes.pop("triples", None)
            failures, checked, w = _scan(c, f"{entry.clause} [{r.name}]", r.roles, r.domain, r.check)
            status = Status.FAIL if failures else Status.PASS
            detail = f"{failures} of {checked} instances fail" if failures else f"{checked} instances hold"
            if "triples" in c.notes:
                detail += f" ({c.notes['triples']})"
            if w is not None:
                detail += f"; witness {w.describe()}"
                first = first or w
            readings.append((r.name, status, detail))
        result = ClauseResult(entry.clause, Status.FLAGGED, first, entry.flag_reason,
                              readings=tuple(readings))
    else:
        failures, checked, w = _scan(c, entry.clause, entry.roles, entry.domain, entry.check)
        status = Status.FAIL if failures else Status.PASS
        result = ClauseResult(entry.clause, status, w, f"{entry.quantifier}: {checked} checked", failures)
    if entry.set_only:
        _SET_CACHE[key] = result
    return result


def check_catalog(m: CombinedMeasure, include_axioms: bool = True) -> ValidationReport:
    """Run every catalog entry over its full quantifier domain for ``m``.

    The report starts with the axioms CP1 to CP5 (as computed by
    :func:`~combprob.measure.validate_axioms`), followed by one entry per
    numbered result in catalog order.
    """
    c = _Ctx(m)
    checks = list(validate_axioms(m).checks) if include_axioms else []
    checks += [_run_entry(entry, c) for entry in CATALOG]
    return ValidationReport(checks)


def replay(m: CombinedMeasure, witness: Witness) -> bool:
    """Re-run the instance behind ``witness``; True when it still fails."""
    clause, _, reading = witness.clause.partition(" [")
    entry = _BY_CLAUSE[clause]
    if reading:
        name = reading.rstrip("]")
        check = next(r.check for r in entry.readings if r.name == name)
    else:
        check = entry.check
    c = _Ctx(m)
    args = [ev.mask for _, ev in witness.events]
    if clause == "CP1" and not args:
        return cp1_instance(m) is not None
    return _adapt(check, c)(*args) is not None


# -- sweeps -----------------------------------------------------------------------


DEFAULT_GRID = tuple(Fraction(x) for x in ("-1/2", "-1/4", "0", "1/4", "1/2"))
WIDE_GRID = tuple(Fraction(x) for x in ("-1", "-1/2", "-1/4", "0", "1/4", "1/2", "1"))


@dataclass
class SweepFailure:
    assignment: dict[str, Fraction]
    result: ClauseResult


@dataclass
class SweepSummary:
    atoms: int
    candidates: int = 0
    valid: int = 0
    rejected: int = 0
    passed: int = 0
    failures: list[SweepFailure] = field(default_factory=list)
    flagged: dict[str, int] = field(default_factory=dict)
    not_applicable: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: SweepSummary) -> None:
        self.candidates += other.candidates
        self.valid += other.valid
        self.rejected += other.rejected
        self.passed += other.passed
        self.failures += other.failures
        for mine, theirs in ((self.flagged, other.flagged), (self.not_applicable, other.not_applicable)):
            for k, v in theirs.items():
                mine[k] = mine.get(k, 0) + v

    def to_dict(self) -> dict:
        return {
            "atoms": self.atoms,
            "candidates": self.candidates,
            "valid": self.valid,
            "rejected_by_construction": self.rejected,
            "passed": self.passed,
            "failures": [
                {"assignment": {k: str(v) for k, v in f.assignment.items()}, **f.result.to_dict()}
                for f in self.failures
            ],
            "flagged": dict(sorted(self.flagged.items())),
            "not_applicable": dict(sorted(self.not_applicable.items())),
        }


def _check_grid(grid: Sequence[Fraction]) -> tuple[Fraction, ...]:
    values = sorted({as_rational(g) for g in grid})
    for g in values:
        if -g not in values:
            raise ValueError(f"grid is not sign-symmetric: {g} present but {-g} missing")
    return tuple(values)


def _sweep_one(args) -> tuple[int, list[tuple[dict, ClauseResult]], dict, dict, bool]:
    labels, assignment = args
    space = Space(labels)
    try:
        m = from_positive_values(space, dict(zip(labels, assignment)))
    except ConstructionError:
        return 0, [], {}, {}, False
    report = check_catalog(m)
    fails = [(dict(zip(labels, assignment)), r) for r in report.failures()]
    flagged = {r.clause: 1 for r in report.flagged()}
    na = {r.clause: 1 for r in report if r.status is Status.NOT_APPLICABLE}
    return 1, fails, flagged, na, True


def sweep_measures(space: Space, grid: Sequence[Fraction], jobs: int = 1) -> SweepSummary:
    """Check every digitalized measure with positive-atom values drawn from ``grid``.

    Candidates violating CP2 are counted as rejected.  With ``jobs > 1``
    measures are checked in worker processes; results are merged in
    canonical assignment order either way.
    """
    values = _check_grid(grid)
    labels = space.labels
    tasks = [(labels, combo) for combo in itertools.product(values, repeat=len(labels))]
    summary = SweepSummary(atoms=len(labels))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_one, tasks, chunksize=8))
    else:
        results = [_sweep_one(t) for t in tasks]
    for valid, fails, flagged, na, _ in results:
        summary.candidates += 1
        if not valid:
            summary.rejected += 1
            continue
        summary.valid += 1
        if not fails:
            summary.passed += 1
        summary.failures += [SweepFailure(a, r) for a, r in fails]
        for k in flagged:
            summary.flagged[k] = summary.flagged.get(k, 0) + 1
        for k in na:
            summary.not_applicable[k] = summary.not_applicable.get(k, 0) + 1
    return summary


def default_sweep(max_atoms: int = 3, grid: Sequence[Fraction] = DEFAULT_GRID, jobs: int = 1) -> SweepSummary:
    """Sweep spaces with 1 to ``max_atoms`` atoms (labelled w1, w2, ...)."""
    total = SweepSummary(atoms=max_atoms)
    for k in range(1, max_atoms + 1):
        total.merge(sweep_measures(Space(f"w{i}" for i in range(1, k + 1)), grid, jobs))
    return total


# -- counterexample searches ------------------------------------------------------------


_SIGN_OPS = {
    "∩": ("∩", lambda a, b: a & b, False), "&": ("∩", lambda a, b: a & b, False),
    "∪": ("∪", lambda a, b: a | b, False), "|": ("∪", lambda a, b: a | b, False),
    "\\": ("\\", lambda a, b: a & ~b, True), "-": ("\\", lambda a, b: a & ~b, True),
}


def find_sign_class_counterexample(m: CombinedMeasure, op: str) -> Witness | None:
    """Two positively evaluated events whose combination is not positively evaluated.

    Candidates are the reduced positively evaluated members.  A result
    escapes when it is nonempty and either missing from F or valued <= 0;
    the smallest escaping result is reported, ties broken by the pair.
    """
    try:
        name, f, ordered = _SIGN_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}; use one of ∩ ∪ \\") from None
    n = m.space.n
    dom = sorted((x for x in positive_domain(m).masks if x), key=lambda x: mask_key(x, n))
    best = best_key = None
    for i, a in enumerate(dom):
        for b in (dom if ordered else dom[i:]):
            r = f(a, b)
            if not r or (r in m._v and m._v[r] > 0):
                continue
            k = (mask_key(r, n), mask_key(a, n), mask_key(b, n))
            if best_key is None or k < best_key:
                best, best_key = (a, b, r), k
    if best is None:
        return None
    a, b, r = best
    ev = lambda x: Event(m.space, x)  # noqa: E731
    actual = m._v.get(r)
    return Witness(f"sign-class {name}", (("A", ev(a)), ("B", ev(b)), ("result", ev(r))),
                   "p > 0", actual if actual is not None else "undefined",
                   f"p(A) = {m._v[a]}, p(B) = {m._v[b]}, A {name} B leaves the positive class")


def verify_reduction_witness(a: Event, b: Event) -> bool:
    """B <= A, RA nonempty, and RB not contained in RA."""
    from combprob.events import reduce

    return b <= a and bool(reduce(a)) and not reduce(b) <= reduce(a)


def verify_union_witness(a: Event, b: Event, cc: Event) -> bool:
    """Reduced A, B, C with ∅ != C < B, A ∪_R B nonempty, and A ∪_R C not inside A ∪_R B."""
    from combprob.events import reduced_union

    if not (a.is_reduced() and b.is_reduced() and cc.is_reduced()):
        return False
    ab, ac = reduced_union(a, b), reduced_union(a, cc)
    return bool(cc) and cc < b and bool(ab) and not ac <= ab


@dataclass(frozen=True)
class NonmonotonicityWitness:
    reduction: Witness
    reduced_union: Witness


def find_reduction_nonmonotonicity(space: Space) -> NonmonotonicityWitness:
    """Witnesses that reduction and reduced union are not monotone.

    With x the last label and y the first: B = {y, x} sits inside
    A = {y, x, -x} while RB = B is not inside RA = {y}.  For reduced union
    on three or more atoms the last three labels x, y, z give A = {x, y, z},
    B = {-x, -y}, C = {-x}; on two atoms A = {y}, B = {-y, -x}, C = {-x}.
    Both witnesses are verified before they are returned.  Degenerate
    witnesses (empty reductions, empty C) are excluded, which leaves none on
    a one-atom space.
    """
    if space.n < 2:
        raise ValueError("need at least two atoms for a nondegenerate witness")
    labels = space.labels
    x, y = labels[-1], labels[0]
    a, b = space.event(y, x, f"-{x}"), space.event(y, x)
    if space.n >= 3:
        x, y, z = labels[-1], labels[-2], labels[-3]
        ua, ub, uc = space.event(x, y, z), space.event(f"-{x}", f"-{y}"), space.event(f"-{x}")
    else:
        ua, ub, uc = space.event(y), space.event(f"-{y}", f"-{x}"), space.event(f"-{x}")
    if not (verify_reduction_witness(a, b) and verify_union_witness(ua, ub, uc)):
        raise AssertionError("constructed witness failed verification")
    return NonmonotonicityWitness(
        Witness("reduction", (("A", a), ("B", b)), note="B <= A but RB is not inside RA"),
        Witness("reduced union", (("A", ua), ("B", ub), ("C", uc)),
                note="C < B but A ∪_R C is not inside A ∪_R B"),
    )


# -- random extended measures ----------------------------------------------------------


def random_extended(rng: random.Random, max_atoms: int = 4, max_denominator: int = 12) -> ExtendedMeasure:
    """A random extended measure with a random positive algebra.

    Block values are nonnegative multiples of ``1/d`` for a random
    ``d <= max_denominator`` and sum to one.
    """
    n = rng.randint(1, max_atoms)
    space = Space(f"w{i}" for i in range(1, n + 1))
    labels = list(space.labels)
    rng.shuffle(labels)
    k = rng.randint(1, n)
    cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
    groups = [labels[i:j] for i, j in zip([0] + cuts, cuts + [n])]
    d = rng.randint(1, max_denominator)
    units = [0] * len(groups)
    for _ in range(d):
        units[rng.randrange(len(groups))] += 1
    return extended_from_blocks(space, {space.event(*g): Fraction(u, d) for g, u in zip(groups, units)})
