"""Extended probability, Kolmogorov probability, and conversions to and from combined measures."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from combprob.errors import HypothesisError, NotDigitalizedError
from combprob.events import Event, Space, mask_key, neg_mask, reduce_mask
from combprob.measure import (
    ONE,
    ZERO,
    CombinedMeasure,
    classify_normalization,
    elementary_classes,
    measure_from_blocks,
    positive_domain,
    validate_axioms,
)
from combprob.rational import as_rational
from combprob.report import ClauseResult, Status, ValidationReport, Witness
from combprob.structures import EventFamily, generate_algebra, is_set_algebra, partition_blocks


def _ordered(space: Space, masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=lambda x: mask_key(x, space.n))


class ExtendedMeasure:
    """An extended probability: every member of the family is reduced.

    Lookups reduce their argument first, so ``{v, w, -w}`` and ``{v}`` are
    the same event here.
    """

    def __init__(self, space: Space, family: EventFamily | Iterable[Event],
                 values: Mapping[Event, Fraction | int | str]):
        if not isinstance(family, EventFamily):
            family = EventFamily(space, family)
        for ev in family:
            if not ev.is_reduced():
                raise ValueError(f"extended families hold reduced events only; {ev} is not")
        v = {ev.mask: as_rational(val) for ev, val in values.items()}
        if set(v) != set(family.masks):
            raise ValueError("values must be given for exactly the members of the family")
        self.space = space
        self.family = family
        self._v = v

    def __repr__(self) -> str:
        return f"<ExtendedMeasure over {list(self.space.labels)} |F|={len(self.family)}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtendedMeasure):
            return NotImplemented
        return self.space == other.space and self._v == other._v

    __hash__ = None

    @cached_property
    def values(self) -> dict[Event, Fraction]:
        return {Event(self.space, k): v for k, v in self._v.items()}

    def prob(self, a: Event) -> Fraction:
        r = reduce_mask(a.mask, self.space.n)
        if r not in self._v:
            raise KeyError(f"{a} (reduced: {Event(self.space, r)}) is not a random event")
        return self._v[r]


def extended_from_blocks(space: Space, block_values: Mapping[Event, Fraction | int | str]
                         ) -> ExtendedMeasure:
    """Extended measure whose positive algebra is generated by a partition of Omega+.

    The family is every reduced event whose positive part is a union of
    blocks and whose negative part is a union of negated blocks.
    """
    blocks = [(b.mask, as_rational(v)) for b, v in block_values.items()]
    cover = 0
    for bm, _ in blocks:
        if not bm or bm & ~space.pos_mask or cover & bm:
            raise ValueError("blocks must be nonempty, positive and pairwise disjoint")
        cover |= bm
    if cover != space.pos_mask:
        raise ValueError("blocks must cover the positive half")
    n = space.n
    values: dict[Event, Fraction] = {}
    # each block is absent, present, or present as its antievent
    states = [0]
    vals = [ZERO]
    for bm, val in blocks:
        states, vals = (
            [s | x for s in states for x in (0, bm, bm << n)],
            [v + d for v in vals for d in (ZERO, val, -val)],
        )
    for s, v in zip(states, vals):
        values[Event(space, s)] = v
    return ExtendedMeasure(space, values.keys(), values)


def extended_from_positive(space: Space, values: Mapping[str, Fraction | int | str]) -> ExtendedMeasure:
    """Extended measure on every reduced event from the positive atoms' values."""
    return extended_from_blocks(space, {space.event(label): values[label] for label in space.labels})


# -- extended axioms ----------------------------------------------------------------


def _result(clause: str, witness: Witness | None, detail: str, failures: int = 1) -> ClauseResult:
    if witness is None:
        return ClauseResult(clause, Status.PASS, detail=detail)
    return ClauseResult(clause, Status.FAIL, witness, detail, failures)


def check_extended_axioms(e: ExtendedMeasure) -> ValidationReport:
    space, n = e.space, e.space.n
    pos_mask, neg_half = space.pos_mask, space.neg_mask
    members = _ordered(space, e._v)
    ev = lambda x: Event(space, x)  # noqa: E731
    checks = []

    # EP1: negation is a graded involution swapping the halves.
    bad = [b for b in range(2 * n)
           if neg_mask(neg_mask(1 << b, n), n) != 1 << b
           or (1 << b & pos_mask and not neg_mask(1 << b, n) & neg_half)]
    checks.append(_result("EP1", Witness("EP1", (("w", ev(1 << bad[0])),)) if bad else None,
                          "structural: negation on a symmetric space"))

    plus = [x for x in members if not x & neg_half]
    plus_family = EventFamily(space, (ev(x) for x in plus))
    alg = is_set_algebra(plus_family, unit=space.positive_half)
    w = None
    if not alg:
        if alg.witness is not None:
            f = alg.witness
            w = Witness("EP2", (("A", f.left), ("B", f.right)), note=f"{f.op} gives {f.result}, which is missing")
        else:
            w = Witness("EP2", (), note=alg.note)
    checks.append(_result("EP2", w, "F+ is a set algebra holding Omega+"))

    top = e._v.get(pos_mask)
    if top is None:
        w = Witness("EP3", (("Omega+", space.positive_half),), note="Omega+ is not a random event")
    elif top != ONE:
        w = Witness("EP3", (("Omega+", space.positive_half),), ONE, top)
    else:
        w = None
    checks.append(_result("EP3", w, "P(Omega+) = 1"))

    plus_set = set(plus)
    minus_set = {neg_mask(x, n) for x in plus}
    w = None
    failures = 0
    for x in members:
        xp, xm = x & pos_mask, x & neg_half
        if not (xp in plus_set and xm in minus_set):
            failures += 1
            w = w or Witness("EP4", (("X", ev(x)),), note="member is not composed of F+ and F- parts")
    composed = 0
    minus = [neg_mask(x, n) for x in plus]
    for a in plus:
        for b in minus:
            if a & neg_mask(b, n):
                continue
            composed += 1
            if a | b not in e._v:
                failures += 1
                w = w or Witness("EP4", (("X+", ev(a)), ("X-", ev(b))),
                                 note=f"composable event {ev(a | b)} is missing")
    checks.append(_result("EP4", w, f"{composed} composable events", failures))

    w = None
    failures = checked = 0
    for i, a in enumerate(members):
        for b in members[i:]:
            if a & b:
                continue
            checked += 1
            r = reduce_mask(a | b, n)
            if r not in e._v:
                failures += 1
                w = w or Witness("EP5", (("A", ev(a)), ("B", ev(b))), note=f"union {ev(r)} is missing")
            elif e._v[r] != e._v[a] + e._v[b]:
                failures += 1
                w = w or Witness("EP5", (("A", ev(a)), ("B", ev(b))), e._v[a] + e._v[b], e._v[r])
    checks.append(_result("EP5", w, f"{checked} disjoint pairs, union taken with annihilation", failures))

    unreduced = [x for x in members if reduce_mask(x, n) != x]
    checks.append(_result("EP6", Witness("EP6", (("A", ev(unreduced[0])),)) if unreduced else None,
                          "structural: members are reduced, lookups reduce first", len(unreduced)))

    checks.append(ClauseResult("EP7", Status.PASS,
                               detail="structural: one value per reduced event"))

    negative = [x for x in plus if e._v[x] < 0]
    checks.append(_result(
        "EP8",
        Witness("EP8", (("A", ev(negative[0])),), "P(A) >= 0", e._v[negative[0]],
                "a positive event has negative probability") if negative else None,
        "P(A) >= 0 on F+", len(negative)))
    return ValidationReport(checks)


def extended_to_combined(e: ExtendedMeasure) -> CombinedMeasure:
    """Extend to the algebra generated by the family and Omega, valuing by reduction."""
    report = check_extended_axioms(e)
    if not report.ok:
        bad = report.failures()[0]
        raise HypothesisError("extended-axioms", f"input violates {bad.clause}",
                              bad.witness, axiom=bad.clause)
    space = e.space
    fam = generate_algebra(list(e.family) + [space.omega], space.omega)
    values: dict[int, Fraction] = {}
    for x in fam.masks:
        r = reduce_mask(x, space.n)
        if r not in e._v:
            raise HypothesisError("extended-axioms",
                                  f"reduction {Event(space, r)} of {Event(space, x)} is not a random event")
        values[x] = e._v[r]
    return CombinedMeasure._from_masks(space, values)


def combined_to_extended(m: CombinedMeasure) -> ExtendedMeasure:
    """Restrict a normalized, sign-aligned digitalized measure to its reduced events."""
    if not m.is_digitalized:
        raise NotDigitalizedError("conversion to extended probability needs a digitalized measure")
    space, n = m.space, m.space.n
    report = validate_axioms(m)
    if not report.ok:
        bad = report.failures()[0]
        raise HypothesisError("combined-axioms", f"input violates {bad.clause}", bad.witness, bad.clause)
    norm = classify_normalization(m)
    if not norm.normalized:
        raise HypothesisError("normalized", "the measure is not normalized: no event has value 1",
                              Witness("normalized", note="no event with p = 1 or p = -1"))
    for x in m._ordered_masks:
        r = reduce_mask(x, n)
        if r not in m._v or m._v[r] != m._v[x]:
            raise HypothesisError("reduced", f"{Event(space, x)} does not collapse onto its reduction",
                                  Witness("reduced", (("A", Event(space, x)),)))
    pos, neg, zero = elementary_classes(m)
    for half, want, name in ((space.positive_half, pos | zero, "Omega+"),
                             (space.negative_half, neg | zero, "Omega-")):
        stray = half - want
        if stray:
            atom = sorted(stray, key=lambda a: (a.label, a.negative))[0]
            w = space.event(atom)
            sign = "negative" if half == space.positive_half else "positive"
            raise HypothesisError(
                "sign-alignment",
                f"{atom} is in {name} but has {sign} probability {m._v[w.mask]}; "
                f"the result would violate EP8",
                Witness("sign-alignment", (("w", w),), "sign matching " + name, m._v[w.mask]),
                axiom="EP8")
    reduced = [x for x in m._v if reduce_mask(x, n) == x]
    return ExtendedMeasure(space, (Event(space, x) for x in reduced),
                           {Event(space, x): m._v[x] for x in reduced})


# -- Kolmogorov ------------------------------------------------------------------------


class ConventionalMeasure:
    """A nonnegative additive measure on an algebra of events with unit ``universe``.

    Events are ordinary :class:`Event` values; a measure written by hand uses
    positive atoms only, while one obtained by restriction may contain
    antievents as plain outcomes.
    """

    def __init__(self, space: Space, family: EventFamily | Iterable[Event],
                 values: Mapping[Event, Fraction | int | str], universe: Event | None = None):
        if not isinstance(family, EventFamily):
            family = EventFamily(space, family)
        v = {ev.mask: as_rational(val) for ev, val in values.items()}
        if set(v) != set(family.masks):
            raise ValueError("values must be given for exactly the members of the family")
        if universe is None:
            top = 0
            for x in v:
                top |= x
            universe = Event(space, top)
        self.space = space
        self.family = family
        self.universe = universe
        self._v = v

    def __repr__(self) -> str:
        return f"<ConventionalMeasure universe={self.universe} |F|={len(self.family)}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConventionalMeasure):
            return NotImplemented
        return (self.space, self.universe, self._v) == (other.space, other.universe, other._v)

    __hash__ = None

    @cached_property
    def values(self) -> dict[Event, Fraction]:
        return {Event(self.space, k): v for k, v in self._v.items()}

    def prob(self, a: Event) -> Fraction:
        return self._v[a.mask]


def check_kolmogorov(c: ConventionalMeasure) -> ValidationReport:
    space = c.space
    members = _ordered(space, c._v)
    ev = lambda x: Event(space, x)  # noqa: E731

    negative = [x for x in members if c._v[x] < 0]
    k1 = _result("K1", Witness("K1", (("A", ev(negative[0])),), "P(A) >= 0", c._v[negative[0]])
                 if negative else None, "P(A) >= 0", len(negative))

    top = c._v.get(c.universe.mask)
    if top is None:
        w = Witness("K2", (("Omega", c.universe),), note="universe is not a member")
    elif top != ONE:
        w = Witness("K2", (("Omega", c.universe),), ONE, top)
    else:
        w = None
    k2 = _result("K2", w, "P(Omega) = 1")

    w = None
    failures = checked = 0
    for i, a in enumerate(members):
        for b in members[i:]:
            if a & b:
                continue
            checked += 1
            u = a | b
            if u not in c._v:
                failures += 1
                w = w or Witness("K3", (("A", ev(a)), ("B", ev(b))), note=f"union {ev(u)} is missing")
            elif c._v[u] != c._v[a] + c._v[b]:
                failures += 1
                w = w or Witness("K3", (("A", ev(a)), ("B", ev(b))), c._v[a] + c._v[b], c._v[u])
    k3 = _result("K3", w, f"{checked} disjoint pairs", failures)
    return ValidationReport([k1, k2, k3])


def is_conventional(c: ConventionalMeasure) -> bool:
    """Kolmogorov axioms hold and the family is an algebra with unit ``universe``."""
    return check_kolmogorov(c).ok and bool(is_set_algebra(c.family, unit=c.universe))


def conventional_to_combined(c: ConventionalMeasure) -> CombinedMeasure:
    """Embed the universe as Omega+ and extend antisymmetrically to the negated events."""
    report = check_kolmogorov(c)
    if not report.ok:
        bad = report.failures()[0]
        raise HypothesisError("kolmogorov-axioms", f"input violates {bad.clause}", bad.witness, bad.clause)
    alg = is_set_algebra(c.family, unit=c.universe)
    if not alg:
        f = alg.witness
        w = Witness("algebra", ((("A", f.left), ("B", f.right)) if f else ()),
                    note=str(f) if f else alg.note)
        raise HypothesisError("algebra", "the family is not a set algebra with the given universe", w)
    if c.universe.mask & c.space.neg_mask:
        raise HypothesisError("positive-universe",
                              "only a universe of plain positive outcomes can be embedded as Omega+")
    space = Space(a.label for a in c.universe)
    relabel = lambda e: space.event(*(a.label for a in e))  # noqa: E731
    blocks = partition_blocks(c.family, c.universe)
    block_values: dict[Event, Fraction] = {}
    for b in blocks:
        p = c._v[b.mask]
        nb = relabel(b)
        block_values[nb] = p
        block_values[-nb] = -p
    return measure_from_blocks(space, block_values)


def restriction(m: CombinedMeasure) -> ConventionalMeasure:
    """Restriction of ``m`` to its positively evaluated reduced events, unconditionally."""
    dom = positive_domain(m)
    top = 0
    for x in dom.masks:
        top |= x
    return ConventionalMeasure(m.space, dom, {ev: m._v[ev.mask] if ev.mask else ZERO for ev in dom},
                               universe=Event(m.space, top))


def restrict_positive(m: CombinedMeasure) -> ConventionalMeasure:
    """The restriction to positively evaluated events, if it is a conventional probability.

    Succeeds exactly when ``m`` is positively normalized and the positively
    evaluated events (reduced, with the empty event) form a set algebra.
    """
    norm = classify_normalization(m)
    if not norm.positively_normalized:
        raise HypothesisError("positively-normalized",
                              "the measure is not positively normalized: no event has value 1",
                              Witness("positively-normalized", note="no event with p = 1"),
                              reason="not-positively-normalized")
    dom = positive_domain(m)
    alg = is_set_algebra(dom)
    if not alg:
        f = alg.witness
        if f is not None:
            w = Witness("algebra", (("A", f.left), ("B", f.right), ("result", f.result)),
                        note=f"{f.op} leaves the positively evaluated events; "
                             f"p({f.result}) = {m._v.get(f.result.mask, 'undefined')}")
        else:
            w = Witness("algebra", note=alg.note)
        raise HypothesisError("algebra", "F₊ₚ not a set algebra: the positively evaluated events are not closed", w,
                              reason="family-not-algebra")
    return restriction(m)
