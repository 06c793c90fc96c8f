"""Combined probability measures on symmetric finite spaces.

All arithmetic is on :class:`fractions.Fraction`; every comparison is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

from combprob.errors import (
    ConstructionError,
    EventNotInFamilyError,
    NotDigitalizedError,
    UnreducedEventError,
)
from combprob.events import Event, SignedAtom, Space, mask_key, neg_mask, reduce_mask, support_mask
from combprob.rational import as_rational
from combprob.report import ClauseResult, Status, ValidationReport, Witness
from combprob.structures import EventFamily, is_set_algebra, unions_of

ZERO = Fraction(0)
ONE = Fraction(1)


class CombinedMeasure:
    """A space, a family of events and an exact value for every member.

    Nothing is checked here beyond bookkeeping; use :func:`validate_axioms`.
    """

    def __init__(self, space: Space, family: EventFamily | Iterable[Event],
                 values: Mapping[Event, Fraction | int | str]):
        if not isinstance(family, EventFamily):
            family = EventFamily(space, family)
        if family.space != space:
            raise ValueError("family is drawn from a different space")
        v: dict[int, Fraction] = {}
        for ev, val in values.items():
            if ev not in family:
                raise ValueError(f"value given for {ev}, which is not in the family")
            v[ev.mask] = as_rational(val)
        missing = [ev for ev in family if ev.mask not in v]
        if missing:
            raise ValueError(f"no value given for {missing[0]}")
        self.space = space
        self.family = family
        self._v = v

    @classmethod
    def _from_masks(cls, space: Space, values: dict[int, Fraction]) -> CombinedMeasure:
        m = cls.__new__(cls)
        m.space = space
        m.family = EventFamily(space, (Event(space, k) for k in values))
        m._v = values
        return m

    def __repr__(self) -> str:
        kind = "digitalized" if self.is_digitalized else "explicit"
        return f"<CombinedMeasure {kind} over {list(self.space.labels)} |F|={len(self.family)}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CombinedMeasure):
            return NotImplemented
        return self.space == other.space and self._v == other._v

    __hash__ = None

    def __contains__(self, ev: Event) -> bool:
        return ev.space == self.space and ev.mask in self._v

    def __getitem__(self, ev: Event) -> Fraction:
        return evaluate(self, ev)

    @cached_property
    def values(self) -> Mapping[Event, Fraction]:
        return MappingProxyType({ev: self._v[ev.mask] for ev in self.family})

    @cached_property
    def is_digitalized(self) -> bool:
        """Every elementary event (singleton) is a member of the family."""
        return all(1 << b in self._v for b in range(2 * self.space.n))

    @cached_property
    def _ordered_masks(self) -> list[int]:
        n = self.space.n
        return sorted(self._v, key=lambda x: mask_key(x, n))

    @cached_property
    def _elementary(self) -> tuple[int, int, int]:
        """Masks of positively, negatively and neutrally evaluated elementary events."""
        pos = neg = zero = 0
        for b in range(2 * self.space.n):
            val = self._v.get(1 << b)
            if val is None:
                continue
            if val > 0:
                pos |= 1 << b
            elif val < 0:
                neg |= 1 << b
            else:
                zero |= 1 << b
        return pos, neg, zero

    def atom_values(self) -> dict[SignedAtom, Fraction]:
        if not self.is_digitalized:
            raise NotDigitalizedError("atom values need every elementary event in the family")
        return {self.space.atom_at(b): self._v[1 << b] for b in range(2 * self.space.n)}


# -- construction -------------------------------------------------------------


def _atom_key(space: Space, key) -> int:
    if isinstance(key, str):
        key = SignedAtom.parse(key)
    return space.bit(key)


def make_digitalized(space: Space, atom_values: Mapping[SignedAtom | str, Fraction | int | str]
                     ) -> CombinedMeasure:
    """Measure on the full power set whose value is the sum over member atoms.

    ``atom_values`` must cover all of Omega and be antisymmetric; every
    resulting value must lie in [-1, 1].
    """
    n = space.n
    by_bit: dict[int, Fraction] = {}
    for key, val in atom_values.items():
        by_bit[_atom_key(space, key)] = as_rational(val)
    for b in range(2 * n):
        if b not in by_bit:
            raise ValueError(f"no value given for atom {space.atom_at(b)}")
    for i in range(n):
        if by_bit[i] != -by_bit[i + n]:
            raise ConstructionError(
                "CP5a", f"p({space.atom_at(i)}) = {by_bit[i]} but p({space.atom_at(i + n)}) = "
                f"{by_bit[i + n]}", space.event(space.atom_at(i)))
    values: dict[int, Fraction] = {0: ZERO}
    for b in range(2 * n):
        bit, val = 1 << b, by_bit[b]
        for mask in range(bit):
            values[mask | bit] = values[mask] + val
    bad = [m for m in values if not -1 <= values[m] <= 1]
    if bad:
        worst = min(bad, key=lambda x: mask_key(x, n))
        raise ConstructionError("CP2", f"p({Event(space, worst)}) = {values[worst]} is outside [-1, 1]",
                                Event(space, worst))
    return CombinedMeasure._from_masks(space, values)


def from_positive_values(space: Space, values: Mapping[str, Fraction | int | str]) -> CombinedMeasure:
    """Digitalized measure from the values of the positive atoms alone."""
    full: dict[SignedAtom | str, Fraction] = {}
    for label in space.labels:
        if label not in values:
            raise ValueError(f"no value given for atom {label}")
        val = as_rational(values[label])
        full[SignedAtom(label)] = val
        full[SignedAtom(label, True)] = -val
    extra = set(values) - set(space.labels)
    if extra:
        raise ValueError(f"unknown atoms {sorted(extra)}")
    return make_digitalized(space, full)


def measure_from_blocks(space: Space, block_values: Mapping[Event, Fraction | int | str]
                        ) -> CombinedMeasure:
    """Measure on all unions of the given blocks, valued additively.

    The blocks must partition Omega.  Used for coarse (non-digitalized)
    measures whose family is the algebra generated by a partition.
    """
    blocks = list(block_values)
    cover = 0
    for b in blocks:
        if not b or cover & b.mask:
            raise ValueError("blocks must be nonempty and pairwise disjoint")
        cover |= b.mask
    if cover != space.full_mask:
        raise ValueError("blocks must cover the whole space")
    vals = {b.mask: as_rational(v) for b, v in block_values.items()}
    values: dict[int, Fraction] = {}
    for ev in unions_of(blocks, space):
        values[ev.mask] = sum((v for bm, v in vals.items() if bm & ev.mask), ZERO)
    return CombinedMeasure._from_masks(space, values)


def scale(m: CombinedMeasure, factor: Fraction | int | str) -> CombinedMeasure:
    factor = as_rational(factor)
    return CombinedMeasure._from_masks(m.space, {k: v * factor for k, v in m._v.items()})


# -- axioms ----------------------------------------------------------------------


def cp1_instance(m: CombinedMeasure, a: int | None = None, b: int | None = None):
    """Closure of one pair under ∩ and Δ; with no pair, membership of Omega."""
    if a is None:
        if m.space.full_mask not in m._v:
            return None, None, "Omega is not a member"
        return None
    for op, r in (("∩", a & b), ("Δ", a ^ b)):
        if r not in m._v:
            return None, None, f"{op} gives {Event(m.space, r)}, which is missing"
    return None


def cp2_instance(m: CombinedMeasure, a: int):
    val = m._v[a]
    if not -1 <= val <= 1:
        return "[-1, 1]", val, "value out of range"
    return None


def cp3_instance(m: CombinedMeasure, a: int, b: int):
    n = m.space.n
    if support_mask(a, n) & support_mask(b, n):
        return None
    u = a | b
    if u not in m._v:
        return None, None, f"union {Event(m.space, u)} is missing"
    lhs, rhs = m._v[u], m._v[a] + m._v[b]
    if lhs != rhs:
        return rhs, lhs, "p(A ∪ B) != p(A) + p(B)"
    return None


def cp4_instance(m: CombinedMeasure, a: int):
    na = neg_mask(a, m.space.n)
    if na not in m._v:
        return None, None, f"negation {Event(m.space, na)} is missing"
    return None


def cp5_instance(m: CombinedMeasure, a: int):
    na = neg_mask(a, m.space.n)
    if na not in m._v:
        return None
    if m._v[a] != -m._v[na]:
        return -m._v[na], m._v[a], "p(A) != -p(-A)"
    return None


def _scan(clause: str, m: CombinedMeasure, roles: tuple[str, ...], domain, instance) -> ClauseResult:
    first = None
    failures = checked = 0
    for args in domain:
        checked += 1
        bad = instance(m, *args)
        if bad is None:
            continue
        failures += 1
        if first is None:
            expected, actual, note = bad
            first = Witness(clause, tuple(zip(roles, (Event(m.space, x) for x in args))),
                            expected, actual, note)
    status = Status.FAIL if failures else Status.PASS
    return ClauseResult(clause, status, first, f"{checked} instances", failures)


def _pairs(masks: list[int]):
    for i, a in enumerate(masks):
        for b in masks[i:]:
            yield a, b


def _doubly_disjoint_pairs(m: CombinedMeasure):
    n = m.space.n
    masks = m._ordered_masks
    sup = [support_mask(x, n) for x in masks]
    for i, a in enumerate(masks):
        sa = sup[i]
        for j in range(i, len(masks)):
            if not sa & sup[j]:
                yield a, masks[j]


def check_cp1(m: CombinedMeasure) -> ClauseResult:
    omega = m.space.omega
    if omega not in m.family:
        return ClauseResult("CP1", Status.FAIL,
                            Witness("CP1", (), None, None, "Omega is not a member"),
                            "family must be a set algebra containing Omega", 1)
    alg = is_set_algebra(m.family, unit=omega)
    if alg:
        return ClauseResult("CP1", Status.PASS, detail=f"set algebra with unit Omega, |F| = {len(m.family)}")
    w = alg.witness
    if w is None:
        return ClauseResult("CP1", Status.FAIL, Witness("CP1", (), None, None, alg.note), alg.note, 1)
    witness = Witness("CP1", (("A", w.left), ("B", w.right)), None, None,
                      f"{w.op} gives {w.result}, which is missing")
    return ClauseResult("CP1", Status.FAIL, witness, "family is not a set algebra", 1)


def validate_axioms(m: CombinedMeasure) -> ValidationReport:
    """Check CP1 to CP5 in order, exhaustively over the family."""
    masks = m._ordered_masks
    single = [(x,) for x in masks]
    return ValidationReport([
        check_cp1(m),
        _scan("CP2", m, ("A",), single, cp2_instance),
        _scan("CP3", m, ("A", "B"), _doubly_disjoint_pairs(m), cp3_instance),
        _scan("CP4", m, ("A",), single, cp4_instance),
        _scan("CP5", m, ("A",), single, cp5_instance),
    ])


# -- evaluation and classification -------------------------------------------------


def evaluate(m: CombinedMeasure, a: Event) -> Fraction:
    if a.space != m.space or a.mask not in m._v:
        raise EventNotInFamilyError(a)
    return m._v[a.mask]


def atom_sum(m: CombinedMeasure, a: Event) -> Fraction:
    """Sum of the member atoms' values, independent of the stored table."""
    if not m.is_digitalized:
        raise NotDigitalizedError("atom sums need every elementary event in the family")
    return sum((m._v[1 << b] for b in range(2 * m.space.n) if a.mask >> b & 1), ZERO)


def _require_digitalized(m: CombinedMeasure) -> None:
    if not m.is_digitalized:
        raise NotDigitalizedError("the measure is not digitalized: some elementary event is not in F")


def elementary_classes(m: CombinedMeasure) -> tuple[Event, Event, Event]:
    """Positively, negatively and neutrally evaluated elementary events in the family."""
    pos, neg, zero = m._elementary
    return Event(m.space, pos), Event(m.space, neg), Event(m.space, zero)


def partition_space(m: CombinedMeasure) -> tuple[Event, Event, Event]:
    _require_digitalized(m)
    return elementary_classes(m)


def event_parts(m: CombinedMeasure, a: Event) -> tuple[Event, Event, Event]:
    _require_digitalized(m)
    pos, neg, zero = elementary_classes(m)
    return a & pos, a & neg, a & zero


def decompose(m: CombinedMeasure, a: Event) -> tuple[Fraction, Fraction]:
    """Values of the positively and negatively valuated parts of a reduced event."""
    _require_digitalized(m)
    if not a.is_reduced():
        raise UnreducedEventError(f"{a} is not reduced; decomposition only holds for reduced events")
    pos, neg, _ = event_parts(m, a)
    return evaluate(m, pos), evaluate(m, neg)


@dataclass(frozen=True)
class Normalization:
    positively_normalized: bool
    negatively_normalized: bool
    positive_witness: Event | None
    negative_witness: Event | None
    # positive and negative normalization must coincide on valid measures
    consistent: bool
    diagnostic: str = ""

    @property
    def normalized(self) -> bool:
        return self.positively_normalized and self.negatively_normalized


def classify_normalization(m: CombinedMeasure) -> Normalization:
    pos_w = next((x for x in m._ordered_masks if m._v[x] == ONE), None)
    neg_w = next((x for x in m._ordered_masks if m._v[x] == -ONE), None)
    pos, neg = pos_w is not None, neg_w is not None
    diagnostic = ""
    if pos != neg:
        which = "positively" if pos else "negatively"
        diagnostic = (f"measure is {which} normalized only; the two notions coincide on "
                      "valid measures, so some axiom is violated")
    return Normalization(
        pos, neg,
        Event(m.space, pos_w) if pos else None,
        Event(m.space, neg_w) if neg else None,
        pos == neg, diagnostic,
    )


@dataclass(frozen=True)
class Completeness:
    positively_complete: bool
    negatively_complete: bool
    positive_mass: Fraction | None
    negative_mass: Fraction | None


def is_complete(m: CombinedMeasure) -> Completeness:
    """Exact tests p(Omega_+p) = 1 and p(Omega_-p) = -1.

    Needs both evaluated halves to be members of the family, which always
    holds for digitalized measures.
    """
    pos, neg, _ = elementary_classes(m)
    if pos not in m or neg not in m:
        raise NotDigitalizedError(
            f"positively/negatively evaluated atoms {pos} / {neg} are not both in the family")
    pm, nm = evaluate(m, pos), evaluate(m, neg)
    return Completeness(pm == ONE, nm == -ONE, pm, nm)


def family_sign_classes(m: CombinedMeasure) -> tuple[EventFamily, EventFamily, EventFamily]:
    """Members with positive, negative and zero value (strict signs)."""
    pos, neg, zero = [], [], []
    for ev in m.family:
        val = m._v[ev.mask]
        (pos if val > 0 else neg if val < 0 else zero).append(ev)
    return EventFamily(m.space, pos), EventFamily(m.space, neg), EventFamily(m.space, zero)


def positive_domain(m: CombinedMeasure) -> EventFamily:
    """Reduced positively evaluated members, plus the empty event.

    This is the family a restriction to positively evaluated events lives
    on.  Unreduced members are dropped because each is equivalent to its
    reduction and carries the same value; the empty event is kept because
    no ring can exist without it.
    """
    n = m.space.n
    keep = [Event(m.space, 0)]
    for x, val in m._v.items():
        if x and val > 0 and reduce_mask(x, n) == x:
            keep.append(Event(m.space, x))
    return EventFamily(m.space, keep)
