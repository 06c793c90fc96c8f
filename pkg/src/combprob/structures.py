"""Set rings, set algebras and set fields over a finite universe."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from combprob.events import Event, Space, mask_key, sort_events


@dataclass(frozen=True)
class EventFamily:
    """An explicit finite collection of events over one space."""

    space: Space
    events: frozenset[Event]

    def __init__(self, space: Space, events: Iterable[Event] = ()):
        events = frozenset(events)
        for ev in events:
            if ev.space != space:
                raise ValueError(f"event {ev} is not drawn from {space!r}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "events", events)

    @classmethod
    def power_set(cls, space: Space, unit: Event | None = None) -> EventFamily:
        unit = space.omega if unit is None else unit
        return cls(space, space.subsets(unit))

    @cached_property
    def masks(self) -> frozenset[int]:
        return frozenset(ev.mask for ev in self.events)

    @cached_property
    def ordered(self) -> tuple[Event, ...]:
        return tuple(sort_events(self.events))

    def __contains__(self, ev: Event) -> bool:
        return ev in self.events

    def __iter__(self) -> Iterator[Event]:
        return iter(self.ordered)

    def __len__(self) -> int:
        return len(self.events)

    def __repr__(self) -> str:
        return "EventFamily{" + ", ".join(str(e) for e in self.ordered) + "}"


@dataclass(frozen=True)
class ClosureFailure:
    """``op(left, right) = result`` and ``result`` is not in the family."""

    op: str
    left: Event
    right: Event
    result: Event

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right} = {self.result} is missing"


@dataclass(frozen=True)
class StructureCheck:
    holds: bool
    witness: ClosureFailure | None = None
    unit: Event | None = None
    # ring only: closure under (union, intersection, difference) agreed with (intersection, symmetric difference)
    agrees: bool = True
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


_OPS = {
    "&": lambda a, b: a & b,
    "^": lambda a, b: a ^ b,
    "|": lambda a, b: a | b,
    "-": lambda a, b: a & ~b,
}


@lru_cache(maxsize=512)
def _closure_scan(n: int, masks: frozenset[int], ops: str, ordered_pairs: bool):
    """Smallest escape of ``masks`` under each op in ``ops``, checked op by op.

    Returns ``(op, a, b, result)`` for the first op with any escape, chosen
    to minimise the escaping result first and then the pair, or ``None``.
    """
    order = sorted(masks, key=lambda m: mask_key(m, n))
    keys = {m: mask_key(m, n) for m in order}
    for op in ops:
        f = _OPS[op]
        best = None
        best_key = None
        for i, a in enumerate(order):
            for b in (order if ordered_pairs and op == "-" else order[i:]):
                r = f(a, b)
                if r in masks:
                    continue
                k = (mask_key(r, n), keys[a], keys[b])
                if best_key is None or k < best_key:
                    best, best_key = (op, a, b, r), k
        if best is not None:
            return best
    return None


def _failure(space: Space, found) -> ClosureFailure | None:
    if found is None:
        return None
    op, a, b, r = found
    names = {"&": "∩", "^": "Δ", "|": "∪", "-": "\\"}
    return ClosureFailure(names[op], Event(space, a), Event(space, b), Event(space, r))


def is_set_ring(fam: EventFamily) -> StructureCheck:
    """Closed under intersection and symmetric difference.

    The equivalent characterisation (closed under union, intersection and
    difference) is evaluated as well; ``agrees`` records whether the two
    verdicts coincide.
    """
    n = fam.space.n
    primary = _closure_scan(n, fam.masks, "&^", False)
    secondary = _closure_scan(n, fam.masks, "|&-", True)
    agrees = (primary is None) == (secondary is None)
    if not fam.masks:
        # the empty system is closed vacuously but has no member at all
        return StructureCheck(False, note="empty family has no empty set", agrees=agrees)
    return StructureCheck(primary is None, _failure(fam.space, primary), agrees=agrees)


def _find_unit(fam: EventFamily) -> Event | None:
    top = 0
    for m in fam.masks:
        top |= m
    if top in fam.masks:
        return Event(fam.space, top)
    return None


def is_set_algebra(fam: EventFamily, unit: Event | None = None) -> StructureCheck:
    """A set ring holding a unit ``E`` with ``A & E == A`` for every member.

    When ``unit`` is given, that particular event must serve as the unit.
    """
    ring = is_set_ring(fam)
    if not ring:
        return ring
    found = _find_unit(fam)
    if unit is not None:
        if unit not in fam:
            return StructureCheck(False, unit=None, agrees=ring.agrees,
                                  note=f"required unit {unit} is not a member")
        if found != unit:
            return StructureCheck(False, unit=None, agrees=ring.agrees,
                                  note=f"{unit} does not contain every member")
    if found is None:
        return StructureCheck(False, agrees=ring.agrees, note="no member contains all others")
    return StructureCheck(True, unit=found, agrees=ring.agrees)


def is_set_field(fam: EventFamily) -> StructureCheck:
    """A set algebra closed under complement relative to its unit."""
    alg = is_set_algebra(fam)
    if not alg:
        return alg
    unit = alg.unit
    for ev in fam:
        comp = unit - ev
        if comp not in fam:
            return StructureCheck(False, ClosureFailure("\\", unit, ev, comp), unit, alg.agrees,
                                  note="complement missing")
    return alg


def partition_blocks(seed: Iterable[Event], unit: Event) -> list[Event]:
    """Atoms of the algebra generated by ``seed`` inside ``unit``."""
    blocks = [unit.mask] if unit.mask else []
    for ev in seed:
        if not ev <= unit:
            raise ValueError(f"seed event {ev} is not contained in unit {unit}")
        split = []
        for b in blocks:
            inside, outside = b & ev.mask, b & ~ev.mask
            split.extend(x for x in (inside, outside) if x)
        blocks = split
    return sort_events(Event(unit.space, b) for b in blocks)


def unions_of(blocks: list[Event], space: Space) -> list[Event]:
    masks = [0]
    for b in blocks:
        masks += [m | b.mask for m in masks]
    return sort_events(Event(space, m) for m in masks)


def generate_algebra(seed: EventFamily | Iterable[Event], unit: Event,
                     max_size: int | None = None) -> EventFamily:
    """Smallest family holding ``seed``, the empty event and ``unit``, closed under ∪, ∩, \\.

    Built from the partition of ``unit`` induced by the seed: the members
    are exactly the unions of partition blocks.
    """
    space = unit.space
    blocks = partition_blocks(seed, unit)
    cap = 2 ** (2 * space.n) if max_size is None else max_size
    if 2 ** len(blocks) > cap:
        raise ValueError(f"generated algebra would exceed {cap} members")
    return EventFamily(space, unions_of(blocks, space))
