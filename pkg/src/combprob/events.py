"""Signed atoms, symmetric spaces and the pure algebra of events.

An event over a space with ``n`` atoms is stored as an integer bit mask:
bit ``i`` is the positive atom with the ``i``-th smallest label and bit
``n + i`` is its antievent.  Negation swaps the two halves, so every
operation here is a handful of integer instructions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

_LABEL_RE = re.compile(r"^[A-Za-z0-9_.]+$")
_MINUS_SIGNS = ("-", "−")


@dataclass(frozen=True, order=True)
class SignedAtom:
    """An elementary event ``w`` or its antievent ``-w``."""

    label: str
    negative: bool = False

    def __neg__(self) -> SignedAtom:
        return SignedAtom(self.label, not self.negative)

    def __str__(self) -> str:
        return f"-{self.label}" if self.negative else self.label

    @classmethod
    def parse(cls, text: str) -> SignedAtom:
        text = text.strip()
        negative = text[:1] in _MINUS_SIGNS
        if negative:
            text = text[1:].strip()
        if not _LABEL_RE.match(text):
            raise ValueError(f"invalid atom label {text!r}")
        return cls(text, negative)


@dataclass(frozen=True)
class Space:
    """A finite symmetric space: positive atoms plus one antievent each.

    Labels are kept sorted so that bit positions, iteration order and
    printed output do not depend on how the space was written down.
    """

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate atom labels in {labels!r}")
        for label in labels:
            if not isinstance(label, str) or not _LABEL_RE.match(label):
                raise ValueError(f"invalid atom label {label!r}")
        object.__setattr__(self, "labels", tuple(sorted(labels)))

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Space({list(self.labels)!r})"

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def pos_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def neg_mask(self) -> int:
        return self.pos_mask << self.n

    @property
    def full_mask(self) -> int:
        return (1 << (2 * self.n)) - 1

    def bit(self, atom: SignedAtom) -> int:
        try:
            i = self.index[atom.label]
        except KeyError:
            raise ValueError(f"unknown atom {atom.label!r} for {self!r}") from None
        return i + self.n if atom.negative else i

    def atom_at(self, bit: int) -> SignedAtom:
        if bit >= self.n:
            return SignedAtom(self.labels[bit - self.n], True)
        return SignedAtom(self.labels[bit], False)

    def atoms(self) -> list[SignedAtom]:
        """All of Omega in canonical order (label, then sign)."""
        return [SignedAtom(label, neg) for label in self.labels for neg in (False, True)]

    # -- event constructors -------------------------------------------------

    def event(self, *members: SignedAtom | str) -> Event:
        mask = 0
        for member in members:
            if isinstance(member, str):
                member = SignedAtom.parse(member)
            mask |= 1 << self.bit(member)
        return Event(self, mask)

    def parse_event(self, text: str) -> Event:
        """Parse ``"w, -v"`` or ``"{w, -v}"``; the empty string is the empty event."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        parts = [p for p in (s.strip() for s in text.split(",")) if p]
        return self.event(*parts)

    def from_mask(self, mask: int) -> Event:
        if mask & ~self.full_mask:
            raise ValueError(f"mask {mask:#x} has bits outside {self!r}")
        return Event(self, mask)

    @property
    def empty(self) -> Event:
        return Event(self, 0)

    @property
    def omega(self) -> Event:
        return Event(self, self.full_mask)

    @property
    def positive_half(self) -> Event:
        return Event(self, self.pos_mask)

    @property
    def negative_half(self) -> Event:
        return Event(self, self.neg_mask)

    def events(self) -> list[Event]:
        """Every subset of Omega, in canonical event order."""
        return sort_events(Event(self, m) for m in range(self.full_mask + 1))

    def reduced_events(self) -> list[Event]:
        return [e for e in self.events() if e.is_reduced()]

    def subsets(self, event: Event) -> list[Event]:
        bits = [b for b in range(2 * self.n) if event.mask >> b & 1]
        out = []
        for r in range(len(bits) + 1):
            for combo in combinations(bits, r):
                out.append(Event(self, sum(1 << b for b in combo)))
        return sort_events(out)


# -- mask level primitives ----------------------------------------------------


def neg_mask(mask: int, n: int) -> int:
    return ((mask & ((1 << n) - 1)) << n) | (mask >> n)


def reduce_mask(mask: int, n: int) -> int:
    return mask & ~neg_mask(mask, n)


def support_mask(mask: int, n: int) -> int:
    """Labels touched by an event, as a mask over the positive half."""
    return (mask | (mask >> n)) & ((1 << n) - 1)


def mask_key(mask: int, n: int) -> tuple:
    """Canonical event order: fewer antievents first, then smaller, then members.

    Members compare by (label, sign).  Putting antievent count first makes
    every witness search prefer plain positive events, which is how the
    hand-worked counterexamples for this theory are phrased.
    """
    members = tuple((i, s) for i in range(n) for s in (0, 1) if mask >> (i + s * n) & 1)
    return ((mask >> n).bit_count(), mask.bit_count(), members)


@dataclass(frozen=True, slots=True)
class Event:
    """An immutable set of signed atoms drawn from one space.

    Follows ``frozenset`` conventions: ``&``, ``|``, ``-``, ``^`` are the set
    operations and ``<=`` is inclusion.  Unary minus is event negation.
    Use :func:`sort_events` or :meth:`sort_key` for the canonical order.
    """

    space: Space
    mask: int

    def _same(self, other: Event) -> int:
        if not isinstance(other, Event):
            raise TypeError(f"expected an Event, got {type(other).__name__}")
        if other.space != self.space:
            raise ValueError("events belong to different spaces")
        return other.mask

    def __and__(self, other: Event) -> Event:
        return Event(self.space, self.mask & self._same(other))

    def __or__(self, other: Event) -> Event:
        return Event(self.space, self.mask | self._same(other))

    def __sub__(self, other: Event) -> Event:
        return Event(self.space, self.mask & ~self._same(other))

    def __xor__(self, other: Event) -> Event:
        return Event(self.space, self.mask ^ self._same(other))

    def __neg__(self) -> Event:
        return negate(self)

    def __le__(self, other: Event) -> bool:
        m = self._same(other)
        return self.mask & ~m == 0

    def __lt__(self, other: Event) -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: Event) -> bool:
        return other <= self

    def __gt__(self, other: Event) -> bool:
        return other < self

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __iter__(self) -> Iterator[SignedAtom]:
        n = self.space.n
        for i in range(n):
            for s in (0, 1):
                if self.mask >> (i + s * n) & 1:
                    yield SignedAtom(self.space.labels[i], bool(s))

    def __contains__(self, atom: SignedAtom | str) -> bool:
        if isinstance(atom, str):
            atom = SignedAtom.parse(atom)
        return bool(self.mask >> self.space.bit(atom) & 1)

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self) + "}"

    def __repr__(self) -> str:
        return f"Event({self})"

    def sort_key(self) -> tuple:
        return mask_key(self.mask, self.space.n)

    def isdisjoint(self, other: Event) -> bool:
        return self.mask & self._same(other) == 0

    def is_reduced(self) -> bool:
        return is_reduced(self)


def sort_events(events: Iterable[Event]) -> list[Event]:
    return sorted(events, key=Event.sort_key)


# -- the operations -------------------------------------------------------------


def negate(a: Event) -> Event:
    return Event(a.space, neg_mask(a.mask, a.space.n))


def positive_part(a: Event) -> Event:
    return Event(a.space, a.mask & a.space.pos_mask)


def negative_part(a: Event) -> Event:
    return Event(a.space, a.mask & a.space.neg_mask)


def is_reduced(a: Event) -> bool:
    """True iff ``a`` holds no pair ``{w, -w}``."""
    n = a.space.n
    return (a.mask & (a.mask >> n)) == 0


def reduce(a: Event) -> Event:
    """Drop every annihilating pair ``{w, -w}`` from ``a``."""
    return Event(a.space, reduce_mask(a.mask, a.space.n))


def reducible_part(a: Event) -> Event:
    """``a`` minus its reduction, which is ``a & -a``."""
    return a - reduce(a)


def reduced_union(a: Event, b: Event) -> Event:
    return reduce(a | b)


def double_difference(a: Event, b: Event) -> Event:
    """``a`` with every atom of ``b`` removed, whichever sign it appears with."""
    return a - (b | negate(b))


def equivalent(a: Event, b: Event) -> bool:
    return reduce(a) == reduce(b)


def doubly_disjoint(a: Event, b: Event) -> bool:
    """``a & b`` and ``a & -b`` both empty, i.e. no label is shared."""
    n = a.space.n
    return support_mask(a.mask, n) & support_mask(b.mask, n) == 0
