"""Measure files: a line-oriented text format and an equivalent JSON form.

Text form::

    # comments and blank lines are ignored
    atoms: a, b, u, v, w
    kind: digitalized
    a = 1/5
    u = -1/5

``kind`` is one of ``digitalized`` (one line per positive atom), ``explicit``
(a combined measure given event by event), ``extended`` or ``conventional``.
The last three list events as ``{w, -v} = 1/3``; ``conventional`` may add a
``universe: {h, t}`` line.  The JSON form carries the same keys::

    {"atoms": ["h", "t"], "kind": "conventional",
     "events": [[[], "0"], [["h"], "1/2"], ...], "universe": ["h", "t"]}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from combprob.bridges import ConventionalMeasure, ExtendedMeasure
from combprob.errors import ConstructionError
from combprob.events import Event, SignedAtom, Space
from combprob.measure import CombinedMeasure, from_positive_values
from combprob.rational import format_rational, parse_rational

KINDS = ("digitalized", "explicit", "extended", "conventional")

Measure = CombinedMeasure | ExtendedMeasure | ConventionalMeasure


class DocumentError(ValueError):
    """The input is not a well-formed measure document."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class MeasureDocument:
    atoms: tuple[str, ...]
    kind: str
    atom_values: dict[str, Fraction] = field(default_factory=dict)
    events: list[tuple[tuple[str, ...], Fraction]] = field(default_factory=list)
    universe: tuple[str, ...] | None = None

    @property
    def space(self) -> Space:
        return Space(self.atoms)

    def build(self) -> Measure:
        """Construct the measure object this document describes."""
        space = self.space
        try:
            if self.kind == "digitalized":
                return from_positive_values(space, self.atom_values)
            values = {space.event(*members): val for members, val in self.events}
            if self.kind == "explicit":
                return CombinedMeasure(space, values, values)
            if self.kind == "extended":
                return ExtendedMeasure(space, values, values)
            universe = space.event(*self.universe) if self.universe is not None else None
            return ConventionalMeasure(space, values, values, universe=universe)
        except (DocumentError, ConstructionError):
            raise
        except (KeyError, ValueError) as exc:
            raise DocumentError(str(exc).strip("'\"")) from exc

    # -- writing ---------------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"atoms: {', '.join(self.atoms)}", f"kind: {self.kind}"]
        if self.universe is not None:
            lines.append(f"universe: {{{', '.join(self.universe)}}}")
        if self.kind == "digitalized":
            lines += [f"{label} = {format_rational(self.atom_values[label])}" for label in self.atoms]
        else:
            lines += [f"{{{', '.join(members)}}} = {format_rational(val)}" for members, val in self.events]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        out: dict = {"atoms": list(self.atoms), "kind": self.kind}
        if self.kind == "digitalized":
            out["values"] = {label: format_rational(self.atom_values[label]) for label in self.atoms}
        else:
            out["events"] = [[list(members), format_rational(val)] for members, val in self.events]
        if self.universe is not None:
            out["universe"] = list(self.universe)
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_measure(cls, m: Measure) -> MeasureDocument:
        """Document for ``m``; the compact form is used when it rebuilds ``m`` exactly."""
        atoms = m.space.labels
        if isinstance(m, CombinedMeasure) and m.is_digitalized:
            values = {a.label: val for a, val in m.atom_values().items() if not a.negative}
            if _rebuilds(m, values):
                return cls(atoms, "digitalized", atom_values=values)
        kind = {CombinedMeasure: "explicit", ExtendedMeasure: "extended",
                ConventionalMeasure: "conventional"}[type(m)]
        events = [(tuple(str(a) for a in ev), val) for ev, val in _sorted_values(m)]
        universe = tuple(str(a) for a in m.universe) if isinstance(m, ConventionalMeasure) else None
        return cls(atoms, kind, events=events, universe=universe)


def _rebuilds(m: CombinedMeasure, values: dict[str, Fraction]) -> bool:
    try:
        return from_positive_values(m.space, values).values == m.values
    except ConstructionError:
        return False


def _sorted_values(m: Measure):
    return sorted(m.values.items(), key=lambda kv: kv[0].sort_key())


# -- parsing ------------------------------------------------------------------------

_LABEL_LIST = re.compile(r"^\{(.*)\}$")


def _rational(text: str, line: int | None) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise DocumentError(str(exc), line) from None


def _members(items, atoms: set[str], line: int | None) -> tuple[str, ...]:
    out = []
    for item in items:
        if not isinstance(item, str):
            raise DocumentError(f"event members must be strings, got {item!r}", line)
        try:
            atom = SignedAtom.parse(item.strip())
        except ValueError as exc:
            raise DocumentError(str(exc), line) from None
        if atom.label not in atoms:
            raise DocumentError(f"unknown label {atom.label!r}", line)
        out.append(str(atom))
    if len(set(out)) != len(out):
        raise DocumentError("repeated member in event", line)
    return tuple(out)


def _event_text(text: str, atoms: set[str], line: int) -> tuple[str, ...]:
    m = _LABEL_LIST.match(text.strip())
    if not m:
        raise DocumentError(f"expected an event like {{w, -v}}, got {text.strip()!r}", line)
    body = m.group(1).strip()
    return _members(body.split(",") if body else [], atoms, line)


def _validate(doc: MeasureDocument) -> MeasureDocument:
    if not doc.atoms:
        raise DocumentError("no atoms declared")
    if len(set(doc.atoms)) != len(doc.atoms):
        raise DocumentError("duplicate atom label")
    try:
        Space(doc.atoms)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    if doc.kind not in KINDS:
        raise DocumentError(f"unknown kind {doc.kind!r}; expected one of {', '.join(KINDS)}")
    if doc.kind == "digitalized":
        if doc.events or doc.universe is not None:
            raise DocumentError("digitalized documents list atom values only")
        missing = [a for a in doc.atoms if a not in doc.atom_values]
        if missing:
            raise DocumentError(f"no value for atom {missing[0]!r}")
    else:
        if doc.atom_values:
            raise DocumentError(f"{doc.kind} documents list events, not atom values")
        seen = set()
        for members, _ in doc.events:
            key = frozenset(members)
            if key in seen:
                raise DocumentError(f"event {{{', '.join(members)}}} listed twice")
            seen.add(key)
        if doc.universe is not None and doc.kind != "conventional":
            raise DocumentError("only conventional documents take a universe")
    return doc


def parse_text(text: str) -> MeasureDocument:
    atoms: tuple[str, ...] | None = None
    kind = None
    universe = None
    atom_values: dict[str, Fraction] = {}
    events: list[tuple[tuple[str, ...], Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and "=" not in head and head.strip() in ("atoms", "kind", "universe"):
            key = head.strip()
            if key == "atoms":
                if atoms is not None:
                    raise DocumentError("atoms declared twice", lineno)
                atoms = tuple(a.strip() for a in rest.split(",") if a.strip())
            elif key == "kind":
                kind = rest.strip()
            else:
                if atoms is None:
                    raise DocumentError("universe given before atoms", lineno)
                universe = _event_text(rest, set(atoms), lineno)
            continue
        lhs, eq, rhs = line.rpartition("=")
        if not eq:
            raise DocumentError(f"cannot read {line!r}", lineno)
        if atoms is None or kind is None:
            raise DocumentError("atoms and kind must come before values", lineno)
        value = _rational(rhs, lineno)
        lhs = lhs.strip()
        if lhs.startswith("{"):
            events.append((_event_text(lhs, set(atoms), lineno), value))
        else:
            if lhs not in atoms:
                raise DocumentError(f"unknown atom {lhs!r}" + (" (give positive atoms only)"
                                                              if lhs.lstrip("-−") in atoms else ""), lineno)
            if lhs in atom_values:
                raise DocumentError(f"atom {lhs!r} given twice", lineno)
            atom_values[lhs] = value
    if atoms is None or kind is None:
        raise DocumentError("missing 'atoms:' or 'kind:' header")
    return _validate(MeasureDocument(atoms, kind, atom_values, events, universe))


def parse_json(data) -> MeasureDocument:
    if not isinstance(data, dict):
        raise DocumentError("JSON document must be an object")
    atoms = data.get("atoms")
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise DocumentError("'atoms' must be a list of labels")
    labels = set(atoms)
    kind = data.get("kind")
    atom_values = {}
    for label, val in (data.get("values") or {}).items():
        if label not in labels:
            raise DocumentError(f"unknown atom {label!r}")
        if not isinstance(val, str):
            raise DocumentError(f"value for {label!r} must be a rational string such as \"1/3\"")
        atom_values[label] = _rational(val, None)
    events = []
    for item in data.get("events") or []:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)
                and isinstance(item[1], str)):
            raise DocumentError(f"event entries look like [[\"w\", \"-v\"], \"1/3\"], got {item!r}")
        events.append((_members(item[0], labels, None), _rational(item[1], None)))
    universe = data.get("universe")
    if universe is not None:
        if not isinstance(universe, list):
            raise DocumentError("'universe' must be a list of labels")
        universe = _members(universe, labels, None)
    return _validate(MeasureDocument(tuple(atoms), kind, atom_values, events, universe))


def parse_document(text: str) -> MeasureDocument:
    """Parse either form; text that decodes as JSON is read as JSON."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return parse_text(text)
    return parse_json(data)


def load_measure(text: str) -> Measure:
    return parse_document(text).build()


def event_from_spec(space: Space, spec: str) -> Event:
    """Read a comma-separated signed-label list such as ``"w,-v"``; braces are optional."""
    body = spec.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    members = [s.strip() for s in body.split(",") if s.strip()]
    return space.event(*_members(members, set(space.labels), None))
