from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from combprob.events import Event, Space
from combprob.structures import (
    EventFamily,
    generate_algebra,
    is_set_algebra,
    is_set_field,
    is_set_ring,
    partition_blocks,
)

S = Space("abc")


def fam(*texts: str, space: Space = S) -> EventFamily:
    return EventFamily(space, (space.parse_event(t) for t in texts))


def closed_under(family: EventFamily, ops) -> bool:
    members = set(family)
    return all(op(x, y) in members for x in members for y in members for op in ops)


def fixpoint_algebra(seed, unit: Event) -> set[Event]:
    """Naive closure: keep adding ∪, ∩ and \\ results until nothing changes."""
    current = set(seed) | {unit, unit.space.empty}
    while True:
        grown = current | {op(x, y) for x in current for y in current
                           for op in (Event.__or__, Event.__and__, Event.__sub__)}
        if grown == current:
            return current
        current = grown


def test_ring_examples():
    assert is_set_ring(fam("{}"))
    assert is_set_ring(EventFamily.power_set(S, S.event("a", "b")))
    check = is_set_ring(fam("{a}"))
    assert not check
    w = check.witness
    assert (w.op, str(w.left), str(w.right), str(w.result)) == ("Δ", "{a}", "{a}", "{}")


def test_empty_family_is_not_a_ring():
    assert not is_set_ring(EventFamily(S, ()))


def test_algebra_examples(five_atom):
    whole = EventFamily.power_set(Space("ab"))
    check = is_set_algebra(whole)
    assert check and check.unit == Space("ab").omega
    check = is_set_algebra(fam("{}"))
    assert check and check.unit == S.empty
    positives = EventFamily(five_atom.space, (e for e in five_atom.family if five_atom[e] > 0))
    assert not is_set_algebra(positives)


def test_algebra_with_required_unit():
    f = fam("{}", "{a}")
    assert is_set_algebra(f)
    assert not is_set_algebra(f, unit=S.event("a", "b"))


def test_field_examples():
    assert is_set_field(EventFamily.power_set(Space("ab")))
    check = is_set_field(fam("{}", "{a}", "{a, b}"))
    assert not check and str(check.witness.result) == "{b}"
    assert is_set_field(fam("{}", "{a}", "{b}", "{a, b}"))


@pytest.mark.parametrize("labels", ["ab", "abc"])
def test_ring_characterisations_agree_on_every_family(labels):
    space = Space(labels)
    subsets = space.subsets(space.positive_half)
    for k in range(len(subsets) + 1):
        for members in combinations(subsets, k):
            f = EventFamily(space, members)
            check = is_set_ring(f)
            assert check.agrees
            expected = bool(members) and closed_under(f, (Event.__and__, Event.__xor__))
            assert bool(check) == expected
            assert expected == (bool(members) and closed_under(f, (Event.__or__, Event.__and__, Event.__sub__)))
            if check:
                assert space.empty in f


def test_generate_algebra_examples():
    u = S.event("a", "b")
    assert set(generate_algebra([S.event("a")], u)) == set(fam("{}", "{a}", "{b}", "{a, b}"))
    assert set(generate_algebra([], S.positive_half)) == {S.empty, S.positive_half}
    eight = generate_algebra([S.event("a"), S.event("b")], S.positive_half)
    assert len(eight) == 8
    assert {str(b) for b in partition_blocks([S.event("a"), S.event("b")], S.positive_half)} == {"{a}", "{b}", "{c}"}


def test_generate_algebra_rejects_seed_outside_unit():
    with pytest.raises(ValueError):
        generate_algebra([S.event("c")], S.event("a", "b"))


def test_generate_algebra_respects_cap():
    with pytest.raises(ValueError):
        generate_algebra([S.event("a"), S.event("b")], S.positive_half, max_size=4)


seeds = st.lists(st.integers(0, S.full_mask).map(lambda m: Event(S, m)), max_size=3)


@given(seeds, seeds)
def test_generate_algebra_matches_fixpoint_oracle(seed, extra):
    unit = S.omega
    alg = generate_algebra(seed, unit)
    assert set(alg) == fixpoint_algebra(seed, unit)
    assert is_set_algebra(alg, unit=unit)
    assert set(generate_algebra(alg, unit)) == set(alg)
    assert set(alg) <= set(generate_algebra(seed + extra, unit))
    size = len(alg)
    assert size & (size - 1) == 0
