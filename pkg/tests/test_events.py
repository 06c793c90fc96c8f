from __future__ import annotations

import pytest
from hypothesis import given

from combprob.events import (
    Event,
    negative_part,
    positive_part,
    SignedAtom,
    Space,
    double_difference,
    doubly_disjoint,
    equivalent,
    negate,
    reduce,
    reduced_union,
    reducible_part,
)
from tests.strategies import space_and_events


def test_atom_parsing_accepts_both_minus_signs():
    assert SignedAtom.parse("-w") == SignedAtom("w", True)
    assert SignedAtom.parse("−w") == SignedAtom("w", True)
    assert str(-SignedAtom("w")) == "-w"
    assert -(-SignedAtom("w")) == SignedAtom("w")


@pytest.mark.parametrize("bad", ["", "-", "w w", "{w}", "--w"])
def test_atom_parsing_rejects_garbage(bad):
    with pytest.raises(ValueError):
        SignedAtom.parse(bad)


def test_space_sorts_and_rejects_duplicates():
    assert Space(["w", "u", "v"]).labels == ("u", "v", "w")
    with pytest.raises(ValueError):
        Space(["w", "w"])
    with pytest.raises(ValueError):
        Space(["w-1"])


def test_event_text_round_trip():
    s = Space("uvw")
    a = s.parse_event("{w, -v, u}")
    assert str(a) == "{u, -v, w}"
    assert s.parse_event(str(a)) == a
    assert s.parse_event("") == s.empty
    with pytest.raises(ValueError):
        s.event("x")


def test_every_event_listed_once_in_canonical_order():
    s = Space("uv")
    evs = s.events()
    assert len(evs) == 16 == len(set(evs))
    assert evs[0] == s.empty
    assert evs == sorted(evs, key=Event.sort_key)
    # positive events come before anything holding an antievent
    assert [len(e) for e in evs[:4]] == [0, 1, 1, 2]


def test_halves_and_omega():
    s = Space("uv")
    assert s.omega == s.positive_half | s.negative_half
    assert -s.positive_half == s.negative_half
    assert s.omega == -s.omega


def test_events_from_different_spaces_do_not_mix():
    a, b = Space("uv").event("u"), Space("uw").event("u")
    with pytest.raises(ValueError):
        a | b
    with pytest.raises(TypeError):
        a | {"u"}


@given(space_and_events(2))
def test_negation_is_an_involution_and_distributes(data):
    _, a, b = data
    assert -(-a) == a
    assert -(a & b) == -a & -b
    assert -(a | b) == -a | -b
    assert negate(a) == -a


@given(space_and_events(2))
def test_double_negation_lemma(data):
    _, a, b = data
    if not (-a & b):
        assert not (a & -b)


@given(space_and_events(1))
def test_reduction_identities(data):
    _, a = data
    r = reduce(a)
    assert r.is_reduced()
    assert reduce(r) == r
    assert r == a - (a & -a)
    assert r == -reduce(-a)
    assert reduce(-a) == -a - (a & -a)
    assert reducible_part(a) == a & -a
    assert a.is_reduced() == (-a).is_reduced()
    assert equivalent(a, r)


@given(space_and_events(2))
def test_reduced_events_stay_reduced_under_restricting_operations(data):
    _, a, b = data
    r = reduce(a)
    assert (r & b).is_reduced()
    assert (r - b).is_reduced()
    assert double_difference(r, b).is_reduced()
    for sub in r.space.subsets(r)[:8]:
        assert sub.is_reduced()


@given(space_and_events(2))
def test_reduced_union_is_commutative_and_reduced(data):
    _, a, b = data
    assert reduced_union(a, b) == reduced_union(b, a)
    assert reduced_union(a, b).is_reduced()


def test_reduced_union_is_not_associative():
    s = Space("w")
    w, nw = s.event("w"), s.event("-w")
    assert reduced_union(w, reduced_union(w, nw)) == w
    assert reduced_union(reduced_union(w, w), nw) == s.empty


def test_reduction_is_not_monotone():
    s = Space("uw")
    a, b = s.event("u", "w", "-w"), s.event("u", "w")
    assert b <= a
    assert reduce(a) == s.event("u")
    assert not reduce(b) <= reduce(a)


def test_reduced_union_is_not_monotone():
    s = Space("uvw")
    a, b, c = s.event("w", "v", "u"), s.event("-w", "-v"), s.event("-w")
    assert c <= b
    assert reduced_union(a, b) == s.event("u")
    assert reduced_union(a, c) == s.event("u", "v")


@given(space_and_events(2))
def test_doubly_disjoint_matches_definition(data):
    _, a, b = data
    assert doubly_disjoint(a, b) == (not (a & b) and not (a & -b))
    assert doubly_disjoint(a, b) == doubly_disjoint(b, a)


S = Space("uvw")


@pytest.mark.parametrize("op, args, expected", [
    (negate, ["{w}"], "{-w}"),
    (negate, ["{}"], "{}"),
    (negate, ["{w, -v}"], "{v, -w}"),
    (positive_part, ["{w, -v}"], "{w}"),
    (negative_part, ["{w, -v}"], "{-v}"),
    (reduce, ["{u, w, -w}"], "{u}"),
    (reduce, ["{w, -w}"], "{}"),
    (reduce, ["{w, v}"], "{v, w}"),
    (reducible_part, ["{u, w, -w}"], "{w, -w}"),
    (reducible_part, ["{w, v}"], "{}"),
    (reducible_part, ["{w, -w, v, -v}"], "{v, -v, w, -w}"),
    (reduced_union, ["{w}", "{-w}"], "{}"),
    (reduced_union, ["{w, v, u}", "{-w, -v}"], "{u}"),
    (reduced_union, ["{w, v, u}", "{-w}"], "{u, v}"),
    (double_difference, ["{w, v}", "{w}"], "{v}"),
    (double_difference, ["{w, -u}", "{u}"], "{w}"),
    (double_difference, ["{u, -v}", "{}"], "{u, -v}"),
])
def test_operation_examples(op, args, expected):
    assert str(op(*(S.parse_event(a) for a in args))) == expected


@pytest.mark.parametrize("a, b, expected", [
    ("{w, -w}", "{}", True),
    ("{u, w, -w}", "{u}", True),
    ("{w}", "{v}", False),
])
def test_equivalence_examples(a, b, expected):
    assert equivalent(S.parse_event(a), S.parse_event(b)) is expected


def test_identities_exhaustively_on_four_atoms():
    s = Space("uvwz")
    evs = s.events()
    assert len(evs) == 256
    for a in evs:
        r = reduce(a)
        assert a.is_reduced() == (not (a & -a))
        assert r | reducible_part(a) == a and not (r & reducible_part(a))
        assert -reducible_part(a) == reducible_part(a)
        assert positive_part(a) | negative_part(a) == a
        for b in evs:
            assert -(a & b) == -a & -b
            assert -(a | b) == -a | -b
            assert -(a - b) == -a - -b
            assert (not (-a & b)) == (not (a & -b))
            if b.is_reduced() and a <= b:
                assert a.is_reduced()
