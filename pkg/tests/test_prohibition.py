import pytest

from dalmas.conditions import And, Atom, Or, Top
from dalmas.normative import Norm
from dalmas.positions import MoveTerm, TypedAtom
from dalmas.prohibition import (
    ConfigurationError,
    DeonticVerdict,
    ProhibitionWitness,
    UnsupportedConsequenceError,
    e_op,
    extended_form,
    prohibited_set,
    replay_witness,
    stipulation_prohibits,
    validate_norms,
)
from dalmas.waste import GridState, Lap, WasteWorld, builtin_norms, norm_by_id
from oracles import placements, prohibited_oracle

WORLD = WasteWorld(["w1", "w2"])
ELEMENTARY = norm_by_id(builtin_norms(), ["7", "8", "9", "10"])


def grid(p1, p2, w=5, h=5):
    return GridState.build(w, h, {"w1": p1, "w2": p2})


def verdict(state, mover="w1", norms=ELEMENTARY, **kw):
    return prohibited_set(norms, mover, state, WORLD.feasible(mover, state), WORLD, **kw)


@pytest.mark.parametrize(
    "i, table",
    [
        (2, {(True, False)}),
        (3, {(True, True), (False, False)}),
        (4, {(False, True)}),
        (5, {(True, False), (False, False)}),
        (6, {(True, False), (False, True)}),
        (7, {(True, True), (False, True)}),
    ],
)
def test_e_operator_truth_tables(i, table):
    # Lap6 holds at (2,1)/(2,2); Lap4 at (2,1)/(3,2)
    states = {True: grid((2, 1), (2, 2)), False: grid((2, 1), (3, 2))}
    for before in (True, False):
        for after in (True, False):
            got = e_op(i, Lap(6), ("w1", "w2"), "w1", states[before], states[after], WORLD)
            assert got == ((before, after) in table)


def test_type_one_never_prohibits():
    s = grid((2, 1), (2, 2))
    assert not stipulation_prohibits(1, Lap(6), ("w1", "w2"), "w1", "south", s, WORLD)
    with pytest.raises(ValueError):
        e_op(1, Lap(6), ("w1", "w2"), "w1", s, s, WORLD)


def test_fixture_overlap_six():
    v = verdict(grid((2, 1), (2, 2)))
    assert list(v.prohibited) == ["south"]
    assert {(w.norm_id, w.e_operator) for w in v.prohibited["south"]} == {("9", "E5")}
    assert v.permissible == ("east", "west")


def test_engine_matches_oracle_on_every_placement():
    for p1, p2 in placements(5, 5):
        pos = {"w1": p1, "w2": p2}
        s = GridState.build(5, 5, pos)
        for mover in ("w1", "w2"):
            v = verdict(s, mover)
            got = {a: {(w.norm_id, w.agent_tuple) for w in ws} for a, ws in v.prohibited.items()}
            assert got == prohibited_oracle(pos, mover, 5, 5)


def test_norm_eight_never_fires():
    eight = norm_by_id(builtin_norms(), ["8"])
    for p1, p2 in placements(6, 6):
        s = GridState.build(6, 6, {"w1": p1, "w2": p2})
        for mover in ("w1", "w2"):
            assert not verdict(s, mover, eight).prohibited


def test_witnesses_replay():
    s = grid((2, 1), (2, 2))
    v = verdict(s)
    for ws in v.prohibited.values():
        for w in ws:
            norm = next(n for n in ELEMENTARY if n.id == w.norm_id)
            assert replay_witness(w, norm, "w1", s, WORLD)
    w = v.prohibited["south"][0]
    assert not replay_witness(w, norm_by_id(ELEMENTARY, ["9"])[0], "w1", grid((0, 0), (4, 4)), WORLD)


def test_verdict_round_trip():
    v = verdict(grid((2, 1), (2, 2)))
    back = DeonticVerdict.from_dict(v.to_dict())
    assert back == v
    w = ProhibitionWitness("x", (2, 4), ("w1",), "east", "E2&E4")
    assert ProhibitionWitness.from_dict(w.to_dict()) == w


def test_bind_mover_restricts_tuples():
    v = verdict(grid((2, 1), (2, 2)), bind_mover=True)
    assert {w.agent_tuple for w in v.prohibited["south"]} == {("w1", "w2")}


def test_non_elementary_norms_ignored_by_default():
    v = verdict(grid((0, 0), (4, 4)), norms=builtin_norms())
    assert v.prohibited == {}


def test_disjunctive_rule_requires_every_disjunct():
    # leave overlap 6 (E2 on Lap6) and also enter overlap 4 (E4 on Lap4)
    cons = Or(TypedAtom(2, Lap(6)), TypedAtom(4, Lap(4)))
    norm = Norm("d", MoveTerm(Top(2)), cons)
    s = grid((2, 1), (2, 2))
    v = verdict(s, norms=[norm], extended=True)
    # east/west go to overlap 4, south goes to overlap 3
    assert set(v.prohibited) == {"east", "west"}
    assert all(w.e_operator == "E2&E4" for w in v.prohibited["east"])


def test_conjunctive_rule_needs_one_conjunct():
    cons = And(TypedAtom(7, Lap(3)), TypedAtom(7, Lap(4)))
    norm = Norm("c", MoveTerm(Top(2)), cons)
    v = verdict(grid((2, 1), (2, 2)), norms=[norm], extended=True)
    assert set(v.prohibited) == {"east", "south", "west"}


def test_extended_form_rejects_nested():
    with pytest.raises(UnsupportedConsequenceError):
        extended_form(Or(TypedAtom(2, Lap(1)), And(TypedAtom(3, Lap(2)), TypedAtom(5, Lap(0)))))
    bad = Norm("n", MoveTerm(Top(2)), Or(TypedAtom(2, Lap(1)), ~TypedAtom(3, Lap(1))))
    with pytest.raises(ConfigurationError):
        validate_norms([bad], WORLD, extended=True)


def test_unknown_atom_is_a_configuration_error():
    bad = Norm("n", MoveTerm(Atom("Blue", 2)), TypedAtom(7, Lap(1)))
    with pytest.raises(ConfigurationError, match="Blue"):
        validate_norms([bad], WORLD)
    with pytest.raises(ConfigurationError):
        validate_norms([Norm("g", Lap(1), TypedAtom(7, Lap(1)))], WORLD)


def test_conjunction_of_disjunctions_equals_split_norms():
    c1 = Or(TypedAtom(2, Lap(6)), TypedAtom(4, Lap(4)))
    c2 = Or(TypedAtom(7, Lap(3)), TypedAtom(5, Lap(6)))
    cnf = [Norm("cnf", MoveTerm(Top(2)), And(c1, c2))]
    split = [Norm("a", MoveTerm(Top(2)), c1), Norm("b", MoveTerm(Top(2)), c2)]
    fired = 0
    for p1, p2 in placements(5, 5):
        s = GridState.build(5, 5, {"w1": p1, "w2": p2})
        for mover in ("w1", "w2"):
            a = verdict(s, mover, cnf, extended=True)
            b = verdict(s, mover, split, extended=True)
            assert set(a.prohibited) == set(b.prohibited)
            fired += len(a.prohibited)
    assert fired > 0


def test_permission_disjunctions_never_prohibit():
    # every clause of norms 5 and 6 contains a type-1 disjunct
    five_six = norm_by_id(builtin_norms(), ["5", "6"])
    for p1, p2 in placements(5, 5):
        s = GridState.build(5, 5, {"w1": p1, "w2": p2})
        assert verdict(s, "w1", five_six, extended=True).prohibited == {}
