import itertools

import pytest

from dalmas.conditions import And, Bottom, Not, Or, Top, condition_bqo, disjoin, evaluate, implies, verify_bqo
from dalmas.positions import (
    SIGMA,
    BaseVocabulary,
    MoveTerm,
    NpCis,
    TypedAtom,
    UnknownBaseError,
    check_move_isomorphism,
    maxiconjunction_table,
    mcis_over,
    move_holds,
    typed_atoms,
    verify_npcis,
)
from oracles import consistent_patterns, sigma_by_reversal


def test_table_has_seven_rows_in_order():
    rows = maxiconjunction_table()
    assert [r.index for r in rows] == list(range(1, 8))
    assert [r.signs for r in rows] == ["+++", "++-", "+-+", "-++", "+--", "-+-", "--+"]
    assert rows[4].abbreviation == "Shall Do(x,q)"
    assert rows[5].abbreviation == "Shall Pass(x,q)"
    assert rows[6].abbreviation == "Shall Do(x,~q)"


def test_table_matches_consistency_oracle():
    got = {(r.may_do, r.may_pass, r.may_do_not) for r in maxiconjunction_table()}
    assert got == set(consistent_patterns())
    assert (False, False, False) not in got


def test_sigma_is_sign_reversal():
    order = [(r.may_do, r.may_pass, r.may_do_not) for r in maxiconjunction_table()]
    assert sigma_by_reversal(order) == SIGMA
    assert all(SIGMA[SIGMA[i]] == i for i in SIGMA)


def test_describe_lists_three_conjuncts():
    assert maxiconjunction_table()[1].describe() == "MayDo(x,q) & MayPass(x,q) & ~MayDo(x,~q)"


def test_typed_atom_validation_and_arity(pqr):
    _, _, r = pqr
    assert TypedAtom(3, r).arity == 3
    with pytest.raises(ValueError):
        TypedAtom(8, r)
    with pytest.raises(ValueError):
        TypedAtom(0, r)


def test_typed_atoms_collects_in_order(pqr):
    p, q, _ = pqr
    t = Or(And(TypedAtom(2, p), TypedAtom(5, q)), TypedAtom(2, p))
    assert typed_atoms(t) == [TypedAtom(2, p), TypedAtom(5, q)]
    with pytest.raises(TypeError):
        typed_atoms(p)


def test_move_holds_requires_last_is_mover(toy, pqr):
    p = pqr[0]
    m = MoveTerm(p)
    for s in toy.states:
        for a in toy.agents:
            assert move_holds(m, (a,), "b", "b", s, toy) == evaluate(p, (a,), s, toy)
            assert not move_holds(m, (a,), "a", "b", s, toy)


def test_mcis_relation_tracks_base_relation(toy, pqr):
    p, q, _ = pqr
    carrier = [p, q, Not(p), And(p, q), Or(p, q), Top(1), Bottom(1)]
    base = condition_bqo(carrier, toy)
    m = mcis_over(base)
    for b, c in itertools.product(carrier, repeat=2):
        assert m.relation(MoveTerm(b), MoveTerm(c)) == implies(b, c, toy)
    assert verify_bqo(m).ok


def test_move_operator_commutes(toy, pqr):
    p, q, _ = pqr
    assert check_move_isomorphism([p, q, Not(p), Top(1), Bottom(1)], toy) == []


def test_vocabulary_merges_negation_and_equivalents(toy, pqr):
    p, q, _ = pqr
    v = BaseVocabulary([p, Not(p), Not(Not(p)), q], toy)
    assert len(v) == 2
    assert v.resolve(Not(p)) == (0, True)
    assert v.resolve(Not(Not(p))) == (0, False)
    with pytest.raises(UnknownBaseError):
        v.resolve(And(p, q))


def test_symmetry_principles_hold(toy, pqr):
    p, q, _ = pqr
    cis = NpCis(BaseVocabulary([p, q], toy))
    for d in (p, q):
        for i, j in ((1, 1), (2, 4), (3, 3), (5, 7), (6, 6)):
            assert cis.equivalent(TypedAtom(i, d), TypedAtom(j, Not(d)))
            assert cis.equivalent(TypedAtom(j, d), TypedAtom(i, Not(d)))


def test_distinct_types_exclusive_and_jointly_exhaustive(toy, pqr):
    p = pqr[0]
    cis = NpCis(BaseVocabulary([p], toy))
    assert cis.is_empty(And(TypedAtom(2, p), TypedAtom(5, p)))
    assert cis.leq(Top(2), disjoin(*(TypedAtom(i, p) for i in range(1, 8))))
    assert not cis.leq(TypedAtom(2, p), TypedAtom(5, p))


def test_positions_toward_tautology_and_contradiction(toy, pqr):
    p = pqr[0]
    cis = NpCis(BaseVocabulary([p, Top(1)], toy))
    for i in range(1, 8):
        assert cis.is_empty(TypedAtom(i, Top(1))) == (i in (1, 3, 4, 7))
        assert cis.is_empty(TypedAtom(i, Bottom(1))) == (i in (1, 2, 3, 5))


def test_atoms_of_are_assignments(toy, pqr):
    p, q, _ = pqr
    cis = NpCis(BaseVocabulary([p, q], toy))
    atoms = cis.atoms_of(TypedAtom(5, p))
    assert len(atoms) == 7
    assert all(t[0] == 5 for t in atoms)
    assert cis.atoms_of(Or(TypedAtom(5, p), TypedAtom(7, Not(p)))) == atoms


def test_requirements_report_clean(toy, pqr):
    p, q, r = pqr
    vocab = BaseVocabulary([p, q, r, Top(1)], toy)
    sample = [TypedAtom(i, p) for i in (2, 5)] + [Or(TypedAtom(5, p), TypedAtom(3, q)), TypedAtom(7, Not(q))]
    rep = verify_npcis(vocab, sample=sample)
    assert rep.ok, rep.violations[:3]
    assert rep.checked["top"] == 4 and rep.checked["bottom"] == 4
    assert rep.checked["bqo"] > 0
