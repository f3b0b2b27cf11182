import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dalmas.conditions import (
    And,
    ArityError,
    Atom,
    Bottom,
    Not,
    Or,
    TermSyntaxError,
    Top,
    UnknownAtomError,
    check_atoms,
    condition_bqo,
    declared_bqo,
    denote,
    evaluate,
    format_term,
    implies,
    parse_term,
    q_equivalent,
    unsound_axioms,
    verify_bqo,
)
from conftest import make_toy_universe


def test_meet_of_atom_and_complement_is_bottom(toy, pqr):
    p, q, _ = pqr
    assert implies(p & ~p, Bottom(1), toy)
    assert implies(Top(1), p | ~p, toy)
    assert q_equivalent(~~q, q, toy)


def test_mismatched_arity_is_rejected(pqr):
    p, _, r = pqr
    with pytest.raises(ArityError):
        And(p, r)
    with pytest.raises(ArityError):
        Or(r, Top(1))


def test_evaluate_checks_tuple_length_and_membership(toy, pqr):
    p, _, r = pqr
    with pytest.raises(ArityError):
        evaluate(r, ("a",), 0, toy)
    with pytest.raises(ValueError):
        evaluate(p, ("zz",), 0, toy)


def test_unknown_atom_named(toy):
    with pytest.raises(UnknownAtomError) as err:
        check_atoms(Atom("Blue", 1) & Atom("p", 1), toy)
    assert err.value.name == "Blue"


def test_evaluate_matches_truth_table(toy, pqr):
    p, q, _ = pqr
    term = Or(And(p, Not(q)), Not(p))
    for a in toy.agents:
        for s in toy.states:
            pv = evaluate(p, (a,), s, toy)
            qv = evaluate(q, (a,), s, toy)
            assert evaluate(term, (a,), s, toy) == ((pv and not qv) or not pv)


def test_denotation_extent_counts(toy, pqr):
    p = pqr[0]
    # bit i of s for agent i over 16 states: 8 of 16 per agent
    assert len(denote(p, toy)) == 3 * 8
    assert denote(p & ~p, toy).extent == frozenset()


def test_format_parse_round_trip(pqr):
    p, q, r = pqr
    terms = [p, Top(2), Bottom(1), And(And(p, q), Not(p)), Or(r, Not(Top(2)))]
    for t in terms:
        assert parse_term(format_term(t)) == t
    assert format_term(And(And(p, q), p)) == "(and p/1 q/1 p/1)"


@pytest.mark.parametrize("bad", ["(and p/1)", "(xor p/1 q/1)", "p", "(not p/1 q/1)", "(and p/1 q/1", "p/1 q/1"])
def test_parse_errors(bad):
    with pytest.raises(TermSyntaxError):
        parse_term(bad)


def _carrier(bases, depth=1):
    out = list(bases) + [Top(bases[0].arity), Bottom(bases[0].arity)]
    for _ in range(depth):
        layer = [Not(t) for t in out]
        layer += [And(a, b) for a, b in itertools.combinations(out, 2)]
        out = list(dict.fromkeys(out + layer))
    return out


def test_semantic_bqo_satisfies_all_axioms(toy, pqr):
    p, q, _ = pqr
    rep = verify_bqo(condition_bqo(_carrier([p, q]), toy))
    assert rep.ok, rep.violations[:3]
    assert rep.checked > 1000


def test_declared_relation_missing_contraposition_is_caught(pqr):
    p, q, _ = pqr
    carrier = [p, q, Not(p), Not(q), Top(1), Bottom(1)]
    rep = verify_bqo(declared_bqo(carrier, [(p, q), (Bottom(1), p), (Bottom(1), q), (p, Top(1)), (q, Top(1))]))
    assert any(v.axiom == "contraposition" for v in rep.violations)


def test_trivial_relation_is_caught(pqr):
    p = pqr[0]
    carrier = [p, Top(1), Bottom(1)]
    everything = [(a, b) for a in carrier for b in carrier]
    rep = verify_bqo(declared_bqo(carrier, everything))
    assert [v.axiom for v in rep.violations] == ["non-triviality"]


def test_unsound_declared_pair_reported(toy, pqr):
    p, q, _ = pqr
    assert unsound_axioms([(p, q), (p & q, p)], toy) == [(p, q)]


def terms(bases, depth=3):
    leaves = st.sampled_from(bases + [Top(1), Bottom(1)])
    return st.recursive(
        leaves,
        lambda child: st.one_of(
            st.builds(Not, child), st.builds(And, child, child), st.builds(Or, child, child)
        ),
        max_leaves=6,
    )


UNIVERSE = make_toy_universe()
P, Q = Atom("p", 1), Atom("q", 1)


@settings(max_examples=60, deadline=None)
@given(terms([P, Q]), terms([P, Q]))
def test_implication_is_pointwise(a, b):
    pointwise = all(
        not evaluate(a, (x,), s, UNIVERSE) or evaluate(b, (x,), s, UNIVERSE)
        for x in UNIVERSE.agents
        for s in UNIVERSE.states
    )
    assert implies(a, b, UNIVERSE) == pointwise


@settings(max_examples=40, deadline=None)
@given(st.lists(terms([P, Q]), min_size=2, max_size=5))
def test_random_carriers_are_bqos(carrier):
    carrier = carrier + [Top(1), Bottom(1)]
    assert verify_bqo(condition_bqo(carrier, UNIVERSE)).ok
