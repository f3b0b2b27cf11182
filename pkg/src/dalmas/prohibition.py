"""From norms to prohibited actions.

An elementary norm <M(c), T_i(d)> eliminates action ``a`` for the mover when,
for some agent tuple, c holds now and the elimination test E_i on d holds
across the transition to ``a(mover, s)``.  Type 1 never eliminates anything.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from dalmas.conditions import And, Or, Term, UnknownAtomError, check_atoms, evaluate
from dalmas.normative import Norm
from dalmas.positions import MoveTerm, TypedAtom, typed_atoms


class ConfigurationError(ValueError):
    pass


class UnsupportedConsequenceError(ValueError):
    pass


def _e(i: int, before: bool, after: bool) -> bool:
    if i == 2:
        return before and not after
    if i == 3:
        return before == after
    if i == 4:
        return not before and after
    if i == 5:
        return not after
    if i == 6:
        return before != after
    if i == 7:
        return after
    if i == 1:
        return False
    raise ValueError(f"no elimination test for type {i}")


def e_op(i: int, d: Term, agents: Sequence, mover, state_before, state_after, universe) -> bool:
    """Elimination test E_i for base ``d`` over one transition.

    ``mover`` is carried for signature fidelity; d does not mention it.
    """
    if not 2 <= i <= 7:
        raise ValueError(f"E operators exist for types 2..7, got {i}")
    before = evaluate(d, agents, state_before, universe)
    after = evaluate(d, agents, state_after, universe)
    return _e(i, before, after)


def stipulation_prohibits(i: int, d: Term, agents, mover, action, state, world) -> bool:
    """Whether T_i(d) for ``agents`` prohibits ``action`` for the mover."""
    if i == 1:
        return False
    return e_op(i, d, agents, mover, state, world.apply(action, mover, state), world)


@dataclass(frozen=True)
class ProhibitionWitness:
    norm_id: str
    type_index: int | tuple
    agent_tuple: tuple
    action: str
    e_operator: str

    def to_dict(self) -> dict:
        return {
            "norm": self.norm_id,
            "type": list(self.type_index) if isinstance(self.type_index, tuple) else self.type_index,
            "tuple": list(self.agent_tuple),
            "action": self.action,
            "e": self.e_operator,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProhibitionWitness":
        t = d["type"]
        return cls(d["norm"], tuple(t) if isinstance(t, list) else t, tuple(d["tuple"]), d["action"], d["e"])


@dataclass(frozen=True)
class DeonticVerdict:
    feasible: tuple
    prohibited: dict = field(hash=False)
    permissible: tuple

    def to_dict(self) -> dict:
        return {
            "feasible": list(self.feasible),
            "prohibited": {a: [w.to_dict() for w in ws] for a, ws in self.prohibited.items()},
            "permissible": list(self.permissible),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeonticVerdict":
        return cls(
            tuple(d["feasible"]),
            {a: [ProhibitionWitness.from_dict(w) for w in ws] for a, ws in d["prohibited"].items()},
            tuple(d["permissible"]),
        )


def _flatten(term: Term, kind: type) -> list:
    if isinstance(term, kind):
        return _flatten(term.left, kind) + _flatten(term.right, kind)
    return [term]


def extended_form(consequence: Term) -> list:
    """Clauses of a consequence in conjunctive form, each a list of typed atoms.

    Accepted shapes: a disjunction of typed atoms (one clause), a conjunction
    of typed atoms (one single-atom clause each), or a conjunction whose
    conjuncts are typed atoms or such disjunctions.  The last shape behaves
    exactly like one disjunctive norm per conjunct.
    """
    if isinstance(consequence, TypedAtom):
        return [[consequence]]
    conjuncts = _flatten(consequence, And) if isinstance(consequence, And) else [consequence]
    clauses = []
    for c in conjuncts:
        parts = _flatten(c, Or)
        if not all(isinstance(p, TypedAtom) for p in parts):
            raise UnsupportedConsequenceError(
                f"consequence {consequence} is not a conjunction of disjunctions of typed atoms"
            )
        clauses.append(parts)
    return clauses


def extended_prohibits(consequence: Term, agents, mover, action, state, world) -> list:
    """The clauses whose every E test fires, as tuples of their types.

    A disjunction prohibits only when each disjunct's test holds; a
    conjunction prohibits when any one conjunct does.  The action is
    prohibited iff the result is non-empty.
    """
    after = world.apply(action, mover, state)
    fired = []
    for clause in extended_form(consequence):
        ok = True
        for p in clause:
            n = p.base.arity
            if p.index == 1 or not e_op(p.index, p.base, agents[:n], mover, state, after, world):
                ok = False
                break
        if ok:
            fired.append(tuple(p.index for p in clause))
    return fired


def validate_norms(norms: Iterable[Norm], world, extended: bool = False) -> None:
    """Raise :class:`ConfigurationError` for norms the engine cannot evaluate."""
    for n in norms:
        if not isinstance(n.ground, MoveTerm):
            raise ConfigurationError(f"norm {n.id}: ground must be a move term, got {n.ground}")
        try:
            check_atoms(n.ground.base, world)
            for a in typed_atoms(n.consequence):
                check_atoms(a.base, world)
        except UnknownAtomError as exc:
            raise ConfigurationError(f"norm {n.id}: unknown atom {exc.name!r}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"norm {n.id}: {exc}") from None
        if extended and not n.elementary:
            try:
                extended_form(n.consequence)
            except UnsupportedConsequenceError as exc:
                raise ConfigurationError(f"norm {n.id}: {exc}") from None


def _arity_of(n: Norm) -> int:
    bases = [a.base.arity for a in typed_atoms(n.consequence)]
    return max([n.ground.base.arity] + bases)


def prohibited_set(
    norms: Sequence[Norm],
    mover,
    state,
    feasible: Sequence[str],
    world,
    *,
    extended: bool = False,
    bind_mover: bool = False,
) -> DeonticVerdict:
    """Compute the deontic verdict for ``mover`` in ``state``.

    ``world`` supplies ``agents``, ``apply(action, agent, state)`` and atom
    semantics.  Agent tuples range over all of agents^n with repeats; with
    ``bind_mover`` the first tuple member must be the mover.  Non-elementary
    norms are ignored unless ``extended`` is set.  Witness order: norm order,
    then tuple order, then ``feasible`` order.
    """
    feasible = tuple(feasible)
    after = {a: world.apply(a, mover, state) for a in feasible}
    prohibited: dict = {}
    for norm in norms:
        if norm.elementary:
            if norm.consequence.index == 1:
                continue
        elif not extended:
            continue
        n = _arity_of(norm)
        for t in itertools.product(world.agents, repeat=n):
            if bind_mover and t[0] != mover:
                continue
            ground = norm.ground.base
            if not evaluate(ground, t[: ground.arity], state, world):
                continue
            for a in feasible:
                if norm.elementary:
                    i, d = norm.consequence.index, norm.consequence.base
                    sub = t[: d.arity]
                    if _e(i, evaluate(d, sub, state, world), evaluate(d, sub, after[a], world)):
                        w = ProhibitionWitness(norm.id, i, t, a, f"E{i}")
                        prohibited.setdefault(a, []).append(w)
                else:
                    for types in extended_prohibits(norm.consequence, t, mover, a, state, world):
                        label = "&".join(f"E{i}" for i in types)
                        w = ProhibitionWitness(norm.id, types, t, a, label)
                        prohibited.setdefault(a, []).append(w)
    ordered = {a: prohibited[a] for a in feasible if a in prohibited}
    permissible = tuple(a for a in feasible if a not in prohibited)
    return DeonticVerdict(feasible, ordered, permissible)


def replay_witness(w: ProhibitionWitness, norm: Norm, mover, state, world) -> bool:
    """Re-evaluate a witness on its situation; True iff it still prohibits."""
    t = w.agent_tuple
    ground = norm.ground.base
    if not evaluate(ground, t[: ground.arity], state, world):
        return False
    if norm.elementary:
        d = norm.consequence.base
        return stipulation_prohibits(norm.consequence.index, d, t[: d.arity], mover, w.action, state, world)
    return bool(extended_prohibits(norm.consequence, t, mover, w.action, state, world))

