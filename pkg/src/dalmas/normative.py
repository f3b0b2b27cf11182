"""Norms as ground/consequence pairs, joining systems and minimal norms.

Relations are passed around as plain callables ``leq(a, b) -> bool``.  A
joining system stores its joins as a finite generator set; closure under the
joining conditions is checked, never materialised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from dalmas.conditions import ProbeUniverse, Term, implies
from dalmas.positions import BaseVocabulary, MoveTerm, NpCis, TypedAtom, typed_atoms

Leq = Callable[[Any, Any], bool]


@dataclass(frozen=True)
class Norm:
    id: str
    ground: Any
    consequence: Any
    note: str = ""

    @property
    def elementary(self) -> bool:
        return isinstance(self.consequence, TypedAtom)

    @property
    def pair(self) -> tuple:
        return self.ground, self.consequence

    def __str__(self) -> str:
        return f"<{self.ground}, {self.consequence}>"


def _gc(n) -> tuple:
    return n if isinstance(n, tuple) else (n.ground, n.consequence)


def subinterval_leq(n1, n2, r1: Leq, r2: Leq) -> bool:
    """<a1,a2> is a subinterval of <b1,b2>: b1 R1 a1 and a2 R2 b2."""
    (a1, a2), (b1, b2) = _gc(n1), _gc(n2)
    return r1(b1, a1) and r2(a2, b2)


def bumpeq(n1, n2, r1: Leq, r2: Leq) -> bool:
    return subinterval_leq(n1, n2, r1, r2) and subinterval_leq(n2, n1, r1, r2)


def _strict(r: Leq, a, b) -> bool:
    return r(a, b) and not r(b, a)


def strict_below(n1, n2, r1: Leq, r2: Leq) -> bool:
    """(b1 S1 a1 and a2 R2 b2) or (b1 R1 a1 and a2 S2 b2)."""
    (a1, a2), (b1, b2) = _gc(n1), _gc(n2)
    return (_strict(r1, b1, a1) and r2(a2, b2)) or (r1(b1, a1) and _strict(r2, a2, b2))


@dataclass
class JoiningSystem:
    ground_leq: Leq
    consequence_leq: Leq
    joins: Sequence
    ground_carrier: Sequence = ()
    consequence_carrier: Sequence = ()

    def leq(self, n1, n2) -> bool:
        return subinterval_leq(n1, n2, self.ground_leq, self.consequence_leq)

    def below(self, n1, n2) -> bool:
        return strict_below(n1, n2, self.ground_leq, self.consequence_leq)


def minimal_norms(js: JoiningSystem) -> list:
    """Joins with no join strictly below them, in presentation order."""
    joins = list(js.joins)
    return [n for n in joins if not any(js.below(m, n) for m in joins)]


@dataclass
class ConnectivityReport:
    witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return not self.failures


def check_connectivity(js: JoiningSystem, minimal: Iterable | None = None) -> ConnectivityReport:
    """Find, for every join, a minimal join subinterval-below it.

    ``minimal`` defaults to :func:`minimal_norms`; pass a narrower set to test
    whether it still characterises the system.
    """
    mins = minimal_norms(js) if minimal is None else list(minimal)
    report = ConnectivityReport()
    for j, n in enumerate(js.joins):
        for m in mins:
            if js.leq(m, n):
                report.witnesses[j] = m
                break
        else:
            report.failures.append(n)
    return report


def upper_bounds(subset: Iterable, carrier: Iterable, leq: Leq) -> list:
    subset = list(subset)
    return [u for u in carrier if all(leq(c, u) for c in subset)]


def lower_bounds(subset: Iterable, carrier: Iterable, leq: Leq) -> list:
    subset = list(subset)
    return [u for u in carrier if all(leq(u, c) for c in subset)]


def lub(subset: Iterable, carrier: Sequence, leq: Leq) -> list:
    """Least upper bounds in a quasi-order; may be several (equivalent) elements or none."""
    ups = upper_bounds(subset, carrier, leq)
    return [u for u in ups if all(leq(u, v) for v in ups)]


def glb(subset: Iterable, carrier: Sequence, leq: Leq) -> list:
    downs = lower_bounds(subset, carrier, leq)
    return [u for u in downs if all(leq(v, u) for v in downs)]


@dataclass
class ClosureReport:
    upward: list = field(default_factory=list)
    ground_lub: list = field(default_factory=list)
    consequence_glb: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.upward or self.ground_lub or self.consequence_glb)


def _subsets(items: list, limit: int):
    for r in range(1, min(len(items), limit) + 1):
        yield from itertools.combinations(items, r)


def check_joining_closure(js: JoiningSystem, max_subset: int = 4) -> ClosureReport:
    """Check the three joining-system closure conditions on the finite carriers.

    * upward: a join's subinterval-successors in the carrier are joins;
    * ground_lub: if c1 is joined to b2 for all c1 in C1, so is every lub C1;
    * consequence_glb: dually, every glb of consequences joined to one ground.

    Subsets C1/C2 are enumerated up to ``max_subset`` elements.  Membership
    is structural.
    """
    joins = [_gc(n) for n in js.joins]
    J = set(joins)
    B1, B2 = list(js.ground_carrier), list(js.consequence_carrier)
    rep = ClosureReport()
    for b in joins:
        for c in itertools.product(B1, B2):
            if c not in J and js.leq(b, c):
                rep.upward.append((b, c))

    for b2 in dict.fromkeys(c for _, c in joins):
        grounds = [g for g, c in joins if c == b2]
        for C1 in _subsets(grounds, max_subset):
            for a1 in lub(C1, B1, js.ground_leq):
                if (a1, b2) not in J:
                    rep.ground_lub.append((C1, (a1, b2)))
    for b1 in dict.fromkeys(g for g, _ in joins):
        conseqs = [c for g, c in joins if g == b1]
        for C2 in _subsets(conseqs, max_subset):
            for a2 in glb(C2, B2, js.consequence_leq):
                if (b1, a2) not in J:
                    rep.consequence_glb.append((C2, (b1, a2)))
    return rep


def upward_closure(js: JoiningSystem) -> list:
    """All carrier pairs subinterval-above some join (the generated joins)."""
    joins = [_gc(n) for n in js.joins]
    out = list(joins)
    seen = set(out)
    for c in itertools.product(js.ground_carrier, js.consequence_carrier):
        if c not in seen and any(js.leq(b, c) for b in joins):
            out.append(c)
            seen.add(c)
    return out


class GcSystem(JoiningSystem):
    """A normative system: m-cis grounds joined to np-cis consequences.

    Ground order is implication of the move terms' bases over ``universe``;
    consequence order is R_T over a vocabulary holding every base the norms'
    consequences mention.
    """

    def __init__(self, norms: Sequence[Norm], universe: ProbeUniverse, extra_bases: Iterable[Term] = ()):
        norms = list(norms)
        bases = [a.base for n in norms for a in typed_atoms(n.consequence)]
        self.universe = universe
        self.vocab = BaseVocabulary(list(bases) + list(extra_bases), universe)
        self.npcis = NpCis(self.vocab)
        self.norms = norms
        super().__init__(
            ground_leq=self._ground_leq,
            consequence_leq=self.npcis.leq,
            joins=norms,
            ground_carrier=list(dict.fromkeys(n.ground for n in norms)),
            consequence_carrier=list(dict.fromkeys(n.consequence for n in norms)),
        )

    def _ground_leq(self, a: MoveTerm, b: MoveTerm) -> bool:
        if a.base.arity != b.base.arity:
            return False
        return implies(a.base, b.base, self.universe)
