"""One-agent normative positions, the move operator and the np-cis algebra.

Grounds of norms are move terms ``M(c)``; consequences are Boolean
combinations of typed atoms ``T<i>(d)``.  Consequence terms get a finite
semantics: an atom-tuple assigns one position type to every class of base
conditions in a :class:`BaseVocabulary`, and a consequence denotes the set of
atom-tuples it admits.  R_T is inclusion of those sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from dalmas.conditions import (
    And,
    ArityError,
    Bottom,
    Bqo,
    Not,
    Or,
    ProbeUniverse,
    Term,
    Top,
    Violation,
    _bits,
    disjoin,
    evaluate,
    format_term,
    verify_bqo,
)

#: base negation maps T_i d onto T_sigma(i) d'
SIGMA = {1: 1, 2: 4, 3: 3, 4: 2, 5: 7, 6: 6, 7: 5}

TYPES = tuple(range(1, 8))

# T1, T3, T4, T7 of a tautology are empty
TOP_TYPES = (2, 5, 6)
# T1, T2, T3, T5 of a contradiction are empty
BOTTOM_TYPES = (4, 6, 7)


NPCIS_REQUIREMENTS = ("exclusive", "exhaustive", "symmetry", "extensional", "top", "bottom")


class UnknownBaseError(KeyError):
    def __init__(self, base):
        super().__init__(base)
        self.base = base

    def __str__(self) -> str:
        return f"base condition {format_term(self.base)} is not in the vocabulary"


class PositionType(NamedTuple):
    index: int
    may_do: bool
    may_pass: bool
    may_do_not: bool
    abbreviation: str | None

    @property
    def signs(self) -> str:
        return "".join("+" if s else "-" for s in self[1:4])

    def describe(self) -> str:
        parts = [
            ("" if self.may_do else "~") + "MayDo(x,q)",
            ("" if self.may_pass else "~") + "MayPass(x,q)",
            ("" if self.may_do_not else "~") + "MayDo(x,~q)",
        ]
        return " & ".join(parts)


_TABLE = (
    PositionType(1, True, True, True, None),
    PositionType(2, True, True, False, None),
    PositionType(3, True, False, True, None),
    PositionType(4, False, True, True, None),
    PositionType(5, True, False, False, "Shall Do(x,q)"),
    PositionType(6, False, True, False, "Shall Pass(x,q)"),
    PositionType(7, False, False, True, "Shall Do(x,~q)"),
)


def maxiconjunction_table() -> list:
    """The seven one-agent position types, in their conventional order."""
    return list(_TABLE)


def sigma(i: int) -> int:
    return SIGMA[i]


# ---------------------------------------------------------------------------
# Move terms (grounds)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class MoveTerm(Term):
    """``M(c)``: holds of (w1..wn, w) in situation <mover, s> iff w is the
    mover and c(w1..wn; s)."""

    base: Term

    @property
    def arity(self) -> int:
        return self.base.arity + 1

    def format(self) -> str:
        return f"M({format_term(self.base)})"

    def __repr__(self) -> str:
        return f"MoveTerm({self.base!r})"


def move_holds(mc: MoveTerm, agents: Sequence, last, mover, state, universe) -> bool:
    agents = tuple(agents)
    if len(agents) != mc.base.arity:
        raise ArityError(
            f"move term over arity {mc.base.arity} applied to {len(agents)} agents"
        )
    return last == mover and evaluate(mc.base, agents, state, universe)


def m_meet(a: MoveTerm, b: MoveTerm) -> MoveTerm:
    return MoveTerm(And(a.base, b.base))


def m_complement(a: MoveTerm) -> MoveTerm:
    return MoveTerm(Not(a.base))


def mcis_over(bqo: Bqo) -> Bqo:
    """The m-cis: carrier {Mb}, operations and R transported through M."""
    base_rel = bqo.relation
    n = bqo.top.arity if bqo.top is not None else 0
    return Bqo(
        carrier=tuple(MoveTerm(b) for b in bqo.carrier),
        relation=lambda x, y: base_rel(x.base, y.base),
        meet=m_meet,
        complement=m_complement,
        top=MoveTerm(Top(n)),
        bottom=MoveTerm(Bottom(n)),
        total=bqo.total,
    )


def check_move_isomorphism(carrier: Iterable[Term], universe: ProbeUniverse) -> list:
    """Pointwise check that M commutes with meet and complement.

    For every b, c in ``carrier`` and every (tuple, last, mover, state) of the
    universe: M(b^c) agrees with Mb and Mc, and M(c') agrees with
    ``last == mover and not c``.  Returns the violated instances.
    """
    carrier = list(carrier)
    out = []
    for b in carrier:
        n = b.arity
        for t in itertools.product(universe.agents, repeat=n):
            for last in universe.agents:
                for mover in universe.agents:
                    for s in universe.states:
                        mb = move_holds(MoveTerm(b), t, last, mover, s, universe)
                        neg = move_holds(m_complement(MoveTerm(b)), t, last, mover, s, universe)
                        if neg != (last == mover and not evaluate(b, t, s, universe)):
                            out.append(Violation("m-complement", (b, t, last, mover, s)))
                        for c in carrier:
                            if c.arity != n:
                                continue
                            mc = move_holds(MoveTerm(c), t, last, mover, s, universe)
                            both = move_holds(
                                m_meet(MoveTerm(b), MoveTerm(c)), t, last, mover, s, universe
                            )
                            if both != (mb and mc):
                                out.append(Violation("m-meet", (b, c, t, last, mover, s)))
    return out


# ---------------------------------------------------------------------------
# Typed atoms and the consequence algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class TypedAtom(Term):
    """``T<i>(d)``: the mover has position type i towards d in the next state."""

    index: int
    base: Term

    def __post_init__(self):
        if self.index not in SIGMA:
            raise ValueError(f"position type must be in 1..7, got {self.index}")

    @property
    def arity(self) -> int:
        return self.base.arity + 1

    def format(self) -> str:
        return f"T{self.index}({format_term(self.base)})"

    def __repr__(self) -> str:
        return f"TypedAtom({self.index}, {self.base!r})"


def typed_atoms(term: Term) -> list:
    """Typed atoms of a consequence term, left to right, without duplicates."""
    if isinstance(term, TypedAtom):
        return [term]
    if isinstance(term, (And, Or)):
        return list(dict.fromkeys(typed_atoms(term.left) + typed_atoms(term.right)))
    if isinstance(term, Not):
        return typed_atoms(term.inner)
    if isinstance(term, (Top, Bottom)):
        return []
    raise TypeError(f"{term!r} is not a consequence term")


class BaseVocabulary:
    """Classes of base conditions, identified up to equivalence and negation.

    Two bases share an entry when their probe denotations coincide, or when
    one denotes the complement of the other (the entry is then reached
    negated).  An entry whose representative is tautologous or contradictory
    only admits the types that are consistent for such a base.
    """

    def __init__(self, bases: Iterable[Term], universe: ProbeUniverse):
        self.universe = universe
        self.reps: list = []
        self.allowed: list = []
        self._index: dict = {}
        for b in bases:
            self.add(b)

    def _key(self, term: Term):
        return term.arity, _bits(term, self.universe)

    def add(self, base: Term) -> tuple:
        try:
            return self.resolve(base)
        except UnknownBaseError:
            pass
        n, bits = self._key(base)
        k = len(self.reps)
        self.reps.append(base)
        full = self.universe.full(n)
        if bits == full:
            allowed = TOP_TYPES
        elif bits == 0:
            allowed = BOTTOM_TYPES
        else:
            allowed = TYPES
        self.allowed.append(allowed)
        self._index[(n, bits)] = (k, False)
        self._index[(n, full ^ bits)] = (k, True)
        return k, False

    def resolve(self, base: Term) -> tuple:
        """(entry index, negated) for ``base``."""
        hit = self._index.get(self._key(base))
        if hit is None:
            raise UnknownBaseError(base)
        return hit

    def __len__(self) -> int:
        return len(self.reps)

    def entries_of(self, term: Term) -> list:
        return sorted({self.resolve(a.base)[0] for a in typed_atoms(term)})


class NpCis:
    """R_T over consequence terms with atom-tuple semantics.

    Atom sets are computed as boolean arrays over only the vocabulary entries
    a comparison mentions; unmentioned coordinates range freely and cannot
    affect inclusion.
    """

    def __init__(self, vocab: BaseVocabulary):
        self.vocab = vocab
        self._cache: dict = {}

    def _shape(self, coords: tuple) -> tuple:
        return tuple(len(self.vocab.allowed[k]) for k in coords)

    def array(self, term: Term, coords: tuple) -> np.ndarray:
        key = (term, coords)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        shape = self._shape(coords)
        if isinstance(term, TypedAtom):
            k, negated = self.vocab.resolve(term.base)
            t = SIGMA[term.index] if negated else term.index
            if k not in coords:
                raise ValueError(f"entry {k} not among coordinates {coords}")
            axis = coords.index(k)
            mask = np.array([x == t for x in self.vocab.allowed[k]])
            view = [1] * len(coords)
            view[axis] = len(mask)
            arr = np.broadcast_to(mask.reshape(view), shape)
        elif isinstance(term, And):
            arr = self.array(term.left, coords) & self.array(term.right, coords)
        elif isinstance(term, Or):
            arr = self.array(term.left, coords) | self.array(term.right, coords)
        elif isinstance(term, Not):
            arr = ~self.array(term.inner, coords)
        elif isinstance(term, Top):
            arr = np.ones(shape, dtype=bool)
        elif isinstance(term, Bottom):
            arr = np.zeros(shape, dtype=bool)
        else:
            raise TypeError(f"{term!r} is not a consequence term")
        self._cache[key] = arr
        return arr

    def coords(self, *terms: Term) -> tuple:
        ks = set()
        for t in terms:
            ks.update(self.vocab.entries_of(t))
        return tuple(sorted(ks))

    def atoms_of(self, term: Term) -> frozenset:
        """All atom-tuples (one type per vocabulary entry) admitted by ``term``."""
        coords = tuple(range(len(self.vocab)))
        arr = self.array(term, coords)
        if not coords:
            return frozenset({()}) if arr.item() else frozenset()
        allowed = [self.vocab.allowed[k] for k in coords]
        return frozenset(
            tuple(allowed[j][i] for j, i in enumerate(idx)) for idx in zip(*np.nonzero(arr))
        )

    def leq(self, a: Term, b: Term) -> bool:
        c = self.coords(a, b)
        return not (self.array(a, c) & ~self.array(b, c)).any()

    def equivalent(self, a: Term, b: Term) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def is_empty(self, a: Term) -> bool:
        return not self.array(a, self.coords(a)).any()

    __call__ = leq


def atoms_of(term: Term, vocab: BaseVocabulary) -> frozenset:
    return NpCis(vocab).atoms_of(term)


def rt_leq(a: Term, b: Term, vocab: BaseVocabulary) -> bool:
    return NpCis(vocab).leq(a, b)


def npcis_bqo(npcis: NpCis, carrier: Iterable[Term]) -> Bqo:
    carrier = tuple(dict.fromkeys(carrier))
    arities = {t.arity for t in carrier}
    n = arities.pop() if len(arities) == 1 else 1
    return Bqo(carrier=carrier, relation=npcis.leq, top=Top(n), bottom=Bottom(n))


@dataclass
class NpCisReport:
    violations: list
    checked: dict

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_npcis(vocab: BaseVocabulary, sample: Iterable[Term] = (), bases: Iterable[Term] = ()) -> NpCisReport:
    """Check the np-cis requirements, plus the Bqo axioms on ``sample``.

    The requirements, by report key:

    ``exclusive``   T_i d and T_j d are disjoint for i != j
    ``exhaustive``  T_1 d or ... or T_7 d covers everything
    ``symmetry``    T_i d is equivalent to T_sigma(i) d'
    ``extensional`` equivalent bases give equivalent typed atoms
    ``top``         T_i of a tautology is empty for i in 1, 3, 4, 7
    ``bottom``      T_i of a contradiction is empty for i in 1, 2, 3, 5

    They are checked for every vocabulary representative and every extra
    base in ``bases``; ``top``/``bottom`` only when the vocabulary can
    express a tautology of that arity.
    """
    cis = NpCis(vocab)
    out: list = []
    checked = dict.fromkeys(NPCIS_REQUIREMENTS, 0)
    ds = list(dict.fromkeys(list(vocab.reps) + list(bases)))

    for d in ds:
        top_t, bot_t = Top(d.arity + 1), Bottom(d.arity + 1)
        for i in TYPES:
            for j in TYPES:
                if i == j:
                    continue
                checked["exclusive"] += 1
                if not cis.leq(And(TypedAtom(i, d), TypedAtom(j, d)), bot_t):
                    out.append(Violation("exclusive", (i, j, d)))
        checked["exhaustive"] += 1
        if not cis.leq(top_t, disjoin(*(TypedAtom(i, d) for i in TYPES))):
            out.append(Violation("exhaustive", (d,)))
        for i in TYPES:
            checked["symmetry"] += 1
            if not cis.equivalent(TypedAtom(i, d), TypedAtom(SIGMA[i], Not(d))):
                out.append(Violation("symmetry", (i, d)))

    for c in ds:
        for d in ds:
            if c is d or c.arity != d.arity or vocab._key(c) != vocab._key(d):
                continue
            for i in TYPES:
                checked["extensional"] += 1
                if not cis.equivalent(TypedAtom(i, c), TypedAtom(i, d)):
                    out.append(Violation("extensional", (i, c, d)))

    for n in sorted({d.arity for d in ds}):
        try:
            vocab.resolve(Top(n))
        except UnknownBaseError:
            continue
        for i in (1, 3, 4, 7):
            checked["top"] += 1
            if not cis.is_empty(TypedAtom(i, Top(n))):
                out.append(Violation("top", (i, Top(n))))
        for i in (1, 2, 3, 5):
            checked["bottom"] += 1
            if not cis.is_empty(TypedAtom(i, Bottom(n))):
                out.append(Violation("bottom", (i, Bottom(n))))

    sample = list(sample)
    if sample:
        report = verify_bqo(npcis_bqo(cis, sample))
        checked["bqo"] = report.checked
        out.extend(report.violations)
    return NpCisReport(out, checked)


__all__ = [
    "SIGMA",
    "TYPES",
    "BaseVocabulary",
    "MoveTerm",
    "NpCis",
    "NpCisReport",
    "PositionType",
    "TypedAtom",
    "UnknownBaseError",
    "atoms_of",
    "check_move_isomorphism",
    "maxiconjunction_table",
    "mcis_over",
    "move_holds",
    "npcis_bqo",
    "rt_leq",
    "sigma",
    "typed_atoms",
    "verify_npcis",
]
