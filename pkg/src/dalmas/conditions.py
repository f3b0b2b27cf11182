"""Symbolic state-conditions, their denotations, and Boolean quasi-orderings.

A condition is an n-ary predicate over agents evaluated in a state.  Terms are
immutable and compared structurally; implication between terms is decided
semantically, by extent inclusion over a finite :class:`ProbeUniverse`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence


class ArityError(ValueError):
    """Arity mismatch between a term and its arguments or its siblings."""


class UnknownAtomError(KeyError):
    """A term mentions an atom the universe does not declare."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown atom {self.name!r}"


class TermSyntaxError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


class Term:
    """Base class for Boolean terms (condition and consequence side)."""

    __slots__ = ()

    arity: int

    def __and__(self, other: "Term") -> "And":
        return And(self, other)

    def __or__(self, other: "Term") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True, repr=False)
class Atom(Term):
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ArityError(f"negative arity for atom {self.name!r}")

    def __repr__(self) -> str:
        return f"Atom({self.name!r}, {self.arity})"


@dataclass(frozen=True, repr=False)
class Top(Term):
    arity: int

    def __repr__(self) -> str:
        return f"Top({self.arity})"


@dataclass(frozen=True, repr=False)
class Bottom(Term):
    arity: int

    def __repr__(self) -> str:
        return f"Bottom({self.arity})"


@dataclass(frozen=True, repr=False)
class Not(Term):
    inner: Term

    @property
    def arity(self) -> int:
        return self.inner.arity

    def __repr__(self) -> str:
        return f"Not({self.inner!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Term):
    left: Term
    right: Term

    def __post_init__(self):
        if self.left.arity != self.right.arity:
            raise ArityError(
                f"{type(self).__name__} of arity {self.left.arity} and "
                f"{self.right.arity} terms"
            )

    @property
    def arity(self) -> int:
        return self.left.arity

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    pass


class Or(_Binary):
    pass


def conjoin(*terms: Term) -> Term:
    """Left-folded conjunction of one or more terms."""
    if not terms:
        raise ValueError("conjoin needs at least one term")
    return reduce(And, terms)


def disjoin(*terms: Term) -> Term:
    """Left-folded disjunction of one or more terms."""
    if not terms:
        raise ValueError("disjoin needs at least one term")
    return reduce(Or, terms)


def atoms_in(term: Term) -> set:
    """All leaves of ``term`` that are neither Top nor Bottom."""
    if isinstance(term, (And, Or)):
        return atoms_in(term.left) | atoms_in(term.right)
    if isinstance(term, Not):
        return atoms_in(term.inner)
    if isinstance(term, (Top, Bottom)):
        return set()
    return {term}


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<typed>T(?P<idx>[1-7])\()"
    r"|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<sym>[A-Za-z_][A-Za-z0-9_]*)/(?P<ar>\d+)"
    r"|(?P<op>and|or|not)\b)"
)


def _chain(term: Term, kind: type) -> list:
    # left-nested chains print flat: And(And(a, b), c) -> (and a b c)
    parts = []
    while isinstance(term, kind):
        parts.append(term.right)
        term = term.left
    parts.append(term)
    return parts[::-1]


def format_term(term: Term) -> str:
    """Canonical s-expression text of a term."""
    if isinstance(term, Atom):
        return f"{term.name}/{term.arity}"
    if isinstance(term, Top):
        return f"top/{term.arity}"
    if isinstance(term, Bottom):
        return f"bot/{term.arity}"
    if isinstance(term, Not):
        return f"(not {format_term(term.inner)})"
    if isinstance(term, And):
        return "(and " + " ".join(map(format_term, _chain(term, And))) + ")"
    if isinstance(term, Or):
        return "(or " + " ".join(map(format_term, _chain(term, Or))) + ")"
    fmt = getattr(term, "format", None)
    if fmt is None:
        raise TypeError(f"cannot format {term!r}")
    return fmt()


def parse_term(text: str) -> Term:
    """Parse the s-expression form produced by :func:`format_term`.

    ``(and ...)`` and ``(or ...)`` accept two or more operands and fold to
    the left.  Typed atoms ``T<i>(<base>)`` are accepted anywhere a leaf is.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TermSyntaxError(f"unexpected input at {pos}: {text[pos:pos + 20]!r}")
        tokens.append(m)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    it = iter(tokens)

    def expect_rp():
        tok = next(it, None)
        if tok is None or tok.group("rp") is None:
            raise TermSyntaxError("expected ')'")

    def parse(tok) -> Term:
        if tok is None:
            raise TermSyntaxError("unexpected end of term")
        if tok.group("sym"):
            name, arity = tok.group("sym"), int(tok.group("ar"))
            if name == "top":
                return Top(arity)
            if name == "bot":
                return Bottom(arity)
            return Atom(name, arity)
        if tok.group("typed"):
            from dalmas.positions import TypedAtom

            base = parse(next(it, None))
            expect_rp()
            return TypedAtom(int(tok.group("idx")), base)
        if tok.group("lp"):
            op = next(it, None)
            if op is None or op.group("op") is None:
                raise TermSyntaxError("expected 'and', 'or' or 'not' after '('")
            args = []
            while True:
                nxt = next(it, None)
                if nxt is None:
                    raise TermSyntaxError("unbalanced '('")
                if nxt.group("rp"):
                    break
                args.append(parse(nxt))
            kind = op.group("op")
            if kind == "not":
                if len(args) != 1:
                    raise TermSyntaxError("'not' takes exactly one operand")
                return Not(args[0])
            if len(args) < 2:
                raise TermSyntaxError(f"'{kind}' takes at least two operands")
            return conjoin(*args) if kind == "and" else disjoin(*args)
        raise TermSyntaxError(f"unexpected token {tok.group(0).strip()!r}")

    result = parse(next(it, None))
    if next(it, None) is not None:
        raise TermSyntaxError("trailing input after term")
    return result


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ProbeUniverse:
    """A finite carrier for deciding implication between conditions.

    ``atom_eval(name, agents, state)`` must be total over the declared atoms,
    agent tuples of matching arity and the listed states.  Agents and states
    are enumerated in insertion order; tuples vary slowest, states fastest.
    """

    agents: Sequence[Hashable]
    states: Sequence[Any]
    atoms: Mapping[str, int]
    atom_eval: Callable[[str, tuple, Any], bool]
    _points: dict = field(default_factory=dict, init=False, repr=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.agents = tuple(self.agents)
        self.states = tuple(self.states)
        self.atoms = dict(self.atoms)

    def points(self, arity: int) -> list:
        """The ordered (agent-tuple, state) pairs for ``arity``."""
        if arity not in self._points:
            self._points[arity] = [
                (t, s)
                for t in itertools.product(self.agents, repeat=arity)
                for s in self.states
            ]
        return self._points[arity]

    def full(self, arity: int) -> int:
        return (1 << len(self.points(arity))) - 1


def _check_atom(atom: Atom, universe) -> None:
    declared = universe.atoms.get(atom.name)
    if declared is None:
        raise UnknownAtomError(atom.name)
    if declared != atom.arity:
        raise ArityError(
            f"atom {atom.name!r} declared with arity {declared}, used with {atom.arity}"
        )


def check_atoms(term: Term, universe) -> None:
    """Raise if ``term`` uses an atom that ``universe`` does not declare."""
    for leaf in atoms_in(term):
        if not isinstance(leaf, Atom):
            raise TypeError(f"{leaf!r} is not a state-condition atom")
        _check_atom(leaf, universe)


def _eval(term: Term, agents: tuple, state, universe) -> bool:
    if isinstance(term, Atom):
        _check_atom(term, universe)
        return bool(universe.atom_eval(term.name, agents, state))
    if isinstance(term, And):
        return _eval(term.left, agents, state, universe) and _eval(
            term.right, agents, state, universe
        )
    if isinstance(term, Or):
        return _eval(term.left, agents, state, universe) or _eval(
            term.right, agents, state, universe
        )
    if isinstance(term, Not):
        return not _eval(term.inner, agents, state, universe)
    if isinstance(term, Top):
        return True
    if isinstance(term, Bottom):
        return False
    raise TypeError(f"{term!r} is not a state-condition")


def evaluate(term: Term, agents: Sequence, state, universe) -> bool:
    """Truth of ``term`` for the agent tuple in ``state``.

    ``universe`` is anything with an ``atoms`` arity map and an ``atom_eval``
    callable: a :class:`ProbeUniverse` or a concrete world.
    """
    agents = tuple(agents)
    if len(agents) != term.arity:
        raise ArityError(f"term of arity {term.arity} applied to {len(agents)} agents")
    known = getattr(universe, "agents", None)
    if known is not None:
        for a in agents:
            if a not in known:
                raise ValueError(f"agent {a!r} not in universe")
    return _eval(term, agents, state, universe)


@dataclass(frozen=True)
class Denotation:
    """The extent of a term: the (agent-tuple, state) points where it holds.

    Stored as a bitmask over ``universe.points(arity)``.
    """

    bits: int
    arity: int
    universe: ProbeUniverse = field(compare=False, repr=False)

    @property
    def extent(self) -> frozenset:
        pts = self.universe.points(self.arity)
        return frozenset(p for i, p in enumerate(pts) if self.bits >> i & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __le__(self, other: "Denotation") -> bool:
        return self.bits & ~other.bits == 0


def _atom_bits(atom: Atom, universe: ProbeUniverse) -> int:
    bits = 0
    for i, (t, s) in enumerate(universe.points(atom.arity)):
        if universe.atom_eval(atom.name, t, s):
            bits |= 1 << i
    return bits


def _bits(term: Term, universe: ProbeUniverse) -> int:
    cache = universe._cache
    hit = cache.get(term)
    if hit is not None:
        return hit
    if isinstance(term, Atom):
        _check_atom(term, universe)
        bits = _atom_bits(term, universe)
    elif isinstance(term, And):
        bits = _bits(term.left, universe) & _bits(term.right, universe)
    elif isinstance(term, Or):
        bits = _bits(term.left, universe) | _bits(term.right, universe)
    elif isinstance(term, Not):
        bits = universe.full(term.arity) ^ _bits(term.inner, universe)
    elif isinstance(term, Top):
        bits = universe.full(term.arity)
    elif isinstance(term, Bottom):
        bits = 0
    else:
        raise TypeError(f"{term!r} is not a state-condition")
    cache[term] = bits
    return bits


def denote(term: Term, universe: ProbeUniverse) -> Denotation:
    return Denotation(_bits(term, universe), term.arity, universe)


def _same_arity(a: Term, b: Term) -> None:
    if a.arity != b.arity:
        raise ArityError(f"comparing terms of arity {a.arity} and {b.arity}")


def implies(a: Term, b: Term, universe: ProbeUniverse) -> bool:
    """True iff every point satisfying ``a`` satisfies ``b``."""
    _same_arity(a, b)
    return _bits(a, universe) & ~_bits(b, universe) == 0


def q_equivalent(a: Term, b: Term, universe: ProbeUniverse) -> bool:
    _same_arity(a, b)
    return _bits(a, universe) == _bits(b, universe)


class SemanticImplication:
    """Implication oracle backed by a probe universe."""

    def __init__(self, universe: ProbeUniverse):
        self.universe = universe

    def __call__(self, a: Term, b: Term) -> bool:
        return implies(a, b, self.universe)


# ---------------------------------------------------------------------------
# Boolean quasi-orderings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bqo:
    """A finite presentation of a Boolean quasi-ordering.

    ``relation`` decides R.  When ``total`` is true it may be asked about any
    term built from the carrier (a semantic oracle); otherwise axiom instances
    whose compound terms fall outside the carrier are skipped.
    """

    carrier: tuple
    relation: Callable[[Any, Any], bool]
    meet: Callable[[Any, Any], Any] = And
    complement: Callable[[Any], Any] = Not
    top: Any = None
    bottom: Any = None
    total: bool = True


@dataclass(frozen=True)
class Violation:
    axiom: str
    terms: tuple

    def __str__(self) -> str:
        return f"{self.axiom}: " + ", ".join(map(str, self.terms))


@dataclass
class BqoReport:
    violations: list
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def condition_bqo(carrier: Iterable[Term], universe: ProbeUniverse) -> Bqo:
    """The condition implication structure on ``carrier`` over ``universe``."""
    carrier = tuple(dict.fromkeys(carrier))
    arities = {t.arity for t in carrier}
    if len(arities) > 1:
        raise ArityError(f"carrier mixes arities {sorted(arities)}")
    n = arities.pop() if arities else 0
    return Bqo(
        carrier=carrier,
        relation=SemanticImplication(universe),
        top=Top(n),
        bottom=Bottom(n),
    )


def reflexive_transitive_closure(carrier: Iterable, pairs: Iterable[tuple]) -> frozenset:
    carrier = list(dict.fromkeys(carrier))
    rel = {(a, a) for a in carrier} | set(pairs)
    nodes = list(dict.fromkeys(carrier + [x for p in rel for x in p]))
    for k in nodes:
        for i in nodes:
            if (i, k) not in rel:
                continue
            for j in nodes:
                if (k, j) in rel:
                    rel.add((i, j))
    return frozenset(rel)


def declared_bqo(carrier: Iterable[Term], pairs: Iterable[tuple], close: bool = True) -> Bqo:
    """A Bqo whose relation is an explicit set of pairs.

    With ``close`` the pairs are closed under reflexivity and transitivity
    first; pass ``close=False`` to check a hand-written relation as given.
    """
    carrier = tuple(dict.fromkeys(carrier))
    rel = reflexive_transitive_closure(carrier, pairs) if close else frozenset(pairs)
    arities = {t.arity for t in carrier}
    n = arities.pop() if len(arities) == 1 else 0
    return Bqo(
        carrier=carrier,
        relation=lambda a, b: (a, b) in rel,
        top=Top(n),
        bottom=Bottom(n),
        total=False,
    )


def unsound_axioms(pairs: Iterable[tuple], universe: ProbeUniverse) -> list:
    """Declared implications that the probe semantics refutes."""
    return [(a, b) for a, b in pairs if not implies(a, b, universe)]


def verify_bqo(bqo: Bqo) -> BqoReport:
    """Check the quasi-order and the four Bqo axioms over the carrier.

    Every violated instance is reported; nothing is raised.
    """
    R = bqo.relation
    C = bqo.carrier
    members = set(C)
    out: list = []
    checked = 0

    def usable(*terms) -> bool:
        return bqo.total or all(t in members for t in terms)

    rel = {(a, b): R(a, b) for a in C for b in C}

    for a in C:
        checked += 1
        if not rel[a, a]:
            out.append(Violation("reflexivity", (a,)))
    for a in C:
        for b in C:
            if not rel[a, b]:
                continue
            for c in C:
                checked += 1
                if rel[b, c] and not rel[a, c]:
                    out.append(Violation("transitivity", (a, b, c)))

    # meet closure: aRb and aRc implies aR(b^c)
    for a in C:
        ups = [b for b in C if rel[a, b]]
        for b in ups:
            for c in ups:
                bc = bqo.meet(b, c)
                if not usable(bc):
                    continue
                checked += 1
                if not R(a, bc):
                    out.append(Violation("meet-closure", (a, b, c)))
    # contraposition: aRb implies b'Ra'
    for a in C:
        for b in C:
            if not rel[a, b]:
                continue
            na, nb = bqo.complement(a), bqo.complement(b)
            if not usable(na, nb):
                continue
            checked += 1
            if not R(nb, na):
                out.append(Violation("contraposition", (a, b)))
    # meet lower bound: (a^b)Ra
    for a in C:
        for b in C:
            ab = bqo.meet(a, b)
            if not usable(ab):
                continue
            checked += 1
            if not R(ab, a):
                out.append(Violation("meet-lower-bound", (a, b)))
    # non-triviality: not top R bottom
    if bqo.top is not None and bqo.bottom is not None and usable(bqo.top, bqo.bottom):
        checked += 1
        if R(bqo.top, bqo.bottom):
            out.append(Violation("non-triviality", (bqo.top, bqo.bottom)))
    return BqoReport(out, checked)
