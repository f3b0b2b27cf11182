"""The nuclear-waste collector grid world.

Coordinates are (column, row): x grows east, y grows north.  An agent's
protected sphere is the 3x3 block around it; ``Lap<j>`` holds of two agents
whose spheres share exactly j cells.  Spheres live on the unbounded plane, so
only movement is clipped by the grid edges.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from dalmas.conditions import Atom, Not, ProbeUniverse, Top, conjoin, disjoin
from dalmas.normative import Norm
from dalmas.positions import MoveTerm, TypedAtom

DIRECTIONS = {
    "north": (0, 1),
    "east": (1, 0),
    "south": (0, -1),
    "west": (-1, 0),
}
MOVES = tuple(DIRECTIONS)
PASS = "pass"

LAP_VALUES = tuple(range(10))


def Lap(j: int) -> Atom:
    return Atom(f"Lap{j}", 2)


#: the non-identity condition: its two arguments are different agents
NEQ = Atom("Neq", 2)


def surrounding(cell: tuple, n: int) -> frozenset:
    """Cells within Chebyshev distance ``n`` of ``cell`` on the integer plane."""
    if n < 0:
        raise ValueError("surrounding radius must be non-negative")
    x, y = cell
    return frozenset(
        (z, u) for z in range(x - n, x + n + 1) for u in range(y - n, y + n + 1)
    )


@lru_cache(maxsize=None)
def _overlap_at(dx: int, dy: int) -> int:
    return len(surrounding((0, 0), 1) & surrounding((dx, dy), 1))


def overlap(p: tuple, q: tuple) -> int:
    """Number of cells shared by the protected spheres centred on p and q."""
    return _overlap_at(abs(q[0] - p[0]), abs(q[1] - p[1]))


# ---------------------------------------------------------------------------
# State
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridState:
    """Positions, remaining waste (sparse, positive cells only) and collected totals."""

    width: int
    height: int
    positions: tuple  # ((agent, (x, y)), ...)
    waste: tuple  # (((x, y), amount), ...) sorted by cell
    collected: tuple  # ((agent, amount), ...)

    @classmethod
    def build(
        cls,
        width: int,
        height: int,
        positions: Mapping,
        waste: Mapping | Iterable = (),
        collected: Mapping | None = None,
    ) -> "GridState":
        if isinstance(waste, Mapping):
            waste = waste.items()
        cells: dict = {}
        for cell, amount in waste:
            cell = (int(cell[0]), int(cell[1]))
            if amount < 0:
                raise ValueError(f"negative waste at {cell}")
            cells[cell] = cells.get(cell, 0.0) + float(amount)
        pos = tuple((a, (int(p[0]), int(p[1]))) for a, p in positions.items())
        coll = collected or {}
        state = cls(
            width,
            height,
            pos,
            tuple(sorted((c, v) for c, v in cells.items() if v > 0)),
            tuple((a, float(coll.get(a, 0.0))) for a, _ in pos),
        )
        state.check()
        return state

    def check(self) -> None:
        seen = set()
        for a, (x, y) in self.positions:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"agent {a} at {(x, y)} is outside the {self.width}x{self.height} grid")
            if (x, y) in seen:
                raise ValueError(f"two agents share cell {(x, y)}")
            seen.add((x, y))
        for (x, y), _ in self.waste:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"waste at {(x, y)} is outside the grid")

    @property
    def agents(self) -> tuple:
        return tuple(a for a, _ in self.positions)

    def position(self, agent) -> tuple:
        for a, p in self.positions:
            if a == agent:
                return p
        raise KeyError(agent)

    def waste_at(self, cell: tuple) -> float:
        for c, v in self.waste:
            if c == cell:
                return v
        return 0.0

    def collected_by(self, agent) -> float:
        for a, v in self.collected:
            if a == agent:
                return v
        raise KeyError(agent)

    def total_waste(self) -> float:
        return math.fsum(v for _, v in self.waste)

    def total_collected(self) -> float:
        return math.fsum(v for _, v in self.collected)

    def occupied(self) -> set:
        return {p for _, p in self.positions}

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "positions": {a: list(p) for a, p in self.positions},
            "waste": [[x, y, v] for (x, y), v in self.waste],
            "collected": dict(self.collected),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridState":
        return cls.build(
            d["width"],
            d["height"],
            {a: tuple(p) for a, p in d["positions"].items()},
            [((x, y), v) for x, y, v in d["waste"]],
            d["collected"],
        )

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def lap(j: int, a, b, state: GridState) -> bool:
    return overlap(state.position(a), state.position(b)) == j


def apply_action(action: str, agent, state: GridState, allow_pass: bool = True) -> GridState:
    """Move ``agent`` one cell and collect all waste on the cell it enters."""
    if action == PASS:
        if not allow_pass:
            raise ValueError("pass is not an available action")
        return state
    if action not in DIRECTIONS:
        raise ValueError(f"unknown action {action!r}")
    dx, dy = DIRECTIONS[action]
    x, y = state.position(agent)
    target = (x + dx, y + dy)
    if not (0 <= target[0] < state.width and 0 <= target[1] < state.height):
        raise ValueError(f"{action} takes {agent} off the grid")
    if target in state.occupied():
        raise ValueError(f"{action} moves {agent} onto an occupied cell")
    gained = state.waste_at(target)
    positions = tuple((a, target if a == agent else p) for a, p in state.positions)
    waste = tuple((c, v) for c, v in state.waste if c != target)
    collected = tuple((a, v + gained if a == agent else v) for a, v in state.collected)
    return replace(state, positions=positions, waste=waste, collected=collected)


def feasible(agent, state: GridState, allow_pass: bool = False) -> list:
    """Moves staying on the grid and off occupied cells, in north/east/south/west order."""
    x, y = state.position(agent)
    taken = state.occupied()
    out = []
    for name, (dx, dy) in DIRECTIONS.items():
        t = (x + dx, y + dy)
        if 0 <= t[0] < state.width and 0 <= t[1] < state.height and t not in taken:
            out.append(name)
    if allow_pass:
        out.append(PASS)
    return out


def collected_utility(agent, state: GridState) -> float:
    return state.collected_by(agent)


UTILITIES: dict = {"collected": collected_utility}


# ---------------------------------------------------------------------------
# World
# ---------------------------------------------------------------------------


class WasteWorld:
    """Atom semantics, actions, feasibility and utility for the grid."""

    atoms = {**{f"Lap{j}": 2 for j in LAP_VALUES}, "Neq": 2}

    def __init__(
        self,
        agents: Sequence,
        pass_action: bool = False,
        utility: str | Callable = "collected",
        utility_scale: float = 1.0,
    ):
        if utility_scale <= 0:
            raise ValueError("utility scale must be positive")
        self.agents = tuple(agents)
        self.pass_action = pass_action
        self.utility_name = utility if isinstance(utility, str) else getattr(utility, "__name__", "custom")
        self._utility = UTILITIES[utility] if isinstance(utility, str) else utility
        self.utility_scale = utility_scale
        self.actions = MOVES + ((PASS,) if pass_action else ())

    def atom_eval(self, name: str, agents: tuple, state: GridState) -> bool:
        if name == "Neq":
            return agents[0] != agents[1]
        if name.startswith("Lap"):
            return lap(int(name[3:]), agents[0], agents[1], state)
        raise KeyError(name)

    def apply(self, action: str, agent, state: GridState) -> GridState:
        return apply_action(action, agent, state, allow_pass=self.pass_action)

    def feasible(self, agent, state: GridState) -> list:
        return feasible(agent, state, allow_pass=self.pass_action)

    def utility(self, agent, state: GridState) -> float:
        return self.utility_scale * self._utility(agent, state)

    def state_to_dict(self, state: GridState) -> dict:
        return state.to_dict()

    def state_from_dict(self, d: dict) -> GridState:
        return GridState.from_dict(d)

    def digest(self, state: GridState) -> str:
        return state.digest()


def probe_universe(width: int = 5, height: int = 5, n_agents: int = 2) -> ProbeUniverse:
    """Every injective placement of ``n_agents`` on the grid, without waste."""
    agents = tuple(f"w{i + 1}" for i in range(n_agents))
    cells = [(x, y) for y in range(height) for x in range(width)]
    states = [
        GridState(width, height, tuple(zip(agents, placement)), (), tuple((a, 0.0) for a in agents))
        for placement in itertools.permutations(cells, n_agents)
    ]
    world = WasteWorld(agents)
    return ProbeUniverse(agents, states, WasteWorld.atoms, world.atom_eval)


# ---------------------------------------------------------------------------
# The eleven norms
# ---------------------------------------------------------------------------

_MAY_DO = (1, 2, 3, 5)
_MAY_NOT_DO = (4, 6, 7)


def _typed(types: Iterable[int], base) -> object:
    return disjoin(*(TypedAtom(i, base) for i in types))


def builtin_norms() -> list:
    """The collectors' eleven norms, in their listed order.

    The schematic norms over all j in 0..9 (ids 5 and 6) are single norms
    whose consequence is the conjunction of the ten instances.
    """
    M = MoveTerm
    may_any = conjoin(*(_typed(_MAY_DO, Lap(j)) for j in LAP_VALUES))
    return [
        Norm("1", M(Lap(0)), _typed(_MAY_NOT_DO, Lap(2)), "n1"),
        Norm("2", M(Lap(0)), _typed(_MAY_NOT_DO, Lap(3)), "n1"),
        Norm("3", M(Lap(0)), _typed(_MAY_DO, Lap(0)), "n2"),
        Norm("4", M(Lap(0)), _typed(_MAY_DO, Lap(1)), "n2"),
        Norm("5", M(Lap(1)), may_any, "n3"),
        Norm("6", M(Lap(2)), may_any, "n3"),
        Norm("7", M(conjoin(Not(Lap(4)), Not(Lap(6)), Not(Lap(9)))), TypedAtom(7, Lap(6)), "n4"),
        Norm("8", M(Lap(4)), TypedAtom(7, Lap(3)), "n5"),
        Norm("9", M(Lap(6)), TypedAtom(5, disjoin(Lap(4), Lap(6), Lap(9))), "n6"),
        Norm("10", M(NEQ), TypedAtom(7, Lap(9)), "n7"),
        Norm("11", M(Top(2)), _typed(_MAY_DO, Lap(0)), "n8"),
    ]


def norm_by_id(norms: Iterable[Norm], ids: Iterable[str]) -> list:
    wanted = [str(i) for i in ids]
    table = {n.id: n for n in norms}
    missing = [i for i in wanted if i not in table]
    if missing:
        raise KeyError(f"unknown norm ids: {', '.join(missing)}")
    return [table[i] for i in wanted]
