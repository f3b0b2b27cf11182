"""Scenario documents (YAML) for the waste-collector world.

A scenario has four blocks::

    name: reference
    world:
      width: 6
      height: 6
      agents:                   # declaration order is the default turn order
        - {name: w1, at: [0, 0]}
        - {name: w2, at: [3, 2]}
      waste: [[1, 0, 2.0], [4, 4, 1.5]]   # sparse [x, y, amount]
      utility: collected
      utility_scale: 1.0
      pass_action: false
    norms:
      builtin: [7, 8, 9, 10]    # ids, or "all", or []
      custom:
        - {id: c1, ground: "Lap0/2", type: 7, base: "Lap1/2"}
        - {id: c2, ground: "top/2", consequence: "(or T4(Lap2/2) T6(Lap2/2))"}
    engine:
      k: 10
      first: w1                 # default: first agent
      turn: [w1, w2]            # cyclic order; default: declaration order
      tie_break: [north, east, south, west]
      bind_mover: false
      minimal_only: false
      extended_rules: false
    probe: {width: 5, height: 5, agents: 2}   # universe used to order norms

Ground texts are state-conditions; the move operator is applied implicitly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from dalmas.conditions import TermSyntaxError, UnknownAtomError, check_atoms, parse_term
from dalmas.engine import Dalmas, DeterministicDalmas, Situation
from dalmas.normative import GcSystem, Norm, minimal_norms
from dalmas.positions import MoveTerm, TypedAtom, typed_atoms
from dalmas.waste import MOVES, PASS, UTILITIES, GridState, WasteWorld, builtin_norms, probe_universe


class ScenarioError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Agent:
    name: str
    at: tuple


@dataclass
class WorldConfig:
    width: int
    height: int
    agents: list
    waste: list = field(default_factory=list)
    utility: str = "collected"
    utility_scale: float = 1.0
    pass_action: bool = False


@dataclass
class CustomNorm:
    id: str
    ground: str
    type: int | None = None
    base: str | None = None
    consequence: str | None = None


@dataclass
class NormConfig:
    builtin: list = field(default_factory=list)
    custom: list = field(default_factory=list)


@dataclass
class EngineConfig:
    k: int = 10
    first: str | None = None
    turn: list | None = None
    tie_break: list | None = None
    bind_mover: bool = False
    minimal_only: bool = False
    extended_rules: bool = False


@dataclass
class ProbeConfig:
    width: int = 5
    height: int = 5
    agents: int = 2


@dataclass
class Scenario:
    name: str
    world: WorldConfig
    norms: NormConfig = field(default_factory=NormConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)
    probe: ProbeConfig = field(default_factory=ProbeConfig)

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["world"]["agents"] = [{"name": a.name, "at": list(a.at)} for a in self.world.agents]
        d["world"]["waste"] = [list(w) for w in self.world.waste]
        d["norms"]["custom"] = [
            {k: v for k, v in asdict(c).items() if v is not None} for c in self.norms.custom
        ]
        return d

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)

    @classmethod
    def loads(cls, text: str) -> "Scenario":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ScenarioError("<document>", f"not valid YAML: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        return cls.loads(Path(path).read_text())

    @classmethod
    def from_dict(cls, data: Any) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("<document>", "expected a mapping")
        _known(data, "", {"name", "world", "norms", "engine", "probe"})
        world = _world(_block(data, "world", required=True))
        norms = _norms(_block(data, "norms"))
        engine = _engine(_block(data, "engine"))
        probe_d = _block(data, "probe")
        _known(probe_d, "probe.", {"width", "height", "agents"})
        probe = ProbeConfig(
            _int(probe_d, "probe.width", 5, minimum=1),
            _int(probe_d, "probe.height", 5, minimum=1),
            _int(probe_d, "probe.agents", 2, minimum=1),
        )
        sc = cls(str(data.get("name", "scenario")), world, norms, engine, probe)
        sc.validate()
        return sc

    # -- semantics ---------------------------------------------------------

    def validate(self) -> None:
        names = [a.name for a in self.world.agents]
        if not names:
            raise ScenarioError("world.agents", "at least one agent is required")
        if len(set(names)) != len(names):
            raise ScenarioError("world.agents", "agent names must be unique")
        try:
            self.initial_state()
        except ValueError as exc:
            raise ScenarioError("world", str(exc)) from None
        if self.world.utility not in UTILITIES:
            raise ScenarioError("world.utility", f"unknown utility {self.world.utility!r}")
        if self.world.utility_scale <= 0:
            raise ScenarioError("world.utility_scale", "must be positive")
        e = self.engine
        if e.first is not None and e.first not in names:
            raise ScenarioError("engine.first", f"unknown agent {e.first!r}")
        if e.turn is not None and sorted(e.turn) != sorted(names):
            raise ScenarioError("engine.turn", "must list every agent exactly once")
        actions = MOVES + ((PASS,) if self.world.pass_action else ())
        for a in e.tie_break or ():
            if a not in actions:
                raise ScenarioError("engine.tie_break", f"unknown action {a!r}")
        self.norm_list()

    def initial_state(self) -> GridState:
        w = self.world
        return GridState.build(
            w.width,
            w.height,
            {a.name: a.at for a in w.agents},
            [((x, y), v) for x, y, v in w.waste],
        )

    def make_world(self) -> WasteWorld:
        w = self.world
        return WasteWorld(
            [a.name for a in w.agents],
            pass_action=w.pass_action,
            utility=w.utility,
            utility_scale=w.utility_scale,
        )

    def norm_list(self) -> list:
        """Builtin selection followed by custom norms, validated against the world atoms."""
        out = []
        sel = self.norms.builtin
        table = {n.id: n for n in builtin_norms()}
        ids = list(table) if sel == "all" else [str(i) for i in sel]
        for i, nid in enumerate(ids):
            if nid not in table:
                raise ScenarioError(f"norms.builtin[{i}]", f"no builtin norm {nid!r}")
            out.append(table[nid])
        seen = {n.id for n in out}
        for i, c in enumerate(self.norms.custom):
            where = f"norms.custom[{i}]"
            if c.id in seen:
                raise ScenarioError(f"{where}.id", f"duplicate norm id {c.id!r}")
            seen.add(c.id)
            out.append(_custom_norm(c, where))
        return out

    def probe_universe(self):
        p = self.probe
        return probe_universe(p.width, p.height, p.agents)

    def gc_system(self, norms=None) -> GcSystem:
        return GcSystem(self.norm_list() if norms is None else norms, self.probe_universe())

    def build(self, *, minimal_only: bool | None = None, extended: bool | None = None) -> tuple:
        """(deterministic system, initial situation), honouring flag overrides."""
        e = self.engine
        minimal_only = e.minimal_only if minimal_only is None else minimal_only
        extended = e.extended_rules if extended is None else extended
        norms = self.norm_list()
        if minimal_only:
            norms = minimal_norms(self.gc_system(norms))
        world = self.make_world()
        base = Dalmas(world, norms, extended=extended, bind_mover=e.bind_mover)
        turn = None
        if e.turn is not None:
            from dalmas.engine import cyclic_turn

            turn = cyclic_turn(e.turn)
        d = DeterministicDalmas(base, turn=turn, tie_order=e.tie_break)
        first = e.first or self.world.agents[0].name
        return d, Situation(first, self.initial_state())


# ---------------------------------------------------------------------------
# field parsing
# ---------------------------------------------------------------------------


def _known(d: dict, prefix: str, keys: set) -> None:
    for k in d:
        if k not in keys:
            raise ScenarioError(f"{prefix}{k}", "unknown field")


def _block(data: dict, key: str, required: bool = False) -> dict:
    if key not in data or data[key] is None:
        if required:
            raise ScenarioError(key, "missing block")
        return {}
    if not isinstance(data[key], dict):
        raise ScenarioError(key, "expected a mapping")
    return data[key]


def _int(d: dict, where: str, default=None, minimum: int | None = None) -> int:
    key = where.rsplit(".", 1)[-1]
    v = d.get(key, default)
    if v is None:
        raise ScenarioError(where, "required")
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(where, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ScenarioError(where, f"must be at least {minimum}")
    return v


def _bool(d: dict, where: str, default: bool) -> bool:
    v = d.get(where.rsplit(".", 1)[-1], default)
    if not isinstance(v, bool):
        raise ScenarioError(where, f"expected true/false, got {v!r}")
    return v


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(where, f"expected a number, got {v!r}")
    return float(v)


def _world(d: dict) -> WorldConfig:
    _known(d, "world.", {"width", "height", "agents", "waste", "utility", "utility_scale", "pass_action"})
    width = _int(d, "world.width", minimum=1)
    height = _int(d, "world.height", minimum=1)
    agents = []
    for i, a in enumerate(d.get("agents") or []):
        where = f"world.agents[{i}]"
        if not isinstance(a, dict) or "name" not in a or "at" not in a:
            raise ScenarioError(where, "expected {name: ..., at: [x, y]}")
        _known(a, where + ".", {"name", "at"})
        at = a["at"]
        if not (isinstance(at, list) and len(at) == 2 and all(isinstance(c, int) and not isinstance(c, bool) for c in at)):
            raise ScenarioError(where + ".at", f"expected [x, y] integers, got {at!r}")
        agents.append(Agent(str(a["name"]), (at[0], at[1])))
    waste = []
    for i, w in enumerate(d.get("waste") or []):
        where = f"world.waste[{i}]"
        if not (isinstance(w, list) and len(w) == 3):
            raise ScenarioError(where, f"expected [x, y, amount], got {w!r}")
        x, y, v = w
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in (x, y)):
            raise ScenarioError(where, "cell coordinates must be integers")
        amount = _number(v, where)
        if amount < 0:
            raise ScenarioError(where, "waste amount must be non-negative")
        waste.append((x, y, amount))
    utility = d.get("utility", "collected")
    if not isinstance(utility, str):
        raise ScenarioError("world.utility", "expected a utility name")
    scale = _number(d.get("utility_scale", 1.0), "world.utility_scale")
    return WorldConfig(width, height, agents, waste, utility, scale, _bool(d, "world.pass_action", False))


def _norms(d: dict) -> NormConfig:
    _known(d, "norms.", {"builtin", "custom"})
    builtin = d.get("builtin", [])
    if builtin == "all":
        pass
    elif isinstance(builtin, list):
        builtin = [str(b) for b in builtin]
    else:
        raise ScenarioError("norms.builtin", "expected a list of ids or 'all'")
    custom = []
    for i, c in enumerate(d.get("custom") or []):
        where = f"norms.custom[{i}]"
        if not isinstance(c, dict):
            raise ScenarioError(where, "expected a mapping")
        _known(c, where + ".", {"id", "ground", "type", "base", "consequence"})
        for key in ("id", "ground"):
            if key not in c:
                raise ScenarioError(f"{where}.{key}", "required")
        t = c.get("type")
        if t is not None and (isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= 7):
            raise ScenarioError(f"{where}.type", f"expected a position type 1..7, got {t!r}")
        has_typed = t is not None or c.get("base") is not None
        if has_typed == (c.get("consequence") is not None):
            raise ScenarioError(where, "give either type and base, or consequence")
        if has_typed and (t is None or c.get("base") is None):
            raise ScenarioError(where, "type and base go together")
        custom.append(
            CustomNorm(str(c["id"]), str(c["ground"]), t, c.get("base"), c.get("consequence"))
        )
    return NormConfig(builtin, custom)


def _engine(d: dict) -> EngineConfig:
    _known(d, "engine.", {"k", "first", "turn", "tie_break", "bind_mover", "minimal_only", "extended_rules"})
    turn = d.get("turn")
    tie = d.get("tie_break")
    for key, v in (("turn", turn), ("tie_break", tie)):
        if v is not None and not isinstance(v, list):
            raise ScenarioError(f"engine.{key}", "expected a list")
    first = d.get("first")
    return EngineConfig(
        _int(d, "engine.k", 10, minimum=0),
        None if first is None else str(first),
        None if turn is None else [str(a) for a in turn],
        None if tie is None else [str(a) for a in tie],
        _bool(d, "engine.bind_mover", False),
        _bool(d, "engine.minimal_only", False),
        _bool(d, "engine.extended_rules", False),
    )


def _parse(text: str, where: str):
    try:
        term = parse_term(text)
    except TermSyntaxError as exc:
        raise ScenarioError(where, str(exc)) from None
    return term


def _check(term, where: str) -> None:
    try:
        check_atoms(term, WasteWorld)
    except UnknownAtomError as exc:
        raise ScenarioError(where, f"unknown atom {exc.name!r}") from None
    except (TypeError, ValueError) as exc:
        raise ScenarioError(where, str(exc)) from None


def _custom_norm(c: CustomNorm, where: str) -> Norm:
    ground = _parse(c.ground, f"{where}.ground")
    _check(ground, f"{where}.ground")
    if c.consequence is not None:
        cons = _parse(c.consequence, f"{where}.consequence")
        try:
            atoms = typed_atoms(cons)
        except TypeError:
            raise ScenarioError(f"{where}.consequence", "expected a combination of typed atoms") from None
        for a in atoms:
            _check(a.base, f"{where}.consequence")
    else:
        base = _parse(c.base, f"{where}.base")
        _check(base, f"{where}.base")
        cons = TypedAtom(c.type, base)
    return Norm(c.id, MoveTerm(ground), cons)


REFERENCE = Path(__file__).with_name("data") / "reference.yaml"


def reference_scenario() -> Scenario:
    return Scenario.load(REFERENCE)
