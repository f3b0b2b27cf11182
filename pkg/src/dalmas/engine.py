"""Deterministic norm-regulated runs: choice sets, the step function, traces and audit.

A world object supplies the concrete system: ``agents``, ``actions`` (the
fixed action order), ``feasible(agent, state)``, ``apply(action, agent,
state)``, ``utility(agent, state)``, atom semantics for conditions, and state
(de)serialisation with a ``digest``.  :class:`dalmas.waste.WasteWorld` is the
reference implementation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from dalmas.normative import Norm
from dalmas.prohibition import DeonticVerdict, prohibited_set, replay_witness, validate_norms

SCHEMA_VERSION = 1


class TraceCorruptionError(ValueError):
    """A trace cannot be replayed: a recorded state digest does not match."""

    def __init__(self, t: int, message: str):
        super().__init__(f"event {t}: {message}")
        self.t = t


@dataclass(frozen=True)
class Situation:
    mover: Any
    state: Any


@dataclass
class Dalmas:
    """A simple norm-regulated system: permissible = feasible minus prohibited,
    choice = best permissible by one-step utility."""

    world: Any
    norms: Sequence[Norm] = ()
    extended: bool = False
    bind_mover: bool = False

    def __post_init__(self):
        self.norms = tuple(self.norms)
        validate_norms(self.norms, self.world, extended=self.extended)

    @property
    def agents(self) -> tuple:
        return tuple(self.world.agents)

    def deontic(self, mover, state) -> DeonticVerdict:
        return prohibited_set(
            self.norms,
            mover,
            state,
            self.world.feasible(mover, state),
            self.world,
            extended=self.extended,
            bind_mover=self.bind_mover,
        )

    def scores(self, mover, state, actions: Iterable[str]) -> dict:
        w = self.world
        return {a: w.utility(mover, w.apply(a, mover, state)) for a in actions}


def choice_set(system: Dalmas, mover, state, verdict: DeonticVerdict | None = None, scores: Mapping | None = None) -> tuple:
    """The permissible actions whose utility is maximal, in feasible order."""
    verdict = verdict if verdict is not None else system.deontic(mover, state)
    perm = verdict.permissible
    if not perm:
        return ()
    scores = scores if scores is not None else system.scores(mover, state, perm)
    best = max(scores[a] for a in perm)
    return tuple(a for a in perm if scores[a] == best)


def cyclic_turn(order: Sequence) -> dict:
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("turn order repeats an agent")
    return {a: order[(i + 1) % len(order)] for i, a in enumerate(order)}


@dataclass
class DeterministicDalmas:
    base: Dalmas
    turn: Mapping = None
    tie_order: Sequence[str] = None

    def __post_init__(self):
        agents = self.base.agents
        if self.turn is None:
            self.turn = cyclic_turn(agents)
        self.turn = dict(self.turn)
        if set(self.turn) != set(agents) or not set(self.turn.values()) <= set(agents):
            raise ValueError("turn operator must be a total function on the agents")
        actions = tuple(self.base.world.actions)
        order = tuple(self.tie_order) if self.tie_order is not None else actions
        unknown = [a for a in order if a not in actions]
        if unknown:
            raise ValueError(f"tie-break order names unknown actions: {unknown}")
        self.tie_order = order + tuple(a for a in actions if a not in order)

    @property
    def world(self):
        return self.base.world

    def tie_break(self, actions: Iterable[str]) -> str:
        actions = set(actions)
        if not actions:
            raise ValueError("tie-break of an empty set")
        return next(a for a in self.tie_order if a in actions)


@dataclass
class Event:
    t: int
    mover: Any
    verdict: DeonticVerdict
    scores: dict
    choice: tuple
    chosen: str | None
    deadlock: bool
    digest: str
    next_mover: Any
    state: Any = field(default=None, repr=False, compare=False)


def step(d: DeterministicDalmas, sit: Situation, t: int = 1) -> tuple:
    """One application of the transition function; returns (next situation, event).

    An empty choice set is a deadlock: the mover passes, the state is
    unchanged, and the event is flagged.
    """
    mover, state = sit.mover, sit.state
    verdict = d.base.deontic(mover, state)
    scores = d.base.scores(mover, state, verdict.feasible)
    gamma = choice_set(d.base, mover, state, verdict, scores)
    if gamma:
        chosen = d.tie_break(gamma)
        nxt = d.world.apply(chosen, mover, state)
    else:
        chosen, nxt = None, state
    nmover = d.turn[mover]
    ev = Event(t, mover, verdict, scores, gamma, chosen, not gamma, d.world.digest(nxt), nmover, nxt)
    return Situation(nmover, nxt), ev


@dataclass
class Trace:
    initial: Situation
    events: list = field(default_factory=list)
    situations: list = field(default_factory=list)

    def phi(self, t: int) -> Situation:
        """The situation after t events (t = 0 is the initial situation)."""
        if t < 0:
            raise ValueError("t must be non-negative")
        return self.situations[t]

    @property
    def k(self) -> int:
        return len(self.events)

    def deadlocks(self) -> int:
        return sum(e.deadlock for e in self.events)

    def to_records(self, world) -> list:
        s0 = self.initial
        out = [
            {
                "schema": SCHEMA_VERSION,
                "kind": "initial",
                "t": 0,
                "mover": s0.mover,
                "state": world.state_to_dict(s0.state),
                "digest": world.digest(s0.state),
            }
        ]
        for e in self.events:
            rec = {
                "schema": SCHEMA_VERSION,
                "kind": "event",
                "t": e.t,
                "mover": e.mover,
                "verdict": e.verdict.to_dict(),
                "scores": e.scores,
                "choice": list(e.choice),
                "chosen": e.chosen,
                "deadlock": e.deadlock,
                "digest": e.digest,
                "next_mover": e.next_mover,
            }
            if e.state is not None:
                snap = world.state_to_dict(e.state)
                rec["positions"] = snap.get("positions")
                rec["collected"] = snap.get("collected")
            out.append(rec)
        return out

    def dumps(self, world) -> str:
        return "".join(
            json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.to_records(world)
        )

    @classmethod
    def from_records(cls, records: Sequence[dict], world) -> "Trace":
        if not records:
            raise TraceCorruptionError(0, "empty trace")
        head = records[0]
        for r in records:
            if r.get("schema") != SCHEMA_VERSION:
                raise TraceCorruptionError(r.get("t", -1), f"unsupported schema {r.get('schema')!r}")
        if head.get("kind") != "initial":
            raise TraceCorruptionError(0, "first record is not the initial situation")
        state = world.state_from_dict(head["state"])
        trace = cls(Situation(head["mover"], state))
        trace.situations.append(trace.initial)
        for r in records[1:]:
            trace.events.append(
                Event(
                    r["t"],
                    r["mover"],
                    DeonticVerdict.from_dict(r["verdict"]),
                    dict(r["scores"]),
                    tuple(r["choice"]),
                    r["chosen"],
                    bool(r["deadlock"]),
                    r["digest"],
                    r["next_mover"],
                )
            )
        return trace

    @classmethod
    def loads(cls, text: str, world) -> "Trace":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        return cls.from_records(records, world)


def run(d: DeterministicDalmas, initial: Situation, k: int) -> Trace:
    if k < 0:
        raise ValueError("k must be non-negative")
    if initial.mover not in d.turn:
        raise ValueError(f"initial mover {initial.mover!r} is not an agent")
    trace = Trace(initial, situations=[initial])
    sit = initial
    for t in range(1, k + 1):
        sit, ev = step(d, sit, t)
        trace.events.append(ev)
        trace.situations.append(sit)
    return trace


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Divergence:
    t: int
    kind: str  # turn | verdict | witness | choice | infeasible
    expected: Any
    found: Any

    def __str__(self) -> str:
        return f"event {self.t}: {self.kind} expected {self.expected!r}, found {self.found!r}"


@dataclass
class AuditReport:
    events: int = 0
    divergences: list = field(default_factory=list)
    verdict_differences: dict = field(default_factory=dict)
    stopped_at: int | None = None

    @property
    def ok(self) -> bool:
        return not self.divergences

    @property
    def first(self) -> Divergence | None:
        return self.divergences[0] if self.divergences else None

    def summary(self) -> str:
        if self.ok:
            return f"audit clean: {self.events} events"
        kinds: dict = {}
        for dv in self.divergences:
            kinds[dv.kind] = kinds.get(dv.kind, 0) + 1
        parts = ", ".join(f"{k}={v}" for k, v in sorted(kinds.items()))
        return f"audit found {len(self.divergences)} divergences over {self.events} events ({parts})"


def audit(trace: Trace, d: DeterministicDalmas) -> AuditReport:
    """Replay ``trace`` under ``d`` and re-derive every decision independently.

    The recorded chosen actions drive the replay, so a trace produced under a
    different norm set is audited event by event; its verdict differences are
    counted per event in ``verdict_differences``.  A digest mismatch on an
    event whose decision checked clean raises :class:`TraceCorruptionError`.
    """
    world = d.world
    report = AuditReport()
    state, mover = trace.initial.state, trace.initial.mover
    norms = {n.id: n for n in d.base.norms}
    for ev in trace.events:
        report.events += 1
        found: list = []
        if ev.mover != mover:
            found.append(Divergence(ev.t, "turn", mover, ev.mover))
            mover = ev.mover
        verdict = d.base.deontic(mover, state)
        scores = d.base.scores(mover, state, verdict.feasible)
        gamma = choice_set(d.base, mover, state, verdict, scores)

        rec_prohibited = set(ev.verdict.prohibited)
        diff = rec_prohibited ^ set(verdict.prohibited)
        if diff or set(ev.verdict.feasible) != set(verdict.feasible):
            report.verdict_differences[ev.t] = len(diff)
            found.append(
                Divergence(ev.t, "verdict", sorted(verdict.prohibited), sorted(rec_prohibited))
            )
        for a, ws in ev.verdict.prohibited.items():
            for w in ws:
                norm = norms.get(w.norm_id)
                if norm is not None and a in verdict.feasible and not replay_witness(w, norm, mover, state, world):
                    found.append(Divergence(ev.t, "witness", True, w))

        expected = d.tie_break(gamma) if gamma else None
        if ev.chosen != expected or (ev.chosen is not None and ev.chosen not in gamma):
            found.append(Divergence(ev.t, "choice", {"choice": list(gamma), "chosen": expected}, ev.chosen))
        if ev.deadlock != (not gamma):
            found.append(Divergence(ev.t, "choice", {"deadlock": not gamma}, {"deadlock": ev.deadlock}))

        report.divergences.extend(found)
        if ev.chosen is None:
            nxt = state
        else:
            try:
                nxt = world.apply(ev.chosen, mover, state)
            except ValueError:
                report.divergences.append(Divergence(ev.t, "infeasible", list(verdict.feasible), ev.chosen))
                report.stopped_at = ev.t
                break
        if world.digest(nxt) != ev.digest:
            if found:
                report.stopped_at = ev.t
                break
            raise TraceCorruptionError(ev.t, "state digest does not match the replayed state")
        state, mover = nxt, d.turn[mover]
    return report
