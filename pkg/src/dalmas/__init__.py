"""Norm-regulated multi-agent systems over Boolean quasi-orderings of conditions."""

from dalmas.conditions import (
    And, Atom, Bottom, Not, Or, ProbeUniverse, Term, Top,
    condition_bqo, evaluate, format_term, implies, parse_term, verify_bqo,
)
from dalmas.engine import Dalmas, DeterministicDalmas, Situation, Trace, audit, run, step
from dalmas.normative import GcSystem, JoiningSystem, Norm, check_connectivity, minimal_norms
from dalmas.positions import MoveTerm, NpCis, TypedAtom, maxiconjunction_table, verify_npcis
from dalmas.prohibition import prohibited_set
from dalmas.scenario import Scenario, ScenarioError, reference_scenario
from dalmas.waste import GridState, WasteWorld, builtin_norms, overlap, probe_universe

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "Bottom",
    "Not",
    "Or",
    "ProbeUniverse",
    "Term",
    "Top",
    "condition_bqo",
    "evaluate",
    "format_term",
    "implies",
    "parse_term",
    "verify_bqo",
    "Dalmas",
    "DeterministicDalmas",
    "Situation",
    "Trace",
    "audit",
    "run",
    "step",
    "GcSystem",
    "JoiningSystem",
    "Norm",
    "check_connectivity",
    "minimal_norms",
    "MoveTerm",
    "NpCis",
    "TypedAtom",
    "maxiconjunction_table",
    "verify_npcis",
    "prohibited_set",
    "Scenario",
    "ScenarioError",
    "reference_scenario",
    "GridState",
    "WasteWorld",
    "builtin_norms",
    "overlap",
    "probe_universe",
]
