"""Conditions, their implication order and the quasi-ordering axioms."""

from dalmas.conditions import Atom, Bottom, Top, condition_bqo, denote, implies, parse_term, verify_bqo
from dalmas.waste import Lap, probe_universe

# every placement of two collectors on a 5x5 grid
u = probe_universe(5, 5, 2)
print(len(u.states), "states")

near = parse_term("(or Lap4/2 Lap6/2 Lap9/2)")
print(near, "holds at", len(denote(near, u)), "of", len(u.points(2)), "points")

# Lap6 implies the disjunction; the converse fails
print(implies(Lap(6), near, u), implies(near, Lap(6), u))

# two agents cannot share a cell, so Lap9 only holds of an agent with itself
neq = Atom("Neq", 2)
print("Lap9 & Neq empty:", implies(Lap(9) & neq, Bottom(2), u))

carrier = [Lap(0), Lap(6), near, ~near, Lap(6) & neq, Top(2), Bottom(2)]
report = verify_bqo(condition_bqo(carrier, u))
print("axioms hold:", report.ok, "-", report.checked, "instances")
