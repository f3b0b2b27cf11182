"""Which moves the four elementary collector norms rule out."""

from dalmas.prohibition import prohibited_set
from dalmas.waste import GridState, WasteWorld, builtin_norms, norm_by_id, overlap

world = WasteWorld(["w1", "w2"])
norms = norm_by_id(builtin_norms(), ["7", "8", "9", "10"])
for n in norms:
    print(n.id, n)

# vertically adjacent collectors: spheres share six cells
s = GridState.build(5, 5, {"w1": (2, 1), "w2": (2, 2)})
print("overlap", overlap((2, 1), (2, 2)))

v = prohibited_set(norms, "w1", s, world.feasible("w1", s), world)
for action, witnesses in v.prohibited.items():
    for w in witnesses:
        print(action, "forbidden by norm", w.norm_id, "via", w.e_operator, "for", w.agent_tuple)
print("permissible:", v.permissible)

# two columns apart (overlap 3): stepping east would reach overlap 6
s = GridState.build(5, 5, {"w1": (0, 2), "w2": (2, 2)})
v = prohibited_set(norms, "w1", s, world.feasible("w1", s), world)
print(overlap((0, 2), (2, 2)), {a: [w.norm_id for w in ws] for a, ws in v.prohibited.items()})
