"""Ordering the eleven collector norms and finding the minimal ones."""

from dalmas.normative import GcSystem, check_connectivity, minimal_norms
from dalmas.waste import builtin_norms, probe_universe

norms = builtin_norms()
gc = GcSystem(norms, probe_universe(5, 5, 2))

print("elementary:", [n.id for n in norms if n.elementary])
mins = minimal_norms(gc)
print("minimal:", [n.id for n in mins])

# norm 3 says the same as norm 11 under a narrower ground
n3, n11 = norms[2], norms[10]
print(gc.below(n11, n3), gc.below(n3, n11))

conn = check_connectivity(gc)
print({norms[j].id: m.id for j, m in conn.witnesses.items()})
