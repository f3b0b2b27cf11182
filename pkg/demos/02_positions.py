"""The seven one-agent position types and how negation permutes them."""

from dalmas.conditions import Not, Top
from dalmas.positions import SIGMA, BaseVocabulary, NpCis, TypedAtom, maxiconjunction_table, verify_npcis
from dalmas.waste import Lap, probe_universe

for row in maxiconjunction_table():
    print(f"T{row.index}", row.signs, row.describe(), row.abbreviation or "")

u = probe_universe(4, 4, 2)
vocab = BaseVocabulary([Lap(0), Lap(6), Top(2)], u)
cis = NpCis(vocab)

# Shall Do towards q is Shall Do not towards not-q
print(cis.equivalent(TypedAtom(5, Lap(6)), TypedAtom(7, Not(Lap(6)))))
print({i: SIGMA[i] for i in range(1, 8)})

# only Shall Do / Shall Pass / T2 make sense towards a tautology
print([i for i in range(1, 8) if not cis.is_empty(TypedAtom(i, Top(2)))])

rep = verify_npcis(vocab)
print(rep.ok, rep.checked)
