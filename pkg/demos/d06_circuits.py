"""
Circuits as compressed proofs
=============================

A circuit with ``k`` inputs stands for its ``2^k``-bit truth table.  Circuit
search enumerates canonical fan-in-2 circuits in a fixed order, and the count
of circuits of each size has a closed form.
"""

# %%
from pcgen.circuits import Circuit, budget, count_circuits, enumerate_tables, synthesize_tt, tt
from pcgen.bitcodec import table_to_bits

d = Circuit.from_text("inputs 2\ng0 = NOT x0\ng1 = AND g0 x1\noutput g1\n")
print(d.to_text(), "truth table:", tt(d))

# %%
# Enumeration order is by size, then by gate list.  Some tables recur, and the
# search memoizes its proof checks on tables.
for i, (gates, table) in enumerate(enumerate_tables(2, 1)):
    print(i, gates, table_to_bits(table, 2))

# %%
seen = sum(1 for _ in enumerate_tables(3, 2))
print("k=3, up to 2 gates:", seen, "=", sum(count_circuits(3, s) for s in range(3)))

# %%
# Every table has some circuit.  Shannon expansion finds one, though not the
# smallest.
target = "1111111100000000"
d = synthesize_tt(target)
print(d.size, "gates;", tt(d) == target)

# %%
# The search budget grows slowly with the input length n.
for n in (16, 64, 256, 1024):
    print(n, budget(n))
