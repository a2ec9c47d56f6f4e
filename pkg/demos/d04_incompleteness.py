"""
True sentences the theory leaves unproved
=========================================

Take ``Phi(x)`` to be "``x`` is outside the range of ``g_T``".  At desk scale
that predicate is computed by exhaustive range scans.  Sentences about it can
be checked up to a horizon, and the CERT backend proves none of them.  Its
certificates only speak about library formulas.
"""

# %%
from pcgen.gen_fo import GenConfig, incompleteness_demo

res = incompleteness_demo(GenConfig.desk("CERT"), horizon=10)
for row in res["rows"]:
    print(row["w"], row["truth"], "proved" if row["proved"] else "unproved")

# %%
# Truth here is horizon bounded: only the last two lengths up to the horizon
# are inspected.
print("unproved and true up to the horizon:", [r["w"] for r in res["unproved_true"]])
