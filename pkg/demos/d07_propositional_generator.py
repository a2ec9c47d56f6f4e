"""
The propositional generator
===========================

``h_P`` follows the same sweep as ``g_T``.  Instead of searching first-order
proofs, it translates each sentence and looks for a small circuit whose truth
table the proof system accepts.

Under the schema system ``SCH``, a circuit can stand for the claim table of
``Phi``, with one bit per ``w``.  For ``BEGINS_WITH_1`` that table is
``NOT x0`` on ``|w|`` inputs.  Once the budget allows ``|w|`` inputs, every
true sentence gets a proof.
"""

# %%
from pcgen.folang import BEGINS_WITH_1, eval_phi, make_template
from pcgen.gen_prop import PropGenConfig, h_P, schema_threshold, step_report

phi = make_template(BEGINS_WITH_1)
sch = PropGenConfig.desk("SCH")
n = schema_threshold(phi, sch)
print("smallest n with room for the claim table:", n)

# %%
u = phi.code + "0" * (n - len(phi))
out, trace = h_P(u, sch)
print("output", out, "Phi holds:", eval_phi(phi, out))
for r in trace.per_w[:3] + trace.per_w[-1:]:
    print(r.w, "circuits tried", r.circuits_tried, "proof", r.proof)

# %%
# Every factor of the running time stays inside its bound.
print(step_report(trace, n, sch)["ok"])

# %%
# With plain truth tables the proofs are too long for the budget, and the
# sweep stops at the first w.
out, trace = h_P(u, PropGenConfig.desk("TT"))
print("TT output", out, "w0 =", trace.w0)
