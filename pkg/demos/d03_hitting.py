"""
Hitting a formula with the first-order generator
================================================

Feed ``g_T`` inputs of the form ``Phi + u0``.  The first unprovable ``w``
is the same for every ``u0``.  When the sentence for that ``w`` is false,
``w + u0`` satisfies ``Phi`` for every ``u0``, so every output lands in
``{x : Phi(x)}``.
"""

# %%
from pcgen.folang import BEGINS_WITH_1, BIT_J_IS_1, SIGMA1_REF, eval_phi, make_template
from pcgen.gen_fo import GenConfig, g_T, hitting_experiment

cfg = GenConfig.desk("CERT")

for phi in (make_template(BEGINS_WITH_1), make_template(BIT_J_IS_1, 2),
            make_template(SIGMA1_REF, "begins-with-11")):
    res = hitting_experiment(phi, range(12, 15), cfg, cap=64, seed=7)
    row = res["rows"][-1]
    print(f'{phi.id:<30} w0={row["w0"]}  hits {row["hits"]}/{row["inputs"]}  '
          f'w0 constant: {res["w0_constant"]}')

# %%
# The output keeps the tail of the input verbatim.
phi = make_template(BIT_J_IS_1, 2)
u = phi.code + "00000000"
out, trace = g_T(u, cfg)
print(out, "=", trace.w0, "+", u[len(phi):], " Phi holds:", eval_phi(phi, out))

# %%
# How long must the input be before every true sentence about ``Phi`` is
# proved?  That depends on the profile: PAPER ties both bounds to log2 n.
from pcgen.gen_fo import proof_threshold

for cfg in (GenConfig.desk("CERT"), GenConfig.paper("CERT")):
    for phi in (make_template(BEGINS_WITH_1), make_template(BIT_J_IS_1, 5)):
        res = proof_threshold(phi, cfg)
        print(f'{cfg.profile:<5} {phi.id:<16} n >= {res["threshold"]}')
