"""
The first-order generator and its range
=======================================

``g_T`` maps ``n`` bits to ``n + 1`` bits.  It reads a formula ``Phi`` off the
front of its input.  It then looks for the first ``w`` of length ``|Phi| + 1``
for which the theory cannot prove "``Phi(x)`` forces ``x`` not to start with
``w``".  The output is that ``w`` followed by the rest of the input.
"""

# %%
from pcgen.folang import BEGINS_WITH_1, make_template
from pcgen.gen_fo import GenConfig, g_T, range_scan

cfg = GenConfig.desk("CERT")
phi = make_template(BEGINS_WITH_1)
u = phi.code + "1011001"
out, trace = g_T(u, cfg)
print("input ", u)
print("output", out)
print("decoded", trace.decoded, "c =", trace.c, "w0 =", trace.w0)

# %%
# The sweep proves "BEGINS_WITH_1 forces x off 0..." for every w that starts
# with 0.  Its first failure is therefore 1000.
for w, proved in trace.proofs_found:
    print(w, "proved" if proved else "not proved")

# %%
# An input with no formula code maps to all zeros.
print(g_T("1011001", cfg)[0])

# %%
# The range has at most 2^n of the 2^(n+1) strings, so its complement is
# never empty.  In practice it covers well under half of the 2^n inputs.
for n in range(3, 11):
    size = len(range_scan(n, cfg))
    print(f"n={n:2d}  |range|={size:4d}  of 2^{n + 1} = {2 ** (n + 1)}")

# %%
# With the EMPTY backend nothing is provable, so w0 is always 0^c.
print(g_T(u, GenConfig.desk("EMPTY"))[0])
