"""
Translating a sentence into propositional logic
===============================================

``translate(Phi, w, n)`` builds a formula over the bits of an
``(n + 1)``-bit ``x`` and any witness bits.  The formula is a tautology
exactly when no such ``x`` with prefix ``w`` satisfies ``Phi``.
"""

# %%
from pcgen.folang import BEGINS_WITH_1, SIGMA1_REF, decide_at_length, make_template
from pcgen.proplogic import (
    falsifying_assignment,
    get_system,
    is_tautology_bruteforce,
    parse_dimacs,
    to_dimacs,
    translate,
    tt_proof,
)

phi = make_template(BEGINS_WITH_1)
for w in ("0110", "1000"):
    f = translate(phi, w, 5)
    print(w, "atoms:", f.n_atoms, "size:", f.size(),
          "tautology:", is_tautology_bruteforce(f),
          "direct check:", decide_at_length(phi, w, 6))

# %%
# A false instance comes with a counterexample assignment.
f = translate(phi, "1000", 5)
print(falsifying_assignment(f))

# %%
# The negation in CNF, for an external SAT solver.  Unsatisfiable means the
# instance is a tautology.
sigma = make_template(SIGMA1_REF, "begins-with-11")
cnf = to_dimacs(translate(sigma, "0111", 4))
n_vars, clauses = parse_dimacs(cnf)
print(cnf.splitlines()[0], "...", n_vars, "variables,", len(clauses), "clauses")

# %%
# The truth-table system accepts the formula's full table as a proof.
tt = get_system("TT")
f = translate(phi, "0110", 3)
proof = tt_proof(f)
print(len(proof), "bit proof accepted:", tt.verify(f, proof))
