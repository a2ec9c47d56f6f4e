"""
Bit strings, lex order and the prefix-free formula code
=======================================================

Everything in the package is a ``str`` over ``"0"`` and ``"1"``.  Inputs to
both generators start with the code of a formula; the rest is payload.
"""

# %%
# Lex order on fixed-length words, and the MSB-first link to integers.
from pcgen.bitcodec import (
    decode_formula_prefix,
    default_code_table,
    from_int,
    lex_words,
    to_int,
)

print(list(lex_words(3)))
print(to_int("0110"), from_int(6, 4))

# %%
# The code table is prefix free, so decoding an input reads off exactly one
# formula code and leaves the rest alone.
table = default_code_table()
for entry in table.entries:
    print(f"{entry.id:<14} code={entry.code}  parameter bits={entry.param_bits}")

# %%
# ``BIT_J_IS_1`` has code ``010`` and a 3-bit parameter after it.
u = "010" + "010" + "110011"
code, rest = decode_formula_prefix(u, max_len=len(u), table=table)
print(code, "rest:", rest)

# %%
# A reserved prefix decodes to nothing.  So does a formula bound that is
# shorter than the code.
print(decode_formula_prefix("10111", max_len=5, table=table))
print(decode_formula_prefix(u, max_len=2, table=table))
