"""Bit strings and the prefix-free formula code.

Bit strings are plain ``str`` objects over the alphabet ``{'0', '1'}``.  That
gives bitwise equality, concatenation and, on equal lengths, the
most-significant-bit-first lexicographic order for free.

A :class:`CodeTable` maps template ids to a codeword plus a fixed number of
parameter bits.  Because the codewords are prefix-free and every template has
a fixed parameter width, the full set of formula encodings is prefix-free as
well, so at most one formula can be an initial segment of a given input.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, NamedTuple

BitString = str

_BITS = frozenset("01")


class CodeTableError(ValueError):
    pass


def check_bits(s: str) -> BitString:
    if not isinstance(s, str) or not _BITS.issuperset(s):
        raise ValueError(f"not a bit string: {s!r}")
    return s


def concat(u: BitString, v: BitString) -> BitString:
    return check_bits(u) + check_bits(v)


def is_prefix(w: BitString, x: BitString) -> bool:
    """True iff ``w`` is an initial subword of ``x``."""
    return len(w) <= len(x) and x[: len(w)] == w


def lex_words(c: int) -> Iterator[BitString]:
    """All words of length ``c`` in ascending lexicographic order."""
    if c < 0:
        raise ValueError("word length must be non-negative")
    if c == 0:
        yield ""
        return
    for i in range(1 << c):
        yield format(i, f"0{c}b")


def zeros(n: int) -> BitString:
    return "0" * n


def to_int(bits: BitString) -> int:
    """MSB-first value of ``bits`` (the empty string is 0)."""
    return int(bits, 2) if bits else 0


def from_int(value: int, width: int) -> BitString:
    if value < 0 or value >= (1 << width):
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def length_lex_words(max_len: int) -> Iterator[BitString]:
    """Every word of length ``<= max_len``, ordered by length then lex."""
    for length in range(max_len + 1):
        yield from lex_words(length)


# Truth tables as Python ints: bit ``i`` of the int is the value at assignment
# index ``i``, where variable 0 is the most significant bit of the index.

def var_pattern(var: int, k: int) -> int:
    """Truth table (as int) of variable ``var`` among ``k`` variables."""
    if not 0 <= var < k:
        raise ValueError(f"variable {var} out of range for {k} variables")
    block = 1 << (k - 1 - var)
    pattern = ((1 << block) - 1) << block
    width = 2 * block
    total = 1 << k
    while width < total:
        pattern |= pattern << width
        width *= 2
    return pattern


def full_mask(k: int) -> int:
    return (1 << (1 << k)) - 1


def table_to_bits(table: int, k: int) -> BitString:
    length = 1 << k
    return format(table, f"0{length}b")[::-1]


def bits_to_table(bits: BitString) -> int:
    return int(bits[::-1], 2) if bits else 0


# Prefix-free code table

class FormulaCode(NamedTuple):
    template_id: str
    params: BitString
    encoding: BitString


@dataclass(frozen=True)
class CodeEntry:
    id: str
    code: BitString
    param_bits: int
    translatable: bool = True

    @property
    def length(self) -> int:
        return len(self.code) + self.param_bits


@dataclass(frozen=True)
class CodeTable:
    entries: tuple[CodeEntry, ...]
    reserved: tuple[BitString, ...] = ()
    version: str = "1"
    _by_id: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        words = [(e.code, e.id) for e in self.entries]
        words += [(r, "<reserved>") for r in self.reserved]
        for (a, ida), (b, idb) in itertools.combinations(words, 2):
            if not a or not b:
                raise CodeTableError(f"empty codeword for {ida if not a else idb}")
            if a.startswith(b) or b.startswith(a):
                raise CodeTableError(
                    f"codewords {a!r} ({ida}) and {b!r} ({idb}) are not prefix-free"
                )
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise CodeTableError("duplicate template id in code table")
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entries})

    def __getitem__(self, template_id: str) -> CodeEntry:
        return self._by_id[template_id]

    def __contains__(self, template_id: str) -> bool:
        return template_id in self._by_id

    def encode(self, template_id: str, params: BitString = "") -> BitString:
        entry = self[template_id]
        check_bits(params)
        if len(params) != entry.param_bits:
            raise ValueError(
                f"{template_id} takes {entry.param_bits} parameter bits, got {len(params)}"
            )
        return entry.code + params

    @classmethod
    def from_dict(cls, doc: dict) -> "CodeTable":
        try:
            entries = tuple(
                CodeEntry(
                    id=str(t["id"]),
                    code=check_bits(t["code"]),
                    param_bits=int(t["param_bits"]),
                    translatable=bool(t.get("translatable", True)),
                )
                for t in doc["templates"]
            )
        except (KeyError, TypeError) as exc:
            raise CodeTableError(f"malformed code table: {exc}") from exc
        reserved = tuple(check_bits(r) for r in doc.get("reserved", ()))
        return cls(entries, reserved, str(doc.get("version", "1")))

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "templates": [
                {"id": e.id, "code": e.code, "param_bits": e.param_bits,
                 "translatable": e.translatable}
                for e in self.entries
            ],
            "reserved": list(self.reserved),
        }


def load_code_table(path: str | Path | None = None) -> CodeTable:
    """Load a code table from JSON; ``None`` loads the shipped default."""
    if path is None:
        text = resources.files("pcgen.data").joinpath("code_table.json").read_text()
    else:
        text = Path(path).read_text()
    return CodeTable.from_dict(json.loads(text))


_DEFAULT_TABLE: CodeTable | None = None


def default_code_table() -> CodeTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_code_table()
    return _DEFAULT_TABLE


def decode_formula_prefix(
    u: BitString, max_len: int, table: CodeTable | None = None
) -> tuple[FormulaCode, BitString] | None:
    """Find the unique formula encoding that is a prefix of ``u``.

    Returns ``(code, u0)`` with ``u == code.encoding + u0`` or ``None`` when
    no encoding of total length ``<= max_len`` prefixes ``u``.
    """
    table = table or default_code_table()
    for entry in table.entries:
        total = entry.length
        if total > max_len or total > len(u):
            continue
        if u.startswith(entry.code):
            enc = u[:total]
            return FormulaCode(entry.id, enc[len(entry.code):], enc), u[total:]
    return None
