"""Fan-in-2 boolean circuits over ``{AND, OR, NOT}`` as compressed proof candidates.

Nodes ``0..k-1`` are inputs, node ``k + i`` is gate ``i``.  Operands always
refer to earlier nodes, so every gate list is acyclic by construction.  The
truth table of a circuit lists its outputs on inputs ``0..2^k - 1``, input 0
being the most significant bit of the index.

Canonical form used by :func:`enumerate_circuits`: commutative gates have
strictly increasing operands, the output of a circuit with gates is its last
gate, and a gateless circuit outputs one of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .bitcodec import BitString, check_bits, full_mask, table_to_bits, var_pattern

OPS = ("NOT", "AND", "OR")
MAX_TT_INPUTS = 24


@dataclass(frozen=True)
class Circuit:
    k: int
    gates: tuple[tuple, ...]
    output: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("circuits need at least one input")
        for i, g in enumerate(self.gates):
            op = g[0]
            limit = self.k + i
            if op not in OPS:
                raise ValueError(f"unknown gate op {op!r}")
            operands = g[1:2] if op == "NOT" else g[1:3]
            if any(not 0 <= a < limit for a in operands):
                raise ValueError(f"gate {i} references a node not before it: {g}")
        if not 0 <= self.output < self.k + len(self.gates):
            raise ValueError(f"output {self.output} is not a node")

    @property
    def size(self) -> int:
        return len(self.gates)

    def evaluate(self, inputs) -> bool:
        vals = [bool(v) for v in inputs]
        if len(vals) != self.k:
            raise ValueError(f"need {self.k} inputs")
        for g in self.gates:
            if g[0] == "NOT":
                vals.append(not vals[g[1]])
            elif g[0] == "AND":
                vals.append(vals[g[1]] and vals[g[2]])
            else:
                vals.append(vals[g[1]] or vals[g[2]])
        return vals[self.output]

    def table(self) -> int:
        if self.k > MAX_TT_INPUTS:
            raise ValueError(f"truth table of {self.k} inputs exceeds {MAX_TT_INPUTS}")
        mask = full_mask(self.k)
        vals = [var_pattern(i, self.k) for i in range(self.k)]
        for g in self.gates:
            if g[0] == "NOT":
                vals.append(mask ^ vals[g[1]])
            elif g[0] == "AND":
                vals.append(vals[g[1]] & vals[g[2]])
            else:
                vals.append(vals[g[1]] | vals[g[2]])
        return vals[self.output]

    def node_name(self, i: int) -> str:
        return f"x{i}" if i < self.k else f"g{i - self.k}"

    def to_text(self) -> str:
        lines = [f"inputs {self.k}"]
        for i, g in enumerate(self.gates):
            args = " ".join(self.node_name(a) for a in g[1:] if a is not None)
            lines.append(f"g{i} = {g[0]} {args}")
        lines.append(f"output {self.node_name(self.output)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        k = None
        gates = []
        output = None

        def node(tok: str) -> int:
            if tok.startswith("x"):
                return int(tok[1:])
            if tok.startswith("g"):
                return k + int(tok[1:])
            raise ValueError(f"bad node name {tok!r}")

        for raw in text.splitlines():
            toks = raw.split()
            if not toks or toks[0].startswith("#"):
                continue
            if toks[0] == "inputs":
                k = int(toks[1])
            elif toks[0] == "output":
                output = node(toks[1])
            elif len(toks) >= 4 and toks[1] == "=":
                if toks[0] != f"g{len(gates)}":
                    raise ValueError(f"gates must be numbered in order, got {toks[0]}")
                op = toks[2]
                args = [node(t) for t in toks[3:]]
                gates.append((op, args[0], None) if op == "NOT" else (op, *sorted(args)))
            else:
                raise ValueError(f"cannot parse circuit line {raw!r}")
        if k is None or output is None:
            raise ValueError("circuit text needs 'inputs' and 'output' lines")
        return cls(k, tuple(gates), output)


def tt(d: Circuit) -> BitString:
    """Truth table of ``d``: bit ``i`` is the output on the MSB-first expansion of ``i``."""
    return table_to_bits(d.table(), d.k)


@dataclass(frozen=True)
class Budget:
    k_max: int
    size_max: int


def budget(n: int) -> Budget:
    """Input and size limits for circuit search at input length ``n``."""
    if n < 4:
        raise ValueError("budget(n) needs n >= 4 (log log n must be positive)")
    log_n = math.log2(n)
    loglog_n = math.log2(log_n)
    return Budget(max(1, math.floor(log_n * loglog_n)), max(1, math.floor(log_n ** loglog_n)))


def gate_choices(m: int) -> int:
    """Canonical gates available when ``m`` nodes precede the new one."""
    return m + 2 * (m * (m - 1) // 2)


def count_circuits(k: int, size: int) -> int:
    """Number of canonical circuits with ``k`` inputs and exactly ``size`` gates."""
    if size == 0:
        return k
    total = 1
    for i in range(size):
        total *= gate_choices(k + i)
    return total


def count_up_to(k: int, size_max: int) -> int:
    return sum(count_circuits(k, s) for s in range(size_max + 1))


def _choices(m: int) -> list[tuple]:
    out = [("NOT", a, None) for a in range(m)]
    for op in ("AND", "OR"):
        out.extend((op, a, b) for a in range(m) for b in range(a + 1, m))
    return out


def enumerate_tables(k: int, size_max: int) -> Iterator[tuple[tuple, int]]:
    """Canonical ``(gates, table)`` pairs, ordered by size then gate-list lex.

    Tables are computed incrementally along the depth-first walk, one word
    operation per gate.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    mask = full_mask(k)
    base = [var_pattern(i, k) for i in range(k)]
    for v in base:
        yield (), v
    choice_lists = [_choices(k + i) for i in range(size_max)]

    def walk(depth: int, target: int, vals: list, gates: list):
        for g in choice_lists[depth]:
            op, a, b = g
            if op == "NOT":
                v = mask ^ vals[a]
            elif op == "AND":
                v = vals[a] & vals[b]
            else:
                v = vals[a] | vals[b]
            gates.append(g)
            if depth + 1 == target:
                yield tuple(gates), v
            else:
                vals.append(v)
                yield from walk(depth + 1, target, vals, gates)
                vals.pop()
            gates.pop()

    for size in range(1, size_max + 1):
        yield from walk(0, size, list(base), [])


def enumerate_circuits(b: Budget, k: int) -> Iterator[Circuit]:
    if k < 1:
        raise ValueError("k >= 1 required")
    if k > b.k_max:
        raise ValueError(f"k={k} exceeds the budget's k_max={b.k_max}")
    for i, (gates, _) in enumerate(enumerate_tables(k, b.size_max)):
        output = i if not gates else k + len(gates) - 1
        yield Circuit(k, gates, output)


def synthesize_tt(target: BitString) -> Circuit:
    """Some circuit whose truth table is ``target`` (Shannon expansion, shared subtables)."""
    check_bits(target)
    length = len(target)
    if length < 2 or length & (length - 1):
        raise ValueError("target length must be a power of two >= 2")
    k = length.bit_length() - 1
    if k > MAX_TT_INPUTS:
        raise ValueError(f"{k} inputs exceed {MAX_TT_INPUTS}")
    gates: list[tuple] = []
    memo: dict[tuple, int] = {}

    def add(op, a, b=None) -> int:
        g = (op, a, b) if op == "NOT" else (op, min(a, b), max(a, b))
        key = ("gate",) + g
        if key not in memo:
            gates.append(g)
            memo[key] = k + len(gates) - 1
        return memo[key]

    def const(value: bool) -> int:
        nx = add("NOT", 0)
        return add("OR" if value else "AND", 0, nx)

    def rec(sub: str, var: int) -> int:
        key = ("sub", var, sub)
        if key in memo:
            return memo[key]
        if "1" not in sub:
            node = const(False)
        elif "0" not in sub:
            node = const(True)
        else:
            half = len(sub) // 2
            lo, hi = sub[:half], sub[half:]
            if lo == hi:
                node = rec(lo, var + 1)
            elif "1" not in lo and "0" not in hi:
                node = var
            elif "0" not in lo and "1" not in hi:
                node = add("NOT", var)
            elif "1" not in lo:
                node = add("AND", var, rec(hi, var + 1))
            elif "1" not in hi:
                node = add("AND", add("NOT", var), rec(lo, var + 1))
            elif "0" not in lo:
                node = add("OR", add("NOT", var), rec(hi, var + 1))
            elif "0" not in hi:
                node = add("OR", var, rec(lo, var + 1))
            else:
                a = add("AND", var, rec(hi, var + 1))
                b = add("AND", add("NOT", var), rec(lo, var + 1))
                node = add("OR", a, b)
        memo[key] = node
        return node

    out = rec(target, 0)
    d = Circuit(k, tuple(gates), out)
    assert tt(d) == target
    return d


def fits(d: Circuit, b: Budget) -> bool:
    return d.k <= b.k_max and d.size <= b.size_max
