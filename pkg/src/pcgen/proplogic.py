"""Propositional formulas, the fixed-length translation, and two proof systems.

``translate(phi, w, n)`` builds a formula over ``n + 1`` atoms for the bits of
``x``, witness atoms, and one gate atom per compound checker instruction.  Its
shape is::

    (consistency_1 & ... & consistency_m & Phi_out) -> not(w <=_e x)

where each consistency conjunct ties a gate atom to its defining expression in
both directions.  Because gate values are forced by ``x`` and the witness, the
formula is a tautology iff no ``x`` of length ``n + 1`` with prefix ``w``
satisfies ``Phi``.

Truth tables use assignment index order with atom 0 as the most significant
index bit, the same convention as circuit truth tables.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bitcodec import (
    BitString,
    CodeTable,
    bits_to_table,
    default_code_table,
    from_int,
    full_mask,
    lex_words,
    table_to_bits,
    to_int,
    var_pattern,
)
from .folang import (
    BEGINS_WITH_1,
    BIT_J_IS_1,
    EVEN_LENGTH,
    KINDS,
    SIGMA1_REF,
    Template,
    VerifierLibrary,
    all_templates,
    decide_at_length,
    default_library,
    make_template,
)

MAX_BRUTE_ATOMS = 24

X_BIT = "X_BIT"
WITNESS_BIT = "WITNESS_BIT"
GATE_BIT = "GATE_BIT"


class TooManyAtoms(ValueError):
    pass


class TranslationBudgetExceeded(RuntimeError):
    def __init__(self, steps: int, limit: int):
        super().__init__(f"translation exceeded {limit} steps")
        self.steps = steps
        self.limit = limit


# Formula nodes

@dataclass(frozen=True, slots=True)
class Const:
    value: bool


@dataclass(frozen=True, slots=True)
class Atom:
    index: int


@dataclass(frozen=True, slots=True)
class Not:
    arg: object


@dataclass(frozen=True, slots=True)
class And:
    args: tuple


@dataclass(frozen=True, slots=True)
class Or:
    args: tuple


@dataclass(frozen=True, slots=True)
class Implies:
    lhs: object
    rhs: object


TRUE = Const(True)
FALSE = Const(False)


def children(node) -> tuple:
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, Implies):
        return (node.lhs, node.rhs)
    return ()


def lit(atom: int, value: str | bool):
    a = Atom(atom)
    return a if value in ("1", True) else Not(a)


@dataclass(frozen=True)
class PropFormula:
    root: object
    roles: tuple[tuple[str, int], ...]

    @property
    def n_atoms(self) -> int:
        return len(self.roles)

    def atoms_with_role(self, role: str) -> list[int]:
        return [i for i, (r, _) in enumerate(self.roles) if r == role]

    @property
    def n_x(self) -> int:
        return sum(1 for r, _ in self.roles if r == X_BIT)

    def size(self) -> int:
        seen = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            seen += 1
            stack.extend(children(node))
        return seen

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.n_atoms:
            raise ValueError(f"need {self.n_atoms} values, got {len(assignment)}")
        return _eval(self.root, assignment)

    def truth_table(self) -> int:
        """Bit-parallel table over all assignments (bit ``i`` = value at index ``i``)."""
        k = self.n_atoms
        if k > MAX_BRUTE_ATOMS:
            raise TooManyAtoms(f"{k} atoms exceed the brute-force limit {MAX_BRUTE_ATOMS}")
        return _table(self.root, k)

    def to_json(self) -> dict:
        return {"atoms": [{"role": r, "index": i} for r, i in self.roles],
                "root": node_to_json(self.root)}

    @classmethod
    def from_json(cls, doc: dict) -> "PropFormula":
        roles = tuple((a["role"], int(a["index"])) for a in doc["atoms"])
        return cls(node_from_json(doc["root"]), roles)


def _eval(node, a) -> bool:
    if isinstance(node, Atom):
        return bool(a[node.index])
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Not):
        return not _eval(node.arg, a)
    if isinstance(node, And):
        return all(_eval(c, a) for c in node.args)
    if isinstance(node, Or):
        return any(_eval(c, a) for c in node.args)
    if isinstance(node, Implies):
        return (not _eval(node.lhs, a)) or _eval(node.rhs, a)
    raise TypeError(node)


def _table(root, k: int) -> int:
    mask = full_mask(k)
    patterns: dict[int, int] = {}
    memo: dict[int, int] = {}

    def go(node) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Atom):
            if node.index not in patterns:
                patterns[node.index] = var_pattern(node.index, k)
            v = patterns[node.index]
        elif isinstance(node, Const):
            v = mask if node.value else 0
        elif isinstance(node, Not):
            v = mask ^ go(node.arg)
        elif isinstance(node, And):
            v = mask
            for c in node.args:
                v &= go(c)
        elif isinstance(node, Or):
            v = 0
            for c in node.args:
                v |= go(c)
        elif isinstance(node, Implies):
            v = (mask ^ go(node.lhs)) | go(node.rhs)
        else:
            raise TypeError(node)
        memo[key] = v
        return v

    return go(root)


def node_to_json(node):
    if isinstance(node, Const):
        return ["const", node.value]
    if isinstance(node, Atom):
        return ["atom", node.index]
    if isinstance(node, Not):
        return ["not", node_to_json(node.arg)]
    if isinstance(node, And):
        return ["and", [node_to_json(c) for c in node.args]]
    if isinstance(node, Or):
        return ["or", [node_to_json(c) for c in node.args]]
    if isinstance(node, Implies):
        return ["implies", node_to_json(node.lhs), node_to_json(node.rhs)]
    raise TypeError(node)


def node_from_json(doc):
    op = doc[0]
    if op == "const":
        return Const(bool(doc[1]))
    if op == "atom":
        return Atom(int(doc[1]))
    if op == "not":
        return Not(node_from_json(doc[1]))
    if op == "and":
        return And(tuple(node_from_json(c) for c in doc[1]))
    if op == "or":
        return Or(tuple(node_from_json(c) for c in doc[1]))
    if op == "implies":
        return Implies(node_from_json(doc[1]), node_from_json(doc[2]))
    raise ValueError(f"unknown node {op!r}")


def to_dimacs(f: PropFormula) -> str:
    """CNF of ``not f`` (Tseitin); satisfiable iff ``f`` is not a tautology.

    Variables ``1..n_atoms`` are the formula atoms in order.
    """
    clauses: list[list[int]] = []
    next_var = [f.n_atoms]
    memo: dict[int, int] = {}

    def fresh() -> int:
        next_var[0] += 1
        return next_var[0]

    def enc(node) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Atom):
            v = node.index + 1
        elif isinstance(node, Const):
            v = fresh()
            clauses.append([v] if node.value else [-v])
        elif isinstance(node, Not):
            v = -enc(node.arg)
        elif isinstance(node, (And, Or)):
            subs = [enc(c) for c in node.args]
            v = fresh()
            if isinstance(node, And):
                clauses.extend([-v, s] for s in subs)
                clauses.append([v] + [-s for s in subs])
            else:
                clauses.append([-v] + subs)
                clauses.extend([v, -s] for s in subs)
        elif isinstance(node, Implies):
            a, b = enc(node.lhs), enc(node.rhs)
            v = fresh()
            clauses.extend([[-v, -a, b], [v, a], [v, -b]])
        else:
            raise TypeError(node)
        memo[key] = v
        return v

    top = enc(f.root)
    clauses.append([-top])
    lines = ["c pcgen translation; CNF of the negation (UNSAT iff tautology)"]
    for i, (role, idx) in enumerate(f.roles):
        lines.append(f"c var {i + 1} {role} {idx}")
    lines.append(f"p cnf {next_var[0]} {len(clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    n_vars, clauses = 0, []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            n_vars = int(line.split()[2])
            continue
        nums = [int(t) for t in line.split()]
        clauses.append(nums[:-1])
    return n_vars, clauses


# Translation

class _Builder:
    def __init__(self, limit: int | None):
        self.steps = 0
        self.limit = limit

    def tick(self, k: int = 1):
        self.steps += k
        if self.limit is not None and self.steps > self.limit:
            raise TranslationBudgetExceeded(self.steps, self.limit)


def _index_equals(bits: list, value: int, b: _Builder):
    """Formula for "the index bits (MSB first) equal ``value``"."""
    width = len(bits)
    want = from_int(value, width)
    lits = []
    for node, bit in zip(bits, want):
        b.tick()
        if isinstance(node, Const):
            if node.value != (bit == "1"):
                return FALSE
            continue
        lits.append(node if bit == "1" else Not(node))
    b.tick()
    return And(tuple(lits)) if lits else TRUE


def _compile_checker(phi: Template, n: int, b: _Builder):
    """Returns ``(output, gate_defs, n_witness)`` for the checker at ``|x| = n + 1``."""
    v = phi.verifier
    length = n + 1
    n_wit = v.bound(length)
    wit_base = length
    gate_base = length + n_wit
    gates: list = []
    stack: list = []

    def x_node(i):
        return Atom(i) if i < length else FALSE

    def y_node(i):
        return Atom(wit_base + i) if i < n_wit else FALSE

    def gate(expr):
        g = Atom(gate_base + len(gates))
        gates.append((g, expr))
        b.tick()
        return g

    for ins in v.program:
        op = ins[0]
        b.tick()
        if op == "CONST":
            stack.append(TRUE if ins[1] else FALSE)
        elif op == "X":
            stack.append(x_node(ins[1]))
        elif op == "Y":
            stack.append(y_node(ins[1]))
        elif op in ("XAT", "XIN"):
            lo, hi = ins[1], ins[2]
            bits = [y_node(i) for i in range(lo, hi)]
            span = min(1 << (hi - lo), length)
            if op == "XIN" and span == 1 << (hi - lo):
                stack.append(TRUE)
                continue
            terms = []
            for p in range(span):
                eq = _index_equals(bits, p, b)
                if eq == FALSE:
                    continue
                terms.append(And((eq, x_node(p))) if op == "XAT" else eq)
                b.tick()
            stack.append(gate(Or(tuple(terms)) if terms else FALSE))
        elif op == "NOT":
            stack.append(gate(Not(stack.pop())))
        elif op in ("AND", "OR"):
            rhs, lhs = stack.pop(), stack.pop()
            cls = And if op == "AND" else Or
            stack.append(gate(cls((lhs, rhs))))
        elif op == "ACCEPT":
            return stack.pop(), gates, n_wit
    raise ValueError("checker program has no ACCEPT")


def translate_counted(
    phi: Template, w: BitString, n: int, step_limit: int | None = None
) -> tuple[PropFormula, int]:
    if not isinstance(phi, Template) or phi.kind not in KINDS:
        raise ValueError(f"cannot translate {phi!r}")
    if not w or n < 1:
        raise ValueError("translate needs |w| >= 1 and n >= 1")
    b = _Builder(step_limit)
    length = n + 1
    x_roles = tuple((X_BIT, i) for i in range(length))
    b.tick(length)
    if len(w) > length:
        return PropFormula(TRUE, x_roles), b.steps

    gates: list = []
    n_wit = 0
    if phi.kind == BEGINS_WITH_1:
        out = Atom(0)
    elif phi.kind == EVEN_LENGTH:
        out = TRUE if length % 2 == 0 else FALSE
    elif phi.kind == BIT_J_IS_1:
        out = Atom(phi.param) if phi.param < length else FALSE
    elif phi.kind == SIGMA1_REF:
        out, gates, n_wit = _compile_checker(phi, n, b)
    else:
        raise ValueError(f"cannot translate {phi.kind}")
    b.tick()

    consistency = []
    for g, expr in gates:
        consistency.append(And((Implies(g, expr), Implies(expr, g))))
        b.tick(3)
    prefix = And(tuple(lit(i, bit) for i, bit in enumerate(w)))
    b.tick(len(w) + 1)
    root = Implies(And(tuple(consistency) + (out,)), Not(prefix))
    b.tick(3)
    roles = (x_roles
             + tuple((WITNESS_BIT, j) for j in range(n_wit))
             + tuple((GATE_BIT, k) for k in range(len(gates))))
    return PropFormula(root, roles), b.steps


@functools.lru_cache(maxsize=8192)
def _translate_cached(phi: Template, w: BitString, n: int) -> tuple[PropFormula, int]:
    return translate_counted(phi, w, n)


def translate(phi: Template, w: BitString, n: int) -> PropFormula:
    return _translate_cached(phi, w, n)[0]


def parse_prefix(f: PropFormula) -> BitString | None:
    """Recover ``w`` from the consequent ``not(w <=_e x)`` of a translated formula."""
    root = f.root
    if not (isinstance(root, Implies) and isinstance(root.rhs, Not)
            and isinstance(root.rhs.arg, And)):
        return None
    w = []
    for i, node in enumerate(root.rhs.arg.args):
        if isinstance(node, Atom) and node.index == i:
            w.append("1")
        elif isinstance(node, Not) and isinstance(node.arg, Atom) and node.arg.index == i:
            w.append("0")
        else:
            return None
    return "".join(w) or None


def is_tautology_bruteforce(f: PropFormula) -> bool:
    """True iff every one of the ``2^n_atoms`` assignments satisfies ``f``."""
    return f.truth_table() == full_mask(f.n_atoms)


def falsifying_assignment(f: PropFormula) -> tuple[bool, ...] | None:
    table = f.truth_table()
    k = f.n_atoms
    missing = full_mask(k) ^ table
    if not missing:
        return None
    i = (missing & -missing).bit_length() - 1
    return tuple(bool((i >> (k - 1 - a)) & 1) for a in range(k))


# Proof systems

def is_power_of_two(m: int) -> bool:
    return m > 0 and m & (m - 1) == 0


class PropProofSystem:
    name = "abstract"

    def check(self, f: PropFormula, proof: BitString) -> tuple[bool, int]:
        raise NotImplementedError

    def verify(self, f: PropFormula, proof: BitString) -> bool:
        return self.check(f, proof)[0]

    def step_cost(self, m: int) -> int:
        """Upper bound on counted verification steps for ``|f| + |proof| = m``."""
        return 32 * m * m

    def admits_length(self, f: PropFormula, length: int) -> bool:
        return True

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.name == other.name

    def __hash__(self) -> int:
        return hash((type(self), self.name))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class TruthTableSystem(PropProofSystem):
    """A proof is the full value list of ``f``, all ones, re-evaluated row by row."""

    name = "TT"

    def admits_length(self, f, length):
        return length == 1 << f.n_atoms

    def check(self, f, proof):
        steps = len(proof) + 1
        if len(proof) != 1 << f.n_atoms or "0" in proof:
            return False, steps
        steps += len(proof) * f.size()
        try:
            table = f.truth_table()
        except TooManyAtoms:
            return False, steps
        return bits_to_table(proof) == table, steps


def tt_system_verify(f: PropFormula, proof: BitString) -> bool:
    return TruthTableSystem().verify(f, proof)


def tt_proof(f: PropFormula) -> BitString:
    """The value list of ``f`` (a valid TT proof iff ``f`` is a tautology)."""
    return table_to_bits(f.truth_table(), f.n_atoms)


# Schema proofs: '1' ++ kind ++ param ++ |w| ++ w ++ n, zero padded.
KIND_CODES = {BEGINS_WITH_1: "00", EVEN_LENGTH: "01", BIT_J_IS_1: "10", SIGMA1_REF: "11"}
CODE_KINDS = {v: k for k, v in KIND_CODES.items()}
PARAM_WIDTH = 8
WLEN_WIDTH = 4
W_WIDTH = 15
N_WIDTH = 8
SCHEMA_RAW = 1 + 2 + PARAM_WIDTH + WLEN_WIDTH + W_WIDTH + N_WIDTH
SCHEMA_LEN = 1 << (SCHEMA_RAW - 1).bit_length()


def schema_proof(phi: Template, w: BitString, n: int) -> BitString:
    if not 1 <= len(w) <= W_WIDTH:
        raise ValueError(f"schema proofs carry 1..{W_WIDTH} bits of w")
    raw = ("1" + KIND_CODES[phi.kind] + from_int(phi.param, PARAM_WIDTH)
           + from_int(len(w), WLEN_WIDTH) + w.ljust(W_WIDTH, "0") + from_int(n, N_WIDTH))
    return raw.ljust(SCHEMA_LEN, "0")


@functools.lru_cache(maxsize=4096)
def claim_table(phi: Template, c: int, n: int) -> BitString | None:
    """Row of at-length verdicts: bit ``w`` is 1 iff no ``x`` of length ``n+1`` with prefix ``w`` satisfies ``Phi``."""
    row = []
    for w in lex_words(c):
        verdict = decide_at_length(phi, w, n + 1)
        if verdict is None:
            return None
        row.append("1" if verdict else "0")
    return "".join(row)


class SchemaSystem(PropProofSystem):
    """Sound ad hoc system: every accepted proof is re-derived, never trusted.

    Shapes, tried in order:

    * ``'0' ++ TT proof``;
    * schema proof ``'1' ++ fields ++ zeros`` of length ``SCHEMA_LEN``, naming
      ``(template, w, n)``; ``f`` must equal ``translate(template, w, n)``;
    * claim table of length ``2^|w|`` for the ``w`` read off ``f``: the
      complete row of at-length verdicts of one library template, which must
      translate to ``f``.  These rows are the compressible proofs that circuit
      search can find.
    """

    name = "SCH"

    def __init__(self, table: CodeTable | None = None, library: VerifierLibrary | None = None):
        self.table = table or default_code_table()
        self.library = library or default_library()
        self._templates = tuple(t for t in all_templates(self.table, self.library)
                                if t.translatable)

    def admits_length(self, f, length):
        if length == 1 + (1 << f.n_atoms) or length == SCHEMA_LEN:
            return True
        w = parse_prefix(f)
        return w is not None and length == 1 << len(w)

    def check(self, f, proof):
        steps = 1
        if not proof:
            return False, steps
        if proof[0] == "0":
            ok, cost = TruthTableSystem().check(f, proof[1:])
            steps += cost
            if ok:
                return True, steps
        if len(proof) == SCHEMA_LEN and proof[0] == "1":
            ok, cost = self._check_schema(f, proof)
            steps += cost
            if ok:
                return True, steps
        if is_power_of_two(len(proof)) and len(proof) >= 2:
            ok, cost = self._check_claim_table(f, proof)
            steps += cost
            if ok:
                return True, steps
        return False, steps

    def _check_schema(self, f, proof):
        steps = len(proof)
        pos = 1
        def take(width):
            nonlocal pos
            field_ = proof[pos:pos + width]
            pos += width
            return field_
        kind = CODE_KINDS[take(2)]
        param = to_int(take(PARAM_WIDTH))
        wlen = to_int(take(WLEN_WIDTH))
        wfield = take(W_WIDTH)
        n = to_int(take(N_WIDTH))
        if "1" in proof[pos:] or wlen < 1 or "1" in wfield[wlen:] or n < 1:
            return False, steps
        w = wfield[:wlen]
        try:
            phi = make_template(kind, param, self.table, self.library)
        except (ValueError, KeyError):
            return False, steps
        if not phi.translatable:
            return False, steps
        g, cost = _translate_cached(phi, w, n)
        steps += cost
        if g != f:
            return False, steps
        steps += len(w) + 1
        return decide_at_length(phi, w, n + 1) is True, steps

    def _check_claim_table(self, f, proof):
        steps = len(proof)
        w = parse_prefix(f)
        if w is None or 1 << len(w) != len(proof) or proof[to_int(w)] != "1":
            return False, steps
        n = f.n_x - 1
        for phi in self._templates:
            g, cost = _translate_cached(phi, w, n)
            steps += cost
            if g != f:
                continue
            steps += len(proof) * (len(w) + 1)
            if claim_table(phi, len(w), n) == proof:
                return True, steps
        return False, steps


def schema_system_verify(f: PropFormula, proof: BitString) -> bool:
    return SchemaSystem().verify(f, proof)


_SYSTEMS = {"TT": TruthTableSystem, "SCH": SchemaSystem}


def get_system(name: str, **kw) -> PropProofSystem:
    try:
        cls = _SYSTEMS[name.upper()]
    except KeyError:
        raise ValueError(f"unknown proof system {name!r}; choose from {sorted(_SYSTEMS)}") from None
    return cls(**kw) if cls is SchemaSystem else cls()


def proof_to_hex(system: str, proof: BitString) -> str:
    padded = proof + "0" * (-len(proof) % 4)
    digits = "".join(format(int(padded[i:i + 4], 2), "x") for i in range(0, len(padded), 4))
    return f"pcgen-proof system={system} bits={len(proof)}\n{digits}\n"


def proof_from_hex(text: str) -> tuple[str, BitString]:
    header, _, body = text.partition("\n")
    fields = dict(part.split("=", 1) for part in header.split()[1:])
    nbits = int(fields["bits"])
    bits = "".join(format(int(h, 16), "04b") for h in body.strip())
    return fields["system"], bits[:nbits]


def instances(templates: Iterable[Template], max_w: int, max_n: int):
    """``(phi, w, n)`` over all ``1 <= |w| <= max_w`` and ``1 <= n <= max_n``."""
    for phi in templates:
        for wl in range(1, max_w + 1):
            for w in lex_words(wl):
                for n in range(1, max_n + 1):
                    yield phi, w, n
