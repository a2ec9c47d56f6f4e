"""One-free-variable formulas over binary strings.

Templates come in four kinds.  Three are analytic (``BEGINS_WITH_1``,
``EVEN_LENGTH``, ``BIT_J_IS_1``); their sentences ``Phi^w`` can be decided
exactly.  ``SIGMA1_REF`` points into a library of witness verifiers: ``Phi(x)``
holds iff some witness ``y`` with ``|y| <= bound(|x|)`` makes the verifier's
bytecode accept.

Verifier bytecode is a straight-line stack program::

    0 | 1          push a constant
    X i            push x[i]            (0 when i >= |x|)
    Y i            push y[i]            (0 when i >= |y|)
    XAT a b        push x[int(y[a:b])]  (0 when the index is >= |x|)
    XIN a b        push int(y[a:b]) < |x|
    NOT | AND | OR
    ACCEPT         pop the result and halt (must be last)

Out-of-range witness bits read as 0, so a short witness behaves exactly like
its zero-padded extension; the existential over ``|y| <= B`` therefore agrees
with the existential over ``|y| == B``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .bitcodec import (
    BitString,
    CodeTable,
    FormulaCode,
    check_bits,
    default_code_table,
    from_int,
    is_prefix,
    lex_words,
    to_int,
)

BEGINS_WITH_1 = "BEGINS_WITH_1"
EVEN_LENGTH = "EVEN_LENGTH"
BIT_J_IS_1 = "BIT_J_IS_1"
SIGMA1_REF = "SIGMA1_REF"

ANALYTIC_KINDS = (BEGINS_WITH_1, EVEN_LENGTH, BIT_J_IS_1)
KINDS = ANALYTIC_KINDS + (SIGMA1_REF,)


class VerifierError(ValueError):
    pass


class StepBudgetExceeded(RuntimeError):
    pass


def poly_eval(coeffs: tuple[int, ...], m: int) -> int:
    return sum(c * m**i for i, c in enumerate(coeffs))


def _parse_bytecode(text: str) -> tuple[tuple, ...]:
    tokens = text.split()
    prog = []
    i = 0
    arity = {"0": 0, "1": 0, "X": 1, "Y": 1, "XAT": 2, "XIN": 2,
             "NOT": 0, "AND": 0, "OR": 0, "ACCEPT": 0}
    while i < len(tokens):
        op = tokens[i]
        if op not in arity:
            raise VerifierError(f"unknown instruction {op!r}")
        args = tokens[i + 1: i + 1 + arity[op]]
        if len(args) != arity[op]:
            raise VerifierError(f"{op} expects {arity[op]} operands")
        try:
            nums = tuple(int(a) for a in args)
        except ValueError as exc:
            raise VerifierError(f"bad operand for {op}: {args}") from exc
        if any(a < 0 for a in nums):
            raise VerifierError(f"negative operand for {op}")
        if op in ("XAT", "XIN") and not nums[0] < nums[1]:
            raise VerifierError(f"{op} needs a < b, got {nums}")
        if op in ("0", "1"):
            prog.append(("CONST", int(op)))
        else:
            prog.append((op,) + nums)
        i += 1 + arity[op]
    return tuple(prog)


@dataclass(frozen=True)
class Sigma1Verifier:
    name: str
    witness_bound: tuple[int, ...]
    program: tuple[tuple, ...]
    step_cost: tuple[int, ...] = (32, 1)

    def __post_init__(self):
        if not self.witness_bound or len(self.witness_bound) > 4:
            raise VerifierError("witness bound must be a polynomial of degree <= 3")
        if any(c < 0 for c in self.witness_bound + self.step_cost):
            raise VerifierError("polynomial coefficients must be natural numbers")
        depth = 0
        for pos, ins in enumerate(self.program):
            op = ins[0]
            if op in ("CONST", "X", "Y", "XAT", "XIN"):
                depth += 1
            elif op == "NOT":
                if depth < 1:
                    raise VerifierError(f"{self.name}: stack underflow at {pos}")
            elif op in ("AND", "OR"):
                if depth < 2:
                    raise VerifierError(f"{self.name}: stack underflow at {pos}")
                depth -= 1
            elif op == "ACCEPT":
                if depth != 1 or pos != len(self.program) - 1:
                    raise VerifierError(f"{self.name}: ACCEPT must end a one-value stack")
        if not self.program or self.program[-1][0] != "ACCEPT":
            raise VerifierError(f"{self.name}: program must end with ACCEPT")

    @classmethod
    def from_dict(cls, doc: dict) -> "Sigma1Verifier":
        return cls(
            name=str(doc["name"]),
            witness_bound=tuple(int(c) for c in doc["witness_bound"]),
            program=_parse_bytecode(doc["bytecode"]),
            step_cost=tuple(int(c) for c in doc.get("step_cost", (32, 1))),
        )

    @property
    def bytecode(self) -> str:
        out = []
        for ins in self.program:
            if ins[0] == "CONST":
                out.append(str(ins[1]))
            else:
                out.append(" ".join(str(t) for t in ins))
        return " ".join(out)

    def bound(self, length: int) -> int:
        return poly_eval(self.witness_bound, length)

    def run(self, x: BitString, y: BitString) -> tuple[bool, int]:
        """Execute the checker; returns ``(accepted, steps)``."""
        limit = poly_eval(self.step_cost, len(x) + len(y))
        stack: list[int] = []
        steps = 0
        for ins in self.program:
            op = ins[0]
            steps += 1
            if op == "CONST":
                stack.append(ins[1])
            elif op == "X":
                stack.append(1 if ins[1] < len(x) and x[ins[1]] == "1" else 0)
            elif op == "Y":
                stack.append(1 if ins[1] < len(y) and y[ins[1]] == "1" else 0)
            elif op in ("XAT", "XIN"):
                a, b = ins[1], ins[2]
                steps += b - a
                idx = to_int(y[a:b].ljust(b - a, "0") if a < len(y) else "")
                if op == "XIN":
                    stack.append(1 if idx < len(x) else 0)
                else:
                    stack.append(1 if idx < len(x) and x[idx] == "1" else 0)
            elif op == "NOT":
                stack.append(1 - stack.pop())
            elif op == "AND":
                b_, a_ = stack.pop(), stack.pop()
                stack.append(a_ & b_)
            elif op == "OR":
                b_, a_ = stack.pop(), stack.pop()
                stack.append(a_ | b_)
            elif op == "ACCEPT":
                if steps > limit:
                    raise StepBudgetExceeded(
                        f"{self.name}: {steps} steps exceed budget {limit}"
                    )
                return bool(stack.pop()), steps
            if steps > limit:
                raise StepBudgetExceeded(f"{self.name}: {steps} steps exceed budget {limit}")
        raise VerifierError("program fell off the end")  # excluded by __post_init__

    @property
    def x_reach(self) -> int:
        """Number of leading x positions the program can observe."""
        reach = 0
        for ins in self.program:
            if ins[0] == "X":
                reach = max(reach, ins[1] + 1)
            elif ins[0] in ("XAT", "XIN"):
                reach = max(reach, 1 << (ins[2] - ins[1]))
        return reach

    @property
    def y_reach(self) -> int:
        reach = 0
        for ins in self.program:
            if ins[0] == "Y":
                reach = max(reach, ins[1] + 1)
            elif ins[0] in ("XAT", "XIN"):
                reach = max(reach, ins[2])
        return reach

    def stabilization_length(self) -> int:
        """Length from which ``Phi(x)`` depends only on ``x[:x_reach]``.

        Past this length every ``XIN`` test is constant and the effective
        witness width ``min(y_reach, bound(|x|))`` no longer changes.
        """
        length = self.x_reach
        q = self.y_reach
        if len(self.witness_bound) > 1 and any(self.witness_bound[1:]):
            m = 0
            while self.bound(m) < q:
                m += 1
            length = max(length, m)
        return length


@dataclass(frozen=True)
class VerifierLibrary:
    verifiers: tuple[Sigma1Verifier, ...]
    version: str = "1"

    def __len__(self) -> int:
        return len(self.verifiers)

    def __getitem__(self, i: int) -> Sigma1Verifier:
        return self.verifiers[i]

    def index(self, name: str) -> int:
        for i, v in enumerate(self.verifiers):
            if v.name == name:
                return i
        raise KeyError(f"no verifier named {name!r}; library has {[v.name for v in self.verifiers]}")

    @classmethod
    def from_dict(cls, doc: dict) -> "VerifierLibrary":
        return cls(tuple(Sigma1Verifier.from_dict(v) for v in doc["verifiers"]),
                   str(doc.get("version", "1")))


def load_library(path: str | Path | None = None) -> VerifierLibrary:
    if path is None:
        text = resources.files("pcgen.data").joinpath("verifiers.json").read_text()
    else:
        text = Path(path).read_text()
    return VerifierLibrary.from_dict(json.loads(text))


_DEFAULT_LIBRARY: VerifierLibrary | None = None


def default_library() -> VerifierLibrary:
    global _DEFAULT_LIBRARY
    if _DEFAULT_LIBRARY is None:
        _DEFAULT_LIBRARY = load_library()
    return _DEFAULT_LIBRARY


@dataclass(frozen=True)
class Template:
    """A decoded formula: kind, integer parameter and its bit encoding."""

    kind: str
    param: int = 0
    code: BitString = ""
    verifier: Sigma1Verifier | None = None
    translatable: bool = True

    @property
    def id(self) -> str:
        if self.kind == BIT_J_IS_1:
            return f"{self.kind}[j={self.param}]"
        if self.kind == SIGMA1_REF:
            return f"{self.kind}[{self.verifier.name}]"
        return self.kind

    @property
    def analytic(self) -> bool:
        return self.kind in ANALYTIC_KINDS

    def __len__(self) -> int:
        return len(self.code)

    def __call__(self, x: BitString) -> bool:
        return eval_phi(self, x)


def template_from_code(
    code: FormulaCode, table: CodeTable | None = None, library: VerifierLibrary | None = None
) -> Template | None:
    """Resolve a decoded encoding to a template; ``None`` if it names nothing."""
    table = table or default_code_table()
    library = library or default_library()
    kind = code.template_id
    if kind not in KINDS or kind not in table:
        return None
    param = to_int(code.params)
    verifier = None
    if kind == SIGMA1_REF:
        if param >= len(library):
            return None
        verifier = library[param]
    return Template(kind, param, code.encoding, verifier, table[kind].translatable)


def make_template(
    kind: str,
    param: int | str = 0,
    table: CodeTable | None = None,
    library: VerifierLibrary | None = None,
) -> Template:
    """Build a template by kind; ``param`` is ``j`` or a verifier index/name."""
    table = table or default_code_table()
    library = library or default_library()
    if kind not in KINDS:
        raise ValueError(f"unknown template kind {kind!r}")
    if isinstance(param, str):
        param = library.index(param)
    entry = table[kind]
    params = from_int(param, entry.param_bits)
    t = template_from_code(FormulaCode(kind, params, entry.code + params), table, library)
    if t is None:
        raise ValueError(f"{kind} with parameter {param} is not in the library")
    return t


def all_templates(
    table: CodeTable | None = None, library: VerifierLibrary | None = None
) -> list[Template]:
    """Every template the code table can encode, in code order."""
    table = table or default_code_table()
    library = library or default_library()
    out = []
    for entry in table.entries:
        if entry.id not in KINDS:
            continue
        if entry.id == SIGMA1_REF:
            params = range(min(len(library), 1 << entry.param_bits))
        else:
            params = range(1 << entry.param_bits)
        out.extend(make_template(entry.id, p, table, library) for p in params)
    return out


def eval_phi(phi: Template, x: BitString) -> bool:
    kind = phi.kind
    if kind == BEGINS_WITH_1:
        return x[:1] == "1"
    if kind == EVEN_LENGTH:
        return len(x) % 2 == 0
    if kind == BIT_J_IS_1:
        return len(x) > phi.param and x[phi.param] == "1"
    if kind == SIGMA1_REF:
        v = phi.verifier
        bound = v.bound(len(x))
        for length in range(bound + 1):
            for y in lex_words(length):
                if v.run(x, y)[0]:
                    return True
        return False
    raise ValueError(f"unknown template kind {kind!r}")


@dataclass(frozen=True)
class SentencePhiW:
    """For all sufficiently large ``x``: ``Phi(x)`` implies ``w`` is not a prefix of ``x``."""

    phi: object
    w: BitString

    def __str__(self) -> str:
        name = getattr(self.phi, "id", repr(self.phi))
        return f"Ey Ax>y {name}(x) -> not({self.w} <=_e x)"


def build_phi_w(phi, w: BitString) -> SentencePhiW:
    check_bits(w)
    if not w:
        raise ValueError("w must be non-empty")
    return SentencePhiW(phi, w)


class Verdict(str, enum.Enum):
    TRUE_ANALYTIC = "TRUE_ANALYTIC"
    FALSE_ANALYTIC = "FALSE_ANALYTIC"
    TRUE_UP_TO_HORIZON = "TRUE_UP_TO_HORIZON"
    FALSE_WITNESSED = "FALSE_WITNESSED"

    @property
    def is_false(self) -> bool:
        return self in (Verdict.FALSE_ANALYTIC, Verdict.FALSE_WITNESSED)

    @property
    def horizon_bounded(self) -> bool:
        return self in (Verdict.TRUE_UP_TO_HORIZON, Verdict.FALSE_WITNESSED)


def analytic_truth(phi: Template, w: BitString) -> bool:
    """Exact truth of ``Phi^w`` for an analytic template."""
    if phi.kind == BEGINS_WITH_1:
        return w[0] == "0"
    if phi.kind == EVEN_LENGTH:
        return False
    if phi.kind == BIT_J_IS_1:
        return len(w) > phi.param and w[phi.param] == "0"
    raise ValueError(f"{phi.kind} is not analytic")


def words_with_prefix(w: BitString, length: int) -> Iterator[BitString]:
    if length < len(w):
        return
    for z in lex_words(length - len(w)):
        yield w + z


def tail_lengths(w: BitString, horizon: int) -> range:
    """Lengths inspected by a horizon-bounded verdict: the last two up to ``horizon``."""
    return range(max(len(w), horizon - 1), horizon + 1)


def horizon_truth(pred: Callable[[BitString], bool], w: BitString, horizon: int) -> Verdict:
    """Horizon-bounded verdict for an arbitrary decidable predicate."""
    for length in tail_lengths(w, horizon):
        if any(pred(x) for x in words_with_prefix(w, length)):
            return Verdict.FALSE_WITNESSED
    return Verdict.TRUE_UP_TO_HORIZON


def phi_w_truth(s: SentencePhiW, horizon: int) -> Verdict:
    if horizon < len(s.w):
        raise ValueError(f"horizon {horizon} is shorter than |w| = {len(s.w)}")
    phi = s.phi
    if isinstance(phi, Template) and phi.analytic:
        return Verdict.TRUE_ANALYTIC if analytic_truth(phi, s.w) else Verdict.FALSE_ANALYTIC
    return horizon_truth(phi, s.w, horizon)


def decide_at_length(
    phi: Template, w: BitString, length: int, work_cap: int = 1 << 16
) -> bool | None:
    """Is there no ``x`` with ``|x| == length``, prefix ``w`` and ``Phi(x)``?

    Exact for analytic templates; ``SIGMA1_REF`` is decided by exhaustion when
    the number of candidate ``x`` is at most ``work_cap``, else ``None``.
    """
    if len(w) > length:
        return True
    kind = phi.kind
    if kind == BEGINS_WITH_1:
        return length == 0 or (len(w) > 0 and w[0] == "0")
    if kind == EVEN_LENGTH:
        return length % 2 == 1
    if kind == BIT_J_IS_1:
        j = phi.param
        return j >= length or (j < len(w) and w[j] == "0")
    if kind == SIGMA1_REF:
        if 1 << (length - len(w)) > work_cap:
            return None
        return not any(eval_phi(phi, x) for x in words_with_prefix(w, length))
    raise ValueError(f"unknown template kind {kind!r}")


def sentences(phi, c: int) -> Iterable[SentencePhiW]:
    return (SentencePhiW(phi, w) for w in lex_words(c))


__all__ = [
    "ANALYTIC_KINDS", "BEGINS_WITH_1", "BIT_J_IS_1", "EVEN_LENGTH", "KINDS", "SIGMA1_REF",
    "SentencePhiW", "Sigma1Verifier", "StepBudgetExceeded", "Template", "Verdict",
    "VerifierError", "VerifierLibrary", "all_templates", "analytic_truth", "build_phi_w",
    "decide_at_length", "default_library", "eval_phi", "horizon_truth", "is_prefix",
    "load_library", "make_template", "phi_w_truth", "template_from_code", "words_with_prefix",
]
