"""The propositional generator ``h_P``: translation under a step guard, then circuit search.

For each ``w`` in ``{0,1}^c`` (lex order) the Sigma1 statement "no ``x`` of
length ``n+1`` with prefix ``w`` satisfies ``Phi``" is translated to a
propositional formula.  A translation exceeding the guard stops the run with
output ``0^(n+1)``.  Otherwise every circuit within budget is tried, inputs
ascending and then in canonical order, until the truth table of one is an
accepted proof.  The first ``w`` without such a circuit becomes ``w0``.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .bitcodec import (
    BitString,
    CodeTable,
    check_bits,
    default_code_table,
    lex_words,
    table_to_bits,
    zeros,
)
from .circuits import Budget, budget, count_up_to, enumerate_tables
from .folang import Template, VerifierLibrary, analytic_truth, default_library, eval_phi
from .gen_fo import DESK, PAPER, decode_template, floor_log2, suffixes
from .proplogic import (
    PropProofSystem,
    TranslationBudgetExceeded,
    get_system,
    is_tautology_bruteforce,
    translate_counted,
)


def paper_guard(n: int) -> int:
    return n ** max(1, math.ceil(math.log2(n))) if n >= 2 else 1


def desk_guard(n: int) -> int:
    return 1 << 20


def desk_budget(n: int) -> Budget:
    return Budget(max(1, floor_log2(n)), max(1, floor_log2(floor_log2(n))))


def desk_formula_bound(n: int) -> int:
    return n


@dataclass(frozen=True)
class PropGenConfig:
    profile: str
    system: PropProofSystem
    formula_len_bound: Callable[[int], int]
    translate_step_guard: Callable[[int], int]
    budget_fn: Callable[[int], Budget]
    code_table: CodeTable = field(default_factory=default_code_table)
    library: VerifierLibrary = field(default_factory=default_library)
    # Per-w cap on circuits tried; None means the full budget is swept.
    circuit_cap: int | None = None

    @classmethod
    def paper(cls, system: PropProofSystem | str = "SCH", circuit_cap: int | None = 1 << 16, **kw):
        if isinstance(system, str):
            system = get_system(system)
        return cls(PAPER, system, floor_log2, paper_guard, budget, circuit_cap=circuit_cap, **kw)

    @classmethod
    def desk(
        cls,
        system: PropProofSystem | str = "SCH",
        formula_len_bound: Callable[[int], int] = desk_formula_bound,
        translate_step_guard: Callable[[int], int] = desk_guard,
        budget_fn: Callable[[int], Budget] = desk_budget,
        **kw,
    ):
        if isinstance(system, str):
            system = get_system(system)
        return cls(DESK, system, formula_len_bound, translate_step_guard, budget_fn, **kw)

    def describe(self) -> dict:
        return {"profile": self.profile, "system": self.system.name,
                "code_table": self.code_table.version, "library": self.library.version,
                "circuit_cap": self.circuit_cap}


@dataclass
class WRecord:
    w: BitString
    translation_steps: int
    circuits_tried: int = 0
    proof_found: bool = False
    max_check_steps: int = 0
    formula_size: int = 0
    proof: BitString | None = None
    proof_k: int | None = None
    guard_tripped: bool = False
    truncated: bool = False


@dataclass
class PropGenTrace:
    n: int
    decoded: str | None = None
    c: int = 0
    per_w: list[WRecord] = field(default_factory=list)
    w0: BitString | None = None
    output: BitString = ""
    total_steps: int = 0
    guard: int = 0
    budget: tuple[int, int] = (0, 0)
    guard_tripped: bool = False

    @property
    def completed(self) -> bool:
        return not self.guard_tripped

    def to_dict(self) -> dict:
        return asdict(self)


def search_circuit_proof(f, system: PropProofSystem, b: Budget, cap: int | None = None) -> WRecord:
    """Sweep circuits for a truth table that ``system`` accepts as a proof of ``f``."""
    rec = WRecord(w="", translation_steps=0, formula_size=f.size())
    for k in range(1, b.k_max + 1):
        if not system.admits_length(f, 1 << k):
            continue
        seen: dict[int, bool] = {}
        for gates, table in enumerate_tables(k, b.size_max):
            if cap is not None and rec.circuits_tried >= cap:
                rec.truncated = True
                return rec
            rec.circuits_tried += 1
            if table in seen:
                continue
            proof = table_to_bits(table, k)
            ok, cost = system.check(f, proof)
            seen[table] = ok
            rec.max_check_steps = max(rec.max_check_steps, cost)
            if ok:
                rec.proof_found = True
                rec.proof = proof
                rec.proof_k = k
                return rec
    return rec


@functools.lru_cache(maxsize=4096)
def _sweep(phi: Template, n: int, c: int, system: PropProofSystem, b: Budget,
           guard: int, cap: int | None) -> tuple[tuple[WRecord, ...], bool]:
    rows = []
    for w in lex_words(c):
        try:
            f, steps = translate_counted(phi, w, n, step_limit=guard)
        except TranslationBudgetExceeded as exc:
            rows.append(WRecord(w=w, translation_steps=exc.steps, guard_tripped=True))
            return tuple(rows), True
        rec = search_circuit_proof(f, system, b, cap)
        rec.w = w
        rec.translation_steps = steps
        rows.append(rec)
        if not rec.proof_found:
            break
    return tuple(rows), False


def h_P(u: BitString, cfg: PropGenConfig) -> tuple[BitString, PropGenTrace]:
    check_bits(u)
    n = len(u)
    if n < 1 or (cfg.profile == PAPER and n < 4):
        raise ValueError(f"h_P needs |u| >= {4 if cfg.profile == PAPER else 1} in the {cfg.profile} profile")
    trace = PropGenTrace(n=n)
    phi, u0, steps = decode_template(u, cfg.formula_len_bound(n), cfg.code_table, cfg.library)
    if phi is None or not phi.translatable:
        trace.output = zeros(n + 1)
        trace.total_steps = steps + n + 1
        return trace.output, trace
    trace.decoded = phi.id
    trace.c = c = len(phi) + 1
    trace.guard = guard = cfg.translate_step_guard(n)
    b = cfg.budget_fn(n)
    trace.budget = (b.k_max, b.size_max)
    rows, tripped = _sweep(phi, n, c, cfg.system, b, guard, cfg.circuit_cap)
    # Records are shared through the cache; hand out copies.
    trace.per_w = [WRecord(**asdict(r)) for r in rows]
    trace.guard_tripped = tripped
    steps += sum(r.translation_steps + r.circuits_tried * max(1, r.max_check_steps) for r in rows)
    unproved = [r.w for r in rows if not r.proof_found]
    if tripped or not unproved:
        trace.output = zeros(n + 1)
    else:
        trace.w0 = unproved[0]
        trace.output = trace.w0 + u0
    trace.total_steps = steps + n + 1
    assert len(trace.output) == n + 1
    return trace.output, trace


def step_report(trace: PropGenTrace, n: int, cfg: PropGenConfig) -> dict:
    """Check the four factor bounds of a run against its trace."""
    b = cfg.budget_fn(n)
    guard = cfg.translate_step_guard(n)
    circuit_bound = sum(count_up_to(k, b.size_max) for k in range(1, b.k_max + 1))
    violations = []
    bound_w = 1 << (trace.c + 1)
    if len(trace.per_w) > bound_w:
        violations.append({"factor": "w_count", "value": len(trace.per_w), "bound": bound_w})
    for r in trace.per_w:
        if not r.guard_tripped and r.translation_steps > guard:
            violations.append({"factor": "translation_steps", "w": r.w,
                               "value": r.translation_steps, "bound": guard})
        if r.circuits_tried > circuit_bound:
            violations.append({"factor": "circuits_tried", "w": r.w,
                               "value": r.circuits_tried, "bound": circuit_bound})
        if r.formula_size:
            check_bound = cfg.system.step_cost(r.formula_size + (1 << b.k_max))
            if r.max_check_steps > check_bound:
                violations.append({"factor": "check_steps", "w": r.w,
                                   "value": r.max_check_steps, "bound": check_bound})
    return {
        "n": n,
        "w_count": len(trace.per_w),
        "w_bound": bound_w,
        "guard": guard,
        "circuit_bound": circuit_bound,
        "guard_tripped": trace.guard_tripped,
        "violations": violations,
        "ok": not violations,
    }


def soundness_check(trace: PropGenTrace, phi: Template, n: int, max_atoms: int = 24) -> list[dict]:
    """Brute-force re-check of every recorded proof; returns disagreements."""
    bad = []
    for r in trace.per_w:
        if not r.proof_found:
            continue
        f, _ = translate_counted(phi, r.w, n)
        if f.n_atoms <= max_atoms and not is_tautology_bruteforce(f):
            bad.append({"w": r.w, "proof": r.proof})
    return bad


def schema_threshold(phi: Template, cfg: PropGenConfig, n_max: int = 64) -> int | None:
    """Smallest ``n`` whose budget admits circuits with ``2^|w|`` truth-table rows."""
    c = len(phi) + 1
    for n in range(max(1, len(phi)), n_max + 1):
        if cfg.formula_len_bound(n) >= len(phi) and cfg.budget_fn(n).k_max >= c:
            return n
    return None


def prop_hitting_experiment(
    phi: Template, n_values: Iterable[int], cfg: PropGenConfig, cap: int = 256, seed: int = 0
) -> dict:
    rng = random.Random(seed)
    rows = []
    for n in n_values:
        u0s = suffixes(n - len(phi), cap, rng)
        hits = 0
        misses = []
        w0s = set()
        tripped = False
        for u0 in u0s:
            out, trace = h_P(phi.code + u0, cfg)
            w0s.add(trace.w0)
            tripped |= trace.guard_tripped
            if eval_phi(phi, out):
                hits += 1
            elif len(misses) < 4:
                misses.append(out)
        w0 = next(iter(w0s)) if len(w0s) == 1 else None
        false_w0 = w0 is not None and phi.analytic and not analytic_truth(phi, w0)
        rows.append({
            "n": n,
            "inputs": len(u0s),
            "w0": w0,
            "w0_false_analytic": false_w0,
            "guard_tripped": tripped,
            "hits": hits,
            "all_hit": hits == len(u0s),
            "misses": misses,
        })
    return {"phi": phi.id, "config": cfg.describe(), "rows": rows}
