"""The proof-search generator ``g_T`` and the experiments built on it.

On input ``u`` of length ``n``:

1. decode the unique formula ``Phi`` prefixing ``u`` with ``|Phi| <=
   formula_len_bound(n)``; if there is none, output ``0^(n+1)``;
2. with ``c = |Phi| + 1``, sweep ``w`` over ``{0,1}^c`` in lex order and search
   for a proof of ``Phi^w`` of size ``<= proof_size_bound(n)``; if every ``w``
   has one, output ``0^(n+1)``;
3. otherwise output ``w0 + u0`` for the first unproved ``w0``, where
   ``u = Phi + u0``.
"""

from __future__ import annotations

import functools
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .bitcodec import (
    BitString,
    CodeTable,
    check_bits,
    decode_formula_prefix,
    default_code_table,
    lex_words,
    zeros,
)
from .folang import (
    SentencePhiW,
    Template,
    Verdict,
    VerifierLibrary,
    default_library,
    eval_phi,
    horizon_truth,
    phi_w_truth,
    template_from_code,
)
from .theory import TheoryBackend, get_backend, search_proof_counted

MAX_SCAN_N = 20
MAX_HORIZON = 16

PAPER = "PAPER"
DESK = "DESK"


def floor_log2(n: int) -> int:
    return n.bit_length() - 1 if n >= 1 else 0


def desk_formula_bound(n: int) -> int:
    return n


def desk_proof_bound(n: int) -> int:
    return 8


@dataclass(frozen=True)
class GenConfig:
    profile: str
    formula_len_bound: Callable[[int], int]
    proof_size_bound: Callable[[int], int]
    backend: TheoryBackend
    code_table: CodeTable = field(default_factory=default_code_table)
    library: VerifierLibrary = field(default_factory=default_library)

    @classmethod
    def paper(cls, backend: TheoryBackend | str = "CERT", **kw) -> "GenConfig":
        if isinstance(backend, str):
            backend = get_backend(backend)
        return cls(PAPER, floor_log2, floor_log2, backend, **kw)

    @classmethod
    def desk(
        cls,
        backend: TheoryBackend | str = "CERT",
        formula_len_bound: Callable[[int], int] = desk_formula_bound,
        proof_size_bound: Callable[[int], int] = desk_proof_bound,
        **kw,
    ) -> "GenConfig":
        if isinstance(backend, str):
            backend = get_backend(backend)
        return cls(DESK, formula_len_bound, proof_size_bound, backend, **kw)

    def describe(self) -> dict:
        return {"profile": self.profile, "backend": self.backend.name,
                "code_table": self.code_table.version, "library": self.library.version}


@dataclass
class GenTrace:
    n: int
    decoded: str | None = None
    c: int = 0
    proofs_found: list[tuple[BitString, bool]] = field(default_factory=list)
    w0: BitString | None = None
    output: BitString = ""
    steps: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["proofs_found"] = [list(p) for p in self.proofs_found]
        return d


@functools.lru_cache(maxsize=4096)
def _sweep(phi, c: int, size_bound: int, backend: TheoryBackend):
    """Proof search for every ``Phi^w``, ``w`` in ``{0,1}^c``, stopping at the first failure."""
    rows = []
    steps = 0
    for w in lex_words(c):
        proof, cost = search_proof_counted(backend, SentencePhiW(phi, w), size_bound)
        steps += cost
        rows.append((w, proof is not None))
        if proof is None:
            break
    return tuple(rows), steps


def decode_template(u: BitString, max_len: int, table: CodeTable, library: VerifierLibrary):
    """Step 1: returns ``(template, u0, steps)`` or ``(None, u, steps)``."""
    hit = decode_formula_prefix(u, max_len, table)
    steps = 1 + sum(min(len(e.code), len(u)) for e in table.entries)
    if hit is None:
        return None, u, steps
    code, u0 = hit
    steps += len(code.params)
    phi = template_from_code(code, table, library)
    if phi is None:
        return None, u, steps
    return phi, u0, steps


def g_T(u: BitString, cfg: GenConfig) -> tuple[BitString, GenTrace]:
    check_bits(u)
    n = len(u)
    if n < 1:
        raise ValueError("g_T needs |u| >= 1")
    trace = GenTrace(n=n)
    phi, u0, steps = decode_template(u, cfg.formula_len_bound(n), cfg.code_table, cfg.library)
    if phi is None:
        trace.output = zeros(n + 1)
        trace.steps = steps + n + 1
        return trace.output, trace
    trace.decoded = phi.id
    trace.c = c = len(phi) + 1
    rows, sweep_steps = _sweep(phi, c, cfg.proof_size_bound(n), cfg.backend)
    trace.proofs_found = list(rows)
    steps += sweep_steps
    unproved = [w for w, found in rows if not found]
    if unproved:
        trace.w0 = unproved[0]
        trace.output = trace.w0 + u0
    else:
        trace.output = zeros(n + 1)
    trace.steps = steps + n + 1
    assert len(trace.output) == n + 1
    return trace.output, trace


def range_scan(n: int, cfg: GenConfig) -> set[BitString]:
    """Exhaustive range ``{g_T(u) : |u| = n}``."""
    if n > MAX_SCAN_N:
        raise ValueError(f"range_scan is exhaustive over 2^n inputs; n={n} exceeds {MAX_SCAN_N}")
    if n < 1:
        raise ValueError("range_scan needs n >= 1")
    return {g_T(u, cfg)[0] for u in lex_words(n)}


def suffixes(length: int, cap: int, rng: random.Random) -> list[BitString]:
    """All words of ``length`` if there are at most ``cap``, else ``cap`` seeded samples."""
    if length < 0:
        return []
    if (1 << length) <= cap:
        return list(lex_words(length))
    picks = sorted(rng.sample(range(1 << length), cap))
    return [format(i, f"0{length}b") for i in picks]


def hitting_experiment(
    phi: Template, n_values: Iterable[int], cfg: GenConfig, cap: int = 256, seed: int = 0
) -> dict:
    """Feed ``Phi + u0`` to ``g_T`` and record outputs that land in ``{x : Phi(x)}``."""
    rng = random.Random(seed)
    rows = []
    for n in n_values:
        u0s = suffixes(n - len(phi), cap, rng)
        hits = []
        w0s = set()
        for u0 in u0s:
            out, trace = g_T(phi.code + u0, cfg)
            w0s.add(trace.w0)
            if eval_phi(phi, out):
                hits.append(out)
        rows.append({
            "n": n,
            "inputs": len(u0s),
            "w0": next(iter(w0s)) if len(w0s) == 1 else None,
            "w0_values": sorted(w for w in w0s if w is not None),
            "hit": bool(hits),
            "hits": len(hits),
            "example": hits[0] if hits else None,
        })
    w0_set = {r["w0"] for r in rows}
    return {
        "phi": phi.id,
        "config": cfg.describe(),
        "rows": rows,
        "w0_constant": len(w0_set) == 1,
        "hit_every_n": all(r["hit"] for r in rows),
    }


class RangeComplement:
    """Desk-scale ``x not in Rng(g_T)``, computed by exhaustive range scans.

    Not part of the code table: ``g_T`` itself never decodes it.
    """

    def __init__(self, cfg: GenConfig, code_length: int = 3):
        self.cfg = cfg
        self.code_length = code_length
        self._ranges: dict[int, set[BitString]] = {}

    id = "RANGE_COMPLEMENT"

    def __len__(self) -> int:
        return self.code_length

    def range_at(self, length: int) -> set[BitString]:
        if length not in self._ranges:
            self._ranges[length] = range_scan(length - 1, self.cfg) if length >= 2 else set()
        return self._ranges[length]

    def __call__(self, x: BitString) -> bool:
        return x not in self.range_at(len(x))


def incompleteness_demo(cfg: GenConfig, horizon: int = 12, code_length: int = 3) -> dict:
    """List true-up-to-horizon sentences about the range complement that go unproved."""
    c = code_length + 1
    if horizon > MAX_HORIZON:
        raise ValueError(f"horizon {horizon} exceeds {MAX_HORIZON}")
    if horizon < c:
        raise ValueError(f"horizon {horizon} is shorter than |w| = {c}")
    comp = RangeComplement(cfg, code_length)
    bound = cfg.proof_size_bound(horizon)
    rows = []
    for w in lex_words(c):
        verdict = horizon_truth(comp, w, horizon)
        proof, _ = search_proof_counted(cfg.backend, SentencePhiW(comp, w), bound)
        rows.append({"w": w, "truth": verdict.value, "proved": proof is not None})
    unproved_true = [
        {"w": r["w"], "status": "unproved", "truth": r["truth"]}
        for r in rows
        if r["truth"] == Verdict.TRUE_UP_TO_HORIZON.value and not r["proved"]
    ]
    return {
        "horizon": horizon,
        "horizon_bounded": True,
        "config": cfg.describe(),
        "proof_size_bound": bound,
        "rows": rows,
        "unproved_true": unproved_true,
    }


def fo_report(u: BitString, cfg: GenConfig) -> dict:
    out, trace = g_T(u, cfg)
    return {"n": len(u), "w0": trace.w0, "output": out, "hits": [], "unproved_true": [],
            "trace": trace.to_dict(), "config": cfg.describe()}


def proof_threshold(phi: Template, cfg: GenConfig, n_max: int = 1 << 12) -> dict:
    """Smallest ``n`` at which ``g_T`` decodes ``phi`` and proves every true ``Phi^w``.

    An empirical figure for this backend and profile.  Library formulas are
    judged at a horizon just beyond their stabilization length, which makes
    the verdict exact for them (the report still says which kind it is).
    """
    c = len(phi) + 1
    horizon = c
    if not phi.analytic:
        horizon = min(MAX_HORIZON, max(c, phi.verifier.stabilization_length()) + 2)
    true_ws = [w for w in lex_words(c) if not phi_w_truth(SentencePhiW(phi, w), horizon).is_false]
    proved_at: dict[int, bool] = {}
    threshold = None
    for n in range(1, n_max + 1):
        if cfg.formula_len_bound(n) < len(phi):
            continue
        bound = cfg.proof_size_bound(n)
        if bound not in proved_at:
            proved_at[bound] = all(
                search_proof_counted(cfg.backend, SentencePhiW(phi, w), bound)[0] is not None
                for w in true_ws
            )
        if proved_at[bound]:
            threshold = n
            break
    return {
        "phi": phi.id,
        "config": cfg.describe(),
        "true_sentences": len(true_ws),
        "truth": "analytic" if phi.analytic else f"horizon {horizon}",
        "threshold": threshold,
        "proof_size_bound": cfg.proof_size_bound(threshold) if threshold else None,
    }
