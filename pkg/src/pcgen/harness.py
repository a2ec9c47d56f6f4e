"""Experiment specs, independent oracles, and append-only JSON reports.

Every randomized choice is drawn from ``random.Random(spec.seed)`` (Python's
Mersenne Twister), so a spec and its seed fix the ``results`` section of the
report byte for byte.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .bitcodec import lex_words
from .circuits import Budget, count_up_to, enumerate_circuits, tt
from .folang import (
    ANALYTIC_KINDS,
    BEGINS_WITH_1,
    BIT_J_IS_1,
    EVEN_LENGTH,
    SIGMA1_REF,
    Template,
    all_templates,
    make_template,
)
from .gen_fo import GenConfig, g_T, hitting_experiment, incompleteness_demo, range_scan
from .gen_prop import PropGenConfig, h_P, prop_hitting_experiment, soundness_check, step_report
from .proplogic import (
    MAX_BRUTE_ATOMS,
    SCHEMA_LEN,
    claim_table,
    get_system,
    is_tautology_bruteforce,
    schema_proof,
    translate,
    translate_counted,
    tt_proof,
)

ORACLE_MAX_LEN = 20
KINDS = ("STRETCH", "RANGE_SCAN", "HIT_TEST", "INCOMPLETENESS",
         "TRANSLATE_AUDIT", "STEP_AUDIT", "PTIME")


class SchemaError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# Independent oracle.  It shares nothing with folang's interpreter or with
# translate: the bytecode is re-tokenized here, and witnesses are enumerated
# at exactly the bound length (shorter witnesses read as zero-padded).

def _oracle_accepts(tokens: list[str], x: str, y: str) -> bool:
    def bit(s, i):
        return i < len(s) and s[i] == "1"

    stack = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t in ("0", "1"):
            stack.append(t == "1")
            i += 1
        elif t in ("X", "Y"):
            stack.append(bit(x if t == "X" else y, int(tokens[i + 1])))
            i += 2
        elif t in ("XAT", "XIN"):
            a, b = int(tokens[i + 1]), int(tokens[i + 2])
            idx = 0
            for p in range(a, b):
                idx = 2 * idx + (1 if bit(y, p) else 0)
            stack.append(idx < len(x) and (t == "XIN" or x[idx] == "1"))
            i += 3
        elif t == "NOT":
            stack.append(not stack.pop())
            i += 1
        elif t in ("AND", "OR"):
            r, l = stack.pop(), stack.pop()
            stack.append((l and r) if t == "AND" else (l or r))
            i += 1
        elif t == "ACCEPT":
            return stack.pop()
        else:
            raise ValueError(f"oracle: unknown token {t!r}")
    raise ValueError("oracle: no ACCEPT")


def _oracle_phi(phi: Template) -> Callable[[str], bool]:
    if phi.kind == BEGINS_WITH_1:
        return lambda x: x.startswith("1")
    if phi.kind == EVEN_LENGTH:
        return lambda x: len(x) % 2 == 0
    if phi.kind == BIT_J_IS_1:
        j = phi.param
        return lambda x: len(x) > j and x[j] == "1"
    if phi.kind == SIGMA1_REF:
        v = phi.verifier
        tokens = v.bytecode.split()
        coeffs = v.witness_bound

        def pred(x):
            m = 0
            for c in reversed(coeffs):
                m = m * len(x) + c
            return any(_oracle_accepts(tokens, x, format(y, f"0{m}b") if m else "")
                       for y in range(1 << m))
        return pred
    raise ValueError(f"oracle: no definition for {phi.kind}")


def oracle_set_members(phi: Template, length: int) -> set[str]:
    """``{x : |x| = length, Phi(x)}`` by exhaustive enumeration."""
    if length > ORACLE_MAX_LEN:
        raise ValueError(f"oracle refuses length {length} > {ORACLE_MAX_LEN}")
    if length < 0:
        raise ValueError("length must be non-negative")
    pred = _oracle_phi(phi)
    return {format(i, f"0{length}b") if length else "" for i in range(1 << length)
            if pred(format(i, f"0{length}b") if length else "")}


# Specs and reports

_SCHEMAS: dict[str, dict[str, tuple[type, Any]]] = {
    "STRETCH": {"max_len": (int, 12), "backends": (list, ["CERT", "EMPTY"]),
                "systems": (list, ["TT", "SCH"])},
    "RANGE_SCAN": {"n_values": (list, [10]), "profile": (str, "DESK"), "backend": (str, "CERT")},
    "HIT_TEST": {"generator": (str, "fo"), "kind": (str, BEGINS_WITH_1), "param": (int, 0),
                 "n_values": (list, [8, 9, 10, 11, 12]), "cap": (int, 256),
                 "profile": (str, "DESK"), "backend": (str, "CERT"), "system": (str, "SCH")},
    "INCOMPLETENESS": {"horizon": (int, 12), "code_length": (int, 3),
                       "profile": (str, "DESK"), "backend": (str, "CERT")},
    "TRANSLATE_AUDIT": {"max_w": (int, 3), "max_n": (int, 6), "max_atoms": (int, MAX_BRUTE_ATOMS),
                        "include_sigma1": (bool, True), "systems": (list, ["TT", "SCH"])},
    "STEP_AUDIT": {"exhaustive_max_len": (int, 12), "n_values": (list, [16, 17]), "samples": (int, 24),
                   "systems": (list, ["TT", "SCH"])},
    "PTIME": {"n_min": (int, 4), "n_max": (int, 64), "samples": (int, 32),
              "reseed": (int, 1), "backend": (str, "CERT"), "factor": (float, 4.0)},
}


@dataclass
class ExperimentSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None

    def validated(self) -> dict:
        if self.kind not in _SCHEMAS:
            raise SchemaError("kind", f"unknown experiment kind {self.kind!r}; choose from {list(KINDS)}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 1 << 64:
            raise SchemaError("seed", "must be a 64-bit unsigned integer")
        schema = _SCHEMAS[self.kind]
        out = {}
        for name in self.params:
            if name not in schema:
                raise SchemaError(f"params.{name}", f"not a parameter of {self.kind}")
        for name, (typ, default) in schema.items():
            value = self.params.get(name, default)
            if typ is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
                raise SchemaError(f"params.{name}", f"expected {typ.__name__}, got {value!r}")
            out[name] = value
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params, "seed": self.seed,
                "output_path": self.output_path}

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        if "kind" not in doc:
            raise SchemaError("kind", "missing")
        return cls(doc["kind"], dict(doc.get("params", {})), doc.get("seed", 0), doc.get("output_path"))


@dataclass
class Report:
    spec: dict
    results: dict
    assertions: dict[str, bool]
    tool_version: str = __version__
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.assertions.values())

    def results_json(self) -> str:
        return json.dumps({"results": self.results, "assertions": self.assertions}, sort_keys=True)

    def to_dict(self) -> dict:
        return {"spec": self.spec, "results": self.results, "assertions": self.assertions,
                "passed": self.passed, "tool_version": self.tool_version,
                "wall_time": round(self.wall_time, 3)}


def _gen_cfg(profile: str, backend: str) -> GenConfig:
    if profile.upper() == "PAPER":
        return GenConfig.paper(backend)
    if profile.upper() == "DESK":
        return GenConfig.desk(backend)
    raise SchemaError("params.profile", f"unknown profile {profile!r}")


def _prop_cfg(profile: str, system: str) -> PropGenConfig:
    if profile.upper() == "PAPER":
        return PropGenConfig.paper(system)
    if profile.upper() == "DESK":
        return PropGenConfig.desk(system)
    raise SchemaError("params.profile", f"unknown profile {profile!r}")


def _run_stretch(p, rng):
    rows = []
    gens = [("g_T", b, lambda u, cfg=GenConfig.desk(b): g_T(u, cfg)[0]) for b in p["backends"]]
    gens += [("h_P", s, lambda u, cfg=PropGenConfig.desk(s): h_P(u, cfg)[0]) for s in p["systems"]]
    for name, variant, fn in gens:
        bad = []
        total = 0
        for length in range(1, p["max_len"] + 1):
            for u in lex_words(length):
                total += 1
                if len(fn(u)) != length + 1:
                    bad.append(u)
        rows.append({"generator": name, "variant": variant, "inputs": total, "violations": bad[:8],
                     "violation_count": len(bad)})
    return {"rows": rows}, {"stretch": all(r["violation_count"] == 0 for r in rows)}


def _run_range_scan(p, rng):
    cfg = _gen_cfg(p["profile"], p["backend"])
    rows = []
    for n in p["n_values"]:
        rng_set = range_scan(int(n), cfg)
        rows.append({"n": n, "range_size": len(rng_set), "bound": 1 << n,
                     "complement_size": (1 << (n + 1)) - len(rng_set),
                     "complement_example": next((x for x in lex_words(n + 1) if x not in rng_set), None)})
    ok = all(r["range_size"] <= r["bound"] and r["complement_size"] > 0 for r in rows)
    return {"rows": rows}, {"range_bounded_and_complement_nonempty": ok}


def _run_hit_test(p, rng):
    phi = make_template(p["kind"], p["param"])
    seed = rng.getrandbits(32)
    if p["generator"] == "fo":
        res = hitting_experiment(phi, p["n_values"], _gen_cfg(p["profile"], p["backend"]),
                                 cap=p["cap"], seed=seed)
        return res, {"hit_every_n": res["hit_every_n"], "w0_constant": res["w0_constant"]}
    if p["generator"] == "prop":
        res = prop_hitting_experiment(phi, p["n_values"], _prop_cfg(p["profile"], p["system"]),
                                      cap=p["cap"], seed=seed)
        rows = [r for r in res["rows"] if not r["guard_tripped"]]
        ok = all(r["all_hit"] for r in rows if r["w0_false_analytic"])
        return res, {"hits_whenever_w0_false": ok,
                     "all_inputs_hit": bool(rows) and all(r["all_hit"] for r in rows)}
    raise SchemaError("params.generator", "must be 'fo' or 'prop'")


def _run_incompleteness(p, rng):
    res = incompleteness_demo(_gen_cfg(p["profile"], p["backend"]), p["horizon"], p["code_length"])
    return res, {"unproved_true_nonempty": bool(res["unproved_true"]),
                 "horizon_bounded": res["horizon_bounded"] is True}


def _candidate_proofs(f, phi, w, n, system_name):
    """Honest and corrupted proof strings for a soundness probe."""
    out = []
    if f.n_atoms <= MAX_BRUTE_ATOMS:
        honest = tt_proof(f)
        out += [honest, "1" * len(honest)]
    if system_name == "SCH":
        out = ["0" + p for p in out]
        if len(w) <= 15:
            out.append(schema_proof(phi, w, n))
        row = claim_table(phi, len(w), n)
        if row is not None:
            out.append(row)
            out.append("1" * len(row))
        out.append("0" * SCHEMA_LEN)
    return out


def _run_translate_audit(p, rng):
    templates = [t for t in all_templates()
                 if t.kind in ANALYTIC_KINDS or (p["include_sigma1"] and t.kind == SIGMA1_REF)]
    systems = {s: get_system(s) for s in p["systems"]}
    checked = skipped = 0
    mismatches = []
    accepted = dict.fromkeys(systems, 0)
    unsound = []
    members_cache: dict = {}
    for phi in templates:
        for wl in range(1, p["max_w"] + 1):
            for w in lex_words(wl):
                for n in range(1, p["max_n"] + 1):
                    f = translate(phi, w, n)
                    if f.n_atoms > p["max_atoms"]:
                        skipped += 1
                        continue
                    checked += 1
                    key = (phi, n + 1)
                    if key not in members_cache:
                        members_cache[key] = oracle_set_members(phi, n + 1)
                    empty = not any(x.startswith(w) for x in members_cache[key])
                    taut = is_tautology_bruteforce(f)
                    if taut != empty:
                        mismatches.append({"phi": phi.id, "w": w, "n": n, "tautology": taut})
                    for name, system in systems.items():
                        for proof in _candidate_proofs(f, phi, w, n, name):
                            if system.verify(f, proof):
                                accepted[name] += 1
                                if not taut:
                                    unsound.append({"system": name, "phi": phi.id, "w": w, "n": n})
    res = {"templates": [t.id for t in templates], "checked": checked, "skipped": skipped,
           "mismatches": mismatches, "accepted_proofs": accepted, "unsound": unsound}
    return res, {"translation_equivalence": checked > 0 and not mismatches,
                 "proof_systems_sound": not unsound}


def _run_step_audit(p, rng):
    templates = [t for t in all_templates() if t.translatable]
    rows = []
    for name in p["systems"]:
        cfg = PropGenConfig.desk(name)
        runs = violations = unsound = tripped = 0
        inputs = [u for m in range(1, p["exhaustive_max_len"] + 1) for u in lex_words(m)]
        for n in p["n_values"]:
            fits = [t for t in templates if len(t) <= n]
            for _ in range(p["samples"]):
                if fits and rng.random() < 0.75:
                    phi = rng.choice(fits)
                    inputs.append(phi.code + "".join(rng.choice("01") for _ in range(n - len(phi))))
                else:
                    inputs.append("".join(rng.choice("01") for _ in range(n)))
        audited = set()
        for u in inputs:
            n = len(u)
            _, trace = h_P(u, cfg)
            runs += 1
            tripped += trace.guard_tripped
            violations += len(step_report(trace, n, cfg)["violations"])
            # The sweep depends only on (decoded formula, n); brute-force each pair once.
            if trace.decoded is not None and (trace.decoded, n) not in audited:
                audited.add((trace.decoded, n))
                decoded = next(t for t in templates if t.id == trace.decoded)
                unsound += len(soundness_check(trace, decoded, n))
        rows.append({"system": name, "runs": runs, "guard_tripped": tripped,
                     "violations": violations, "unsound": unsound})
    return {"rows": rows}, {"factor_bounds": all(r["violations"] == 0 for r in rows),
                            "proofs_are_tautologies": all(r["unsound"] == 0 for r in rows)}


def _fit_cubic(points: list[tuple[int, int]]) -> dict:
    """Least-squares ``c`` for ``steps ~ c n^3``, the envelope ``max steps/n^3``, and the log-log slope."""
    import numpy as np

    ns = np.array([p[0] for p in points], dtype=float)
    steps = np.array([max(1, p[1]) for p in points], dtype=float)
    c = float(np.sum(steps * ns ** 3) / np.sum(ns ** 6))
    envelope = float(np.max(steps / ns ** 3))
    slope = float(np.polyfit(np.log(ns), np.log(steps), 1)[0]) if len(set(ns)) > 1 else 0.0
    return {"c": round(c, 9), "envelope": round(envelope, 9), "slope": round(slope, 6)}


def _ptime_points(p, rng, cfg):
    """Worst counted steps at each sampled ``n`` over every decodable prefix plus a random input."""
    templates = all_templates()
    gen_pts, tr_pts = [], []
    # The endpoints are always measured; the rest of the n are drawn at random.
    ns = [p["n_min"], p["n_max"]] + [rng.randint(p["n_min"], p["n_max"]) for _ in range(p["samples"] - 2)]
    for n in ns:
        rand = lambda m: "".join(rng.choice("01") for _ in range(m))
        inputs = [t.code + rand(n - len(t)) for t in templates if len(t) <= cfg.formula_len_bound(n)]
        inputs.append(rand(n))
        gen_pts.append((n, max(g_T(u, cfg)[1].steps for u in inputs)))
        tr_pts.append((n, max(translate_counted(t, rand(rng.randint(1, 4)), n)[1] for t in templates)))
    return gen_pts, tr_pts


def _run_ptime(p, rng):
    cfg = GenConfig.paper(p["backend"])
    fits = []
    for rerun in range(2):
        r = rng if rerun == 0 else random.Random(rng.getrandbits(64) ^ p["reseed"])
        gen_pts, tr_pts = _ptime_points(p, r, cfg)
        fits.append({"g_T": _fit_cubic(gen_pts), "translate": _fit_cubic(tr_pts),
                     "n_sampled": sorted({n for n, _ in gen_pts})})
    ratios = {}
    for key in ("g_T", "translate"):
        for fit in ("c", "envelope"):
            a, b = fits[0][key][fit], fits[1][key][fit]
            ratios[f"{key}.{fit}"] = round(max(a, b) / min(a, b), 6)
    f = p["factor"]
    return {"fits": fits, "ratios": ratios}, {
        "g_T_c_stable": max(ratios["g_T.c"], ratios["g_T.envelope"]) <= f,
        "translate_c_stable": max(ratios["translate.c"], ratios["translate.envelope"]) <= f,
        "g_T_slope_at_most_3": all(x["g_T"]["slope"] <= 3.0 for x in fits),
        "translate_slope_at_most_3": all(x["translate"]["slope"] <= 3.0 for x in fits),
    }


_RUNNERS = {
    "STRETCH": _run_stretch,
    "RANGE_SCAN": _run_range_scan,
    "HIT_TEST": _run_hit_test,
    "INCOMPLETENESS": _run_incompleteness,
    "TRANSLATE_AUDIT": _run_translate_audit,
    "STEP_AUDIT": _run_step_audit,
    "PTIME": _run_ptime,
}


def run(spec: ExperimentSpec) -> Report:
    params = spec.validated()
    rng = random.Random(spec.seed)
    t0 = time.perf_counter()
    results, assertions = _RUNNERS[spec.kind](params, rng)
    report = Report(spec={"kind": spec.kind, "params": params, "seed": spec.seed},
                    results=json.loads(json.dumps(results, sort_keys=True)),
                    assertions=assertions, wall_time=time.perf_counter() - t0)
    if spec.output_path:
        path = Path(spec.output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    return report


def enum_circuit_summary(k: int, size: int, list_limit: int = 0) -> dict:
    b = Budget(k, size)
    seen = set()
    listed = []
    total = 0
    for d in enumerate_circuits(b, k):
        total += 1
        seen.add((d.gates, d.output))
        if len(listed) < list_limit:
            listed.append({"text": d.to_text(), "tt": tt(d)})
    closed = count_up_to(k, size)
    return {"inputs": k, "size": size, "count": total, "closed_form": closed,
            "duplicate_free": len(seen) == total, "circuits": listed}


def acceptance_specs(seed: int = 0) -> list[tuple[str, ExperimentSpec]]:
    """One spec per acceptance criterion (criterion 10 reruns the others)."""
    return [
        ("1", ExperimentSpec("STRETCH", {"max_len": 12}, seed)),
        ("2", ExperimentSpec("RANGE_SCAN", {"n_values": list(range(3, 13))}, seed)),
        ("3", ExperimentSpec("HIT_TEST", {"generator": "fo", "n_values": list(range(8, 15))}, seed)),
        ("4+5", ExperimentSpec("TRANSLATE_AUDIT", {"max_w": 3, "max_n": 6}, seed)),
        ("6", ExperimentSpec("HIT_TEST", {"generator": "prop", "system": "SCH", "n_values": [16],
                                          "cap": 1 << 13}, seed)),
        ("7", ExperimentSpec("STEP_AUDIT", {}, seed)),
        ("8", ExperimentSpec("INCOMPLETENESS", {"horizon": 12}, seed)),
        ("9", ExperimentSpec("PTIME", {}, seed)),
    ]



def clear_caches() -> None:
    """Drop every memo table so a rerun recomputes from scratch."""
    from . import gen_fo, gen_prop, proplogic

    gen_fo._sweep.cache_clear()
    gen_prop._sweep.cache_clear()
    proplogic._translate_cached.cache_clear()
    proplogic.claim_table.cache_clear()
