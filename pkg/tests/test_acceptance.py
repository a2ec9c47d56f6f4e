"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run directly (``python tests/test_acceptance.py``) or through pytest, where the
lines appear in the terminal summary.
"""

import time

import pytest

from pcgen.bitcodec import lex_words
from pcgen.folang import BEGINS_WITH_1, eval_phi, make_template
from pcgen.gen_prop import PropGenConfig, h_P, schema_threshold
from pcgen.harness import ExperimentSpec, clear_caches, run

SEED = 20240
RESULTS: dict[str, tuple[bool, str]] = {}
FIRST_RUNS: dict[str, str] = {}
SPECS: dict[str, ExperimentSpec] = {}


def record(label, ok, detail):
    RESULTS[label] = (bool(ok), detail)
    assert ok, f"criterion {label}: {detail}"


def run_criterion(label, spec):
    SPECS[label] = spec
    t0 = time.perf_counter()
    report = run(spec)
    FIRST_RUNS[label] = report.results_json()
    return report, time.perf_counter() - t0


def test_criterion_1_stretch():
    report, secs = run_criterion("1", ExperimentSpec("STRETCH", {"max_len": 12}, SEED))
    rows = {f'{r["generator"]}/{r["variant"]}': r["violation_count"] for r in report.results["rows"]}
    ok = report.passed and secs < 60 and set(rows) == {"g_T/CERT", "g_T/EMPTY", "h_P/TT", "h_P/SCH"}
    record("1", ok, f"violations {rows}, {secs:.1f}s (< 60s)")


def test_criterion_2_range_density():
    report, _ = run_criterion("2", ExperimentSpec("RANGE_SCAN", {"n_values": list(range(3, 13))}, SEED))
    rows = report.results["rows"]
    ok = len(rows) == 10 and all(r["range_size"] <= 2 ** r["n"] and r["complement_size"] > 0 for r in rows)
    record("2", ok, "n=3..12 |range| / 2^n: " + " ".join(f'{r["range_size"]}/{r["bound"]}' for r in rows))


def test_criterion_3_fo_hitting():
    report, _ = run_criterion("3", ExperimentSpec("HIT_TEST", {
        "generator": "fo", "kind": BEGINS_WITH_1, "n_values": list(range(8, 15)), "cap": 256}, SEED))
    rows = report.results["rows"]
    w0s = {r["w0"] for r in rows}
    ok = all(r["hit"] for r in rows) and len(w0s) == 1 and None not in w0s
    record("3", ok, f"hit at n=8..14: {[r['hit'] for r in rows]}, w0 values {sorted(map(str, w0s))}")


def test_criterion_4_and_5_translation_and_soundness():
    report, _ = run_criterion("4+5", ExperimentSpec("TRANSLATE_AUDIT", {
        "max_w": 3, "max_n": 6, "max_atoms": 24, "include_sigma1": True}, SEED))
    res = report.results
    analytic = [t for t in res["templates"] if not t.startswith("SIGMA1_REF")]
    record("4", len(analytic) == 10 and res["checked"] > 0 and not res["mismatches"],
           f'{res["checked"]} instances agree with the oracle, {len(res["mismatches"])} mismatches '
           f'({res["skipped"]} over 24 atoms skipped)')
    record("5", not res["unsound"] and all(v > 0 for v in res["accepted_proofs"].values()),
           f'accepted proofs {res["accepted_proofs"]}, {len(res["unsound"])} unsound')


def test_criterion_6_prop_hitting():
    phi = make_template(BEGINS_WITH_1)
    n = schema_threshold(phi, PropGenConfig.desk("SCH"))
    report, _ = run_criterion("6", ExperimentSpec("HIT_TEST", {
        "generator": "prop", "system": "SCH", "kind": BEGINS_WITH_1, "n_values": [n],
        "cap": 2 ** (n - len(phi))}, SEED))
    row = report.results["rows"][0]
    # smaller n cannot fit the claim table: h_P never finds a proof there
    below = h_P(phi.code + "0" * (n - 1 - len(phi)), PropGenConfig.desk("SCH"))[1]
    ok = (row["inputs"] == 2 ** (n - 3) and row["all_hit"]
          and not any(r.proof_found for r in below.per_w))
    record("6", ok, f'smallest n={n}: {row["hits"]}/{row["inputs"]} outputs begin with 1, w0={row["w0"]}')


def test_criterion_7_step_accounting():
    report, _ = run_criterion("7", ExperimentSpec("STEP_AUDIT", {
        "exhaustive_max_len": 12, "n_values": [16, 17, 18], "samples": 24}, SEED))
    rows = report.results["rows"]
    ok = report.passed and sum(r["violations"] for r in rows) == 0
    record("7", ok, ", ".join(f'{r["system"]}: {r["runs"]} traces, {r["violations"]} violations' for r in rows))


def test_criterion_8_incompleteness():
    report, _ = run_criterion("8", ExperimentSpec("INCOMPLETENESS", {"horizon": 12, "backend": "CERT"}, SEED))
    res = report.results
    ok = res["horizon_bounded"] is True and len(res["unproved_true"]) > 0
    record("8", ok, f'{len(res["unproved_true"])} unproved true-up-to-horizon sentences, '
                    f'e.g. w={res["unproved_true"][0]["w"] if res["unproved_true"] else None}')


def test_criterion_9_ptime():
    report, _ = run_criterion("9", ExperimentSpec("PTIME", {"n_min": 4, "n_max": 64, "samples": 32,
                                                            "factor": 4.0}, SEED))
    ratios = report.results["ratios"]
    ok = report.passed and max(ratios.values()) <= 4.0
    record("9", ok, f"rerun ratios of fitted c (limit 4): {ratios}")


def test_criterion_10_determinism():
    missing = [k for k in ("1", "2", "3", "4+5", "6", "7", "8", "9") if k not in FIRST_RUNS]
    if missing:
        pytest.skip(f"criteria {missing} did not run in this session")
    clear_caches()
    differ = [label for label, spec in SPECS.items() if run(spec).results_json() != FIRST_RUNS[label]]
    record("10", not differ, f"{len(SPECS)} reports rerun from cold caches, differing: {differ}")


def summary_lines():
    lines = []
    for label in ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"]:
        if label in RESULTS:
            ok, detail = RESULTS[label]
            lines.append(f"criterion {label:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            lines.append(f"criterion {label:>2}: FAIL  (did not complete)")
    return lines


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
