"""
Reproducible experiment reports
===============================

Every experiment is an ``ExperimentSpec``.  Running one returns a report
whose results depend only on that ``ExperimentSpec``, byte for byte, however
warm the caches are.
"""

# %%
import json
import tempfile
from pathlib import Path

from pcgen.harness import ExperimentSpec, clear_caches, run

out = Path(tempfile.mkdtemp()) / "reports.jsonl"
spec = ExperimentSpec("RANGE_SCAN", {"n_values": [4, 5, 6]}, seed=3, output_path=str(out))
report = run(spec)
print(report.passed, report.assertions)
print(report.results_json()[:120], "...")

# %%
clear_caches()
again = run(spec)
print("identical after clearing caches:", again.results_json() == report.results_json())

# %%
# Each run appends one JSON line.
for line in out.read_text().splitlines():
    doc = json.loads(line)
    print(doc["spec"]["kind"], doc["passed"])

# %%
# Malformed specs name the offending field.
try:
    ExperimentSpec("RANGE_SCAN", {"n_values": "many"}, seed=0).validated()
except ValueError as exc:
    print(type(exc).__name__, exc.field, exc)
