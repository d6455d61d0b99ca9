"""Acceptance suite: one test per criterion, at the pinned tolerances.

Each test prints a single ``ACCEPTANCE`` line with the verdict, the
number of checks, the worst rel_diff/tolerance ratio and the runtime.
"""
import re
import subprocess
import sys
import time

import pytest

from besselmeans.config import RunConfig
from besselmeans.verify import SUITES, VerificationReport

CFG = RunConfig()

# check-id pattern -> tolerance each record must carry
PINNED = {
    "1": [(r"/direct-(translation|kernel)$", 1e-6), (r"/translation-kernel$", 1e-8)],
    "2": [(r"^c2/(mean|product)/", 1e-8)],
    "3": [(r"^c3/", 1e-9)],
    "4": [(r"^c4/", 1e-10)],
    "5": [(r"^c5/roundtrip/", 1e-6), (r"^c5/gaussian/", 1e-8), (r"^c5/grid-roundtrip/", 1e-6)],
    "6": [(r"/vs-truth$", 1e-2), (r"^c6/paths$", 1e-6), (r"^c6/convergence/", 1.0)],
    "7": [(r"^c7/", 1e-12)],
    "8": [(r"^c8/ball-shell/", 1e-8), (r"^c8/derivative/", 1e-6), (r"^c8/unit/", 1e-8)],
}

# fewest records each criterion must produce, so a shrinking suite cannot pass quietly
MIN_RECORDS = {"1": 810, "2": 13, "3": 8, "4": 20, "5": 38, "6": 9, "7": 60, "8": 30}

BUDGET_SECONDS = {"1": 300.0, "6": 600.0}

_cache = {}


def run(key):
    if key not in _cache:
        t0 = time.perf_counter()
        recs = SUITES[key](CFG)
        _cache[key] = (recs, time.perf_counter() - t0)
    return _cache[key]


def announce(capsys, key, ok, recs, seconds, note=""):
    worst = max((r.rel_diff / r.tolerance for r in recs if r.tolerance > 0), default=0.0)
    line = (f"ACCEPTANCE criterion {key}: {'PASS' if ok else 'FAIL'}  checks={len(recs)}"
            f"  worst rel/tol={worst:.3g}  time={seconds:.1f}s{note}")
    with capsys.disabled():
        print("\n" + line)


def tolerance_for(key, check_id):
    for pattern, tol in PINNED[key]:
        if re.search(pattern, check_id):
            return tol
    return None


@pytest.mark.parametrize("key", [str(k) for k in range(1, 9)])
def test_criterion(key, capsys):
    recs, seconds = run(key)
    unpinned = [r.check_id for r in recs if tolerance_for(key, r.check_id) is None]
    drifted = [r.check_id for r in recs if tolerance_for(key, r.check_id) not in (None, r.tolerance)]
    failed = [r for r in recs if not r.passed]
    over_budget = key in BUDGET_SECONDS and seconds > BUDGET_SECONDS[key]
    ok = not (unpinned or drifted or failed or over_budget) and len(recs) >= MIN_RECORDS[key]
    note = f"  (budget {BUDGET_SECONDS[key]:.0f}s)" if key in BUDGET_SECONDS else ""
    announce(capsys, key, ok, recs, seconds, note)

    assert len(recs) >= MIN_RECORDS[key]
    assert not unpinned, f"records without a pinned tolerance: {unpinned[:5]}"
    assert not drifted, f"records whose tolerance differs from the pinned value: {drifted[:5]}"
    assert all(r.passed == (r.rel_diff <= r.tolerance) for r in recs)
    assert not failed, "\n".join(f"{r.check_id}: rel {r.rel_diff:.3e} > {r.tolerance:.1e}" for r in failed[:10])
    assert not over_budget, f"criterion {key} took {seconds:.0f}s, budget {BUDGET_SECONDS[key]:.0f}s"


def test_criterion_1_covers_the_full_matrix():
    recs, _ = run("1")
    combos = {tuple(r.check_id.split("/")[1:4]) for r in recs}
    assert len(combos) == 27
    tuples = {tuple(r.check_id.split("/")[1:5]) for r in recs}
    assert len(tuples) == 270


def test_criterion_6_checks_convergence_at_each_doubling():
    recs, _ = run("6")
    ids = {r.check_id for r in recs}
    for path in ("double-sphere", "radial"):
        for k in (12, 24, 48):
            assert f"c6/convergence/{path}/k{k}" in ids


def test_criterion_9_cli_verify_end_to_end(tmp_path, capsys):
    out = tmp_path / "report.json"
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "besselmeans", "verify", "--out", str(out)],
                          capture_output=True, text=True, check=False)
    seconds = time.perf_counter() - t0
    records = []
    for key in SUITES:
        records.extend(run(key)[0])
    in_process = VerificationReport(tuple(records), CFG.echo()).to_json()
    identical = out.exists() and out.read_text() == in_process
    ok = proc.returncode == 0 and identical
    announce(capsys, "9", ok, records, seconds, "  (CLI run; report compared byte-for-byte with an in-process run)")

    assert proc.returncode == 0, proc.stderr[-2000:]
    assert identical, "CLI report differs from an independent in-process run"
