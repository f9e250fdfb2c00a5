"""Acceptance criteria 1-13, one pass/fail line each.

Run with pytest, or directly as ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from fglcalc.fgl import FormalGroupLaw, fgl_make
from fglcalc.series import Poly
from fglcalc.suites import REGISTRY, run_check
from fglcalc.symmetrize import type_a_symmetrizer, type_c_symmetrizer

CAP = 6
SEED = 20240611
TITLES = {
    1: "universal law axioms",
    2: "specialization coherence",
    3: "universal Schur vs symmetrizer",
    4: "empty universal Schur coefficient",
    5: "projective bundle pushforward",
    6: "type A flag bundles",
    7: "Lagrangian (type C) bundles",
    8: "quadric (types B/D) bundles",
    9: "quadratic Schur functions",
    10: "Pragacz-Ratajski formula",
    11: "one-row closed forms",
    12: "grading of every output",
    13: "performance envelope",
}
VERIFY_BUDGET = 300.0
UNIVERSAL_BUDGET = 10.0
PER_INPUT_BUDGET = 0.5


def report(k: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {TITLES[k]}"
    print(line + (f"  ({detail})" if detail else ""), flush=True)


def run_criterion(k: int) -> tuple[bool, str]:
    failures = []
    checks = [c for c in REGISTRY if k in c.criteria]
    for c in checks:
        r = run_check(c, CAP, SEED)
        if not r.ok:
            failures.append(f"{r.name}: {r.detail}")
    if not checks:
        return False, "no checks registered"
    ok = not failures
    detail = "; ".join(failures) if failures else f"{len(checks)} checks"
    if k == 1:
        elapsed = universal_build_time()
        ok = ok and elapsed < UNIVERSAL_BUDGET
        detail += f"; universal law at cap {CAP + 2} in {1000 * elapsed:.0f} ms"
    return ok, detail


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def universal_build_time() -> float:
    def build():
        law = FormalGroupLaw("universal", CAP + 2)
        law.chi()
        law.derived()

    return _timed(build)


def symmetrizer_times() -> dict[str, float]:
    """Worst per-input time over C_3 (48 elements) and S_4 cosets, after warm-up."""
    out = {}
    for theory in ("additive", "multiplicative", "hyperbolic", "universal"):
        ring = fgl_make(theory, 1).ring
        ys3 = ("y1", "y2", "y3")
        ys4 = ys3 + ("y4",)
        inputs3 = [Poly(ring, ys3, 9, {(a, b, c): 1}) for a, b, c in ((6, 4, 2), (7, 3, 2), (5, 5, 1))]
        inputs4 = [Poly(ring, ys4, 8, {(a, b, c, d): 1}) for a, b, c, d in ((3, 2, 1, 0), (4, 2, 1, 0), (3, 3, 1, 1))]
        type_c_symmetrizer(theory, ys3, 3, inputs3[0], CAP)
        type_a_symmetrizer(theory, ys4, (1, 1, 1, 1), inputs4[0], CAP)
        out[f"C3 {theory}"] = max(_timed(lambda p=p: type_c_symmetrizer(theory, ys3, 3, p, CAP)) for p in inputs3)
        out[f"S4 {theory}"] = max(_timed(lambda p=p: type_a_symmetrizer(theory, ys4, (1, 1, 1, 1), p, CAP)) for p in inputs4)
    return out


def verify_all_time() -> tuple[int, float]:
    t0 = time.perf_counter()
    run = subprocess.run(
        [sys.executable, "-m", "fglcalc", "verify", "--suite", "all", "--cap", str(CAP)],
        capture_output=True,
        text=True,
    )
    return run.returncode, time.perf_counter() - t0


def run_criterion_13() -> tuple[bool, str]:
    code, elapsed = verify_all_time()
    times = symmetrizer_times()
    worst_name = max(times, key=times.get)
    worst = times[worst_name]
    ok = code == 0 and elapsed < VERIFY_BUDGET and worst < PER_INPUT_BUDGET
    detail = f"verify all exit {code} in {elapsed:.1f}s; slowest symmetrizer {worst_name} {1000 * worst:.0f} ms/input"
    return ok, detail


@pytest.mark.parametrize("k", range(1, 13))
def test_criterion(k, capsys):
    ok, detail = run_criterion(k)
    with capsys.disabled():
        print()
        report(k, ok, detail)
    assert ok, detail


def test_criterion_13(capsys):
    ok, detail = run_criterion_13()
    with capsys.disabled():
        print()
        report(13, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k in range(1, 13):
        ok, detail = run_criterion(k)
        report(k, ok, detail)
        results.append(ok)
    ok, detail = run_criterion_13()
    report(13, ok, detail)
    results.append(ok)
    sys.exit(0 if all(results) else 1)
