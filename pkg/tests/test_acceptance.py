"""Acceptance battery, one test per criterion.

Each test runs the corresponding suite criterion at the reference seed,
prints a single PASS/FAIL line, and enforces the per-criterion runtime
cap.  Criterion 13 additionally exercises the end-to-end determinism
guarantee: two command-line suite runs must emit byte-identical trees.
"""

import filecmp
import subprocess
import sys

import pytest

from horolab.suite import (
    RUNTIME_CAPS,
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
)

SEED = 7


def check(fn, index):
    res = fn(SEED)
    verdict = "PASS" if res.ok else "FAIL"
    print(f"[criterion {index:02d}] {verdict} in {res.elapsed:.2f}s: {res.name}")
    assert res.ok, f"criterion {index} failed: {res.details}"
    assert res.elapsed < RUNTIME_CAPS.get(index, 120.0), (
        f"criterion {index} took {res.elapsed:.2f}s"
    )
    return res


def test_criterion_01_fixed_point_solver():
    check(criterion_1, 1)


def test_criterion_02_parameter_grid_screening():
    check(criterion_2, 2)


def test_criterion_03_degenerate_heights_on_log2_grid():
    check(criterion_3, 3)


def test_criterion_04_cocycle_sign_law():
    check(criterion_4, 4)


def test_criterion_05_containment_and_extremality():
    check(criterion_5, 5)


def test_criterion_06_certified_floor_on_cocycle_values():
    check(criterion_6, 6)


def test_criterion_07_semigroup_defect_decay():
    check(criterion_7, 7)


def test_criterion_08_cocycle_algebra():
    check(criterion_8, 8)


def test_criterion_09_field_regularity():
    check(criterion_9, 9)


def test_criterion_10_height_density():
    check(criterion_10, 10)


def test_criterion_11_collinearity_dichotomy():
    check(criterion_11, 11)


def test_criterion_12_complex_perturbation():
    check(criterion_12, 12)


def test_criterion_13_determinism(tmp_path):
    check(criterion_13, 13)
    runs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "horolab.cli",
                "suite",
                "--epsilon",
                "-1",
                "--seed",
                str(SEED),
                "--out",
                str(out),
            ],
            capture_output=True,
            text=True,
            timeout=600,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
        runs.append((out, proc.stdout))
    assert runs[0][1] == runs[1][1], "suite stdout differs between reruns"
    d1, d2 = runs[0][0], runs[1][0]
    names = sorted(p.name for p in d1.iterdir())
    assert names == sorted(p.name for p in d2.iterdir())
    assert "report.json" in names
    match, mismatch, errors = filecmp.cmpfiles(d1, d2, names, shallow=False)
    assert not mismatch and not errors, f"differing files: {mismatch or errors}"
    print(f"[criterion 13] PASS: {len(names)} artifacts byte-identical across reruns")
