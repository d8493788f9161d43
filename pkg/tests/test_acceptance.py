"""Acceptance criteria 1-9 at full scale, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are printed
even when output capture is on.
"""
import json
import subprocess
import sys
import time

import pytest

from fieldgeom.selftest import run_selftest


@pytest.fixture(scope="module")
def full():
    out = {}
    for name in ["pregeometry", "oracle", "planes", "desargues", "configurations", "reconstruction", "logic", "subflat_union"]:
        t0 = time.perf_counter()
        rep = run_selftest(1, "full", families=[name])["families"][name]
        rep["seconds"] = time.perf_counter() - t0
        out[name] = rep
    return out


def _verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def _counts(fam, **need):
    inv = fam["by_invariant"]
    return all(inv.get(k, 0) >= v for k, v in need.items())


def test_criterion_1_pregeometry_axioms(full, capsys):
    f = full["pregeometry"]
    ok = f["passed"] and _counts(f, exchange=500, extensive=100, monotone=100, idempotent=100) and f["seconds"] < 120
    _verdict(capsys, 1, ok, f"exchange {f['by_invariant'].get('exchange')} closure checks {f['checks']} in {f['seconds']:.1f}s")


def test_criterion_2_oracle_equivalence(full, capsys):
    f = full["oracle"]
    ok = f["passed"] and f["by_invariant"].get("jacobian_vs_oracle") == 100
    _verdict(capsys, 2, ok, f"{f['by_invariant'].get('jacobian_vs_oracle')} instances, {f['failed']} disagreements")


def test_criterion_3_coordinatization(full, capsys):
    f = full["planes"]
    ok = f["passed"] and _counts(f, coordinatization_additive=200, coordinatization_multiplicative=200, maximality_probe=1)
    _verdict(capsys, 3, ok, f"{f['by_invariant']} failures {f['failed']}")


def test_criterion_4_desargues(full, capsys):
    f = full["desargues"]
    ok = f["passed"] and f["by_invariant"].get("desargues") == 20
    _verdict(capsys, 4, ok, f"{f['by_invariant'].get('desargues')} configurations, {f['failed']} failures")


def test_criterion_5_configurations(full, capsys):
    f = full["configurations"]
    ok = f["passed"] and _counts(f, q_double_presentation=50, j_decomposition=50, mult_construct=50)
    _verdict(capsys, 5, ok, f"{f['by_invariant']}")


def test_criterion_6_reconstruction(full, capsys):
    f = full["reconstruction"]
    st = f["stats"]
    kinds_ok = all(st.get(f"maps_{k}", 0) >= 1 and st.get(f"min_samples_{k}", 0) >= 20
                   for k in ("permutation", "affine", "mobius", "identity"))
    ok = (f["passed"] and kinds_ok
          and _counts(f, mu_mul=100, mu_add=100, dependent_point=1, identity_recovers_identity=1))
    _verdict(capsys, 6, ok, f"{f['by_invariant']} maps {st}")


def test_criterion_7_transfer(full, capsys):
    f = full["logic"]
    ok = f["passed"] and _counts(f, transfer_agreement=100, counterexample_disagrees=1)
    _verdict(capsys, 7, ok, f"{f['by_invariant'].get('transfer_agreement')} formulas, {f['failed']} disagreements, counterexample checked")


def test_criterion_8_union_of_subflats(full, capsys):
    f = full["subflat_union"]
    ok = f["passed"] and _counts(f, witness_outside_flats=100)
    _verdict(capsys, 8, ok, f"{f['by_invariant'].get('witness_outside_flats')} families, {f['failed']} failures")


def test_criterion_9_determinism_and_runtime(tmp_path, capsys):
    blobs, secs = [], []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "fieldgeom", "selftest", "--seed", "1", "--scale", "full",
                               "--out", str(out)], capture_output=True, text=True)
        secs.append(time.perf_counter() - t0)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        blobs.append(out.read_bytes())
    ok = blobs[0] == blobs[1] and max(secs) < 900 and json.loads(blobs[0])["passed"]
    _verdict(capsys, 9, ok, f"identical={blobs[0] == blobs[1]} runtimes {secs[0]:.1f}s {secs[1]:.1f}s")
