"""Acceptance criteria, one test per criterion (or per listed instance).

Each test records its outcome; the terminal summary prints one PASS/FAIL line
per criterion.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import io
import json
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))
from conftest import record  # noqa: E402

from gagc import matfile, selftest  # noqa: E402
from gagc.cli import EXIT_FAIL, EXIT_OK, main  # noqa: E402
from gagc.codes import DEFAULT_SEED, LinearCode, galois_gram, is_mds, min_distance  # noqa: E402
from gagc.constructions import (  # noqa: E402
    PreconditionError,
    construct_elliptic,
    construct_hermitian,
    construct_hyper_elliptic,
    construct_line,
    eval_set_t3,
    eval_sets_t5,
    eval_sets_t7,
)
from gagc.gf import make_field  # noqa: E402
from gagc.matrix import GfMatrix  # noqa: E402

MDS_SUBSETS = 1000
LINE_SECONDS = 60
EMBED_SECONDS = 120
HERMITIAN_SECONDS = 10
ELLIPTIC_SECONDS = 5
HYPER_SECONDS = 10
SELFTEST_SECONDS = 300

WINDOW_MAX = {0: 410, 1: 820, 2: 1230, 3: 1640}


@pytest.fixture(scope="module")
def gf3_8():
    return make_field(3, 8)


def cli(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


# -- criterion 1: line codes over GF(3^8) ---------------------------------------------------------------


@pytest.mark.parametrize("t", [0, 1, 2, 3])
@pytest.mark.parametrize("which", ["1", "10", "max"])
def test_criterion_1_line_codes(gf3_8, t, which):
    k = {"1": 1, "10": 10, "max": WINDOW_MAX[t]}[which]
    start = time.perf_counter()
    code, report = construct_line(gf3_8, eval_set_t3(gf3_8, 1, t), k, 1, "sampled", DEFAULT_SEED)
    so = galois_gram(code, 1).is_zero()
    mds = is_mds(code, "sampled", count=MDS_SUBSETS, seed=DEFAULT_SEED)
    secs = time.perf_counter() - start
    ok = (so and code.k == k and mds.verdict == "certificate" and secs <= LINE_SECONDS
          and code.n == (t + 1) * 1640 + 1 and report.ok)
    record(1, f"t={t} [{code.n},{k}]", ok, f"SO={so} rank={code.k} mds={mds.verdict}/{mds.mode} {secs:.1f}s")
    assert so and code.k == k and code.n == (t + 1) * 1640 + 1
    assert mds.verdict == "certificate"
    assert report.ok
    assert secs <= LINE_SECONDS


# -- criterion 2: embedding via the CLI -------------------------------------------------------------------


def test_criterion_2_embedding(tmp_path, capsys):
    src, dst = tmp_path / "line.gfm", tmp_path / "embedded.gfm"
    start = time.perf_counter()
    rc1, _, _ = cli(capsys, "construct", "--p", 3, "--h", 8, "--e", 1, "--theorem", "t3", "--t", 0,
                    "--k", 410, "--mds-mode", "sampled", "--out", src)
    rc2, text, _ = cli(capsys, "embed", "--in", src, "--out", dst, "--mds-mode", "sampled")
    secs = time.perf_counter() - start
    report = json.loads(text)
    out = matfile.read(str(dst))
    so = galois_gram(LinearCode(out.matrix), 1).is_zero()
    checks = report["checks"]
    rc3, vtext, _ = cli(capsys, "verify", "--in", dst, "--mds-mode", "sampled")
    vchecks = json.loads(vtext)["checks"]
    ok = (rc1 == rc2 == rc3 == EXIT_OK and (report["length"], report["dimension"]) == (1642, 411)
          and report["design_distance_bound"] == 1232 and so
          and checks["mds"]["verdict"] == "certificate" and secs <= EMBED_SECONDS)
    record(2, "[1641,410] -> [1642,411]", ok,
           f"case={report['params']['case']} bound={report['design_distance_bound']} SO={so} "
           f"mds={checks['mds']['verdict']} verify={[c['verdict'] for c in vchecks.values()]} {secs:.1f}s")
    assert rc1 == rc2 == EXIT_OK
    assert (report["length"], report["dimension"], report["design_distance_bound"]) == (1642, 411, 1232)
    assert out.matrix.shape == (411, 1642)
    assert so and checks["galois_so"]["verdict"] == "pass"
    assert checks["mds"]["verdict"] == "certificate"
    assert rc3 == EXIT_OK
    assert secs <= EMBED_SECONDS


# -- criterion 3: hyper-elliptic table over GF(2^8) ---------------------------------------------------------


T6_EXPECTED = {
    1: ("t6 n=18 [36,k-8,d>=37-k] k=17\n"
        "t6 n=52 [104,k-8,d>=105-k] k=17..40\n"
        "t6 n=86 [172,k-8,d>=173-k] k=17..63\n"
        "t6 n=256 [512,k-8,d>=513-k] k=17..176\n"),
    2: ("t6 n=52 [104,k-8,d>=105-k] k=17..24\n"
        "t6 n=86 [172,k-8,d>=173-k] k=17..38\n"
        "t6 n=256 [512,k-8,d>=513-k] k=17..106\n"),
}


@pytest.mark.parametrize("e", [1, 2])
def test_criterion_3_search_table(capsys, e):
    rc, text, _ = cli(capsys, "search", "--p", 2, "--h", 8, "--e", e, "--theorem", "t6")
    _, again, _ = cli(capsys, "search", "--p", 2, "--h", 8, "--e", e, "--theorem", "t6")
    ok = rc == EXIT_OK and text == T6_EXPECTED[e] and again == text
    record(3, f"search e={e} byte-exact", ok, f"{len(text.splitlines())} rows")
    assert rc == EXIT_OK
    assert text == T6_EXPECTED[e]
    assert again == text


def test_criterion_3_construct_36_17():
    code, report = construct_hyper_elliptic(make_field(2, 8), 1, 18, 17)
    so = galois_gram(code, 1).is_zero()
    ok = so and code.n == 36 and code.k == 9
    record(3, "(2n,k)=(36,17) SO", ok, f"[{code.n},{code.k}] bound {report.design_distance_bound}")
    assert so and (code.n, code.k) == (36, 9)


# -- criterion 4: exhaustive small fields --------------------------------------------------------------------


@pytest.mark.parametrize("k,dim,bound", [(7, 4, 21), (8, 5, 20)])
def test_criterion_4_hermitian(k, dim, bound):
    ctx = make_field(3, 2)
    start = time.perf_counter()
    es = eval_sets_t7(ctx, 1, 2, t=3)  # trace fibers, n = 9
    code, _ = construct_hermitian(ctx, 1, es, k, "exhaustive")
    so = galois_gram(code, 1).is_zero()
    d = min_distance(code)
    secs = time.perf_counter() - start
    ok = so and (code.n, code.k) == (27, dim) and d >= bound and secs <= HERMITIAN_SECONDS
    record(4, f"Hermitian q=9 [27,{dim}] k={k}", ok, f"SO={so} d={d} (>= {bound}) {secs:.2f}s")
    assert so and (code.n, code.k) == (27, dim)
    assert d >= bound
    assert secs <= HERMITIAN_SECONDS


def test_criterion_4_elliptic_u1():
    # |U1| = 1 over GF(16) at e = 1, so n = 1 and the k-window 3..1 is empty.
    ctx = make_field(2, 4)
    u1 = len(eval_sets_t5(ctx, 1, "U1"))
    n = min(4, u1)
    start = time.perf_counter()
    try:
        code, _ = construct_elliptic(ctx, 1, "U1", n, 3, "exhaustive")
    except PreconditionError as exc:
        record(4, f"elliptic q=16 U1 n={n} k=3", False, f"|U1|={u1}: {exc}")
        raise
    so = galois_gram(code, 1).is_zero()
    d = min_distance(code)
    secs = time.perf_counter() - start
    ok = so and d >= 2 * n - 2 and secs <= ELLIPTIC_SECONDS
    record(4, f"elliptic q=16 U1 n={n} k=3", ok, f"SO={so} d={d} {secs:.2f}s")
    assert ok


def test_criterion_4_hyper_elliptic():
    start = time.perf_counter()
    code, _ = construct_hyper_elliptic(make_field(2, 4), 1, 16, 5, "exhaustive")
    so = galois_gram(code, 1).is_zero()
    d = min_distance(code)
    secs = time.perf_counter() - start
    ok = so and d >= 28 and secs <= HYPER_SECONDS
    record(4, f"hyper-elliptic q=16 [{code.n},{code.k}]", ok, f"SO={so} d={d} (>= 28) {secs:.2f}s")
    assert so and d >= 28
    assert secs <= HYPER_SECONDS


# -- criterion 5: invariant suites -----------------------------------------------------------------------


def test_criterion_5_selftest_full(capsys):
    start = time.perf_counter()
    rc = main(["selftest", "--level", "full", "--seed", str(DEFAULT_SEED)])
    text, _ = capsys.readouterr()
    secs = time.perf_counter() - start
    failed = [ln.split()[1] for ln in text.splitlines() if ln.startswith("FAIL")]
    passed = sum(ln.startswith("PASS") for ln in text.splitlines())
    ok = rc == EXIT_OK and not failed and secs <= SELFTEST_SECONDS
    record(5, "selftest full", ok, f"{passed} passed, failed={failed} {secs:.1f}s")
    assert not failed, text
    assert rc == EXIT_OK
    assert secs <= SELFTEST_SECONDS


def test_criterion_5_is_deterministic():
    a, b = io.StringIO(), io.StringIO()
    ra = selftest.run("quick", DEFAULT_SEED, a)
    rb = selftest.run("quick", DEFAULT_SEED, b)
    same = [(r.name, r.ok, r.detail) for r in ra] == [(r.name, r.ok, r.detail) for r in rb]
    record(5, "quick level deterministic", same)
    assert same


# -- criterion 6: negative controls -------------------------------------------------------------------------


def small_instances():
    f9, f16 = make_field(3, 2), make_field(2, 4)
    yield "Hermitian q=9 k=7", construct_hermitian(f9, 1, eval_sets_t7(f9, 1, 2, t=3), 7)[0]
    yield "hyper-elliptic q=16 k=5", construct_hyper_elliptic(f16, 1, 16, 5)[0]
    yield "elliptic q=16 U2 k=3", construct_elliptic(f16, 1, "U2", 5, 3)[0]


def corrupted(gen, i, j):
    data = gen.data.copy()
    data[i, j] = gen.ctx.add(int(data[i, j]), 1)
    return LinearCode(GfMatrix(gen.ctx, data))


def test_criterion_6_every_entry_corrupted():
    for label, code in small_instances():
        assert galois_gram(code, 1).is_zero()
        rows, cols = code.gen.shape
        survivors = [(i, j) for i in range(rows) for j in range(cols)
                     if galois_gram(corrupted(code.gen, i, j), 1).is_zero()]
        record(6, f"{label}: +1 at each of {rows * cols} entries", not survivors,
               f"{len(survivors)} corruptions still SO")
        assert not survivors


def test_criterion_6_corrupted_1641_instance(gf3_8, tmp_path, capsys):
    path = tmp_path / "line.gfm"
    rc, _, _ = cli(capsys, "construct", "--p", 3, "--h", 8, "--e", 1, "--theorem", "t3", "--t", 0,
                   "--k", 410, "--mds-mode", "sampled", "--out", path)
    assert rc == EXIT_OK
    mf = matfile.read(str(path))
    rng = np.random.default_rng(DEFAULT_SEED)
    positions = [(int(rng.integers(410)), int(rng.integers(1641))) for _ in range(50)]
    survivors = [pos for pos in positions if galois_gram(corrupted(mf.matrix, *pos), 1).is_zero()]
    # one corrupted file through the CLI (its generic MDS scan is the slow part)
    i, j = positions[0]
    data = mf.matrix.data.copy()
    data[i, j] = gf3_8.add(int(data[i, j]), 1)
    matfile.write(str(path), matfile.MatrixFile(GfMatrix(gf3_8, data), mf.e, mf.extras))
    rc, text, _ = cli(capsys, "verify", "--in", path, "--mds-mode", "sampled")
    verdict = json.loads(text)["checks"]["galois_so"]["verdict"]
    ok = not survivors and rc == EXIT_FAIL and verdict == "fail"
    record(6, "[1641,410] corrupted entries", ok,
           f"{len(positions)} seeded positions, {len(survivors)} still SO; verify at {(i, j)} exit {rc}, SO {verdict}")
    assert not survivors
    assert rc == EXIT_FAIL and verdict == "fail"


def test_criterion_6_wrong_e(tmp_path, capsys):
    path = tmp_path / "line.gfm"
    rc, _, _ = cli(capsys, "construct", "--p", 3, "--h", 8, "--e", 1, "--theorem", "t3", "--t", 1,
                   "--k", 10, "--out", path)
    rc_right, _, _ = cli(capsys, "verify", "--in", path)
    rc_wrong, text, _ = cli(capsys, "verify", "--in", path, "--e", 0)
    verdict = json.loads(text)["checks"]["galois_so"]["verdict"]
    ok = rc == rc_right == EXIT_OK and rc_wrong == EXIT_FAIL and verdict == "fail"
    record(6, "[3281,10] built for e=1, verified with e=0", ok, f"exit {rc_right} vs {rc_wrong}, SO {verdict}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
