import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gagc import matfile
from gagc.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_PRECONDITION, main, resolve_seed
from gagc.codes import DEFAULT_SEED
from gagc.gf import make_field
from gagc.matrix import GfMatrix

T7_ARGS = ["construct", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t7", "--case", "2", "--t", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- matrix files -----------------------------------------------------------------------------


@given(
    st.sampled_from([(2, 1), (3, 2), (2, 4), (5, 2)]),
    st.integers(0, 4),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
    st.dictionaries(st.sampled_from(["theorem", "alpha", "v", "case"]),
                    st.from_regex(r"[a-z0-9,]{1,8}", fullmatch=True), max_size=3),
)
def test_emit_parse_round_trip(ph, k, n, seed, extras):
    ctx = make_field(*ph)
    data = np.random.default_rng(seed).integers(0, ctx.q, size=(k, n))
    mf = matfile.MatrixFile(GfMatrix(ctx, data.reshape(k, n)), ctx.h - 1, extras)
    text = matfile.emit(mf)
    back = matfile.parse(text)
    assert back.matrix == mf.matrix and back.e == mf.e and back.extras == extras
    assert matfile.emit(back) == text


GOOD = "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 8 4\n"


def test_parse_example():
    mf = matfile.parse(GOOD)
    assert mf.matrix.data.tolist() == [[1, 2, 3], [0, 8, 4]]
    assert matfile.emit(mf) == GOOD


@pytest.mark.parametrize("text", [
    "",
    "GFMAX p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 8 4\n",
    "GFMAT h=2 p=3 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 8 4\n",
    "GFMAT p=3 h=2 poly=1,1,1 n=3 k=2 e=1\n1 2 3\n0 8 4\n",  # poly mismatch
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=2\n1 2 3\n0 8 4\n",
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n",
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 8\n",
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 9 4\n",
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 x\n0 8 4\n",
    "GFMAT p=4 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 3 1\n",
    "GFMAT p=3 h=2 poly=2,1,1 n=3 k=2 e=1 e=1\n1 2 3\n0 8 4\n",
    "GFMAT  p=3 h=2 poly=2,1,1 n=3 k=2 e=1\n1 2 3\n0 8 4\n",
])
def test_malformed_files(text):
    with pytest.raises(matfile.MatrixFileError):
        matfile.parse(text)


def test_bad_extra_lists():
    mf = matfile.parse(GOOD.replace("e=1", "e=1 alpha=1,x gamma=1,2"))
    with pytest.raises(matfile.MatrixFileError):
        mf.ints("alpha")
    with pytest.raises(matfile.MatrixFileError):
        mf.int("gamma")
    assert mf.ints("v") is None


# -- construct / verify / embed ----------------------------------------------------------------------


def test_construct_verify_round_trip(tmp_path, capsys, gagc_env):
    out = tmp_path / "h.gfm"
    code, text, _ = run(capsys, *T7_ARGS, "--k", "7", "--out", str(out))
    assert code == EXIT_OK
    report = json.loads(text)
    assert report["length"] == 27 and report["dimension"] == 4 and report["seed"] == DEFAULT_SEED
    assert report["field"] == {"p": 3, "h": 2, "q": 9}
    mf = matfile.read(str(out))
    assert mf.extras["theorem"] == "t7" and mf.int("genus") == 3
    assert matfile.emit(mf) == out.read_text()
    code, text, _ = run(capsys, "verify", "--in", str(out))
    assert code == EXIT_OK
    checks = json.loads(text)["checks"]
    assert {c["verdict"] for c in checks.values()} <= {"pass", "certificate"}
    assert checks["mds"]["mode"] == "exhaustive-distance"


def test_report_to_file(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code, text, _ = run(capsys, *T7_ARGS, "--k", "8", "--report", str(rep))
    assert code == EXIT_OK and text == ""
    assert json.loads(rep.read_text())["dimension"] == 5


def test_corrupted_entry_fails_so(tmp_path, capsys):
    out = tmp_path / "h.gfm"
    run(capsys, *T7_ARGS, "--k", "7", "--out", str(out))
    mf = matfile.read(str(out))
    data = mf.matrix.data.copy()
    data[1, 3] = mf.ctx.add(int(data[1, 3]), 1)
    matfile.write(str(out), matfile.MatrixFile(GfMatrix(mf.ctx, data), mf.e, mf.extras))
    code, text, _ = run(capsys, "verify", "--in", str(out))
    assert code == EXIT_FAIL
    assert json.loads(text)["checks"]["galois_so"]["verdict"] == "fail"


def test_wrong_e_fails_so(tmp_path, capsys):
    # the small Hermitian codes are SO for every e; this line code is SO only for e in {1, 7}
    out = tmp_path / "line.gfm"
    args = ["construct", "--p", "3", "--h", "8", "--e", "1", "--theorem", "t3", "--t", "1", "--k", "10"]
    assert run(capsys, *args, "--out", str(out))[0] == EXIT_OK
    code, text, _ = run(capsys, "verify", "--in", str(out), "--e", "0")
    assert code == EXIT_FAIL
    assert json.loads(text)["checks"]["galois_so"]["verdict"] == "fail"


def test_verify_without_metadata(tmp_path, capsys):
    path = tmp_path / "plain.gfm"
    path.write_text(GOOD)
    code, text, _ = run(capsys, "verify", "--in", str(path))
    assert code == EXIT_FAIL
    assert json.loads(text)["checks"]["criterion"]["mode"] == "unavailable"


def test_embed_small_line(tmp_path, capsys):
    # GF(3^4) line code on GF(9) with k = 1, e = 2, embedded as a [9, 2] code
    ctx = make_field(3, 4)
    from gagc.constructions import EvalSet, construct_line
    sub = ctx.elements()[ctx.power(ctx.elements(), 9) == ctx.elements()]
    code, report = construct_line(ctx, EvalSet(ctx, sub, "line"), 1, 2)
    plan = report.plan
    src = tmp_path / "line.gfm"
    matfile.write(str(src), matfile.MatrixFile(code.gen, 2, {
        "theorem": "t3", "genus": "0", "deg": "0",
        "alpha": matfile.join_ints(plan.points[:, 0]), "v": matfile.join_ints(plan.v)}))
    dst = tmp_path / "emb.gfm"
    rc, text, _ = run(capsys, "embed", "--in", str(src), "--out", str(dst))
    assert rc == EXIT_OK
    rep = json.loads(text)
    assert rep["dimension"] == 2
    rc, text, _ = run(capsys, "verify", "--in", str(dst))
    assert rc == EXIT_OK
    assert json.loads(text)["checks"]["criterion"]["verdict"] == "pass"


def test_embed_rejections(tmp_path, capsys):
    plain = tmp_path / "plain.gfm"
    plain.write_text(GOOD)
    assert run(capsys, "embed", "--in", str(plain))[0] == EXIT_PRECONDITION
    # GF(3), e = 0: gamma^2 = -1 has no solution
    nogamma = tmp_path / "g.gfm"
    nogamma.write_text("GFMAT p=3 h=1 poly=1,1 n=3 k=1 e=0 theorem=t3 genus=0 deg=0 alpha=0,1,2 v=1,1,1\n1 1 1\n")
    rc, _, err = run(capsys, "embed", "--in", str(nogamma))
    assert rc == EXIT_PRECONDITION and "gamma" in err
    tampered = tmp_path / "t.gfm"
    tampered.write_text("GFMAT p=3 h=1 poly=1,1 n=3 k=1 e=0 theorem=t3 genus=0 deg=0 alpha=0,1,2 v=1,1,1\n1 1 2\n")
    assert run(capsys, "embed", "--in", str(tampered))[0] == EXIT_PRECONDITION


# -- exit codes ----------------------------------------------------------------------------------------


def test_precondition_messages(capsys):
    rc, _, err = run(capsys, *T7_ARGS, "--k", "0")
    assert rc == EXIT_PRECONDITION and "k=0 violates" in err
    rc, _, err = run(capsys, "construct", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t3",
                     "--t", "0", "--k", "1")
    assert rc == EXIT_PRECONDITION and "8 does not divide N=2" in err
    rc, _, err = run(capsys, "construct", "--p", "4", "--h", "2", "--e", "1", "--theorem", "t6",
                     "--n", "4", "--k", "3")
    assert rc == EXIT_PRECONDITION
    rc, _, err = run(capsys, "construct", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t7", "--k", "7")
    assert rc == EXIT_PRECONDITION and "--case" in err


def test_construction_error_exit(capsys):
    rc, _, err = run(capsys, "construct", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t7",
                     "--case", "4", "--t", "2", "--a", "0", "--k", "7")
    assert rc == EXIT_FAIL and "construction failed" in err


def test_io_exits(tmp_path, capsys):
    assert run(capsys, "verify", "--in", str(tmp_path / "missing.gfm"))[0] == EXIT_IO
    bad = tmp_path / "bad.gfm"
    bad.write_text("GFMAT p=3\n")
    assert run(capsys, "verify", "--in", str(bad))[0] == EXIT_IO


def test_seed_resolution(gagc_env, capsys):
    assert resolve_seed(None) == DEFAULT_SEED == 0xA6C0DE
    assert resolve_seed(5) == 5
    gagc_env.setenv("GAGC_SEED", "0x10")
    assert resolve_seed(None) == 16
    _, text, _ = run(capsys, *T7_ARGS, "--k", "7")
    assert json.loads(text)["seed"] == 16
    _, text, _ = run(capsys, *T7_ARGS, "--k", "7", "--seed", "9")
    assert json.loads(text)["seed"] == 9
    gagc_env.setenv("GAGC_SEED", "many")
    assert run(capsys, *T7_ARGS, "--k", "7")[0] == EXIT_PRECONDITION


# -- search and selftest -----------------------------------------------------------------------------


def test_search_table_and_json(capsys):
    rc, text, _ = run(capsys, "search", "--p", "2", "--h", "8", "--e", "2", "--theorem", "t6")
    assert rc == EXIT_OK
    assert text == ("t6 n=52 [104,k-8,d>=105-k] k=17..24\n"
                    "t6 n=86 [172,k-8,d>=173-k] k=17..38\n"
                    "t6 n=256 [512,k-8,d>=513-k] k=17..106\n")
    rc, text, _ = run(capsys, "search", "--p", "2", "--h", "8", "--e", "2", "--theorem", "t6",
                      "--format", "json")
    rows = json.loads(text)
    assert [(r["length"], r["k_min"], r["k_max"]) for r in rows] == [(104, 17, 24), (172, 17, 38), (512, 17, 106)]
    rc, text, _ = run(capsys, "search", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t3")
    assert rc == EXIT_OK and text == ""


def test_selftest_quick_exit_matches_results(capsys):
    rc, text, _ = run(capsys, "selftest", "--level", "quick")
    lines = [ln for ln in text.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert lines
    assert (rc == EXIT_OK) == all(ln.startswith("PASS") for ln in lines)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gagc", "search", "--p", "3", "--h", "2", "--e", "1"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0
    res = subprocess.run([sys.executable, "-m", "gagc", "construct", "--p", "3"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 2  # argparse usage error
