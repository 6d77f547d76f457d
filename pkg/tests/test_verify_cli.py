import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nncalc.algebra import tunnel
from nncalc.approximants import QEps, xpn
from nncalc.core import Network, realize
from nncalc.verify_cli import main, run_suite


def run(args):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in args], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def stats(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_build_tun(tmp_path):
    path = tmp_path / "t.json"
    code, text, _ = run(["build", "tun", "--n", 3, "--out", path])
    assert code == 0
    s = stats(text)
    assert s["param"] == "13" and s["dep"] == "3" and s["lay"] == "(1,2,2,1)"
    assert Network.from_json(path.read_text()) == tunnel(3)


def test_build_phi_k(tmp_path):
    code, text, _ = run(["build", "phi_k", "--k", 2, "--out", tmp_path / "p.json"])
    assert code == 0 and stats(text)["param"] == "33"


@pytest.mark.parametrize("args,msg", [
    (["build", "prd", "--q", "0.5"], "q must exceed 2"),
    (["--eps", "-1", "build", "sqr"], "eps must be positive"),
    (["build", "tun"], "--n"),
    (["build", "tun", "--n", "0"], ">= 1"),
    (["build", "aff", "--weights", "1,2;3"], "equal length"),
    (["build", "mc", "--samples", "/nonexistent.json"], "cannot read"),
])
def test_build_errors(args, msg, tmp_path):
    code, _, err = run(args + ["--out", tmp_path / "x.json"])
    assert code == 2 and msg in err


def test_unknown_kind_is_usage_error():
    assert main(["build", "nope"]) == 2


@pytest.mark.parametrize("kind,args,x,want", [
    ("tun", ["--n", 5], ["2.5"], "2.5"),
    ("mxm", ["--d", 3], ["1", "2", "0"], "2"),
    ("nrm", ["--d", 2], ["-1", "1"], "2"),
    ("aff", ["--weights", "1,2;3,4", "--bias", "0.5,-1"], ["1,1"], "3.5\n6"),
])
def test_eval_examples(kind, args, x, want, tmp_path):
    path = tmp_path / "n.json"
    assert run(["build", kind, *args, "--out", path])[0] == 0
    code, text, _ = run(["eval", path, *x])
    assert code == 0 and text.strip() == want


def test_eval_width_mismatch(tmp_path):
    path = tmp_path / "n.json"
    run(["build", "nrm", "--d", 2, "--out", path])
    assert run(["eval", path, "1"])[0] == 2


def test_build_eval_round_trip_bit_exact(tmp_path):
    path = tmp_path / "x.json"
    run(["--q", "3", "--eps", "1e-3", "build", "xpn", "--n", 3, "--out", path])
    code, text, _ = run(["eval", path, "0.7"])
    direct = realize(xpn(3, QEps(3.0, 1e-3))).eval([0.7])[0]
    assert float(text) == direct
    assert text == f"{direct:.17g}\n"


def test_export_matches_build(tmp_path):
    path = tmp_path / "a.json"
    run(["build", "sqr", "--out", path])
    code, text, _ = run(["export", "sqr"])
    assert code == 0 and text == path.read_text()


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_sweep_sqr():
    code, text, _ = run(["sweep", "sqr", "--reference", "square", "--lo", -2, "--hi", 2, "--points", 1001])
    rows = read_csv(text)
    assert code == 0 and rows[0] == ["x", "net_value", "reference_value", "abs_error"]
    assert len(rows) == 1003 and rows[-1][0] == "sup"
    sup = float(rows[-1][-1])
    assert sup == max(float(r[3]) for r in rows[1:-1])
    assert sup <= 0.01 * 2**2.5
    assert "\r" not in text


def test_sweep_xpn_exp():
    code, text, _ = run(["sweep", "xpn", "--n", 3, "--reference", "exp", "--lo", 0, "--hi", 1])
    assert code == 0 and np.isfinite(float(read_csv(text)[-1][-1]))


def test_sweep_tun_identity():
    code, text, _ = run(["sweep", "tun", "--n", 4, "--reference", "identity", "--lo", -5, "--hi", 5])
    assert code == 0 and float(read_csv(text)[-1][-1]) == 0.0


def test_sweep_product_grid():
    code, text, _ = run(["sweep", "prd", "--reference", "product", "--points", 5])
    rows = read_csv(text)
    assert rows[0][:2] == ["x1", "x2"] and len(rows) == 27


def test_sweep_unknown_reference():
    code, _, err = run(["sweep", "tun", "--n", 2, "--reference", "bogus"])
    assert code == 2 and "unknown reference" in err


def test_sweep_quadrature_csv():
    code, text, _ = run(["--eps", "1e-4", "sweep", "e_net", "--reference", "exp-integral",
                         "--Ns", "2,4", "--ns", "2", "--integrand", "one"])
    rows = read_csv(text)
    assert rows[0] == ["N", "n", "q", "eps", "measured_error", "bound"]
    assert float(rows[1][4]) == pytest.approx(0.2182937518392296, abs=1e-12)
    assert all(float(r[4]) <= float(r[5]) for r in rows[1:])


def test_sweep_is_deterministic(tmp_path):
    args = ["sweep", "pwr", "--n", 3, "--reference", "power", "--points", 33]
    assert run(args)[1] == run(args)[1]


def test_mc_commands(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"d": 1, "points": [[0], [0.5], [1]], "values": [0.5, 0, 0.5], "L": 1}))
    code, text, _ = run(["mc", "build", path, "--out", tmp_path / "mc.json"])
    assert code == 0 and stats(text)["inn"] == "1"
    assert run(["mc", "eval", path, "0.25"])[1] == "0.25\n"
    code, text, _ = run(["mc", "verify", path])
    reps = json.loads(text)
    assert code == 0 and {r["name"] for r in reps} >= {"mc.closed_form", "mc.lipschitz"}
    code, text, _ = run(["sweep", "mc", "--samples", path, "--reference", "max-conv", "--lo", 0, "--hi", 1])
    assert code == 0 and float(read_csv(text)[-1][-1]) <= 1e-12


def test_mc_bad_sample_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"d": 2, "points": [[0]], "values": [1], "L": 1}')
    assert run(["mc", "build", path])[0] == 2


@pytest.mark.parametrize("suite", ["core", "phi", "interpolation"])
def test_verify_suites_pass(suite):
    code, text, _ = run(["verify", suite])
    reps = json.loads(text)
    assert code == 0 and reps
    for r in reps:
        if r["pass"] is not None and r["measured_sup_error"] is not None:
            assert r["pass"] == (r["measured_sup_error"] <= r["bound_value"])


def test_verify_output_is_deterministic():
    assert run(["verify", "algebra"])[1] == run(["verify", "algebra"])[1]


def test_verify_failure_exit_code(monkeypatch):
    from nncalc import verify_cli
    bad = verify_cli.ErrorReport("x", {}, measured_sup_error=2.0, bound_value=1.0, passed=False)
    monkeypatch.setitem(verify_cli.SUITES, "core", lambda seed: [bad])
    assert run(["verify", "core"])[0] == 1


def test_unknown_suite():
    assert run(["verify", "nothing"])[0] == 2


def test_reported_items_have_null_pass():
    names = {r.name: r for r in run_suite("quadrature") + run_suite("interpolation")}
    assert names["interpolation.mxm2.param_bound"].passed is None
    assert names["interpolation.mxm2.param_bound"].structural["dense"] == 13
    assert names["interpolation.nrm3.param_formulas"].passed is None
    assert names["quadrature.etr.N4.param"].passed is None


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "nncalc", "build", "tun", "--n", "3", "--out",
                          str(tmp_path / "t.json")], capture_output=True, text=True)
    assert res.returncode == 0 and "param=13" in res.stdout
