import csv
import io
import json
import math
import subprocess
import sys

import pytest

from torusrep.angles import ThetaMatrix
from torusrep.cli import main
from torusrep.builtin_examples import REGISTRY, get_example


def run(args, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ex_file(tmp_path):
    def make(name, **params):
        p = tmp_path / f"{name}.json"
        p.write_text(get_example(name, **params).dumps())
        return str(p)
    return make


class TestCertify:
    def test_ex31(self, capsys):
        code, out, _ = run(["certify", "--example", "ex-3.1"], capsys)
        assert code == 0
        assert json.loads(out) == {"rank_z": 1, "pi_q_free": True, "dense": False,
                                   "closure_dim": 1, "normalizer": [[0, -1], [1, -1]]}

    def test_ex32_file(self, capsys, ex_file):
        code, out, _ = run(["certify", ex_file("ex-3.2")], capsys)
        assert code == 0 and json.loads(out)["dense"] is True

    def test_stdin(self, capsys, monkeypatch):
        text = get_example("app-A-2d").dumps()
        code, out, _ = run(["certify", "-"], capsys, stdin=text, monkeypatch=monkeypatch)
        assert code == 0 and json.loads(out)["dense"]

    def test_empty_file(self, capsys, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("")
        code, _, err = run(["certify", str(p)], capsys)
        assert code == 2 and "empty" in err

    @pytest.mark.parametrize("text", ["{", "[]", '{"n": 1}', '{"n":1,"g":1,"symbols":[],"entries":[[1,2]]}',
                                      '{"n":1,"g":1,"symbols":["x"],"entries":[[{"pi":"1/0","syms":{}},{"pi":"0","syms":{}}]]}',
                                      '{"n":2,"g":1,"symbols":[],"entries":[[{"pi":"0","syms":{}},{"pi":"0","syms":{}}]]}',
                                      '{"n":1,"g":1,"symbols":[],"entries":[[{"pi":"0","syms":{"q":"1"}},{"pi":"0","syms":{}}]]}'])
    def test_malformed(self, capsys, tmp_path, text):
        p = tmp_path / "bad.json"
        p.write_text(text)
        code, _, err = run(["certify", str(p)], capsys)
        assert code == 2 and err.startswith("torusrep:")

    def test_missing_file(self, capsys):
        code, _, _ = run(["certify", "/nonexistent/x.json"], capsys)
        assert code == 2

    def test_holed_is_noop(self, capsys):
        _, plain, _ = run(["certify", "--example", "ex-3.2"], capsys)
        code, holed, _ = run(["--holed", "certify", "--example", "ex-3.2"], capsys)
        out = json.loads(holed)
        assert code == 0 and out.pop("surface") == "one-holed"
        assert out == json.loads(plain)

    def test_output_file(self, capsys, tmp_path):
        p = tmp_path / "cert.json"
        code, out, _ = run(["-o", str(p), "certify", "--example", "ex-3.1"], capsys)
        assert code == 0 and out == "" and json.loads(p.read_text())["rank_z"] == 1


class TestExamples:
    def test_ex31(self, capsys):
        code, out, _ = run(["examples", "ex-3.1"], capsys)
        theta = ThetaMatrix.loads(out)
        assert code == 0 and theta.n == 2 and theta.g == 2
        assert [[str(a) for a in r] for r in theta.entries] == [["phi", "0", "phi", "0"]] * 2

    def test_app2d(self, capsys):
        code, out, _ = run(["examples", "app-A-2d"], capsys)
        theta = ThetaMatrix.loads(out)
        assert [[str(a) for a in r] for r in theta.entries] == [["one", "one", "0", "0"],
                                                                  ["0", "0", "one", "one"]]

    def test_unknown(self, capsys):
        code, _, _ = run(["examples", "nope"], capsys)
        assert code == 2

    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_round_trip_bytes(self, capsys, name):
        _, out, _ = run(["examples", name], capsys)
        assert ThetaMatrix.loads(out).dumps() == out.strip()

    def test_class_d_params(self, capsys):
        code, out, _ = run(["examples", "class-D", "--g", "2", "--n", "3", "--lambdas", "a,b"], capsys)
        theta = ThetaMatrix.loads(out)
        assert code == 0 and (theta.n, theta.g) == (3, 2)
        assert "a_t1" in theta.symtab.symbols

    def test_bad_params(self, capsys):
        assert run(["examples", "ex-3.1", "--g", "3"], capsys)[0] == 2
        assert run(["examples", "class-D", "--n", "3", "--lambdas", "a"], capsys)[0] == 2


class TestNormalForm:
    def test_ex31(self, capsys):
        code, out, _ = run(["normal-form", "--example", "ex-3.1"], capsys)
        nf = json.loads(out)
        assert code == 0 and nf["k"] == 1 and nf["h"] == [[0, -1], [1, -1]]
        assert nf["readings_agree"] is False
        reduced = ThetaMatrix.from_json(nf["reduced"])
        assert all(a.is_zero() for a in reduced.row(1))


def _read_csv(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(rows))


class TestOrbit:
    def test_ex32_monotone(self, capsys):
        code, out, _ = run(["orbit", "--example", "ex-3.2", "--sym", "phi=1.0",
                            "--budget", "10000", "--grid", "0.05"], capsys)
        assert code == 0
        header = [l for l in out.splitlines() if l.startswith("#")]
        assert any("budget=10000" in l and "grid_delta=0.05" in l and "probe_resolution=32" in l
                   for l in header)
        rows = _read_csv(out)
        assert list(rows[0]) == ["points", "dispersion", "budget_used"]
        disp = [float(r["dispersion"]) for r in rows]
        assert disp == sorted(disp, reverse=True) and disp[-1] < disp[0]
        assert int(rows[-1]["points"]) == 10000

    def test_rational_closes(self, capsys, tmp_path):
        p = tmp_path / "r.json"
        p.write_text(ThetaMatrix.from_strings([["pi/2", "pi/3"]]).dumps())
        dump = tmp_path / "pts.csv"
        code, out, _ = run(["orbit", str(p), "--budget", "1000", "--grid", "0.05",
                            "--dump", str(dump)], capsys)
        assert code == 0 and "exhausted=True occupied_cells=96" in out
        assert len(dump.read_text().splitlines()) == 97

    def test_bad_sym(self, capsys):
        assert run(["orbit", "--example", "ex-3.2", "--sym", "phi"], capsys)[0] == 2
        assert run(["orbit", "--example", "ex-3.2", "--sym", "psi=1"], capsys)[0] == 2
        assert run(["orbit", "--example", "ex-3.2", "--budget", "0"], capsys)[0] == 2


def _float_file(tmp_path, name, values):
    p = tmp_path / name
    p.write_text(json.dumps({"n": len(values), "g": len(values[0]) // 2, "entries": values}))
    return str(p)


class TestApprox:
    def test_target_is_base(self, capsys, tmp_path):
        base = _float_file(tmp_path, "b.json", [[1.0, math.sqrt(2)]])
        code, out, _ = run(["approx", "--base", base, "--target", base, "--eps", "0.01"], capsys)
        res = json.loads(out)
        assert code == 0 and res["found"] and res["error"] == 0 and res["K"] == [[1, 0], [0, 1]]

    def test_solves(self, capsys, tmp_path):
        base = _float_file(tmp_path, "b.json", [[1.0, 1.4142135]])
        target = _float_file(tmp_path, "t.json", [[0.3, 5.9]])
        for strategy in ("auto", "beam"):
            code, out, _ = run(["approx", "--base", base, "--target", target, "--eps", "0.2",
                                "--strategy", strategy], capsys)
            res = json.loads(out)
            assert code == 0 and res["found"] and res["error"] < 0.2
            assert res["ratio_C"] == pytest.approx(res["error"] / 0.2)

    def test_theta_base_hypothesis(self, capsys, tmp_path):
        base = tmp_path / "b.json"
        base.write_text(ThetaMatrix.from_strings([["pi/2", "pi/3"]]).dumps())
        target = _float_file(tmp_path, "t.json", [[1.0, 2.0]])
        code, _, err = run(["approx", "--base", str(base), "--target", target, "--eps", "0.05"], capsys)
        assert code == 2 and "density certificate" in err
        with pytest.warns(UserWarning, match="not certified dense"):
            code, out, _ = run(["approx", "--base", str(base), "--target", target, "--eps", "0.05",
                                "--allow-violation"], capsys)
        assert code == 0 and json.loads(out)["found"] is False

    def test_bad_eps(self, capsys, tmp_path):
        base = _float_file(tmp_path, "b.json", [[1.0, 2.0]])
        assert run(["approx", "--base", base, "--target", base, "--eps", "0"], capsys)[0] == 2


class TestCurve:
    def test_app2d_none(self, capsys):
        code, out, _ = run(["curve", "--example", "app-A-2d", "--bound", "6"], capsys)
        assert code == 0 and json.loads(out) == {"found": False, "k": None, "bound": 6}

    def test_genus1(self, capsys, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(ThetaMatrix.from_strings([["x", "pi/2"]], ["x"]).dumps())
        code, out, _ = run(["curve", str(p)], capsys)
        res = json.loads(out)
        assert code == 0 and res["k"] == [1, 0] and res["image"] == [{"pi": "0/1", "syms": {"x": "1/1"}}]


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["certify"], capsys)[0] == 2
    assert run(["--version"], capsys)[0] == 0


def test_console_script():
    proc = subprocess.run(["torusrep", "certify", "--example", "ex-3.2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dense"] is True
