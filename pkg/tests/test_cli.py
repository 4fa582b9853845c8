import json

import pytest

from dyadic_sobolev.cli import main
from dyadic_sobolev.haar import HaarExpansion
from dyadic_sobolev.multipliers import Multiplier
from dyadic_sobolev.suites import fixed_pairing_example


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_delta_and_classify(capsys):
    code, out, _ = run(capsys, "delta", "3/2", "3/4")
    assert code == 0 and json.loads(out)["delta"] == "2/2^0"
    code, out, _ = run(capsys, "classify", "5/8", "7/8")
    res = json.loads(out)
    assert code == 0
    assert res["interval"] == {"j": 1, "k": 1}
    assert (res["class"], res["level"]) == (1, 1)


def test_kernel(capsys):
    code, out, _ = run(capsys, "kernel", "5/8", "7/8")
    res = json.loads(out)
    assert code == 0
    assert res["entries"] == {"0": "2", "1": "-2"}
    assert res["delta_times_norm"] == pytest.approx(2 ** 0.5)
    code, out, _ = run(capsys, "kernel", "5/8", "7/8", "--component", "1")
    assert json.loads(out)["value"] == "-2"


def test_equal_points_is_usage_error(capsys):
    code, _, err = run(capsys, "kernel", "1/2", "2/4")
    assert code == 2 and "error" in err


def test_bad_point_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["delta", "1/3", "1"])
    assert exc.value.code == 2


def test_apply(tmp_path, capsys):
    f = write_json(tmp_path / "f.json", HaarExpansion({(2, 1): 1.0, (0, 0): 1.0}).to_json())
    code, out, _ = run(capsys, "apply", "--op", "laplacian", "--s", "0.5", f)
    assert code == 0
    assert HaarExpansion.from_json(json.loads(out)) == HaarExpansion({(2, 1): 2.0, (0, 0): 1.0})
    code, out, _ = run(capsys, "apply", "--op", "partial", "--s", "0.5", "--i", "1", f)
    assert HaarExpansion.from_json(json.loads(out)) == HaarExpansion({(2, 1): 2.0})
    code, out, _ = run(capsys, "apply", "--op", "gradient", "--s", "0.5", f)
    assert [c["i"] for c in json.loads(out)["components"]] == [0, 1]
    m = write_json(tmp_path / "m.json", Multiplier({1: 0.5}).to_json())
    code, out, _ = run(capsys, "apply", "--op", "multiplier", "--m", m, f)
    assert HaarExpansion.from_json(json.loads(out)) == HaarExpansion({(2, 1): 0.5})
    code, _, _ = run(capsys, "apply", "--op", "partial", f)
    assert code == 2
    code, _, _ = run(capsys, "apply", "--op", "laplacian", "--s", "1.5", f)
    assert code == 2
    code, _, _ = run(capsys, "apply", "--op", "laplacian", str(tmp_path / "missing.json"))
    assert code == 2


def test_energy(tmp_path, capsys):
    f = write_json(tmp_path / "f.json", HaarExpansion({(0, 0): 1.0, (1, 1): 0.5, (-1, 1): -0.25}).to_json())
    code, out, _ = run(capsys, "energy", "--s", "0.5", f)
    res = json.loads(out)
    assert code == 0
    assert res["c"] == pytest.approx(3.0)
    assert res["integral"] == pytest.approx(4.59375)


def test_pairing(tmp_path, capsys):
    phi, psi = fixed_pairing_example()
    a = write_json(tmp_path / "phi.json", phi.to_json())
    b = write_json(tmp_path / "psi.json", {"components": [{"i": i, "expansion": e.to_json()} for i, e in psi.items()]})
    code, out, _ = run(capsys, "pairing", a, b)
    res = json.loads(out)
    assert code == 0
    assert res["lhs"] == pytest.approx(3 / 32) and res["rhs"] == pytest.approx(3 / 32)
    c = write_json(tmp_path / "bad.json", {"components": [{"i": 0, "expansion": phi.to_json()}]})
    code, _, _ = run(capsys, "pairing", a, c)
    assert code == 2


def test_sweep_formats(capsys):
    code, out, _ = run(capsys, "sweep", "--s", "0.5", "--p", "3/2,2,4", "--trials", "8", "--seed", "2")
    res = json.loads(out)
    assert code == 0
    assert [e["p"] for e in res["perP"]] == [1.5, 2.0, 4.0]
    code, out, _ = run(capsys, "sweep", "--s", "0.5", "--p", "2,3", "--trials", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "s,p,trials,maxRatio,meanRatio,argmaxSeedIndex"
    assert len(lines) == 3


def test_sweep_rejects_bad_p(capsys):
    code, _, err = run(capsys, "sweep", "--s", "0.5", "--p", "1", "--trials", "4")
    assert code == 2 and "p" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "multiplier")
    res = json.loads(out)
    assert code == 0 and res["passed"]
    assert res["suites"][0]["suite"] == "multiplier"
    code, out, _ = run(capsys, "verify", "metric", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "suite,check,passed,witness"
    code, _, _ = run(capsys, "verify", "nope")
    assert code == 2


def test_verify_reports_failure(monkeypatch, capsys):
    from dyadic_sobolev import cli
    from dyadic_sobolev.suites import SuiteResult

    def broken(seed=0):
        r = SuiteResult("broken")
        r.add("always false", False)
        return r

    monkeypatch.setitem(cli.SUITES, "broken", broken)
    code, out, _ = run(capsys, "verify", "broken")
    assert code == 1 and json.loads(out)["passed"] is False
