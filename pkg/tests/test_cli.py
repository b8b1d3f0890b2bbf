import json
import subprocess
import sys

import pytest

from conway_mk.bounds import max_row_1d
from conway_mk.cli import INVALID_INPUT, OK, VERIFICATION_FAILED, run


def payload(argv):
    res = run(argv)
    return res, (json.loads(res.render()) if res.text is None else None)


def test_bounds_example():
    res, j = payload(["bounds", "--m", "3", "--k", "2", "--d", "2"])
    assert res.status == OK
    assert (j["lower"], j["upper"], j["achieved"]) == (6, 7, 6)
    assert j["upper_element"]["decimal"] == "20.562305898749" and j["upper_element"]["exact"] is False


def test_classic_bounds_strict():
    _, j = payload(["bounds", "--m", "1", "--k", "2", "--d", "2"])
    assert j["upper"] == 4 and j["strict_upper"] is True


def test_construct_verify_roundtrip(tmp_path):
    out = tmp_path / "t.jsonl"
    res = run(["construct", "--m", "3", "--k", "2", "--d", "2", "--out", str(out)])
    assert res.status == OK and out.exists()
    res, j = payload(["verify", "--trace", str(out), "--energy-check"])
    assert res.status == OK and j["energy_increases"] == 0


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("m", [2, 3, 5, 9])
def test_construct_grid_roundtrips(tmp_path, k, m):
    for n in range(1, max_row_1d(m, k) + 1):
        out = tmp_path / f"{k}-{m}-{n}.jsonl"
        assert run(["construct", "--m", str(m), "--k", str(k), "--n", str(n), "--out", str(out)]).status == OK
        assert run(["verify", "--trace", str(out)]).status == OK


def test_construct_to_stdout_is_trace():
    res = run(["construct", "--m", "2", "--k", "2", "--n", "3"])
    lines = res.render().splitlines()
    assert json.loads(lines[0]) == {"version": 1, "m": 2, "k": 2, "d": 1, "background": "halfspace"}
    assert json.loads(lines[-1]) == {"claim": {"row": 3}}


def test_construct_infeasible():
    res, j = payload(["construct", "--m", "2", "--k", "2", "--n", "4"])
    assert res.status == VERIFICATION_FAILED and j["feasible"] is False
    assert j["certificate"]["decimal"].startswith("-0.618")


def test_amass(tmp_path):
    out = tmp_path / "a.jsonl"
    assert run(["amass", "--m", "5", "--k", "2", "--out", str(out)]).status == OK
    assert json.loads(out.read_text().splitlines()[-1]) == {"claim": {"count": 8, "at": [1]}}
    assert run(["verify", "--trace", str(out), "--energy-check"]).status == OK
    out2 = tmp_path / "b.jsonl"
    assert run(["amass", "--m", "1", "--k", "2", "--d", "2", "--out", str(out2)]).status == OK
    assert run(["verify", "--trace", str(out2)]).status == OK


def test_verify_tampered(tmp_path):
    out = tmp_path / "t.jsonl"
    run(["construct", "--m", "3", "--k", "2", "--out", str(out)])
    lines = out.read_text().splitlines()
    out.write_text("\n".join(lines[:1] + lines[2:]) + "\n")
    res, j = payload(["verify", "--trace", str(out)])
    assert res.status == VERIFICATION_FAILED and j["failed_index"] is not None


def test_verify_malformed(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"version":1,"m":1,"k":2,"d":1,"background":"halfspace"}\n{"from":[0,1],"axis":0,"sign":1}\n')
    assert run(["verify", "--trace", str(bad)]).status == INVALID_INPUT
    assert run(["verify", "--trace", str(tmp_path / "missing.jsonl")]).status == INVALID_INPUT


def test_scan_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["scan", "--k", "2", "--d", "2", "--m-from", "2", "--m-to", "50", "--out", str(out)]).status == OK
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = raw.decode().splitlines()
    assert rows[0] == "m,upper,achieved"
    ms = [int(r.split(",")[0]) for r in rows[1:]]
    assert {3, 7, 18, 47} <= set(ms)
    full = run(["scan", "--m-from", "2", "--m-to", "5", "--all"]).render().splitlines()
    assert full[1:] == ["2,6,6", "3,7,6", "4,7,7", "5,8,8"]


def test_energy():
    _, j = payload(["energy", "--m", "1", "--k", "2", "--d", "2", "--row", "5"])
    assert j["energy"] == {"k": 2, "coeffs": ["1", "0"], "decimal": "1.000000000000", "exact": True}
    assert j["verdict"] == "unreachable_infinite"
    _, j = payload(["energy", "--m", "1", "--k", "2", "--d", "2", "--row", "0"])
    assert j["energy"]["coeffs"] == ["3", "5"]


def test_energy_of_trace(tmp_path):
    out = tmp_path / "t.jsonl"
    run(["construct", "--m", "2", "--k", "2", "--n", "3", "--out", str(out)])
    _, j = payload(["energy", "--m", "2", "--k", "2", "--row", "3", "--trace", str(out)])
    _, j0 = payload(["energy", "--m", "2", "--k", "2", "--row", "3"])
    assert float(j["energy"]["decimal"]) == pytest.approx(float(j0["energy"]["decimal"]))
    assert run(["energy", "--m", "3", "--k", "2", "--row", "3", "--trace", str(out)]).status == INVALID_INPUT


def test_oracle():
    res, j = payload(["oracle", "--m", "2", "--k", "2", "--d", "1"])
    assert res.status == OK and j["value"] == j["formula"] == 3 and j["exhausted"]
    _, j = payload(["oracle", "--m", "2", "--k", "2", "--objective", "max_count_at"])
    assert j["value"] == j["formula"] == 3


def test_sequence_and_constant():
    _, j = payload(["sequence", "--k", "2", "--terms", "6", "--n", "3"])
    assert j["knacci"] == [0, 1, 1, 2, 3, 5]
    assert j["cumulative"] == [1, 2, 4, 7, 12, 20]
    assert j["lucas"] == [2, 1, 3, 4, 7, 11]
    assert j["S"] == {"0": 2, "1": 3}
    _, j = payload(["constant", "--k", "2", "--digits", "20"])
    assert j["phi"] == "1.61803398874989484820" and j["exact"] is False


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["bounds"],
        ["bounds", "--m", "0"],
        ["bounds", "--m", "2", "--k", "1"],
        ["bounds", "--m", "x"],
        ["bounds", "--m", "2", "--bogus"],
        ["scan", "--m-from", "5", "--m-to", "2"],
        ["constant", "--digits", "-1"],
    ],
)
def test_invalid_input(argv):
    assert run(argv).status == INVALID_INPUT


def test_deterministic_output():
    a = run(["bounds", "--m", "7", "--k", "3", "--d", "3"]).render()
    b = run(["bounds", "--m", "7", "--k", "3", "--d", "3"]).render()
    assert a == b


def test_process_exit_codes(tmp_path):
    def call(*args):
        return subprocess.run([sys.executable, "-m", "conway_mk", *args], capture_output=True, text=True)

    ok = call("bounds", "--m", "3", "--k", "2", "--d", "2")
    assert ok.returncode == 0 and json.loads(ok.stdout)["upper"] == 7
    assert call("construct", "--m", "2", "--n", "4").returncode == 1
    bad = call("bounds", "--m", "0")
    assert bad.returncode == 2 and "error" in json.loads(bad.stderr)
