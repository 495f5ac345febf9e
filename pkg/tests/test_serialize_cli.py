import json
import subprocess
import sys

import pytest

from hopfsupport import serialize as ser
from hopfsupport.battery import dtilde_battery
from hopfsupport.cli import main
from hopfsupport.kernels import parse_spec

SPEC = "Ga:n=1,p=2,r=1"


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


@pytest.mark.parametrize("role", ser.ROLES)
def test_algebra_json_round_trip(role):
    a = ser.resolve_algebra(ser.algebra_id(role, "Heis3:p=2,r=1"))
    d = ser.algebra_to_json(a)
    again = ser.algebra_to_json(ser.algebra_from_json(json.loads(ser.dumps(d))))
    assert ser.dumps(again) == ser.dumps(d)


def test_module_json_round_trip():
    ref = ser.algebra_id("D~", SPEC)
    for m in dtilde_battery(parse_spec(SPEC)):
        d = ser.module_to_json(m, ref)
        back = ser.module_from_json(json.loads(ser.dumps(d)), ser.resolve_algebra(ref))
        assert ser.dumps(ser.module_to_json(back, ref)) == ser.dumps(d)


def test_bad_algebra_id():
    with pytest.raises(Exception):
        ser.resolve_algebra("X@Ga:n=1,p=2,r=1")


def test_build_and_support(tmp_path, capsys):
    code, out = run(["build", SPEC, "--battery", "--out", str(tmp_path)], capsys)
    assert code == 0
    info = json.loads(out)
    assert info["dims"] == {"coord": 2, "group": 2, "D": 4, "D~": 8, "O": 4}
    k_file = next(f for f in info["files"] if "module-Dtilde-k-" in f)
    reg_file = next(f for f in info["files"] if "module-Dtilde-regular-" in f)
    code, out = run(["support", "--module", k_file, "--csv", str(tmp_path / "k.csv")], capsys)
    assert code == 0 and len(json.loads(out)["points"]) == 3
    assert (tmp_path / "k.csv").read_text().splitlines()[0] == "x^2,d[x]"
    code, out = run(["support", "--module", reg_file, "--field-ext", "2"], capsys)
    assert code == 0 and json.loads(out)["points"] == []
    code, out = run(["support", "--module", k_file, "--tensor-with", reg_file, "--both-coproducts"], capsys)
    assert code == 0 and json.loads(out)["tensor_property_holds"]


def test_build_is_deterministic(tmp_path, capsys):
    _, first = run(["build", SPEC, "--out", str(tmp_path / "a")], capsys)
    _, second = run(["build", SPEC, "--out", str(tmp_path / "b")], capsys)
    assert json.loads(first)["bundle_sha256"] == json.loads(second)["bundle_sha256"]


def test_jordan_command(tmp_path, capsys):
    _, out = run(["build", SPEC, "--battery", "--out", str(tmp_path)], capsys)
    f = next(f for f in json.loads(out)["files"] if "Dtilde-A__x_2_u_2_-" in f)
    code, out = run(["jordan", "--module", f], capsys)
    assert code == 0 and json.loads(out)["top"] == [2, 2]


def test_cohomology_command(tmp_path, capsys):
    code, out = run(["cohomology", f"D~@{SPEC}", "--length", "4", "--carlson", "2", "--out", str(tmp_path)], capsys)
    assert code == 0
    info = json.loads(out)
    assert info["betti"] == [1, 2, 3, 4, 5]
    assert len(info["files"]) == 3
    assert (tmp_path / "betti-Dtilde_Ga_n=1_p=2_r=1.csv").exists()


@pytest.mark.parametrize("argv", [
    ["build", "Ga:p=2,q=3"],
    ["cohomology", f"D~@{SPEC}", "--length", "40"],
    ["verify", "no_such_suite"],
    ["support", "--module", "/nonexistent.json"],
])
def test_usage_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)] if argv[0] == "verify" else argv) == 2


def test_unknown_config_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1, "colour": "blue"}))
    assert main(["--config", str(cfg), "build", SPEC, "--out", str(tmp_path)]) == 2


def test_verify_and_report(tmp_path, capsys):
    code, out = run(["verify", "structure_maps", "--out", str(tmp_path)], capsys)
    assert code == 0 and json.loads(out)["pass"]
    code, out = run(["report", str(tmp_path)], capsys)
    assert code == 0


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hopfsupport.cli", "build", SPEC, "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["spec"] == SPEC
