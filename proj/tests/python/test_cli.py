import json
import subprocess

import jsonschema


def call(cli, *args, stdin=None):
    return subprocess.run([cli, *args], input=stdin, capture_output=True, text=True, timeout=120)


def test_report_file_and_hash(cli, root, tmp_path, schemas):
    out = tmp_path / "r.json"
    r = call(cli, "cohomology", "--spec", str(root / "examples_specs/cohomology_d4.json"), "--out", str(out))
    assert r.returncode == 0 and r.stdout == ""
    report = json.loads(out.read_text())
    jsonschema.validate(report, schemas["report"])
    groups = {g["degree"]: g["invariant_factors"] for g in report["results"]["groups"]}
    assert groups[2] == [2, 2, 2]


def test_stdin_and_text(cli, root):
    spec = (root / "examples_specs/lie_tables.json").read_text()
    r = call(cli, "lie", "--spec", "-", "--format", "text", stdin=spec)
    assert r.returncode == 0
    assert "e1_diag_zero true" in r.stdout
    assert "[[11,2],[22,1]]" in r.stdout


def test_exit_codes(cli, tmp_path, schemas):
    out = tmp_path / "never.json"
    r = call(cli, "cohomology", "--spec", "-", "--out", str(out), stdin="{not json")
    assert r.returncode == 2 and not out.exists()
    jsonschema.validate(json.loads(r.stderr), schemas["error"])

    spec = {"schema": "obstower-spec/1", "kind": "cohomology",
            "module": {"group": {"cyclic": 100000}, "factors": [2]}, "degrees": [1]}
    r = call(cli, "cohomology", "--spec", "-", stdin=json.dumps(spec))
    assert r.returncode == 3
    assert json.loads(r.stderr)["error"]["exit_code"] == 3

    r = call(cli, "cohomology", "--bogus-flag")
    assert r.returncode == 2

    r = call(cli, "selftest")
    assert r.returncode == 0 and json.loads(r.stdout)["results"]["all_pass"]
