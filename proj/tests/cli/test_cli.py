"""End-to-end checks of the qcdim executable: exit codes, determinism, output formats."""

import json
import os
import pathlib
import subprocess

import jsonschema
import pytest
from referencing import Registry, Resource

BIN = os.environ.get("QCDIM_BIN", "qcdim")
SCHEMAS = pathlib.Path(os.environ.get("QCDIM_SCHEMAS", "schemas"))


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
    full_env.pop("QCDIM_PRECISION", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, env=full_env, cwd=cwd, timeout=300)


def load_schema(name):
    return json.loads((SCHEMAS / name).read_text())


@pytest.fixture(scope="module")
def validators():
    envelope = load_schema("envelope.schema.json")
    report = load_schema("verify_report.schema.json")
    registry = Registry().with_resources(
        [
            (envelope["$id"], Resource.from_contents(envelope)),
            (report["$id"], Resource.from_contents(report)),
        ]
    )
    cls = jsonschema.Draft202012Validator
    cls.check_schema(envelope)
    cls.check_schema(report)
    return {
        "envelope": cls(envelope, registry=registry),
        "report": cls(report, registry=registry),
    }


# -- exit-code contract ---------------------------------------------------------

EXIT_CASES = [
    (["bounds", "--L", "0.5", "--K", "2", "--methods", "astala,theorem42,theorem43"], 0),
    (["bounds", "--L", "1", "--K", "1"], 0),
    (["--strict", "bounds", "--L", "1", "--K", "1"], 1),
    (["bounds", "--L", "0.0:1.0:5"], 2),
    (["bounds", "--L", "0.5", "--K", "0.5"], 2),
    (["bounds", "--L", "0.5", "--methods", "nope"], 2),
    (["bounds"], 2),
    (["optimize", "--L", "0.5", "--K", "2", "--direction", "lower"], 0),
    (["optimize", "--L", "0.5", "--K", "1"], 0),
    (["optimize", "--L", "0.5", "--K", "2", "--direction", "sideways"], 2),
    (["dim", "--cantor", "2:3:12"], 0),
    (["dim", "--cantor", "2:4:10", "--map", "power:1.5", "--sandwich", "astala"], 0),
    (["--tol", "sandwich_slack=0", "dim", "--cantor", "2:3:12", "--sandwich", "astala"], 1),
    (["dim"], 2),
    (["dim", "--cantor", "10:10:9"], 2),
    (["--precision", "1", "bounds", "--L", "0.5"], 2),
    (["--tol", "bogus=1", "bounds", "--L", "0.5"], 2),
    (["--format", "xml", "bounds", "--L", "0.5"], 2),
    (["frobnicate"], 2),
    ([], 2),
    (["--version"], 0),
]


@pytest.mark.parametrize("args,code", EXIT_CASES, ids=[" ".join(a) or "<none>" for a, _ in EXIT_CASES])
def test_exit_codes(args, code, tmp_path):
    r = run(*args, cwd=tmp_path)
    assert r.returncode == code, r.stderr.decode()
    assert r.returncode in (0, 1, 2)


def test_open_domain_message_names_interval():
    r = run("bounds", "--L", "0.0:1.0:5")
    assert r.returncode == 2
    assert "(0,1)" in r.stderr.decode()


def test_verify_full_run_passes(tmp_path):
    r = run("--format", "text", "verify", cwd=tmp_path)
    assert r.returncode == 0, r.stderr.decode()
    assert "15/15 claims passed" in r.stdout.decode()
    assert (tmp_path / "verify_report.json").exists()


def test_verify_low_precision_fails(tmp_path):
    r = run("--precision", "15", "verify", cwd=tmp_path)
    assert r.returncode == 1
    assert "warning" in r.stderr.decode()


def test_verify_empty_filter_warns(tmp_path, validators):
    report = tmp_path / "empty.json"
    r = run("--out", str(report), "verify", "--filter", "no.such.claim")
    assert r.returncode == 0
    assert "matches no claim" in r.stderr.decode()
    doc = json.loads(report.read_text())
    validators["report"].validate(doc)
    assert doc["rows"] == []
    assert doc["summary"] == {"total": 0, "passed": 0, "failed": 0}


def test_verify_bad_filter_is_usage_error(tmp_path):
    assert run("verify", "--filter", "root[", cwd=tmp_path).returncode == 2


# -- determinism and formats ---------------------------------------------------------

DETERMINISM = [
    ["bounds", "--L", "0.1:0.9:5", "--K", "1.5:3:3"],
    ["optimize", "--L", "0.2:0.8:3", "--K", "2", "--direction", "upper"],
    ["dim", "--cantor", "3:5:6", "--map", "power:2", "--sandwich", "astala,composed_line"],
]


@pytest.mark.parametrize("fmt", ["csv", "json", "text"])
@pytest.mark.parametrize("args", DETERMINISM, ids=[a[0] for a in DETERMINISM])
def test_byte_identical_reruns(args, fmt):
    a = run("--format", fmt, *args)
    b = run("--format", fmt, *args)
    assert a.returncode == 0, a.stderr.decode()
    assert a.stdout == b.stdout


def test_verify_report_is_byte_identical(tmp_path):
    for name in ("a.json", "b.json"):
        assert run("--out", str(tmp_path / name), "verify").returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_csv_conventions():
    out = run("bounds", "--L", "0.5", "--K", "2").stdout.decode("utf-8")
    assert "\r" not in out
    lines = out.rstrip("\n").split("\n")
    assert lines[0] == "L,K,method,lower,upper,hypotheses_met,status"
    assert len(lines) == 7
    lower = lines[1].split(",")[3]
    mantissa = lower.split("e")[0].replace(".", "").lstrip("-")
    assert len(mantissa) == 30


def test_optimize_grid_csv_header():
    out = run("optimize", "--L", "0.3:0.6:2", "--K", "1.5:2:2").stdout.decode()
    lines = out.rstrip("\n").split("\n")
    assert lines[0] == "L,K,direction,astala_bound,theorem_bound,optimized_bound,k2_star,hypotheses_met"
    assert len(lines) == 5


@pytest.mark.parametrize(
    "args",
    [
        ["bounds", "--L", "0.5", "--K", "2"],
        ["bounds", "--L", "1", "--K", "1"],
        ["optimize", "--L", "0.3:0.6:2", "--K", "1:2:2", "--direction", "upper"],
        ["dim", "--cantor", "2:3:8"],
        ["dim", "--cantor", "2:3:8", "--sandwich", "all"],
        ["dim", "--cantor", "2:2:4", "--sandwich", "all"],
        ["verify", "--filter", "r*"],
    ],
    ids=lambda a: " ".join(a),
)
def test_json_matches_schema(args, validators, tmp_path):
    r = run("--format", "json", *args, cwd=tmp_path)
    assert r.returncode == 0, r.stderr.decode()
    validators["envelope"].validate(json.loads(r.stdout))


def test_verify_report_matches_schema(validators, tmp_path):
    report = tmp_path / "report.json"
    assert run("--out", str(report), "verify").returncode == 0
    doc = json.loads(report.read_text())
    validators["report"].validate(doc)
    assert doc["header"]["timestamp_utc_iso8601"] == "2023-11-14T22:13:20Z"
    assert doc["summary"]["failed"] == 0


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "bounds.csv"
    r = run("--out", str(target), "bounds", "--L", "0.5", "--K", "2")
    assert r.returncode == 0
    assert r.stdout == b""
    assert target.read_text().startswith("L,K,method,")


def test_precision_environment_and_flag(tmp_path):
    env_run = run("--format", "json", "bounds", "--L", "0.5", env={"QCDIM_PRECISION": "40"})
    assert json.loads(env_run.stdout)["config"]["precision_digits"] == 40
    flag_run = run(
        "--precision", "60", "--format", "json", "bounds", "--L", "0.5", env={"QCDIM_PRECISION": "40"}
    )
    assert json.loads(flag_run.stdout)["config"]["precision_digits"] == 60
