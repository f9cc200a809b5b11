import json
import subprocess
import sys

import jsonschema
import pytest

from zhomalg.cli import SCHEMA_FILES, load_schema, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, load_schema(argv[0]))
    return data


def test_classify(capsys):
    data = call_json(capsys, "classify", "Z/2+Z/3")
    assert data["invariant_factors"] == ["6"] and data["free_rank"] == "0"


def test_tor_z4_z6(capsys):
    data = call_json(capsys, "tor", "Z/4", "Z/6")
    assert [r["invariant_factors"] for r in data["results"]] == [["2"], ["2"], []]
    assert [r["n"] for r in data["results"]] == ["0", "1", "2"]


def test_tor_nmax(capsys):
    data = call_json(capsys, "tor", "Z", "Z/6", "0")
    assert len(data["results"]) == 1


def test_tensor_and_hom(capsys):
    assert call_json(capsys, "tensor", "Z/4", "Z/6")["result"]["literal"] == "Z/2"
    assert call_json(capsys, "hom", "Z/4", "Z/6")["result"]["literal"] == "Z/2"
    assert call_json(capsys, "hom", "Z/4", "Z")["result"]["literal"] == "0"


def test_snf(capsys):
    data = call_json(capsys, "snf", '[["2","0"],["0","3"]]')
    assert data["diagonal"] == ["1", "6"] and data["rank"] == "2"


def test_snf_big_integers(capsys):
    big = str(10**30)
    data = call_json(capsys, "snf", json.dumps([[big, "0"], ["0", big]]))
    assert data["diagonal"] == [big, big]


def test_resolve(capsys):
    data = call_json(capsys, "resolve", "Z/5")
    assert data["ranks"] == ["1", "1"] and data["exact"]
    data = call_json(capsys, "resolve", "Z/4", "--style", "padded", "--pad", "2")
    assert data["exact"] and len(data["ranks"]) == 4


def test_pi0_zero_group(capsys):
    data = call_json(capsys, "pi0", "0", "Z/6", "--rank", "2")
    assert data["componentCount"] == "1"


def test_pi0_z2_z2(capsys):
    data = call_json(capsys, "pi0", "Z/2", "Z/2", "--rank", "2")
    assert data["componentCount"] == "2" and data["bijection"]
    assert data["componentGroup"]["literal"] == "Z/2"


def test_check_suite(capsys):
    data = call_json(capsys, "check", "--suite", "schanuel", "--seed", "3")
    assert data["pass"] and data["cases"] == "50"


def test_check_is_deterministic(capsys):
    a = call(capsys, "check", "--suite", "purity", "--seed", "4")
    b = call(capsys, "check", "--suite", "purity", "--seed", "4")
    assert a == b


def test_text_format(capsys):
    code, out, _ = call(capsys, "--format", "text", "classify", "Z^2+Z/4")
    assert code == 0
    assert "invariant_factors: [4]" in out and "free_rank: 2" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("classify", "Z/"),
        ("classify", "Q"),
        ("tensor", "Z/4", "Z/4 +"),
        ("snf", "[[1, 2], [3"),
        ("snf", '{"a": 1}'),
    ],
)
def test_parse_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert "position" in err or "array" in err
    assert out == ""


def test_parse_error_points_at_position(capsys):
    code, _, err = call(capsys, "classify", "Z/2 + X")
    assert code == 2
    lines = err.splitlines()
    assert lines[-1].index("^") == lines[-2].index("X")


def test_precondition_failures_exit_1(capsys):
    assert call(capsys, "pi0", "Z", "Z/2")[0] == 1
    assert call(capsys, "tor", "Z/2", "Z/2", "-1")[0] == 1


def test_usage_errors_exit_2(capsys):
    assert call(capsys)[0] == 2
    assert call(capsys, "check", "--suite", "nope")[0] == 2


def test_every_command_has_a_schema():
    for name in SCHEMA_FILES:
        schema = load_schema(name)
        jsonschema.Draft202012Validator.check_schema(schema)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zhomalg", "classify", "Z/2+Z/3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["literal"] == "Z/6"
