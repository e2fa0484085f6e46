import json
from pathlib import Path

import pytest

from conelab import assembly as asm
from conelab.cli import cone_from_json, main, parse_input, parse_input_data, run
from conelab.errors import InputError
from conelab.polyhedra import unions_equal

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_parse_fixture():
    spec = parse_input(FIX / "exA.json")
    assert len(spec.constraints) == 2 and spec.ystar == (0, 1)
    assert spec.ge is None


def test_parse_ge_block():
    spec = parse_input(FIX / "exB_ge.json")
    assert spec.ge["F"] == ["x1", "x2"] and tuple(spec.ge["xbar"]) == (0, -1)


def test_missing_field_names_path():
    data = json.loads((FIX / "exA.json").read_text())
    del data["ystar"]
    with pytest.raises(InputError) as err:
        parse_input_data(data)
    assert "$.ystar" in str(err.value.path) + str(err.value)


@pytest.mark.parametrize(
    "patch,path",
    [({"ybar": ["0"]}, "$.ybar"), ({"q": "y1"}, "$.q"), ({"options": {"max_enum": -1}}, "$.options"), ({"extra": 1}, "$")],
)
def test_schema_violations(patch, path):
    data = json.loads((FIX / "exA.json").read_text())
    data.update(patch)
    with pytest.raises(InputError) as err:
        parse_input_data(data)
    assert err.value.path.startswith(path)


def test_spec_roundtrips_through_json():
    spec = parse_input(FIX / "exB_ge.json")
    again = parse_input_data(json.loads(json.dumps(spec.to_json())))
    assert again.to_json() == spec.to_json()


def test_limiting_text(capsys):
    code, out = call(capsys, "limiting", FIX / "exA.json")
    assert code == 0
    assert "completeness Exact" in out.out
    assert "w1* - 2 w1 = 0, w2 = 0" in out.out


def test_cq_text(capsys):
    code, out = call(capsys, "cq", FIX / "exA.json")
    assert code == 0
    assert "LICQ: False" in out.out and "MFCQ: False" in out.out and "SOSCMS: Proven" in out.out


def test_aubin_text(capsys):
    code, out = call(capsys, "aubin", FIX / "exB_ge.json")
    assert code == 0
    assert "Disproven" in out.out and "witness" in out.out


def test_direction_with_negative_value(capsys):
    code, out = call(capsys, "direction", FIX / "exA.json", "-v", "-1,0")
    assert code == 0
    assert "{}, {1}, {2}" in out.out


def test_direction_requires_v(capsys):
    code, out = call(capsys, "direction", FIX / "exA.json")
    assert code == 2


def test_bad_expression_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"vars": ["y1"], "q": ["y1^"], "ybar": ["0"], "ystar": ["0"]}))
    code, out = call(capsys, "cq", f)
    assert code == 2 and "position" in out.err


def test_missing_file_exit_code(capsys):
    code, _ = call(capsys, "cq", FIX / "nope.json")
    assert code == 2


def test_only_unknown_exit_code(capsys):
    code, out = call(capsys, "limiting", FIX / "exD.json")
    assert code == 3 and "Unknown" in out.out


def test_json_report_roundtrips(capsys):
    code, out = call(capsys, "limiting", FIX / "exB.json", "--format", "json")
    assert code == 0
    rep = json.loads(out.out)
    assert rep["schema"] == "conelab-report/1"
    spec = parse_input(FIX / "exB.json")
    res = asm.full_limiting(spec.problem(), spec.probes)
    for key, union in (("lower", res.lower), ("upper", res.upper)):
        cones = [cone_from_json(pc) for pc in rep[key]["pieces"]]
        assert unions_equal(cones, union.cones())
        assert [cone_from_json(pc) for pc in rep[key]["pieces"]] == union.cones()
        assert rep[key]["completeness"] == union.completeness


def test_run_returns_report():
    rep = run("cones", parse_input(FIX / "exC.json"))
    assert rep.data["command"] == "cones" and not rep.only_unknown


def test_selftest(capsys):
    code, out = call(capsys, "selftest", "--seed", "7", "--count", "2")
    assert code == 0 and "dual_path" in out.out
