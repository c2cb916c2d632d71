import json

import pytest

from toriq.cli import (
    ParseError,
    exit_code_for,
    fan_from_dict,
    ingest,
    main,
    run_analyze,
    run_certify,
    run_ifunction,
    validate_report,
)
from toriq.catalog import CATALOG, builtin_fan
from toriq.fan import ValidationError


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_f2(capsys):
    code, out, _ = run(capsys, "analyze", "--fan", "F2")
    assert code == 0
    assert "semipositive: true" in out
    assert "P={1,3}" in out and "P={2,4}" in out
    assert "class=(1, -2, 1, 0)" in out


def test_analyze_f3(capsys):
    code, out, _ = run(capsys, "analyze", "--fan", "F3")
    assert code == 0
    assert "semipositive: false" in out


def test_analyze_p2_fano(capsys):
    code, out, _ = run(capsys, "analyze", "--fan", "P2")
    assert code == 0
    assert out.count("P={") == 1
    assert "-K.beta=3" in out
    assert "fano: true" in out


def test_ifunction_p2(capsys):
    code, out, _ = run(capsys, "ifunction", "--fan", "P2", "--cutoff", "2")
    assert code == 0
    assert "<1 psi^4, 1> at (1, 1, 1) = 6" in out
    assert "<x1 psi^3, 1> at (1, 1, 1) = -3" in out
    assert "<x1^2 psi^2, 1> at (1, 1, 1) = 1" in out
    assert "annihilation: ok" in out


def test_ifunction_f2_i0_true(capsys):
    code, out, _ = run(capsys, "ifunction", "--fan", "F2", "--cutoff", "2")
    assert code == 0
    assert "leading term I0 == 1: true" in out


def test_ifunction_f3_i0_false(capsys):
    code, out, _ = run(capsys, "ifunction", "--fan", "F3", "--cutoff", "2")
    assert code == 0
    assert "leading term I0 == 1: false" in out
    assert "two-point invariants: skipped" in out


def test_certify_f2_golden_star(capsys):
    code, out, _ = run(capsys, "certify", "--fan", "F2", "--cutoff", "3")
    assert code == 0
    assert "x1 * x1 = q1*q2 - 2*q1*x1*x2" in out
    assert "x2 * x2 = q2 - 2*x1*x2" in out
    assert "verdict: certified" in out


def test_certify_f3_exit3(capsys):
    code, out, _ = run(capsys, "certify", "--fan", "F3", "--cutoff", "3")
    assert code == 3
    assert "not semipositive" in out


def test_certify_p1(capsys):
    code, out, _ = run(capsys, "certify", "--fan", "P1", "--cutoff", "3")
    assert code == 0
    assert "x1 * x1 = q1" in out
    assert "verdict: certified" in out


def test_deterministic_output(capsys):
    for fmt in ("text", "json"):
        _, out1, _ = run(capsys, "certify", "--fan", "F2", "--format", fmt)
        _, out2, _ = run(capsys, "certify", "--fan", "F2", "--format", fmt)
        assert out1 == out2


def test_json_roundtrip_all_commands(capsys):
    for cmd in ("analyze", "ifunction", "certify"):
        code, out, _ = run(capsys, cmd, "--fan", "F2", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert validate_report(report)
        assert json.loads(json.dumps(report)) == report
        assert report["schema"] == "toriq/1"


def test_json_rationals_are_strings(capsys):
    _, out, _ = run(capsys, "ifunction", "--fan", "P2", "--cutoff", "2",
                    "--format", "json")
    report = json.loads(out)
    for entry in report["two_point_invariants"]["entries"]:
        assert isinstance(entry["value"], str)
    assert any(e["value"] == "1/8"
               for e in report["two_point_invariants"]["entries"])


def test_ingest_from_file(tmp_path, capsys):
    data = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
            "max_cones": [[1, 2], [2, 3], [1, 3]], "name": "myP2"}
    path = tmp_path / "fan.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "analyze", "--fan", str(path))
    assert code == 0
    assert "myP2" in out
    fan = ingest(str(path))
    assert fan.rays == builtin_fan("P2").rays


def test_ingest_rejects_non_primitive(tmp_path, capsys):
    data = {"dim": 2, "rays": [[2, 0], [0, 1], [-1, -1]],
            "max_cones": [[1, 2], [2, 3], [1, 3]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "analyze", "--fan", str(path))
    assert code == 2
    assert "primitive" in err


def test_ingest_rejects_non_smooth(tmp_path, capsys):
    data = {"dim": 2, "rays": [[1, 0], [1, 2], [-1, -1], [0, -1]],
            "max_cones": [[1, 2], [2, 3], [3, 4], [4, 1]]}
    path = tmp_path / "sing.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "analyze", "--fan", str(path))
    assert code == 2
    assert "smooth" in err


def test_ingest_rejects_bad_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "analyze", "--fan", str(path))
    assert code == 2


def test_ingest_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "--fan", "NoSuchFan")
    assert code == 2


def test_fan_from_dict_errors():
    with pytest.raises(ParseError):
        fan_from_dict({"dim": 2, "rays": [[1, 0]]})
    with pytest.raises(ParseError):
        fan_from_dict({"dim": 2, "rays": [[1, 0], [0, 1]],
                       "max_cones": [[1, 5]]})
    with pytest.raises(ValidationError):
        fan_from_dict({"dim": 1, "rays": [[1], [1]],
                       "max_cones": [[1], [2]]})


def test_all_catalog_commands_succeed(capsys):
    for name in CATALOG:
        code, _, _ = run(capsys, "analyze", "--fan", name)
        assert code == 0, name
        code, _, _ = run(capsys, "ifunction", "--fan", name, "--cutoff", "2")
        assert code == 0, name
        code, _, _ = run(capsys, "certify", "--fan", name, "--cutoff", "2")
        assert code == (3 if name == "F3" else 0), name


def test_exit_code_mapping():
    fan = builtin_fan("F2")
    assert exit_code_for(run_analyze(fan)) == 0
    assert exit_code_for(run_ifunction(fan, 2)) == 0
    assert exit_code_for(run_certify(fan, 2)) == 0
    assert exit_code_for(run_certify(builtin_fan("F3"), 2)) == 3


def test_non_simplicial_mori_cone_renders_vectors(tmp_path, capsys):
    # del Pezzo 7: five generators in a rank-3 lattice, so no generator
    # coordinates; Novikov monomials print as full b-vectors
    data = {"dim": 2,
            "rays": [[1, 0], [1, 1], [0, 1], [-1, -1], [0, -1]],
            "max_cones": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]],
            "name": "dP7"}
    path = tmp_path / "dp7.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "certify", "--fan", str(path), "--cutoff", "2")
    assert code == 0
    assert "verdict: certified" in out
    assert "q^(" in out
    code, out, _ = run(capsys, "ifunction", "--fan", str(path),
                       "--cutoff", "2")
    assert code == 0
    assert "leading term I0 == 1: true" in out
