import json

import numpy as np
import pytest

from qdiscord import ab_discord, conditional_entropy, triple_from_matrix
from qdiscord.cli import main


def _write_matrix_file(path, rho):
    entries = [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(rho, complex)]
    path.write_text(json.dumps({"matrix": entries}))
    return str(path)


def _write_triple_file(path, x, y, T):
    path.write_text(json.dumps({"triple": {"x": list(x), "y": list(y),
                                           "T": [list(row) for row in T]}}))
    return str(path)


@pytest.fixture
def bell_file(tmp_path):
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return _write_matrix_file(tmp_path / "bell.json", np.outer(psi, psi))


def test_compute_bell_state_json(bell_file, capsys):
    assert main(["compute", bell_file, "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report["discord"] - 1.0) <= 1e-9
    assert abs(report["classical_correlation"] - 1.0) <= 1e-9
    assert report["method"] == "closed-form"
    assert report["bounds"]["saturated"] is True


def test_compute_maximally_mixed_triple_file(tmp_path, capsys):
    path = _write_triple_file(tmp_path / "mixed.json", [0, 0, 0], [0, 0, 0],
                              np.zeros((3, 3)))
    assert main(["compute", path, "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["discord"] == 0.0
    assert report["classical_correlation"] == 0.0
    assert report["mutual_information"] == 0.0


def test_compute_ab_state(tmp_path, capsys):
    from qdiscord import ab_state
    path = _write_matrix_file(tmp_path / "ab.json", ab_state(0.5, 0.1))
    assert main(["compute", path, "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    expected, _ = ab_discord(0.5, 0.1)
    assert abs(report["discord"] - expected) <= 1e-6


def test_compute_text_and_csv_formats(bell_file, capsys):
    assert main(["compute", bell_file]) == 0
    text = capsys.readouterr().out
    assert "quantum discord" in text and "1" in text
    assert main(["compute", bell_file, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 2
    assert lines[0].startswith("mutual_information,")


def test_compute_is_deterministic(bell_file, capsys):
    main(["compute", bell_file, "--format", "json"])
    first = capsys.readouterr().out
    main(["compute", bell_file, "--format", "json"])
    second = capsys.readouterr().out
    assert first == second


def test_compute_report_round_trip(tmp_path, capsys):
    from qdiscord import ab_state
    rho = ab_state(0.45, 0.2)
    path = _write_matrix_file(tmp_path / "s.json", rho)
    main(["compute", path, "--format", "json"])
    report = json.loads(capsys.readouterr().out)
    n = np.array(report["optimal_direction"]["n"])
    s = conditional_entropy(triple_from_matrix(rho), n)
    assert abs(s - report["min_conditional_entropy"]) <= 1e-9


def test_compute_missing_file_exits_2(capsys):
    assert main(["compute", "/no/such/file.json"]) == 2


def test_compute_garbage_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["compute", str(path)]) == 2


def test_compute_wrong_keys_exits_2(tmp_path, capsys):
    path = tmp_path / "keys.json"
    path.write_text(json.dumps({"matrix": [], "triple": {}}))
    assert main(["compute", str(path)]) == 2
    path.write_text(json.dumps({"something": 1}))
    assert main(["compute", str(path)]) == 2


def test_compute_not_a_state_exits_3(tmp_path, capsys):
    path = _write_matrix_file(tmp_path / "neg.json", np.diag([0.5, 0.6, -0.1, 0.0]))
    assert main(["compute", str(path)]) == 3


def test_bad_config_exits_2(bell_file):
    assert main(["compute", bell_file, "--resolution", "45"]) == 2
    assert main(["compute", bell_file, "--tolerance", "0.5"]) == 2


def test_scan_ab_panel(capsys):
    assert main(["scan", "ab", "--b", "0.1", "--a", "0:0.9:0.01"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "param1,param2,discord,discord_ub,xi_bound,saturated"
    assert len(lines) == 92  # header + 91 rows
    for line in lines[1:]:
        fields = line.split(",")
        assert float(fields[2]) <= float(fields[3]) + 1e-6


def test_scan_ab_out_of_region_exits_2(capsys):
    assert main(["scan", "ab", "--b", "0.5", "--a", "0:0.9:0.1"]) == 2


def test_scan_requires_ranges(capsys):
    assert main(["scan", "ab", "--a", "0.5"]) == 2


def test_scan_bell_diagonal_ray(capsys):
    assert main(["scan", "bell-diagonal", "--ray", "1,-1,1", "--s", "0:1:0.05"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 22
    assert all(line.endswith("true") for line in lines[1:])


def test_scan_bell_diagonal_invalid_ray_exits_2(capsys):
    assert main(["scan", "bell-diagonal", "--ray", "1,1,1", "--s", "1"]) == 2


def test_verify_single_suite(capsys):
    assert main(["verify", "--suite", "identity", "--n", "20"]) == 0
    out = capsys.readouterr().out
    assert "identity: PASS" in out


def test_verify_gradient_suite(capsys):
    assert main(["verify", "--suite", "gradient", "--n", "20"]) == 0
    assert "gradient: PASS" in capsys.readouterr().out


def test_verify_oracle_suite(capsys):
    assert main(["verify", "--suite", "oracle", "--n", "10"]) == 0
    assert "oracle: PASS" in capsys.readouterr().out


def test_verify_bounds_suite(capsys):
    assert main(["verify", "--suite", "bounds", "--n", "25"]) == 0
    assert "bounds: PASS" in capsys.readouterr().out
