import json
import re

import numpy as np
import pytest

from llscond.cli import main, parse_angle, parse_example, to_json
from llscond.io import write_matrix, write_vector


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def analyze_json(capsys, *extra):
    code, out = run_cli(
        capsys, "analyze", "--example", "alpha=0.1,beta=1,phi=pi/10", "--format", "json", *extra
    )
    assert code == 0
    return json.loads(out)


def test_parse_angle_forms():
    assert parse_angle("pi/10") == pytest.approx(np.pi / 10)
    assert parse_angle("3pi/4") == pytest.approx(3 * np.pi / 4)
    assert parse_angle("-pi/2") == pytest.approx(-np.pi / 2)
    assert parse_angle("2*pi/5") == pytest.approx(2 * np.pi / 5)
    assert parse_angle("0.25") == 0.25
    with pytest.raises(Exception):
        parse_angle("sqrt(2)")


def test_parse_example_requires_core_fields():
    spec = parse_example("alpha=0.1,beta=1,phi=pi/10")
    assert (spec.alpha, spec.beta) == (0.1, 1.0)
    with pytest.raises(Exception):
        parse_example("alpha=0.1,beta=1")
    with pytest.raises(Exception):
        parse_example("alpha=0.1,beta=1,phi=0.2,rho=3")


def test_analyze_example_reports_reference_triple(capsys):
    report = analyze_json(capsys, "--exact")
    condition = report["condition"]
    assert round(condition["chi_A_upper"], 3) == pytest.approx(40.929, abs=2e-3)
    assert round(condition["chi_A_exact"], 3) == pytest.approx(35.193, abs=2e-3)
    assert round(condition["chi_A_lower"], 3) == pytest.approx(32.505, abs=2e-3)
    assert condition["exact_certified"] is True
    assert report["provenance"]["seed"] == 0


def test_analyze_without_exact_omits_field(capsys):
    report = analyze_json(capsys)
    assert "chi_A_exact" not in report["condition"]
    assert "maximizer" not in report["condition"]


def test_analyze_unit_scales_chi_b_is_inverse_sigma_min(capsys, tmp_path):
    a = np.array([[1.0, 0.0], [0.0, 0.1], [0.0, 0.0]])
    b = np.array([0.5, 0.3, 1.0])
    write_matrix(tmp_path / "m.mtx", a)
    write_vector(tmp_path / "b.vec", b)
    code, out = run_cli(
        capsys, "analyze", str(tmp_path / "m.mtx"), str(tmp_path / "b.vec"),
        "--scales", "1,1,1", "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    assert report["condition"]["chi_b"] == pytest.approx(1.0 / 0.1, rel=1e-12)


def test_json_round_trip(capsys):
    report = analyze_json(capsys, "--exact")
    assert json.loads(to_json(report)) == report


def test_every_text_numeric_present_in_json(capsys):
    code, text_out = run_cli(capsys, "analyze", "--example", "alpha=0.1,beta=1,phi=pi/10")
    assert code == 0
    report = analyze_json(capsys)

    def scalars(obj):
        if isinstance(obj, dict):
            for v in obj.values():
                yield from scalars(v)
        elif isinstance(obj, list):
            for v in obj:
                yield from scalars(v)
        elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
            yield float(obj)

    json_values = list(scalars(report))
    for match in re.finditer(r"= (-?\d+(?:\.\d+)?(?:e[+-]?\d+)?)$", text_out, re.M | re.I):
        value = float(match.group(1))
        assert any(
            abs(value - jv) <= 1e-5 * max(1.0, abs(jv)) for jv in json_values
        ), f"text value {value} missing from json"


def test_csv_output_is_flat_and_17_digits(capsys):
    code, out = run_cli(
        capsys, "analyze", "--example", "alpha=0.1,beta=1,phi=pi/10", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    row = dict(line.split(",", 1) for line in lines[1:])
    assert float(row["condition.chi_A_upper"]) == pytest.approx(40.928997, abs=1e-5)
    assert len(row["condition.chi_A_upper"].replace(".", "").lstrip("-").lstrip("0")) >= 15


def test_exit_code_validation_failure(capsys, tmp_path):
    code, _ = run_cli(capsys, "analyze", str(tmp_path / "missing.mtx"), str(tmp_path / "b.vec"))
    assert code == 2


def test_exit_code_rank_deficient_json_error(capsys, tmp_path):
    write_matrix(tmp_path / "m.mtx", np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]))
    write_vector(tmp_path / "b.vec", np.ones(3))
    code, out = run_cli(
        capsys, "analyze", str(tmp_path / "m.mtx"), str(tmp_path / "b.vec"), "--format", "json"
    )
    assert code == 2
    payload = json.loads(out)
    assert payload["error"]["code"] == 2
    assert "rank deficient" in payload["error"]["message"]


def test_exit_code_numerical_failure(capsys, monkeypatch):
    from llscond import LlsCondError
    from llscond import cli as cli_module

    def explode(args):
        raise LlsCondError("factorization blew up")

    monkeypatch.setattr(cli_module, "cmd_catalog", explode)
    code = main(["catalog", "--example", "alpha=0.1,beta=1,phi=pi/10", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 3
    assert json.loads(out)["error"]["code"] == 3


def test_perturb_zero_trials_rejected(capsys):
    code, _ = run_cli(
        capsys, "perturb", "--example", "alpha=0.1,beta=1,phi=pi/10", "--trials", "0"
    )
    assert code == 2


def test_perturb_example_no_violations(capsys):
    code, out = run_cli(
        capsys, "perturb", "--example", "alpha=0.1,beta=1,phi=pi/10",
        "--trials", "100", "--eps", "1e-8", "--seed", "42", "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    assert report["violations"] == 0
    assert report["trials"] == 100


def test_perturb_byte_identical_repeat(capsys):
    args = ("perturb", "--example", "alpha=0.1,beta=1,phi=pi/10",
            "--trials", "50", "--eps", "1e-8", "--seed", "7", "--format", "json")
    code1, out1 = run_cli(capsys, *args)
    code2, out2 = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("LLSCOND_SEED", "123")
    report = analyze_json(capsys)
    assert report["provenance"]["seed"] == 123
    # explicit flag wins over the environment
    report = analyze_json(capsys, "--seed", "5")
    assert report["provenance"]["seed"] == 5


def test_catalog_command(capsys):
    code, out = run_cli(
        capsys, "catalog", "--example", "alpha=0.1,beta=1,phi=pi/10", "--format", "json"
    )
    assert code == 0
    report = json.loads(out)
    names = {entry["name"] for entry in report["catalog"]}
    assert names == {
        "bjorck_upper", "malyshev_lower", "geurts_frobenius", "gratton_joint",
        "higham_2002", "gvl_textbook", "attainable_reference",
    }


def test_paper_example_command(capsys):
    code, out = run_cli(
        capsys, "paper-example", "--example", "alpha=0.1,beta=1,phi=pi/10,epsilon=1e-8",
        "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    closed = report["closed_forms"]
    computed = report["computed"]
    assert closed["kappa"] == pytest.approx(10.0)
    assert computed["kappa"] == pytest.approx(10.0, rel=1e-12)
    assert computed["observed_relative_change"] == pytest.approx(
        closed["predicted_relative_change"], rel=1e-4
    )
    assert report["perturbation"][2][1] == 1e-8


def test_mm_coordinate_ingestion(capsys, tmp_path):
    a = np.array([[1.0, 0.0], [0.0, 0.1], [0.0, 0.0]])
    write_matrix(tmp_path / "m.mtx", a, fmt="mm-coordinate")
    write_vector(tmp_path / "b.vec", np.array([0.2, 0.4, 1.0]))
    code, out = run_cli(
        capsys, "analyze", str(tmp_path / "m.mtx"), str(tmp_path / "b.vec"), "--format", "json"
    )
    assert code == 0
    assert json.loads(out)["problem"]["sigma_min"] == pytest.approx(0.1)
