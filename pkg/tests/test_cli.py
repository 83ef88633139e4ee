import json
import subprocess
import sys
from pathlib import Path

import pytest

PKG_ROOT = Path(__file__).parent.parent


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "mirrorkit.cli", *args],
                          capture_output=True, text=True, cwd=PKG_ROOT)


def fixture(name: str) -> str:
    return str(PKG_ROOT / "src" / "mirrorkit" / "fixtures" / name)


def test_verify_6_2_exit_zero_and_formulas():
    result = run_cli("verify", "--input", fixture("example_6_2.json"))
    assert result.returncode == 0
    # the factorized product in both renderings
    assert "Gamma(xi^(1))^3*Gamma(2*xi^(1))^2 / [Gamma(7*xi^(1))]" in result.stdout
    assert "Gamma((1 - z1)/7)^3*Gamma((2 - 2*z1)/7)^2 / [Gamma(1 - z1)]" in result.stdout
    assert "verdict: PASS" in result.stdout


def test_cayley_6_1_byte_identical_to_golden():
    result = run_cli("cayley", "--input", fixture("example_6_1.json"))
    golden = Path(fixture("golden_cayley_6_1.txt")).read_text()
    assert result.returncode == 0
    assert result.stdout == golden


def test_cayley_6_2_byte_identical_to_golden():
    result = run_cli("cayley", "--input", fixture("example_6_2.json"))
    assert result.stdout == Path(fixture("golden_cayley_6_2.txt")).read_text()


@pytest.mark.parametrize("name", ["6_1", "6_2", "quadric"])
def test_mellin_golden(name):
    spec = {"6_1": "example_6_1.json", "6_2": "example_6_2.json",
            "quadric": "derived_quadric.json"}[name]
    result = run_cli("mellin", "--input", fixture(spec))
    assert result.stdout == Path(fixture(f"golden_mellin_{name}.txt")).read_text()


def test_verify_corrupted_strict_exit_two_names_identity():
    result = run_cli("verify", "--input", fixture("corrupted_weights.json"), "--strict")
    assert result.returncode == 2
    assert "M_Y = PO_Xbar" in result.stdout


def test_verify_corrupted_lenient_annotates():
    result = run_cli("verify", "--input", fixture("corrupted_weights.json"))
    assert result.returncode == 0
    assert "soft failures" in result.stdout


def test_validate_invalid_spec_exit_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "n": 2, "k": 2,
        "blocks": [
            {"exponents": [[2, 0]], "index_set": [1]},
            {"exponents": [[0, 2]], "index_set": [1]},
        ],
    }))
    result = run_cli("validate", "--input", str(bad))
    assert result.returncode == 1
    result = run_cli("verify", "--input", str(bad))
    assert result.returncode == 1


def test_family_command_matches_6_1_blocks():
    result = run_cli("family", "--m", "3")
    data = json.loads(result.stdout)
    with open(fixture("example_6_1.json")) as fh:
        expected = json.load(fh)
    assert data["blocks"] == expected["blocks"]
    assert data["n"] == 7 and data["k"] == 2


def test_json_output_parses_and_is_deterministic():
    a = run_cli("verify", "--input", fixture("example_6_2.json"), "--format", "json")
    b = run_cli("verify", "--input", fixture("example_6_2.json"), "--format", "json")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    report = json.loads(a.stdout)
    assert report["hard_ok"] is True
    stage_names = [s["name"] for s in report["stages"]]
    assert stage_names == ["validate", "cayley", "transpose", "forms", "mellin-plain",
                           "mellin-factorized", "horn", "char-polys", "duality",
                           "nef", "magic-square"]


def test_transpose_json_reusable_as_input(tmp_path):
    result = run_cli("transpose", "--input", fixture("example_6_2.json"),
                     "--format", "json")
    tspec = json.loads(result.stdout)["tspec"]
    path = tmp_path / "tspec.json"
    path.write_text(json.dumps(tspec))
    again = run_cli("verify", "--input", str(path))
    assert again.returncode == 0


def test_poincare_series_order_flag():
    result = run_cli("poincare", "--input", fixture("example_6_2.json"),
                     "--order", "7")
    assert "series to order 7: [1, 0, 2, 1, 3, 2, 5, 5]" in result.stdout


def test_missing_input_is_an_error():
    result = run_cli("verify")
    assert result.returncode == 2  # argparse usage error


def test_single_stage_precondition_failure_exit_two(tmp_path):
    # monomial counts (2,2) vs index-set sizes (1,3): no mirror shape exists
    spec = tmp_path / "untransposable.json"
    spec.write_text(json.dumps({
        "n": 4, "k": 2,
        "blocks": [
            {"exponents": [[0, 0, 1, 0], [0, 0, 0, 2]], "index_set": [3]},
            {"exponents": [[2, 0, 0, 1], [1, 1, 0, 1]], "index_set": [1, 2, 4]},
        ],
    }))
    for command in ("transpose", "mellin", "nef"):
        result = run_cli(command, "--input", str(spec))
        assert result.returncode == 2, (command, result.stderr)
        assert "precondition failed" in result.stderr
    # the full chain degrades gracefully instead
    result = run_cli("verify", "--input", str(spec))
    assert result.returncode == 0
