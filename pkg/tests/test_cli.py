"""End-to-end CLI tests, run through real subprocesses."""

import json
import subprocess
import sys

import numpy as np
import pytest

from nsfland import FitnessLandscape, save_landscape

_BASE = [sys.executable, "-m", "nsfland"]


def _run(*args, cwd):
    return subprocess.run(
        _BASE + list(args), cwd=cwd, capture_output=True, text=True
    )


@pytest.fixture()
def landscape_file(tmp_path):
    path = tmp_path / "ridge.json"
    save_landscape(
        FitnessLandscape(num_vars=2, values=np.array([0, 1, 1, 2])), path
    )
    return path


def test_gen_writes_named_files(tmp_path):
    result = _run(
        "gen", "--n", "3", "--class", "nsf", "--count", "2",
        "--seed", "9", "--out", str(tmp_path / "land"),
        cwd=tmp_path,
    )
    assert result.returncode == 0
    first = tmp_path / "land" / "NSF_n3_0.json"
    second = tmp_path / "land" / "NSF_n3_1.json"
    assert first.exists() and second.exists()
    data = json.loads(first.read_text())
    assert data["num_vars"] == 3
    assert data["class"] == "NSF"
    assert len(data["values"]) == 8


def test_gen_is_deterministic_across_invocations(tmp_path):
    for name in ("a", "b"):
        result = _run(
            "gen", "--n", "4", "--class", "nonsf", "--seed", "77",
            "--out", str(tmp_path / name),
            cwd=tmp_path,
        )
        assert result.returncode == 0
    assert (tmp_path / "a" / "NoNSF_n4_0.json").read_bytes() == (
        tmp_path / "b" / "NoNSF_n4_0.json"
    ).read_bytes()


def test_gen_rejects_unknown_class(tmp_path):
    result = _run("gen", "--n", "3", "--class", "wat", cwd=tmp_path)
    assert result.returncode == 1


def test_analyze_reports_reach_probability(tmp_path, landscape_file):
    result = _run("analyze", "--in", str(landscape_file), cwd=tmp_path)
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["p_global"] == pytest.approx(1.0, abs=1e-9)
    assert payload["num_global_optima"] == 1
    assert payload["num_vars"] == 2
    assert "q" not in payload


def test_analyze_emits_matrices_on_request(tmp_path, landscape_file):
    result = _run(
        "analyze", "--in", str(landscape_file), "--emit-matrices",
        "--policy", "strict",
        cwd=tmp_path,
    )
    payload = json.loads(result.stdout)
    assert payload["q"] == [[0, 0.5, 0.5], [0, 0, 0], [0, 0, 0]]
    assert payload["r"] == [[0], [1], [1]]
    b = np.array(payload["b"])
    assert np.allclose(b.sum(axis=1), 1.0, atol=1e-9)
    assert np.allclose(payload["fundamental"], [[1, 0.5, 0.5], [0, 1, 0], [0, 0, 1]])


def test_analyze_csv_format(tmp_path, landscape_file):
    result = _run(
        "analyze", "--in", str(landscape_file), "--format", "csv",
        cwd=tmp_path,
    )
    assert result.returncode == 0
    lines = result.stdout.splitlines()
    assert any(line.startswith("p_global,") for line in lines)


def test_analyze_can_write_to_directory(tmp_path, landscape_file):
    out = tmp_path / "reports"
    result = _run(
        "analyze", "--in", str(landscape_file), "--out", str(out),
        cwd=tmp_path,
    )
    assert result.returncode == 0
    written = json.loads((out / "analysis.json").read_text())
    assert written["p_global"] == pytest.approx(1.0, abs=1e-9)


def test_oracle_is_seed_deterministic(tmp_path, landscape_file):
    outputs = []
    for _ in range(2):
        result = _run(
            "oracle", "--in", str(landscape_file),
            "--runs", "200", "--seed", "5",
            cwd=tmp_path,
        )
        assert result.returncode == 0
        outputs.append(result.stdout)
    assert outputs[0] == outputs[1]
    payload = json.loads(outputs[0])
    assert set(payload) == {"p_hat", "stderr", "F_star", "runs"}
    assert payload["runs"] == 200
    assert payload["p_hat"] == 1.0  # every start climbs to the optimum


def test_nsf_check_reports_verdict(tmp_path, landscape_file):
    result = _run("nsf-check", "--in", str(landscape_file), cwd=tmp_path)
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["verdict"] is False
    assert payload["violations"] == [
        {"value": 1, "delta": 1, "reason": "MONOTONICITY"}
    ]
    flat = tmp_path / "flat.json"
    save_landscape(
        FitnessLandscape(num_vars=2, values=np.array([3, 3, 3, 3])), flat
    )
    verdict = json.loads(
        _run("nsf-check", "--in", str(flat), cwd=tmp_path).stdout
    )
    assert verdict["verdict"] is True


def test_missing_input_file_is_an_io_error(tmp_path):
    result = _run("analyze", "--in", "no-such-file.json", cwd=tmp_path)
    assert result.returncode == 3
    assert "i/o error" in result.stderr


def test_experiment_subcommand_writes_study_outputs(tmp_path):
    out = tmp_path / "study"
    result = _run(
        "experiment", "--sizes", "3", "--count", "5",
        "--classes", "nsf,nonsf", "--seed", "3", "--out", str(out),
        cwd=tmp_path,
    )
    assert result.returncode == 0
    assert (out / "results.csv").exists()
    assert (out / "report.json").exists()
    assert "n=3" in result.stdout
    assert "KS" in result.stdout


def test_experiment_config_file_wins(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"sizes": [3], "count": 2, "seed": 1}))
    out = tmp_path / "study"
    result = _run(
        "experiment", "--config", str(config), "--out", str(out),
        cwd=tmp_path,
    )
    assert result.returncode == 0
    report = json.loads((out / "report.json").read_text())
    assert report["provenance"]["config"]["count"] == 2


def test_experiment_rejects_bad_threads(tmp_path):
    result = _run(
        "experiment", "--sizes", "3", "--count", "1", "--threads", "zero",
        cwd=tmp_path,
    )
    assert result.returncode == 1


def test_toy_verify_text_and_json(tmp_path):
    text = _run("toy-verify", cwd=tmp_path)
    assert text.returncode == 0
    assert "PASS" in text.stdout
    as_json = _run("toy-verify", "--format", "json", cwd=tmp_path)
    assert as_json.returncode == 0
    payload = json.loads(as_json.stdout)
    assert payload["passed"] is True


def test_unknown_flag_exits_with_validation_code(tmp_path):
    result = _run("gen", "--n", "3", "--class", "nsf", "--nope", cwd=tmp_path)
    assert result.returncode == 1


def test_version_flag(tmp_path):
    result = _run("--version", cwd=tmp_path)
    assert result.returncode == 0
    assert result.stdout.startswith("nsfland ")
