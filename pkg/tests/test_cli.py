import csv
import io
import json
from pathlib import Path

import pytest

from cliffwave import cli
from cliffwave.cli import ConfigError, main, payload_bytes, run_scenario, scenario_from_dict

SCENARIOS = Path(__file__).resolve().parents[1] / "scripts" / "scenarios"

SMALL_FULL = {
    "schema": 1,
    "grid": {"n": 32, "box": 10.0},
    "scales": {"a_min": 0.75, "a_max": 1.5, "count": 2},
    "spins": 1,
    "functions": ["gaussian"],
    "stages": ["admissibility", "theorems"],
    "theorems": list(cli.THEOREMS),
    "coordinates": [1],
    "seed": 3,
    "tolerances": {"wavelet_bound": 0.0, "proof_identities": 10.0},
}


def write(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_minimal_scenario(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", str(SCENARIOS / "minimal.json"), "--out", str(out)]) == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert len(doc["records"]) == 1
    assert doc["records"][0]["theorem"] == "heisenberg_fourier"
    assert capsys.readouterr().out.startswith("PASS heisenberg_fourier")


def test_forced_failure(capsys):
    assert main(["run", str(SCENARIOS / "forced_failure.json")]) == cli.EXIT_FAIL
    err = capsys.readouterr().err
    assert "failed check isometry" in err


@pytest.mark.parametrize("doc", [
    {"schema": 2},
    {"schema": 1, "colour": "blue"},
    {"schema": 1, "tolerances": {"isometry": -1.0}},
    {"schema": 1, "tolerances": {"made_up": 1.0}},
    {"schema": 1, "stages": ["nonsense"]},
    {"schema": 1, "theorems": ["fermat"]},
    {"schema": 1, "functions": [{"name": "gaussian", "params": {"widht": 2}}]},
    {"schema": 1, "grid": {"n": 31}},
])
def test_config_errors(tmp_path, doc, capsys):
    with pytest.raises(ConfigError):
        scenario_from_dict(doc)
    assert main(["run", write(tmp_path, doc)]) == cli.EXIT_CONFIG
    assert capsys.readouterr().err.startswith("error:")


def test_missing_and_malformed_files(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == cli.EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == cli.EXIT_CONFIG


def test_usage_errors():
    assert main(["run"]) == cli.EXIT_CONFIG
    assert main(["uncertainty", "--no-such-flag"]) == cli.EXIT_CONFIG
    assert main(["uncertainty", "--scales", "1:2"]) == cli.EXIT_CONFIG
    assert main(["admissibility", "--wavelet", "morlet"]) == cli.EXIT_CONFIG


def test_divergent_wavelet(capsys):
    args = ["--wavelet", "gaussian", "--grid-n", "32", "--box", "10"]
    assert main(["admissibility"] + args) == cli.EXIT_FAIL
    assert "A_psi=inf" in capsys.readouterr().out
    assert main(["cwt-roundtrip"] + args) == cli.EXIT_CONFIG
    assert "divergent=True" in capsys.readouterr().err


def test_deterministic_payload(tmp_path):
    doc = json.loads((SCENARIOS / "smoke.json").read_text())
    doc.pop("output", None)
    sc = scenario_from_dict(doc)
    first, second = run_scenario(sc).to_json(), run_scenario(sc).to_json()
    assert payload_bytes(first) == payload_bytes(second)
    assert json.loads(first)["scenario"]["seed"] == doc["seed"]


def test_report_conversion(tmp_path):
    out = tmp_path / "r.json"
    main(["run", str(SCENARIOS / "minimal.json"), "--out", str(out)])
    table = tmp_path / "r.csv"
    assert main(["report", "--in", str(out), "--format", "csv", "--out", str(table)]) == cli.EXIT_OK
    rows = list(csv.DictReader(io.StringIO(table.read_text())))
    assert rows[0]["theorem"] == "heisenberg_fourier"
    assert list(rows[0])[:7] == ["theorem", "k", "lhs", "rhs", "ratio", "verdict", "threshold"]
    assert main(["report", "--in", str(tmp_path / "missing.json")]) == cli.EXIT_CONFIG


def test_uncertainty_subcommand(tmp_path, capsys):
    code = main(["uncertainty", "--theorem", "commutator_bound", "--theorem", "heisenberg_fourier",
                 "--k", "1", "--k", "2", "--function", "squeezed", "--grid-n", "128",
                 "--csv", str(tmp_path / "u.csv")])
    assert code == cli.EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4 and all(line.startswith("PASS") for line in lines)
    assert (tmp_path / "u.csv").exists()


def test_algebra_and_fourier_subcommands(capsys):
    assert main(["verify-algebra"]) == cli.EXIT_OK
    assert main(["verify-fourier", "--grid-n", "64", "--box", "8"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "PASS plancherel" in out and "PASS algebra" in out.replace("algebra_", "algebra ")


def test_admissibility_line(capsys):
    assert main(["admissibility", "--grid-n", "32", "--box", "10"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "A_psi=" in out and "C_psi=" in out and "A_over_C=" in out


def test_small_full_run_covers_every_theorem(tmp_path):
    report = run_scenario(scenario_from_dict(SMALL_FULL))
    names = {c.theorem for c in report.checks}
    assert set(cli.THEOREMS) <= names
    verdicts = {c.theorem: c.verdict for c in report.checks}
    assert verdicts["sharp_bound"] == "report-only"
    assert verdicts["base_inequality_probe"] == "report-only"
    assert verdicts["heisenberg_fourier"] == "holds"
    json.loads(report.to_json())
