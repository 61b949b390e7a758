import csv
import json

import pytest

from delaycert.cli import main


def test_constants_command(tmp_path, capsys):
    out = tmp_path / "constants.json"
    assert main(["constants", "--example", "ex1", "--samples", "2000",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["growth"] == {"m": 1.0, "m1": 3.0, "m2": 1.5}
    assert doc["lyapunov_ok"] is True
    assert 1.0 <= doc["growth_sampled"]["m"] <= 1.05


def test_region_with_preset(tmp_path):
    out = tmp_path / "region.json"
    assert main(["region", "--example", "ex1", "--preset", "table1",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["radii"]["razumikhin"] == pytest.approx(0.0427, rel=1e-2)
    assert doc["radii"]["krasovskii"] == pytest.approx(0.067, rel=5e-2)


def test_estimate_with_preset(tmp_path):
    out = tmp_path / "estimate.json"
    assert main(["estimate", "--example", "ex1", "--preset", "table2",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["razumikhin"]["c1"] == pytest.approx(1.002, rel=2e-2)
    assert doc["krasovskii"]["c1"] == pytest.approx(1.0014, rel=2e-2)


def test_simulate_to_csv(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--example", "ex1", "--horizon", "50",
                 "--step", "0.05", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x_1", "norm", "V"]
    assert float(rows[1][1]) == pytest.approx(0.009)
    assert len(rows) == 2 + 1000


def test_simulate_requires_horizon():
    with pytest.raises(SystemExit, match="horizon"):
        main(["simulate", "--example", "ex1"])


def test_compare_command(tmp_path):
    out = tmp_path / "cmp.json"
    samples = tmp_path / "cmp.csv"
    assert main(["compare", "--example", "ex1", "--preset", "table2",
                 "--horizon", "1000", "--step", "0.01",
                 "--csv", str(samples), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["lr_envelope_dominates"] and doc["lk_envelope_dominates"]
    assert doc["razumikhin"]["rho"] == pytest.approx(0.948, rel=1e-2)
    with open(samples) as fh:
        header = fh.readline().strip().split(",")
    assert header == ["t", "norm", "razumikhin_envelope", "krasovskii_envelope"]


def test_figure_data_command(tmp_path):
    out = tmp_path / "fig.csv"
    assert main(["figure-data", "--example", "ex1", "--preset", "table2",
                 "--horizon", "200", "--step", "0.01", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t"
    assert float(rows[-1][0]) == pytest.approx(200.0)


def test_tune_command_inline(tmp_path):
    out = tmp_path / "tuned.json"
    assert main(["tune", "--example", "ex1", "--method-name",
                 "krasovskii-scalar", "--budget", "300", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["score"] > 0
    assert doc["certificate"]["radius"] == pytest.approx(doc["score"])


def test_tune_command_config(tmp_path):
    cfg = tmp_path / "problem.json"
    cfg.write_text(json.dumps({
        "example": "ex1", "target": "max_radius",
        "method": "krasovskii-scalar", "budget": 300, "seed": 7}))
    out = tmp_path / "tuned.json"
    assert main(["tune", "--config", str(cfg), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["evaluations"] <= 300


def test_declarative_system_config(tmp_path):
    spec = {
        "n": 1, "mu": 3.0, "h": 10.0,
        "terms": [
            {"target": 0, "coeff": -1.0, "x_exponents": [3], "y_exponents": [0]},
            {"target": 0, "coeff": 0.5, "x_exponents": [0], "y_exponents": [3]},
        ],
        "growth": {"m": 1.0, "m1": 3.0, "m2": 1.5},
        "lyapunov": {"gamma": 2.0, "k0": 1.0, "k1": 1.0, "k2": 2.0, "k3": 2.0,
                     "w": 1.0, "terms": [{"coeff": 1.0, "exponents": [2]}]},
    }
    cfg = tmp_path / "system.json"
    cfg.write_text(json.dumps(spec))
    out = tmp_path / "region.json"
    assert main(["region", "--config", str(cfg), "--delta", "0.01",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["razumikhin"]["radius"] == pytest.approx(0.00998, rel=1e-3)


def test_reproduce_tables_exit_code(tmp_path, capsys):
    out = tmp_path / "tables.csv"
    assert main(["reproduce-tables", "--table", "all", "--out", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "non-flagged cells: all pass" in captured
    assert out.exists()


def test_missing_system_source_rejected():
    with pytest.raises(SystemExit, match="example.*config|config.*example"):
        main(["region", "--delta", "0.01"])


def test_history_json_inline(tmp_path):
    out = tmp_path / "t.csv"
    phi = json.dumps({"constant": [0.005]})
    assert main(["simulate", "--example", "ex1", "--phi", phi,
                 "--horizon", "20", "--step", "0.1", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert float(rows[1][1]) == pytest.approx(0.005)
