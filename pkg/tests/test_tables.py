import csv

import pytest

from delaycert.tables import (load_fixture, reproduce_all, reproduce_table,
                              write_reports_csv)


def _cell(report, section, name):
    for c in report.cells:
        if c.section == section and c.name == name:
            return c
    raise KeyError((section, name))


def test_all_tables_pass(capsys):
    for rep in reproduce_all():
        assert rep.core_passed, [c for c in rep.cells if not c.passed]
        assert rep.flagged_passed


def test_table1_flagged_cells():
    rep = reproduce_table(1)
    k_cell = _cell(rep, "razumikhin", "K")
    assert k_cell.mode == "report" and k_cell.status == "reported"
    # computed gain is the formula-consistent 1.0195, not the printed 1.001
    assert k_cell.computed == pytest.approx(1.019452614, rel=1e-8)
    h2 = _cell(rep, "krasovskii", "H2")
    assert h2.flagged and h2.passed
    assert h2.computed == pytest.approx(0.316227766, rel=1e-9)


def test_table2_truncated_display_cells():
    rep = reproduce_table(2)
    c2 = _cell(rep, "krasovskii", "c2")
    assert c2.mode == "trunc" and c2.flagged and c2.passed
    assert c2.computed == pytest.approx(4.293755936e-05, rel=1e-9)
    delta_lr = _cell(rep, "razumikhin", "Delta")
    assert delta_lr.mode == "trunc" and delta_lr.passed
    # the table's printed c1 = 1.002 equals delta/Delta and pins the radius
    # at 0.00998, confirming the Delta print is a truncated display
    assert 0.01 / delta_lr.computed == pytest.approx(1.002, rel=2e-3)
    assert _cell(rep, "razumikhin", "c1").passed


def test_table3_deviation_cells_documented():
    rep = reproduce_table(3)
    for name in ("H1", "H2"):
        cell = _cell(rep, "krasovskii", name)
        assert cell.flagged and cell.passed and cell.note
    c2 = _cell(rep, "krasovskii", "c2")
    assert c2.computed == pytest.approx(0.00219194232, rel=1e-9)
    assert c2.passed
    w = _cell(rep, "system", "w")
    assert w.passed and w.tol == 0.01


def test_summary_and_csv(tmp_path):
    reports = reproduce_all()
    lines = [ln for rep in reports for ln in rep.summary_lines()]
    assert any("flagged-pass" in ln for ln in lines)
    assert all(" FAIL" not in ln for ln in lines)
    out = tmp_path / "tables.csv"
    write_reports_csv(reports, out)
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:4] == ["table", "section", "cell", "computed"]
    assert len(rows) == 1 + sum(len(r.cells) for r in reports)
    # 17 significant digits in the computed column
    assert any("." in r[3] and len(r[3].replace("-", "").replace(".", "")
                                   .split("e")[0]) >= 16 for r in rows[1:])


def test_fixture_version_pinned():
    fx = load_fixture()
    assert fx["version"] == 1
    assert set(fx["tables"]) == {"1", "2", "3"}
