import csv

import numpy as np
import pytest

from delaycert import HistorySegment
from delaycert.compare import compare, emit_figure_data, rate_limit_constant

T2_LK = {"chi": 0.015, "w1": 0.5, "w2": 0.017}
T3_LK = {"chi": 0.39, "w1": 0.0092, "w2": 0.0022}


def test_equal_delta_identities(ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    assert rep.identity_residuals["lr_amp_radius"] < 1e-9
    assert rep.identity_residuals["lk_c1_radius"] < 1e-9
    assert rep.lr.delta == rep.lk.delta == 0.01


def test_rate_limit_close_to_envelope_rate(ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    # with slack delay caps, rho sits at its cap and B approaches the limit
    assert rep.rate_limit == pytest.approx(rep.lr.rate, rel=2e-3)
    assert rate_limit_constant(rep.lr, ex1.lyap) == rep.rate_limit


def test_small_delta_ratio_ordering(ex1):
    rep = compare(ex1, 1e-6, lk_params=T2_LK)
    assert rep.ratios["k5_over_k1"] > rep.ratios["c_over_b"]
    assert rep.ratios["k0_over_k1"] > rep.ratios["a1_over_b"]


def test_decade_verdicts_ex1(ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK,
                  phi=HistorySegment.constant([0.009], 10.0), T=1e4)
    verdicts = dict(rep.decades)
    assert verdicts[10.0] == "krasovskii"     # tighter start
    assert verdicts[100.0] == "razumikhin"    # tighter tail
    assert verdicts[1000.0] == "razumikhin"
    assert rep.lr_dominates and rep.lk_dominates


def test_ex2_razumikhin_envelope_tighter_everywhere(ex2):
    rep = compare(ex2, 0.001, lk_params=T3_LK,
                  phi=HistorySegment.constant([4.8e-4, 4.8e-4], 1.0), T=1e3)
    assert all(v == "razumikhin" for _, v in rep.decades)
    assert rep.lr_dominates and rep.lk_dominates
    assert rep.lr.c2 > rep.lk.c2  # faster certified decay rate


def test_report_serialization(ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    d = rep.to_dict()
    assert d["razumikhin"]["radius"] > 0
    assert d["krasovskii"]["radius"] > 0
    assert "rate_limit" in d and "ratios" in d


def test_figure_data_zero_history(tmp_path, ex1):
    path = tmp_path / "fig.csv"
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    emit_figure_data(ex1, rep.lr, rep.lk, HistorySegment.constant([0.0], 10.0),
                     200.0, path, step=0.01)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "norm", "razumikhin_envelope", "krasovskii_envelope"]
    assert all(float(r[1]) == 0.0 for r in rows[1:])


def test_figure_data_envelopes_dominate(tmp_path, ex1):
    path = tmp_path / "fig1.csv"
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    emit_figure_data(ex1, rep.lr, rep.lk,
                     HistorySegment.constant([0.009], 10.0), 1e3, path,
                     step=0.01)
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert np.all(data["norm"] <= data["razumikhin_envelope"])
    assert np.all(data["norm"] <= data["krasovskii_envelope"])


def test_figure_data_bit_stable(tmp_path, ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    phi = HistorySegment.constant([0.009], 10.0)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_figure_data(ex1, rep.lr, rep.lk, phi, 100.0, p1, step=0.01)
    emit_figure_data(ex1, rep.lr, rep.lk, phi, 100.0, p2, step=0.01)
    assert p1.read_text() == p2.read_text()


def test_figure_data_rejects_uncertified_history(tmp_path, ex1):
    rep = compare(ex1, 0.01, lk_params=T2_LK)
    with pytest.raises(ValueError, match="outside both certified"):
        emit_figure_data(ex1, rep.lr, rep.lk,
                         HistorySegment.constant([0.05], 10.0), 100.0,
                         tmp_path / "x.csv")


def test_figure_data_single_region_history_warns(tmp_path, ex2):
    # the ex2 benchmark history sits a hair outside the functional-route
    # radius (6.78823e-4 vs 6.78811e-4) but inside the comparison-route one
    rep = compare(ex2, 0.001, lk_params=T3_LK)
    phi = HistorySegment.constant([4.8e-4, 4.8e-4], 1.0)
    assert min(rep.lr.radius, rep.lk.radius) < phi.sup_norm \
        < max(rep.lr.radius, rep.lk.radius)
    with pytest.warns(UserWarning, match="only one"):
        emit_figure_data(ex2, rep.lr, rep.lk, phi, 50.0,
                         tmp_path / "fig2.csv", step=0.001)
