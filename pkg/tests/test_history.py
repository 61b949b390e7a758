import numpy as np
import pytest

from delaycert import HistorySegment, random_history


def test_constant_history_sup_norm():
    seg = HistorySegment.constant([0.3, -0.4], 2.0)
    assert seg.sup_norm == pytest.approx(0.5, rel=1e-15)
    np.testing.assert_allclose(seg.evaluate(-1.234), [0.3, -0.4], rtol=1e-15)


def test_dense_output_exact_at_nodes():
    seg = random_history(5.0, 2, sup_norm=0.8, seed=11)
    vals = seg.evaluate(seg.theta)
    np.testing.assert_array_equal(vals, seg.values)


def test_sup_norm_matches_node_and_midpoint_max():
    seg = random_history(3.0, 1, sup_norm=1.0, seed=4)
    # independent recomputation of the node-and-midpoint definition
    mids = seg.theta[:-1] + 0.5 * (seg.theta[1] - seg.theta[0])
    expected = max(np.linalg.norm(seg.values, axis=1).max(),
                   np.linalg.norm(seg.evaluate(mids), axis=1).max())
    assert seg.sup_norm == pytest.approx(expected, rel=1e-12)
    # the interpolant can only exceed that sampling marginally
    t = np.linspace(-3.0, 0.0, 40001)
    dense_max = np.linalg.norm(seg.evaluate(t), axis=1).max()
    assert dense_max <= seg.sup_norm * (1 + 1e-3)


def test_random_history_hits_requested_sup_norm():
    seg = random_history(10.0, 1, sup_norm=0.0075, seed=0)
    assert seg.sup_norm == pytest.approx(0.0075, rel=1e-12)


def test_grid_validation():
    theta = np.array([-1.0, -0.7, -0.5, -0.25, 0.0])
    vals = np.zeros((5, 1))
    with pytest.raises(ValueError, match="uniform"):
        HistorySegment(h=1.0, theta=theta, values=vals, derivs=vals)
    with pytest.raises(ValueError, match="coarse"):
        HistorySegment(h=1.0, theta=np.linspace(-1, 0, 3),
                       values=np.zeros((3, 1)), derivs=np.zeros((3, 1)))


def test_from_dict_constant_and_samples():
    seg = HistorySegment.from_dict({"constant": [0.009]}, h=10.0)
    assert seg.sup_norm == pytest.approx(0.009)
    theta = np.linspace(-1.0, 0.0, 21)
    spec = {"samples": {"theta": theta.tolist(),
                        "values": np.sin(theta).reshape(-1, 1).tolist()}}
    seg2 = HistorySegment.from_dict(spec)
    assert seg2.h == pytest.approx(1.0)
    assert seg2.evaluate(0.0)[0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError, match="constant.*samples|samples.*constant"):
        HistorySegment.from_dict({"nope": 1}, h=1.0)
