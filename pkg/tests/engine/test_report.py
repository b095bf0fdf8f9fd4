import csv

import numpy as np
import pytest

from mfc_engine.engine import TrainReport
from mfc_engine.utils.csv_writer import fmt, write_csv


@pytest.fixture
def report() -> TrainReport:
    report = TrainReport("offline", 3, 2)
    schedules = {"lam": 0.1, "rho_s": 0.2, "rho_e": [0.05, 0.05, 0.01], "rho_g": 0.005, "minibatch": 4}
    report.record(10, schedules, -1.5, -1.75, [1.0, 0.5, 1.0], [2.0, 1.0])
    report.record(20, schedules, -1.6, -1.8, [1.1, 0.6, 1.2], [2.1, 1.1])
    report.final_eta, report.final_theta = np.array([1.1, 0.6, 1.2]), np.array([2.1, 1.1])
    return report


def test_histories(report):
    np.testing.assert_array_equal(report.episodes, [10, 20])
    assert report.eta_history.shape == (2, 3)
    np.testing.assert_array_equal(report.theta_history[:, 0], [2.0, 2.1])
    np.testing.assert_array_equal(report.costs, [-1.5, -1.6])


def test_csv_files(report, tmp_path):
    params_path, costs_path = report.write_csv(str(tmp_path / "run"))

    with open(params_path, newline="") as f:
        params = list(csv.DictReader(f))
    with open(costs_path, newline="") as f:
        costs = list(csv.DictReader(f))

    assert list(params[0]) == ["episode", "eta_1", "eta_2", "eta_3", "theta_1", "theta_2"]
    assert float(params[1]["eta_3"]) == 1.2
    assert costs[0]["rho_g_2"] == "0.0050000000000000001"
    assert costs[0]["rho_e_3"] == fmt(0.01)
    assert costs[1]["minibatch"] == "4"
    assert float(costs[1]["regularised_cost"]) == -1.8


def test_snapshot(report):
    snapshot = report.snapshot()

    assert snapshot["episodes_completed"] == 20
    assert snapshot["theta"] == [2.1, 1.1]
    assert not snapshot["aborted"]


def test_fmt_and_line_endings(tmp_path):
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3"
    assert fmt("mean") == "mean"

    path = write_csv(str(tmp_path / "out.csv"), ["a", "b"], [{"a": 1, "b": 0.5}])
    with open(path, "rb") as f:
        assert f.read() == b"a,b\r\n1,0.5\r\n"
