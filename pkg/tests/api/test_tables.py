import numpy as np

from mfc_engine.api.tables import benchmark_table, evaluation_table, parameter_table
from mfc_engine.evaluation import EvalReport


def test_parameter_table_rows():
    table = parameter_table([3.01, 0.98, 4.1], [2.99, 2.02], ([3.0, 1.0, 4.0], [3.0, 2.0]))
    header, learnt, exact = table.splitlines()

    assert header.split() == ["eta_1", "eta_2", "eta_3", "theta_1", "theta_2"]
    assert learnt.split() == ["learnt", "3.0100", "0.9800", "4.1000", "2.9900", "2.0200"]
    assert exact.split()[0] == "exact"


def test_parameter_table_without_reference():
    assert len(parameter_table([1.0], [2.0]).splitlines()) == 2


def test_evaluation_table():
    text = evaluation_table(EvalReport(np.array([-1.85, -1.87]), 100, exact=-1.8637))

    assert "relative error" in text
    assert "-1.8600" in text


def test_benchmark_table_skips_missing_keys():
    text = benchmark_table({"K0": np.array([[0.75]]), "R0": -2.6})

    assert text.splitlines() == [f"{'K0':<28}0.750000", f"{'R0':<28}-2.600000"]


def test_benchmark_table_rounds_sqrt_delta_to_four_decimals():
    text = benchmark_table({"sqrt_delta": 1.8220867, "K0": np.array([[0.75]])})

    assert text.splitlines()[0] == f"{'sqrt_delta':<28}1.8221"
