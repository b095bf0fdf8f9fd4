import numpy as np
import pytest

from mfc_engine.core.errors import InvalidArgumentError, NumericError
from mfc_engine.core.measure import EmpiricalMeasure, measure_mean, update_measure
from mfc_engine.core.rng import RngStream


def test_dirac():
    mu = EmpiricalMeasure.dirac([1.5, -2.0])

    assert mu.dim == 2
    assert len(mu) == 1
    np.testing.assert_array_equal(measure_mean(mu), [1.5, -2.0])
    assert mu.variance == pytest.approx(0.0)


def test_full_rate_replaces_the_measure():
    mu = EmpiricalMeasure.dirac([0.0]).update([3.0], 0.5)
    replaced = mu.update([7.0], 1.0)

    assert len(replaced) == 1
    np.testing.assert_array_equal(replaced.mean, [7.0])


def test_update_mixes_mean_and_second_moment():
    mu = update_measure(EmpiricalMeasure.dirac([0.0]), [2.0], 0.5)

    np.testing.assert_allclose(mu.mean, [1.0])
    assert mu.second_moment == pytest.approx(2.0)
    assert mu.variance == pytest.approx(1.0)
    np.testing.assert_allclose(mu.weights, [0.5, 0.5])


def test_update_does_not_touch_the_receiver():
    mu = EmpiricalMeasure.dirac([0.0])
    mu.update([4.0], 0.25)

    assert len(mu) == 1
    np.testing.assert_array_equal(mu.mean, [0.0])


def test_update_many_matches_sequential_updates():
    rng = np.random.default_rng(3)
    xs = rng.normal(size=(7, 2))
    start = EmpiricalMeasure.dirac([0.5, 0.5]).update([1.0, -1.0], 0.3)

    folded = start.update_many(xs, 0.2)
    sequential = start
    for x in xs:
        sequential = sequential.update(x, 0.2)

    np.testing.assert_allclose(folded.weights, sequential.weights, rtol=0.0, atol=1e-12)
    np.testing.assert_allclose(folded.points, sequential.points, rtol=0.0, atol=1e-12)
    np.testing.assert_allclose(folded.mean, sequential.mean, rtol=0.0, atol=1e-12)
    assert folded.second_moment == pytest.approx(sequential.second_moment, abs=1e-12)


def test_preview_mean_is_the_updated_mean_per_row():
    mu = EmpiricalMeasure.dirac([1.0]).update([3.0], 0.5)
    xs = np.array([[0.0], [4.0]])

    previews = mu.preview_mean(xs, 0.2)

    for x, preview in zip(xs, previews):
        np.testing.assert_allclose(mu.update(x, 0.2).mean, preview, atol=1e-15)


def test_compaction_keeps_mean_and_caps_atoms():
    rng = np.random.default_rng(0)
    mu = EmpiricalMeasure.dirac([0.0], max_atoms=4)
    expected_mean = 0.0
    for x in rng.normal(size=20):
        mu = mu.update([x], 0.3)
        expected_mean = 0.7 * expected_mean + 0.3 * x

    assert len(mu) <= 4
    assert mu.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert mu.mean[0] == pytest.approx(expected_mean, abs=1e-12)
    assert float(mu.weights @ mu.points[:, 0]) == pytest.approx(expected_mean, abs=1e-12)


def test_negligible_weights_are_merged():
    mu = EmpiricalMeasure.dirac([5.0])
    for _ in range(40):
        mu = mu.update([0.0], 0.5)

    assert len(mu) < 41
    assert mu.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert mu.mean[0] == pytest.approx(5.0 * 0.5 ** 40, abs=1e-15)


@pytest.mark.parametrize("rho", [0.0, -0.1, 1.5])
def test_rejects_rates_outside_unit_interval(rho):
    with pytest.raises(InvalidArgumentError):
        EmpiricalMeasure.dirac([0.0]).update([1.0], rho)


def test_rejects_dimension_mismatch_and_non_finite_points():
    mu = EmpiricalMeasure.dirac([0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        mu.update([1.0], 0.5)
    with pytest.raises(NumericError):
        mu.update([np.nan, 0.0], 0.5)


def test_rejects_invalid_weights():
    with pytest.raises(InvalidArgumentError):
        EmpiricalMeasure([[0.0], [1.0]], [0.6, 0.6])
    with pytest.raises(InvalidArgumentError):
        EmpiricalMeasure([[0.0], [1.0]], [1.5, -0.5])


def test_harmonic_rates_give_the_sample_mean():
    xs = RngStream(8).standard_normal((10_000, 1))
    mu = EmpiricalMeasure.dirac([0.0])

    for i, x in enumerate(xs, start=1):
        mu = update_measure(mu, x, 1.0 / i)

    assert abs(measure_mean(mu)[0]) < 0.05
    assert measure_mean(mu)[0] == pytest.approx(xs.mean(), abs=1e-10)
    assert len(mu) <= mu.max_atoms
    assert mu.weights.sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
def test_weights_stay_normalised_over_a_million_updates():
    xs = RngStream(9).standard_normal((1_000_000, 1))
    mu = EmpiricalMeasure.dirac([0.0])

    for x in xs:
        mu = update_measure(mu, x, 0.05)

    assert abs(mu.weights.sum() - 1.0) <= 1e-12
    np.testing.assert_allclose(mu.weights @ mu.points, mu.mean, rtol=0.0, atol=1e-10)
