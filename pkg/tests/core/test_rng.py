import numpy as np

from mfc_engine.core.rng import ENV_NOISE_STREAM, INITIAL_STATE_STREAM, RngStream


def test_same_seed_and_stream_repeat():
    a = RngStream(7, ENV_NOISE_STREAM).standard_normal(100)
    b = RngStream(7, ENV_NOISE_STREAM).standard_normal(100)

    np.testing.assert_array_equal(a, b)


def test_streams_and_seeds_are_distinct():
    base = RngStream(7, ENV_NOISE_STREAM).standard_normal(100)

    assert not np.array_equal(base, RngStream(7, INITIAL_STATE_STREAM).standard_normal(100))
    assert not np.array_equal(base, RngStream(8, ENV_NOISE_STREAM).standard_normal(100))


def test_spawn_shares_seed():
    stream = RngStream(11, 0).spawn(ENV_NOISE_STREAM)

    assert stream.seed == 11
    assert stream.stream_id == ENV_NOISE_STREAM
    np.testing.assert_array_equal(
        stream.normal(1.0, 2.0, size=5), RngStream(11, ENV_NOISE_STREAM).normal(1.0, 2.0, size=5)
    )
