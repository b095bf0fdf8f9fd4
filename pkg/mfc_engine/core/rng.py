import numpy as np


# Stream ids used across the package. Evaluation populations take
# EVAL_STREAM + population index.
INITIAL_STATE_STREAM = 1
ENV_NOISE_STREAM = 2
ACTION_NOISE_STREAM = 3
INIT_WEIGHTS_STREAM = 4
EVAL_STREAM = 1000


class RngStream:
    """
    Named random stream: (seed, stream id) fully determines the draw sequence.

    Backed by a PCG64 generator seeded from ``SeedSequence(seed, spawn_key=(stream_id,))``.
    """


    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,)))
        )


    def spawn(self, stream_id: int) -> "RngStream":
        """Independent stream sharing this seed."""

        return RngStream(self.seed, stream_id)


    def standard_normal(self, size=None) -> np.ndarray:
        return self.generator.standard_normal(size)


    def normal(self, loc=0.0, scale=1.0, size=None) -> np.ndarray:
        return self.generator.normal(loc, scale, size)


    def uniform(self, low=0.0, high=1.0, size=None) -> np.ndarray:
        return self.generator.uniform(low, high, size)


    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"
