from bisect import bisect_right

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError


class Schedule:
    """
    Piecewise-constant map from the 1-based episode index to a value.

    A value is either a float or a vector (one entry per parameter component).

    Attributes:
        starts (tuple[int, ...]): Episode at which each piece starts.
        values (tuple): Value held from the matching start onward.
    """


    def __init__(self, breakpoints):
        """
        Args:
            breakpoints: Sequence of (from_episode, value) pairs.

        Raises:
            InvalidArgumentError: If the list is empty, does not start at
                episode 0 or 1, or is not strictly increasing.
        """

        breakpoints = list(breakpoints)
        if not breakpoints:
            raise InvalidArgumentError("schedule needs at least one breakpoint")

        starts = [int(start) for start, _ in breakpoints]
        if starts[0] not in (0, 1):
            raise InvalidArgumentError(f"first breakpoint must start at episode 0 or 1, got {starts[0]}")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise InvalidArgumentError(f"breakpoints must be strictly increasing, got {starts}")

        self.starts: tuple[int, ...] = tuple(starts)
        self.values: tuple = tuple(self._freeze(value) for _, value in breakpoints)


    @staticmethod
    def _freeze(value):
        if np.ndim(value) == 0:
            return float(value)
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array


    @classmethod
    def constant(cls, value) -> "Schedule":
        return cls([(1, value)])


    def at(self, episode: int):
        """
        Value of the last piece starting at or before ``episode``.

        Raises:
            InvalidArgumentError: If ``episode`` precedes the first breakpoint.
        """

        if episode < self.starts[0]:
            raise InvalidArgumentError(
                f"episode {episode} precedes the first breakpoint {self.starts[0]}"
            )
        return self.values[bisect_right(self.starts, episode) - 1]


    def is_switch(self, episode: int) -> bool:
        """True when a new piece starts at ``episode`` (other than the first)."""

        return episode in self.starts[1:]


    def __repr__(self) -> str:
        pieces = ", ".join(
            f"{start}: {value.tolist() if isinstance(value, np.ndarray) else value}"
            for start, value in zip(self.starts, self.values)
        )
        return f"Schedule({{{pieces}}})"


    @staticmethod
    def from_config(records) -> "Schedule":
        """
        Build a schedule from ``{from_episode, value}`` records.

        Args:
            records: A list of dicts or pydantic models, or a bare number for a
                constant schedule.

        Returns:
            Schedule: The parsed schedule.
        """

        if np.ndim(records) == 0 and not isinstance(records, (list, tuple)):
            return Schedule.constant(records)

        pairs = []
        for record in records:
            if isinstance(record, dict):
                pairs.append((record["from_episode"], record["value"]))
            else:
                pairs.append((record.from_episode, record.value))
        return Schedule(pairs)


def schedule_at(schedule: Schedule, episode: int):
    return schedule.at(episode)
