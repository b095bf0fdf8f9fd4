class MfcError(Exception):
    """Root of every error raised by mfc_engine."""


class InvalidArgumentError(MfcError, ValueError):
    """Bad shapes, out-of-range values or unknown configuration kinds."""


class NumericError(MfcError, ArithmeticError):
    """
    A state, action, cost or parameter became non-finite.

    Attributes:
        episode (int | None): Episode index (1-based) when raised inside training.
        step (int | None): Time index k when raised inside a rollout.
    """


    def __init__(self, message: str, episode: int | None = None, step: int | None = None):
        self.episode = episode
        self.step = step
        context = []
        if episode is not None:
            context.append(f"episode={episode}")
        if step is not None:
            context.append(f"step={step}")
        suffix = f" [{', '.join(context)}]" if context else ""
        super().__init__(f"{message}{suffix}")
        self.message = message


    def with_context(self, episode: int | None = None, step: int | None = None) -> "NumericError":
        return NumericError(
            self.message,
            episode=episode if episode is not None else self.episode,
            step=step if step is not None else self.step,
        )


class AssumptionViolationError(MfcError):
    """A structural assumption of the LQ benchmark failed (named in the message)."""


class UnsupportedCombinationError(MfcError, NotImplementedError):
    """Two components that cannot be used together (e.g. H-operator on a non-LQ critic)."""


class TrainingAborted(MfcError):
    """
    Training stopped early because parameters became non-finite.

    Attributes:
        snapshot_path (str | None): Where the last finite parameters were written.
    """


    def __init__(self, message: str, snapshot_path: str | None = None):
        super().__init__(message)
        self.snapshot_path = snapshot_path
