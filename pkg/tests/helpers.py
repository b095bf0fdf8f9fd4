import numpy as np

FD_STEP = 1e-6


def central_difference(func, params: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """
    Derivative of ``func(params)`` (an array of any shape) in each parameter,
    stacked on the last axis.
    """

    params = np.asarray(params, dtype=float)
    columns = []
    for j in range(params.size):
        up, down = params.copy(), params.copy()
        up[j] += step
        down[j] -= step
        columns.append((np.asarray(func(up)) - np.asarray(func(down))) / (2.0 * step))
    return np.stack(columns, axis=-1)


def with_params(model, params, method: str, *args, **kwargs):
    """Evaluate ``model.method`` at ``params`` and restore the original parameters."""

    saved = model.params.copy()
    model.set_params(params)
    try:
        return getattr(model, method)(*args, **kwargs)
    finally:
        model.set_params(saved)
