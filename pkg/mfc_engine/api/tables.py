import numpy as np


def _row(label: str, values, width: int = 10) -> str:
    return f"{label:<8}" + "".join(f"{v:>{width}.4f}" for v in values)


def parameter_table(eta, theta, exact: tuple | None = None) -> str:
    """
    Learnt (and, when known, exact) critic and actor parameters side by side:
    one column per eta component followed by one per theta component.
    """

    eta, theta = np.asarray(eta, dtype=float), np.asarray(theta, dtype=float)
    header = [f"eta_{i + 1}" for i in range(eta.size)] + [f"theta_{i + 1}" for i in range(theta.size)]
    lines = [f"{'':<8}" + "".join(f"{h:>10}" for h in header), _row("learnt", np.concatenate([eta, theta]))]
    if exact is not None:
        lines.append(_row("exact", np.concatenate([np.asarray(exact[0]), np.asarray(exact[1])])))
    return "\n".join(lines)


def evaluation_table(report) -> str:
    """Learnt cost, spread across populations, relative error and the benchmark value."""

    lines = [
        f"{'learnt cost':<24}{report.mean:>12.4f}",
        f"{'std across populations':<24}{report.std:>12.4f}",
    ]
    if report.exact is not None:
        lines.append(f"{'relative error':<24}{100.0 * report.relative_error:>11.2f}%")
        lines.append(f"{'exact value':<24}{report.exact:>12.4f}")
    if report.exact_regularised is not None:
        lines.append(f"{'exact (regularised)':<24}{report.exact_regularised:>12.4f}")
    return "\n".join(lines)


def benchmark_table(summary: dict) -> str:
    """Values at t = 0, one per line; sqrt_delta is reported to 4 decimals."""

    lines = []
    for key in ("sqrt_delta", "K0", "Lam0", "Y0", "R0", "initial_value", "initial_value_entropy_free"):
        if key not in summary:
            continue
        value = np.asarray(summary[key], dtype=float)
        digits = 4 if key == "sqrt_delta" else 6
        text = f"{value.item():.{digits}f}" if value.size == 1 else np.array2string(value, precision=6)
        lines.append(f"{key:<28}{text}")
    return "\n".join(lines)
