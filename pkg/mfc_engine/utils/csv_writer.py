import csv
import os
from numbers import Integral, Real


def fmt(value) -> str:
    """Round-trippable decimal text for floats; integers and strings unchanged."""

    if isinstance(value, (bool, Integral, str)):
        return str(value)
    if isinstance(value, Real):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: str, field_names: list[str], rows) -> str:
    """
    Write ``rows`` (dicts keyed by ``field_names``) as RFC-4180 CSV.

    Floats are written with 17 significant digits. Parent directories are created.

    Returns:
        str: ``path``.
    """

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        writer = csv.DictWriter(csv_file, fieldnames=field_names, lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: fmt(row[name]) for name in field_names})
    return path
