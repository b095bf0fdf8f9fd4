"""Subcommand bodies: each returns the process exit code."""

import json
import logging

from pydantic import ValidationError

from mfc_engine.api.mfc_interface import MfcInterface
from mfc_engine.api.tables import benchmark_table, evaluation_table, parameter_table
from mfc_engine.core.errors import (
    AssumptionViolationError,
    InvalidArgumentError,
    NumericError,
    TrainingAborted,
    UnsupportedCombinationError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ASSUMPTION = 4


def _guarded(body) -> int:
    """Run ``body`` and map failures to exit codes."""

    try:
        return body()
    except (FileNotFoundError, json.JSONDecodeError) as err:
        logger.error("configuration error: %s", err)
        return EXIT_CONFIG
    except ValidationError as err:
        logger.error("invalid configuration (%d field errors)", err.error_count())
        return EXIT_CONFIG
    except (InvalidArgumentError, UnsupportedCombinationError) as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except TrainingAborted as err:
        logger.error("%s; last finite parameters in %s", err, err.snapshot_path)
        return EXIT_NUMERIC
    except NumericError as err:
        logger.error("numeric failure: %s", err)
        return EXIT_NUMERIC
    except AssumptionViolationError as err:
        logger.error("assumption violated: %s", err)
        return EXIT_ASSUMPTION


def _interface(args) -> MfcInterface:
    return MfcInterface(
        args.config,
        seed=args.seed,
        episodes=getattr(args, "episodes", None),
        out_dir=args.out_dir,
        progress=getattr(args, "progress", False),
    )


def cmd_train(args, mode: str) -> int:
    def body() -> int:
        interface = _interface(args)
        report = interface.train(mode)
        print(parameter_table(report.final_eta, report.final_theta, interface.exact_parameters()))
        if report.aborted:
            raise TrainingAborted(
                f"training aborted at episode {report.abort_episode}: {report.abort_reason}",
                interface.snapshot_path,
            )
        return EXIT_OK
    return _guarded(body)


def cmd_benchmark(args) -> int:
    def body() -> int:
        summary = _interface(args).benchmark()
        print(benchmark_table(summary))
        return EXIT_OK
    return _guarded(body)


def cmd_eval(args) -> int:
    def body() -> int:
        report, _ = _interface(args).evaluate(args.snapshot)
        print(evaluation_table(report))
        return EXIT_OK
    return _guarded(body)


def cmd_export_curves(args) -> int:
    def body() -> int:
        table = _interface(args).export_curves(args.snapshot)
        for name in table.curves:
            print(f"{name:<10} sup gap {table.sup_gap(name):.6f}")
        return EXIT_OK
    return _guarded(body)
