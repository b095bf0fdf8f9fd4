import argparse
import sys

from mfc_engine.api.commands import cmd_benchmark, cmd_eval, cmd_export_curves, cmd_train
from mfc_engine.utils.logging import configure_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Actor-critic learning for mean-field control")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default="config/trading.json", help="JSON run configuration")
        p.add_argument("--seed", type=int, default=None, help="override the configured seed")
        p.add_argument("--out-dir", default=None, help="override the configured output directory")
        p.add_argument("--log-level", default="INFO")
        return p

    for name in ("train-offline", "train-online"):
        p = common(sub.add_parser(name, help=f"{name.split('-')[1]} actor-critic training"))
        p.add_argument("--episodes", type=int, default=None, help="override training.episodes")
        p.add_argument("--progress", action="store_true", help="show a progress bar")

    common(sub.add_parser("benchmark", help="solve the Riccati benchmark"))
    for name in ("eval", "export-curves"):
        p = common(sub.add_parser(name))
        p.add_argument("--snapshot", default=None, help="snapshot.json written by training")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    if args.command == "train-offline":
        return cmd_train(args, "offline")
    elif args.command == "train-online":
        return cmd_train(args, "online")
    elif args.command == "benchmark":
        return cmd_benchmark(args)
    elif args.command == "eval":
        return cmd_eval(args)
    else:
        return cmd_export_curves(args)


if __name__ == "__main__":
    sys.exit(main())
