import hashlib
import json
import logging
import os
import subprocess
from datetime import datetime, timezone

from mfc_engine import __version__
from mfc_engine.core.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def config_digest(path: str) -> str:
    """sha256 of the raw configuration file."""

    with open(path, "rb") as file:
        return hashlib.sha256(file.read()).hexdigest()


def describe_version() -> str:
    """``git describe`` of the working tree when available, else the package version."""

    try:
        result = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)),
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    described = result.stdout.strip()
    return f"{__version__}+{described}" if result.returncode == 0 and described else __version__


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_manifest(out_dir: str, command: str, config_path: str, seed: int, started: str, extra: dict | None = None) -> str:
    """
    Write ``manifest.json`` describing how the outputs in ``out_dir`` were produced.

    Returns:
        str: Path of the manifest.
    """

    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "command": command,
        "config": os.path.abspath(config_path),
        "config_sha256": config_digest(config_path),
        "seed": seed,
        "version": describe_version(),
        "started": started,
        "finished": utc_now(),
    }
    if extra:
        manifest.update(extra)

    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as file:
        json.dump(manifest, file, indent=2, sort_keys=True)
    return path


def write_snapshot(path: str, actor, critic, extra: dict | None = None) -> str:
    """Kinds and flat parameters of the actor and critic as JSON."""

    snapshot = {
        "actor": {"kind": actor.kind, "params": [float(v) for v in actor.params]},
        "critic": {"kind": critic.kind, "params": [float(v) for v in critic.params]},
    }
    if extra:
        snapshot.update(extra)

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(snapshot, file, indent=2, sort_keys=True)
    logger.info("parameter snapshot written to %s", path)
    return path


def load_snapshot(path: str, actor, critic) -> dict:
    """
    Load parameters saved by ``write_snapshot`` into ``actor`` and ``critic``.

    Raises:
        FileNotFoundError: If the snapshot does not exist.
        InvalidArgumentError: If kinds or parameter counts do not match.
    """

    if not os.path.exists(path):
        raise FileNotFoundError(f"Snapshot not found at {path}")
    with open(path, "r", encoding="utf-8") as file:
        snapshot = json.load(file)

    for role, model in (("actor", actor), ("critic", critic)):
        entry = snapshot.get(role)
        if entry is None:
            raise InvalidArgumentError(f"snapshot has no {role} block")
        if entry["kind"] != model.kind:
            raise InvalidArgumentError(f"snapshot {role} is {entry['kind']}, configuration has {model.kind}")
        if len(entry["params"]) != model.n_params:
            raise InvalidArgumentError(
                f"snapshot {role} has {len(entry['params'])} parameters, configuration expects {model.n_params}"
            )
        model.set_params(entry["params"])
    return snapshot
