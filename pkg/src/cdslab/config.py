"""User configuration management for cdslab.

Config file location: ~/.config/cdslab/config.toml

Example config:
    [run]
    workers = 4
    out = "~/cds-runs"
"""

import sys
from typing import cast

import tomlkit
import tomlkit.exceptions
from tomlkit import TOMLDocument
from tomlkit.container import Container

from cdslab.paths import config_dir, config_file

RUN_KEYS = ("workers", "out")


def load_config() -> TOMLDocument:
    """Load config from file, returning empty document if missing or invalid."""
    path = config_file()
    if not path.exists():
        return tomlkit.document()

    try:
        return tomlkit.parse(path.read_text())
    except tomlkit.exceptions.TOMLKitError as e:
        print(f"Warning: Invalid config file {path}: {e}", file=sys.stderr)
        return tomlkit.document()


def get_config(key: str) -> str | None:
    """Get config value by dotted key path (e.g., 'run.workers').

    Returns None if key doesn't exist.
    """
    doc = load_config()
    parts = key.split(".")

    current = doc
    for part in parts:
        if not isinstance(current, dict) or part not in current:
            return None
        current = current[part]

    if isinstance(current, (dict, list)):
        return None
    return str(current) if current is not None else None


def _coerce(value: str) -> int | str:
    try:
        return int(value)
    except ValueError:
        return value


def set_config(key: str, value: str) -> None:
    """Set config value by dotted key path (e.g., 'run.workers').

    Integer literals are stored as TOML integers. Creates intermediate tables
    as needed and preserves existing comments and formatting.
    """
    path = config_file()

    if path.exists():
        try:
            doc = tomlkit.parse(path.read_text())
        except tomlkit.exceptions.TOMLKitError:
            doc = tomlkit.document()
    else:
        doc = tomlkit.document()

    parts = key.split(".")
    current = doc

    for part in parts[:-1]:
        if part not in current:
            current[part] = tomlkit.table()
        current = current[part]

    cast(Container, current)[parts[-1]] = _coerce(value)

    config_dir().mkdir(parents=True, exist_ok=True)
    path.write_text(tomlkit.dumps(doc))


def check_run_setting(key: str, value: str) -> str | None:
    """Problem with setting ``key`` to ``value``, or None if acceptable.

    Only ``run.<key>`` for keys in RUN_KEYS is accepted; workers must be a
    positive integer. Chunk size is read only from the run config.
    """
    section, _, name = key.partition(".")
    if section != "run" or name not in RUN_KEYS:
        return f"unknown key {key!r}; expected one of {', '.join(f'run.{k}' for k in RUN_KEYS)}"
    if name == "workers":
        number = _coerce(value)
        if not isinstance(number, int) or number < 1:
            return f"{key} must be a positive integer, got {value!r}"
    return None


def get_run_defaults() -> dict:
    """Defaults for run commands from the [run] table.

    Returns a dict with any of ``workers`` (int) and ``out`` (str). Malformed
    values are reported on stderr and skipped.
    """
    doc = load_config()
    run = doc.get("run", {})
    defaults: dict = {}
    if not isinstance(run, dict):
        return defaults

    if "workers" in run:
        try:
            workers = int(run["workers"])
        except (TypeError, ValueError):
            print(f"Warning: ignoring non-integer run.workers = {run['workers']!r}", file=sys.stderr)
        else:
            if workers < 1:
                print(f"Warning: ignoring run.workers = {workers} (must be >= 1)", file=sys.stderr)
            else:
                defaults["workers"] = workers

    if "out" in run:
        defaults["out"] = str(run["out"])
    return defaults
