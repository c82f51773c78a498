"""XDG Base Directory paths for cdslab.

- XDG_CONFIG_HOME (~/.config) - user defaults (config.toml)
"""

import os
from pathlib import Path

APP_NAME = "cdslab"

DEFAULT_OUT_DIR = "cdslab-out"


def _get_xdg_path(env_var: str, default: str) -> Path:
    """Get XDG path from environment or use default."""
    return Path(os.environ.get(env_var, default)).expanduser()


def config_dir() -> Path:
    """Return the config directory (~/.config/cdslab)."""
    base = _get_xdg_path("XDG_CONFIG_HOME", "~/.config")
    return base / APP_NAME


def config_file() -> Path:
    """Return the config file path (~/.config/cdslab/config.toml)."""
    return config_dir() / "config.toml"


def default_out_dir() -> Path:
    """Return the default output directory (./cdslab-out)."""
    return Path.cwd() / DEFAULT_OUT_DIR
