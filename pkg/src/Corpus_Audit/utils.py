"""Utility functions for configuration management and file output."""

import hashlib
import json
from pathlib import Path
from typing import Any

import yaml

from Corpus_Audit.errors import ConfigError

CONFIG_DIR = Path(__file__).parent / "config"


def config_path(area: str, file_name: str = "config.yaml") -> Path:
    """Return the path of a bundled configuration file, e.g. ``config_path("corpus")``."""
    return CONFIG_DIR / f"{area}_config" / file_name


def load_config_yaml(config_path: str | Path) -> dict[str, Any]:
    """
    Load a YAML configuration file.

    Args:
        config_path (str | Path): Path to the YAML configuration file.

    Returns
    -------
        dict: Configuration data as a dictionary.

    Raises
    ------
        ConfigError: if the file is missing, unparsable or not a mapping.
    """
    path = Path(config_path)
    try:
        with path.open("r", encoding="utf-8") as file:
            data = yaml.safe_load(file)
    except OSError as e:
        msg = f"cannot read config {path}: {e.strerror}"
        raise ConfigError(msg) from e
    except yaml.YAMLError as e:
        msg = f"invalid YAML in {path}: {e}"
        raise ConfigError(msg) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        msg = f"config {path} must hold a mapping at top level"
        raise ConfigError(msg)
    return data


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys and no locale formatting so output is byte-stable."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def fingerprint(obj: Any) -> str:
    """Return a short stable hash of a JSON-serializable object."""
    payload = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def save_text(text: str, file_path: str | Path) -> None:
    """
    Save rendered output to a file.

    Args:
        text (str): The text to save.
        file_path (str | Path): The path to the file where the text will be saved.
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
