"""Operator configuration: a JSON config file plus environment overrides.

The config file path comes from --config-file or the EDU_CONFIG environment
variable; the API credential from the file or the EDU_API_KEY variable
(the variable wins). Command-line flags override file values.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

CONFIG_ENV = "EDU_CONFIG"


class ConfigError(Exception):
    pass


@dataclass
class AppConfig:
    backend_url: str | None = None
    model_id: str = "gpt-4o"
    api_key: str | None = None
    template_dir: str | None = None
    session_dir: str = "sessions"
    wordnet_dir: str | None = None
    lexicon_path: str | None = None
    allowed_origins: tuple[str, ...] = ("*",)


def load_config(path: Path | str | None = None) -> AppConfig:
    if path is None:
        env_path = os.environ.get(CONFIG_ENV)
        if not env_path:
            return AppConfig()
        path = env_path
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    known = {field.name for field in fields(AppConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"config file {path}: unknown fields {sorted(unknown)}")
    if "allowed_origins" in raw:
        raw["allowed_origins"] = tuple(raw["allowed_origins"])
    return AppConfig(**raw)
