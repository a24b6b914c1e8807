"""Flat ``key = value`` configuration (keys: cap, kmax_default, seed)."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .core import DEFAULT_WORK_CAP
from .corpus import DEFAULT_SEED

CONFIG_NAME = "aritylab.toml"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    cap: int = DEFAULT_WORK_CAP
    kmax_default: int | None = None  # None: use the universe size
    seed: int = DEFAULT_SEED


def parse_config(text: str, base: Config = Config()) -> Config:
    known = {f.name for f in fields(Config)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (p.strip() for p in line.partition("="))
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected key = value")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        value = value.strip("\"'")
        if key == "kmax_default" and value.lower() in ("", "none", "m"):
            values[key] = None
            continue
        try:
            number = int(value.replace("_", ""))
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} must be an integer") from None
        if number < (0 if key == "seed" else 1):
            raise ConfigError(f"line {lineno}: {key} out of range")
        values[key] = number
    return replace(base, **values)


def load_config(path=None) -> Config:
    """Read ``path``, else ``./aritylab.toml`` when present, else defaults."""
    if path is None:
        default = Path(CONFIG_NAME)
        return parse_config(default.read_text()) if default.is_file() else Config()
    return parse_config(Path(path).read_text())
