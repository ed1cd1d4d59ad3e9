"""Settings from ``config/settings.yaml`` (override the path with VOTEDOM_SETTINGS)."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from core.extensions import DEFAULT_ENUMERATION_CAP

DEFAULT_SETTINGS_PATH = Path("config/settings.yaml")
SOLVERS = ("auto", "brute", "flow")


class SettingsError(ValueError):
    pass


@dataclass(frozen=True)
class Settings:
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    copeland_tie_points: int = 0
    jobs: int = 1
    solver: str = "auto"


def settings_path(path: Optional[Path] = None) -> Path:
    if path is not None:
        return path
    env = os.environ.get("VOTEDOM_SETTINGS")
    return Path(env) if env else DEFAULT_SETTINGS_PATH


def load_setting(key: str, default: str, path: Optional[Path] = None) -> str:
    settings = settings_path(path)
    if not settings.exists():
        return default
    text = settings.read_text(encoding="utf-8", errors="replace")
    # naive parse: look for lines like `enumeration_cap: 1000000`
    for line in text.splitlines():
        if line.strip().startswith(f"{key}:"):
            value = line.split(":", 1)[1].split("#", 1)[0].strip().strip("'\"")
            return value or default
    return default


def _int_setting(key: str, default: int, path: Optional[Path]) -> int:
    raw = load_setting(key, str(default), path)
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        raise SettingsError(f"{key} must be an integer, got {raw!r}") from None


def load_settings(path: Optional[Path] = None) -> Settings:
    cap = _int_setting("enumeration_cap", DEFAULT_ENUMERATION_CAP, path)
    tie = _int_setting("copeland_tie_points", 0, path)
    jobs = _int_setting("jobs", 1, path)
    solver = load_setting("solver", "auto", path).lower()
    if cap <= 0:
        raise SettingsError("enumeration_cap must be positive")
    if tie not in (0, 1):
        raise SettingsError("copeland_tie_points must be 0 or 1")
    if jobs < 1:
        raise SettingsError("jobs must be at least 1")
    if solver not in SOLVERS:
        raise SettingsError(f"solver must be one of {', '.join(SOLVERS)}")
    return Settings(cap, tie, jobs, solver)
