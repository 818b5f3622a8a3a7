"""Shipped benchmark scenario files (package data)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import List, Optional

_SUFFIX = ".scn"


def _base() -> Path:
    return Path(str(resources.files(__name__)))


def available() -> List[str]:
    """Names of the shipped scenarios (without extension)."""
    return sorted(p.stem for p in _base().glob(f"*{_SUFFIX}"))


def find(name: str) -> Optional[Path]:
    """Path of a shipped scenario by bare name or name.scn; None if absent."""
    stem = name[: -len(_SUFFIX)] if name.endswith(_SUFFIX) else name
    candidate = _base() / f"{stem}{_SUFFIX}"
    return candidate if candidate.is_file() else None


def path_for(name: str) -> Path:
    """Like find(), but raises KeyError for unknown names."""
    p = find(name)
    if p is None:
        raise KeyError(f"no shipped scenario named {name!r}; "
                       f"available: {', '.join(available())}")
    return p
