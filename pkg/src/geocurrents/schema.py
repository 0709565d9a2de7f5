"""Access to the versioned JSON schemas shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

SCHEMA_NAMES = ("group", "current", "geodesic", "intersection", "systole", "decomposition", "degenerate")


def load_schema(name: str, version: int = 1) -> dict:
    if name not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {name!r}")
    text = resources.files("geocurrents").joinpath("schemas", f"{name}.v{version}.json").read_text()
    return json.loads(text)
