"""Access to the bundled scenario files."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..documents import parse_document


def data_path(name: str) -> Path:
    return Path(str(resources.files("routespace.presets").joinpath("data", name)))


def read_text(name: str) -> str:
    return resources.files("routespace.presets").joinpath("data", name).read_text(encoding="utf-8")


def load(name: str):
    return parse_document(read_text(name), name)


def load_raw(name: str) -> dict:
    return json.loads(read_text(name))
