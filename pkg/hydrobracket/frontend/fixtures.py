from __future__ import annotations

from importlib.abc import Traversable
from importlib.resources import files
from typing import List

from hydrobracket.exceptions import ProblemFileError

__all__ = ["FIXTURE_PREFIX", "fixture_bytes", "fixture_name", "list_fixtures"]

FIXTURE_PREFIX = "fixtures/"


def _fixture_dir() -> Traversable:
    return files("hydrobracket") / "fixtures"


def list_fixtures() -> List[str]:
    return sorted(p.name[: -len(".json")] for p in _fixture_dir().iterdir() if p.name.endswith(".json"))


def fixture_name(source: str) -> str:
    """
    The bare fixture name of a `fixtures/<name>` reference.
    """
    return source[len(FIXTURE_PREFIX) :] if source.startswith(FIXTURE_PREFIX) else source


def fixture_bytes(name: str) -> bytes:
    name = fixture_name(name)
    resource = _fixture_dir() / f"{name}.json"
    if not resource.is_file():
        raise ProblemFileError(f"no fixture named {name!r}, available: {', '.join(list_fixtures())}")
    return resource.read_bytes()
