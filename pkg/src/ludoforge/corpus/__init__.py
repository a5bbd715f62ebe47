"""Bundled mini-corpus of games, macro fragments, and raw (unpreprocessed) files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def corpus_dir() -> Path:
    return Path(str(resources.files(__package__))) / "games"


def macros_dir() -> Path:
    return Path(str(resources.files(__package__))) / "macros"


def raw_dir() -> Path:
    return Path(str(resources.files(__package__))) / "raw"


def game_paths() -> list[Path]:
    return sorted(corpus_dir().glob("*.lud"))


def game_sources() -> dict[str, str]:
    return {p.stem: p.read_text(encoding="utf-8") for p in game_paths()}


def load_game(name: str) -> str:
    path = corpus_dir() / f"{name}.lud"
    return path.read_text(encoding="utf-8")
