from __future__ import annotations

import pytest

from ludoforge import corpus
from ludoforge.engine import compile_game
from ludoforge.gdl import parse_source


@pytest.fixture(scope="session")
def corpus_sources() -> dict[str, str]:
    return corpus.game_sources()


@pytest.fixture(scope="session")
def corpus_trees(corpus_sources):
    return {name: parse_source(src) for name, src in corpus_sources.items()}


@pytest.fixture(scope="session")
def compiled(corpus_trees):
    cache = {}

    def get(name: str):
        if name not in cache:
            cache[name] = compile_game(corpus_trees[name])
        return cache[name]

    return get
