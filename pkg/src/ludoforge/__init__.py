"""ludoforge: describe, play, evaluate, and evolve two-player board games."""

__version__ = "0.1.0"
