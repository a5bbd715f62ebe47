"""Run configuration: every search and evaluation knob in one record.

Defaults follow the reference protocol: 100 random playouts and 10 search
playouts per evaluation, 0.5 gates, a 50-move-per-player limit, a 40x40
archive over [-5, 5]^2, 3 parents x 3 mutations per step, 500 steps.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..fitness import EvalParams


@dataclass(frozen=True)
class RunConfig:
    out_dir: str = "run"
    seed_paths: tuple[str, ...] = ()  # empty -> bundled corpus
    corpus_paths: tuple[str, ...] = ()  # baseline/projection corpus; empty -> bundled
    steps: int = 500
    j_parents: int = 3
    k_mutations: int = 3
    master_seed: int = 1
    regions_per_axis: int = 40
    coord_lo: float = -5.0
    coord_hi: float = 5.0
    operator: str = "grammar"  # "grammar" | "infill"
    subtree_library_p: float = 0.5
    max_depth: int = 6
    max_source_len: int = 8192
    infill_endpoint: str = ""
    workers: int = 0  # 0 -> cpu count - 1
    snapshot_every: int = 25
    eval: EvalParams = field(default_factory=EvalParams)

    def resolved_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        return max(1, (os.cpu_count() or 2) - 1)

    def validate(self) -> None:
        if self.steps < 0 or self.j_parents < 1 or self.k_mutations < 1:
            raise ValueError("steps must be >= 0 and j/k >= 1")
        e = self.eval
        if min(e.n_random, e.n_mcts, e.n_depth, e.move_limit, e.mcts_iterations) < 1:
            raise ValueError("evaluation counts must be >= 1")
        if not (0.0 <= e.balance_gate <= 1.0 and 0.0 <= e.agency_gate <= 1.0):
            raise ValueError("gates must lie in [0, 1]")
        if self.regions_per_axis < 1 or self.coord_lo >= self.coord_hi:
            raise ValueError("bad archive geometry")


def config_to_json(cfg: RunConfig) -> str:
    return json.dumps(asdict(cfg), indent=1, sort_keys=True)


def config_from_json(text: str) -> RunConfig:
    data = json.loads(text)
    eval_params = EvalParams(**data.pop("eval"))
    data["seed_paths"] = tuple(data.get("seed_paths", ()))
    data["corpus_paths"] = tuple(data.get("corpus_paths", ()))
    return RunConfig(eval=eval_params, **data)


def save_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(config_to_json(cfg), encoding="utf-8")


def load_config(path: str | Path) -> RunConfig:
    return config_from_json(Path(path).read_text(encoding="utf-8"))
