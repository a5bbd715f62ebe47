"""The evolutionary loop: seed the archive, then mutate-evaluate-insert.

Each step draws j parents uniformly from occupied cells, asks the mutation
operator for k candidates per parent, drops unchanged/duplicate/oversized
texts, evaluates the survivors (optionally on a process pool, committed in
submission order), and offers each one to the archive. Every decision is
appended to a line-delimited event log; a run can be resumed from that log
and reproduces bit-for-bit because all randomness is keyed on
(master seed, step, slot) and evaluation budgets are iteration-based.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..concepts import (
    ConceptVector,
    Projection,
    cell_of,
    extract_concepts,
    fit_projection,
    project,
    save_projection,
)
from ..corpus import game_paths
from ..engine import compile_game
from ..fitness import EvalParams, EvalResult, Fitness, MetricVector, RandomEvalStats, Stage, TraceSummary, evaluate
from ..gdl import GameTree, parse_source, preprocess, print_canonical
from ..hub.config import RunConfig
from ..mutate import (
    GrammarSampler,
    GrammarSamplerParams,
    InfillEndpointConfig,
    MutationRequest,
    SubtreeLibrary,
    grammar_mutate,
    infill_mutate,
    mutation_sites,
)
from .archive import Archive, CandidateRecord
from .bandit import BanditStats


class EmptyArchive(Exception):
    pass


EVENTS_SCHEMA = "ludoforge/events/1"


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _eval_task(args: tuple[str, EvalParams]) -> EvalResult:
    source, params = args
    return evaluate(source, params)


def _summary_task(args: tuple[str, EvalParams]) -> EvalResult:
    """Concept-vector support only: random-stage traces, no search stage."""
    from ..fitness.evaluate import trace_summary

    source, params = args
    compilable, summary = trace_summary(source, params)
    stage = Stage.GATED if compilable else Stage.UNCOMPILABLE
    return EvalResult(Fitness(-1.0 if compilable else -3.0, stage), summary)


def _fitness_dict(f: Fitness) -> dict:
    return {
        "value": f.value,
        "stage": f.stage.name,
        "metrics": None if f.metrics is None else asdict(f.metrics),
        "stats": None if f.stats is None else asdict(f.stats),
        "detail": f.detail,
    }


def _fitness_from(d: dict) -> Fitness:
    return Fitness(
        value=d["value"],
        stage=Stage[d["stage"]],
        metrics=None if d["metrics"] is None else MetricVector(**d["metrics"]),
        stats=None if d["stats"] is None else RandomEvalStats(**d["stats"]),
        detail=d.get("detail", ""),
    )


def record_to_dict(r: CandidateRecord) -> dict:
    return {
        "id": r.id,
        "source": r.source,
        "fitness": _fitness_dict(r.fitness),
        "concepts": list(r.concepts.bits),
        "catalog_version": r.concepts.version,
        "cell": list(r.cell),
        "parent_id": r.parent_id,
        "mutated_span": None if r.mutated_span is None else list(r.mutated_span),
        "operator": r.operator,
        "generation": r.generation,
        "step": r.step,
        "seq": r.seq,
    }


def record_from_dict(d: dict) -> CandidateRecord:
    return CandidateRecord(
        id=d["id"],
        source=d["source"],
        fitness=_fitness_from(d["fitness"]),
        concepts=ConceptVector(tuple(d["concepts"]), d["catalog_version"]),
        cell=tuple(d["cell"]),
        parent_id=d["parent_id"],
        mutated_span=None if d["mutated_span"] is None else tuple(d["mutated_span"]),
        operator=d["operator"],
        generation=d["generation"],
        step=d["step"],
        seq=d["seq"],
    )


@dataclass
class StepReport:
    step: int
    attempts: int = 0
    unchanged: int = 0
    duplicates: int = 0
    failed: int = 0
    evaluated: int = 0
    inserted: int = 0
    replaced: int = 0
    rejected: int = 0
    uncompilable: int = 0


@dataclass
class EvolveRun:
    config: RunConfig
    archive: Archive = field(init=False)
    bandit: BanditStats | None = None
    projection: Projection | None = None
    seen_sha: set[str] = field(default_factory=set)
    next_step: int = 0
    resumed: bool = False
    _events: list[dict] = field(default_factory=list)
    _generation: dict[str, int] = field(default_factory=dict)
    _pool: ProcessPoolExecutor | None = None

    def __post_init__(self) -> None:
        self.config.validate()
        self.archive = Archive(regions_per_axis=self.config.regions_per_axis)
        if self.config.operator.endswith("ucb"):
            self.bandit = BanditStats()
        self.out_dir = Path(self.config.out_dir)
        self._sampler: GrammarSampler | None = None

    # -- seeds, corpus, projection ----------------------------------------

    def _corpus_sources(self) -> list[str]:
        paths = [Path(p) for p in self.config.corpus_paths] or game_paths()
        return [p.read_text(encoding="utf-8") for p in sorted(paths)]

    def _seed_sources(self) -> list[str]:
        if self.config.seed_paths:
            return [
                Path(p).read_text(encoding="utf-8")
                for p in sorted(Path(p) for p in self.config.seed_paths)
            ]
        return self._corpus_sources()

    def _eval_seed(self, domain: int, index: int) -> EvalParams:
        ss = np.random.SeedSequence(
            entropy=self.config.master_seed, spawn_key=(domain, index)
        )
        seed = int(ss.generate_state(1, dtype=np.uint64)[0] & np.uint64(2**63 - 1))
        return _with_seed(self.config.eval, seed)

    def _map_eval(
        self, tasks: list[tuple[str, EvalParams]], fn=_eval_task
    ) -> list[EvalResult]:
        if self.config.resolved_workers() > 1 and len(tasks) > 1:
            if self._pool is None:
                self._pool = ProcessPoolExecutor(self.config.resolved_workers())
            return list(self._pool.map(fn, tasks))
        return [fn(t) for t in tasks]

    def _vector_for(self, source: str, summary: TraceSummary | None) -> ConceptVector:
        tree = parse_source(source)
        return extract_concepts(compile_game(tree), tree, summary)

    def initialize(self) -> None:
        self._emit({"t": "log_open", "schema": EVENTS_SCHEMA})
        corpus_trees = [preprocess(parse_source(s)) for s in self._corpus_sources()]
        corpus_sources = [t.source for t in corpus_trees]
        seed_sources = [
            preprocess(parse_source(s)).source for s in self._seed_sources()
        ]
        seed_set = set(seed_sources)
        # seed games need their real fitness; the rest of the corpus only
        # contributes concept vectors, so the search stage is skipped there
        tasks = [(src, self._eval_seed(0, i)) for i, src in enumerate(corpus_sources)]
        full = [t for t in tasks if t[0] in seed_set]
        light = [t for t in tasks if t[0] not in seed_set]
        results_by_src = dict(
            zip([t[0] for t in full], self._map_eval(full))
        )
        results_by_src.update(
            zip([t[0] for t in light], self._map_eval(light, _summary_task))
        )
        vectors: list[ConceptVector] = []
        usable: list[tuple[str, EvalResult, ConceptVector]] = []
        for src in corpus_sources:
            res = results_by_src[src]
            if res.fitness.stage is Stage.UNCOMPILABLE:
                self._emit({"t": "corpus_skipped", "detail": res.fitness.detail})
                continue
            vec = self._vector_for(src, res.summary)
            vectors.append(vec)
            usable.append((src, res, vec))
        self.projection = fit_projection(vectors)
        save_projection(self.projection, self.out_dir / "projection.json")
        for src, res, vec in usable:
            cell = self._cell(vec)
            self.archive.baseline_cells.add(cell)
        self._emit(
            {"t": "baseline", "cells": sorted(list(c) for c in self.archive.baseline_cells)}
        )

        known = {src: (res, vec) for src, res, vec in usable if src in seed_set}
        for i, src in enumerate(seed_sources):
            if src in known:
                res, vec = known[src]
            else:
                res = self._map_eval([(src, self._eval_seed(3, i))])[0]
                if res.fitness.stage is Stage.UNCOMPILABLE:
                    self._emit({"t": "seed_skipped", "index": i})
                    continue
                vec = self._vector_for(src, res.summary)
            record = CandidateRecord(
                id=f"seed-{i:02d}",
                source=src,
                fitness=res.fitness,
                concepts=vec,
                cell=self._cell(vec),
                parent_id=None,
                mutated_span=None,
                operator="seed",
                generation=0,
                step=-1,
                seq=i,
            )
            self.seen_sha.add(_sha(src))
            self._generation[record.id] = 0
            result, _ = self.archive.add(record)
            self._emit({"t": "seed", "result": result, "record": record_to_dict(record)})
        self._flush_events()

    def _cell(self, vec: ConceptVector) -> tuple[int, int]:
        assert self.projection is not None
        x, y = project(self.projection, vec)
        c = cell_of(
            x, y, self.config.regions_per_axis, self.config.coord_lo, self.config.coord_hi
        )
        return c.as_tuple()

    # -- mutation operator --------------------------------------------------

    def _operator(self):
        name = self.config.operator
        if name.startswith("grammar"):
            if self._sampler is None:
                trees = [preprocess(parse_source(s)) for s in self._corpus_sources()]
                self._sampler = GrammarSampler(
                    library=SubtreeLibrary.harvest(trees),
                    params=GrammarSamplerParams(
                        max_depth=self.config.max_depth,
                        subtree_library_p=self.config.subtree_library_p,
                    ),
                )

            def op(req: MutationRequest, tree: GameTree, rng) -> str:
                return grammar_mutate(req, tree, self._sampler, rng)

            return op
        if name.startswith("infill"):
            cfg = InfillEndpointConfig(url=self.config.infill_endpoint)

            def op(req: MutationRequest, tree: GameTree, rng) -> str:
                return infill_mutate(req, tree, cfg)

            return op
        raise ValueError(f"unknown operator {name!r}")

    # -- the step ------------------------------------------------------------

    def select_parents(self, rng: np.random.Generator) -> list[CandidateRecord]:
        occupied = [rec for _, rec in sorted(self.archive.grid.items())]
        if not occupied:
            raise EmptyArchive("archive has no occupants")
        return [
            occupied[int(rng.integers(len(occupied)))]
            for _ in range(self.config.j_parents)
        ]

    def step(self, step_idx: int) -> StepReport:
        rng = np.random.Generator(
            np.random.PCG64(
                np.random.SeedSequence(
                    entropy=self.config.master_seed, spawn_key=(10, step_idx)
                )
            )
        )
        op = self._operator()
        report = StepReport(step=step_idx)
        parents = self.select_parents(rng)
        batch: list[dict] = []
        batch_shas: set[str] = set()
        for j, parent in enumerate(parents):
            tree = parse_source(parent.source)
            sites = mutation_sites(tree)
            for k in range(self.config.k_mutations):
                report.attempts += 1
                if self.bandit is not None:
                    site = self.bandit.select(sites, rng)
                else:
                    site = sites[int(rng.integers(len(sites)))]
                attempt = {
                    "t": "attempt",
                    "step": step_idx,
                    "slot": [j, k],
                    "parent": parent.id,
                    "span": list(site.span),
                    "arm": site.head,
                    "category": site.category,
                    "success": False,
                }
                try:
                    candidate = op(MutationRequest(parent.source, site), tree, rng)
                except Exception as err:
                    report.failed += 1
                    attempt["outcome"] = f"failed:{type(err).__name__}"
                    self._attempt_done(attempt)
                    continue
                sha = _sha(candidate)
                attempt["sha"] = sha
                if candidate == parent.source:
                    report.unchanged += 1
                    attempt["outcome"] = "unchanged"
                    self._attempt_done(attempt)
                elif sha in self.seen_sha or sha in batch_shas:
                    report.duplicates += 1
                    attempt["outcome"] = "duplicate"
                    self._attempt_done(attempt)
                elif len(candidate) > self.config.max_source_len:
                    report.failed += 1
                    attempt["outcome"] = "too-long"
                    self._attempt_done(attempt)
                else:
                    batch_shas.add(sha)
                    batch.append(
                        {
                            "attempt": attempt,
                            "candidate": candidate,
                            "parent": parent,
                            "params": self._eval_seed_step(step_idx, j, k),
                        }
                    )

        results = self._map_eval([(b["candidate"], b["params"]) for b in batch])
        seq = 0
        for b, res in zip(batch, results):
            attempt, candidate, parent = b["attempt"], b["candidate"], b["parent"]
            report.evaluated += 1
            self.seen_sha.add(attempt["sha"])
            if res.fitness.stage is Stage.UNCOMPILABLE:
                report.uncompilable += 1
                attempt["outcome"] = "uncompilable"
                self._attempt_done(attempt)
                continue
            vec = self._vector_for(candidate, res.summary)
            record = CandidateRecord(
                id=f"g{step_idx:04d}-{seq:02d}",
                source=candidate,
                fitness=res.fitness,
                concepts=vec,
                cell=self._cell(vec),
                parent_id=parent.id,
                mutated_span=tuple(attempt["span"]),
                operator=self.config.operator,
                generation=self._generation.get(parent.id, 0) + 1,
                step=step_idx,
                seq=seq,
            )
            seq += 1
            self._generation[record.id] = record.generation
            result, _ = self.archive.add(record)
            attempt["outcome"] = result
            attempt["success"] = result in ("inserted", "replaced")
            setattr(report, result, getattr(report, result) + 1)
            self._attempt_done(attempt)
            self._emit(
                {"t": "archived", "step": step_idx, "result": result,
                 "record": record_to_dict(record)}
            )
        self._emit(
            {
                "t": "step_end",
                "step": step_idx,
                "qd_score": self.archive.qd_score(),
                "occupied": len(self.archive.grid),
            }
        )
        self._flush_events()
        return report

    def _eval_seed_step(self, step: int, j: int, k: int) -> EvalParams:
        ss = np.random.SeedSequence(
            entropy=self.config.master_seed, spawn_key=(20, step, j, k)
        )
        seed = int(ss.generate_state(1, dtype=np.uint64)[0] & np.uint64(2**63 - 1))
        return _with_seed(self.config.eval, seed)

    def _attempt_done(self, attempt: dict) -> None:
        if self.bandit is not None:
            self.bandit.update(attempt["arm"], attempt["success"])
        self._emit(attempt)

    # -- persistence ---------------------------------------------------------

    def _emit(self, event: dict) -> None:
        self._events.append(event)

    def _flush_events(self) -> None:
        if not self._events:
            return
        path = self.out_dir / "events.jsonl"
        with path.open("a", encoding="utf-8") as fh:
            for ev in self._events:
                fh.write(json.dumps(ev, sort_keys=True) + "\n")
        self._events.clear()

    def snapshot(self) -> None:
        elites = self.out_dir / "elites"
        elites.mkdir(parents=True, exist_ok=True)
        for old in elites.glob("*.lud"):
            old.unlink()
        for rec in self.archive.records():
            name = f"{rec.cell[0]:02d}_{rec.cell[1]:02d}_{rec.id}.lud"
            (elites / name).write_text(rec.source, encoding="utf-8")
        (self.out_dir / "report.json").write_text(
            json.dumps(self.archive.report(), indent=1, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def run(self) -> dict:
        from ..hub.config import save_config

        self.out_dir.mkdir(parents=True, exist_ok=True)
        has_log = (self.out_dir / "events.jsonl").exists()
        if not self.resumed:
            if has_log:
                raise ValueError(
                    f"{self.out_dir} already holds a run; resume it instead"
                )
            save_config(self.config, self.out_dir / "config.json")
            self.initialize()
        try:
            for s in range(self.next_step, self.config.steps):
                self.step(s)
                if (s + 1) % max(1, self.config.snapshot_every) == 0:
                    self.snapshot()
            self.snapshot()
        finally:
            self.close()
        return self.archive.report()


def _with_seed(params: EvalParams, seed: int) -> EvalParams:
    from dataclasses import replace

    return replace(params, seed=seed)


def load_run(out_dir: str | Path) -> EvolveRun:
    """Rebuild run state (archive, bandit, dedup, step counter) from the log."""
    from ..hub.config import load_config

    out = Path(out_dir)
    config = load_config(out / "config.json")
    run = EvolveRun(config)
    run.out_dir = out
    events = [
        json.loads(line)
        for line in (out / "events.jsonl").read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    from ..concepts import load_projection

    run.projection = load_projection(out / "projection.json")
    last_step = -1
    for ev in events:
        t = ev["t"]
        if t == "baseline":
            run.archive.baseline_cells = {tuple(c) for c in ev["cells"]}
        elif t == "seed":
            rec = record_from_dict(ev["record"])
            run.seen_sha.add(_sha(rec.source))
            run._generation[rec.id] = rec.generation
            run.archive.add(rec)
        elif t == "attempt":
            if "sha" in ev:
                run.seen_sha.add(ev["sha"])
            if run.bandit is not None:
                run.bandit.update(ev["arm"], ev.get("success", False))
        elif t == "archived":
            rec = record_from_dict(ev["record"])
            run._generation[rec.id] = rec.generation
            run.archive.add(rec)
        elif t == "step_end":
            last_step = ev["step"]
    run.next_step = last_step + 1
    run.resumed = True
    return run
