"""Command-line entry points.

  ludoforge evolve    run (or resume) the archive search
  ludoforge evaluate  score one game file through the fitness hierarchy
  ludoforge serve     playtest service over an archive or game files
  ludoforge tools     preprocess | stats | sweep | export-heatmap | bench
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np


def _add_eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-random", type=int, default=100)
    p.add_argument("--n-mcts", type=int, default=10)
    p.add_argument("--n-depth", type=int, default=10)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--think-time", type=float, default=None)
    p.add_argument("--move-limit", type=int, default=50)
    p.add_argument("--rollout-cap", type=int, default=None)
    p.add_argument("--balance-gate", type=float, default=0.5)
    p.add_argument("--agency-gate", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)


def _eval_params(args) -> "EvalParams":
    from ..fitness import EvalParams

    return EvalParams(
        n_random=args.n_random,
        n_mcts=args.n_mcts,
        n_depth=args.n_depth,
        mcts_iterations=args.iterations,
        mcts_think_time=args.think_time,
        move_limit=args.move_limit,
        rollout_cap=args.rollout_cap,
        balance_gate=args.balance_gate,
        agency_gate=args.agency_gate,
        seed=args.seed,
    )


def cmd_evolve(args) -> int:
    from ..qd import EvolveRun, load_run
    from .config import RunConfig

    if args.resume:
        run = load_run(args.out)
        if args.steps is not None:
            run.config = dataclasses.replace(run.config, steps=args.steps)
    else:
        cfg = RunConfig(
            out_dir=args.out,
            seed_paths=tuple(args.seeds or ()),
            corpus_paths=tuple(args.corpus or ()),
            steps=args.steps if args.steps is not None else 500,
            j_parents=args.j,
            k_mutations=args.k,
            master_seed=args.master_seed,
            operator=args.operator,
            workers=args.workers,
            snapshot_every=args.snapshot_every,
            eval=_eval_params(args),
        )
        run = EvolveRun(cfg)
    report = run.run()
    print(json.dumps(report, indent=1, sort_keys=True))
    return 0


def cmd_evaluate(args) -> int:
    from ..concepts import cell_of, extract_concepts, load_projection, project
    from ..engine import compile_game
    from ..fitness import Stage, evaluate, screen
    from ..gdl import parse_source

    source = Path(args.game).read_text(encoding="utf-8") if args.game != "-" else sys.stdin.read()
    params = _eval_params(args)
    if args.stage_only:
        print(json.dumps(screen(source, params), indent=1, sort_keys=True))
        return 0
    result = evaluate(source, params)
    out = {
        "value": result.fitness.value,
        "stage": result.fitness.stage.name,
        "detail": result.fitness.detail,
        "metrics": None
        if result.fitness.metrics is None
        else dataclasses.asdict(result.fitness.metrics),
        "stats": None
        if result.fitness.stats is None
        else dataclasses.asdict(result.fitness.stats),
    }
    if result.fitness.stage is not Stage.UNCOMPILABLE:
        tree = parse_source(source)
        vec = extract_concepts(compile_game(tree), tree, result.summary)
        out["concepts"] = list(vec.bits)
        out["catalog_version"] = vec.version
        if args.projection:
            proj = load_projection(args.projection)
        else:
            proj = _bundled_projection(params)
        x, y = project(proj, vec)
        out["coords"] = [x, y]
        out["cell"] = list(cell_of(x, y).as_tuple())
    print(json.dumps(out, indent=1, sort_keys=True))
    return 0


def _bundled_projection(params):
    from ..concepts import extract_concepts, fit_projection
    from ..corpus import game_sources
    from ..engine import compile_game
    from ..fitness.evaluate import trace_summary
    from ..gdl import parse_source, preprocess

    vectors = []
    for i, (_, src) in enumerate(sorted(game_sources().items())):
        tree = preprocess(parse_source(src))
        ok, summary = trace_summary(tree.source, dataclasses.replace(params, seed=i))
        if ok:
            vectors.append(extract_concepts(compile_game(tree), tree, summary))
    return fit_projection(vectors)


def cmd_serve(args) -> int:
    from .service import Registry, serve_forever

    reg = Registry()
    if args.archive:
        reg.add_run_dir(args.archive)
    for pattern in args.games or []:
        for path in sorted(Path(".").glob(pattern)) or [Path(pattern)]:
            if path.exists():
                reg.add_game_file(path)
    if not reg.games:
        from ..corpus import game_paths

        for p in game_paths():
            reg.add_game_file(p)
    serve_forever(reg, args.host, args.port)
    return 0


def cmd_preprocess(args) -> int:
    from ..gdl import load_macros, parse_source, preprocess, print_canonical

    macros = load_macros(args.macros) if args.macros else None
    if macros is None:
        from ..corpus import macros_dir

        macros = load_macros(macros_dir())
    tree = preprocess(parse_source(Path(args.game).read_text(encoding="utf-8")), macros)
    text = print_canonical(tree)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


def cmd_stats(args) -> int:
    from ..gdl import parse_source, preprocess
    from ..mutate import (
        GrammarSampler,
        GrammarSamplerParams,
        SubtreeLibrary,
        grammar_mutate,
        mutation_stats,
        stats_table,
    )
    from ..corpus import game_sources

    trees = [preprocess(parse_source(s)) for _, s in sorted(game_sources().items())]
    sources = [t.source for t in trees]
    rows = {}
    for p in args.library_p:
        sampler = GrammarSampler(
            library=SubtreeLibrary.harvest(trees),
            params=GrammarSamplerParams(subtree_library_p=p),
        )

        def op(req, tree, rng, _s=sampler):
            return grammar_mutate(req, tree, _s, rng)

        rows[f"grammar(lib_p={p})"] = mutation_stats(
            sources, op, args.n, np.random.default_rng(args.seed)
        )
    table = stats_table(rows)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def cmd_sweep(args) -> int:
    from ..concepts import extract_concepts, occupancy_sweep, sweep_table
    from ..corpus import game_sources
    from ..engine import compile_game
    from ..fitness.evaluate import trace_summary
    from ..gdl import parse_source, preprocess

    vectors = []
    for i, (_, src) in enumerate(sorted(game_sources().items())):
        tree = preprocess(parse_source(src))
        ok, summary = trace_summary(tree.source, _eval_params(args))
        if ok:
            vectors.append(extract_concepts(compile_game(tree), tree, summary))
    dims = [int(d) for d in args.dims.split(",")]
    cells = [int(c) for c in args.cells.split(",")]
    table = sweep_table(occupancy_sweep(vectors, dims, cells))
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def cmd_heatmap(args) -> int:
    from .persist import export_heatmap

    text = export_heatmap(args.run_dir, args.regions)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ludoforge")
    sub = p.add_subparsers(dest="cmd", required=True)

    ev = sub.add_parser("evolve", help="run or resume an archive search")
    ev.add_argument("--out", required=True)
    ev.add_argument("--seeds", nargs="*", help="seed game files (default: bundled corpus)")
    ev.add_argument("--corpus", nargs="*", help="reference corpus files")
    ev.add_argument("--steps", type=int, default=None)
    ev.add_argument("--j", type=int, default=3)
    ev.add_argument("--k", type=int, default=3)
    ev.add_argument("--master-seed", type=int, default=1)
    ev.add_argument("--operator", default="grammar",
                    choices=["grammar", "grammar-ucb", "infill", "infill-ucb"])
    ev.add_argument("--workers", type=int, default=0)
    ev.add_argument("--snapshot-every", type=int, default=25)
    ev.add_argument("--resume", action="store_true")
    _add_eval_flags(ev)
    ev.set_defaults(fn=cmd_evolve)

    e2 = sub.add_parser("evaluate", help="score one game file")
    e2.add_argument("game")
    e2.add_argument("--stage-only", action="store_true")
    e2.add_argument("--projection", default=None)
    _add_eval_flags(e2)
    e2.set_defaults(fn=cmd_evaluate)

    sv = sub.add_parser("serve", help="playtest HTTP service")
    sv.add_argument("--archive", default=None, help="run directory to serve")
    sv.add_argument("--games", nargs="*", help="game file globs")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(fn=cmd_serve)

    tools = sub.add_parser("tools", help="corpus and analysis utilities")
    tsub = tools.add_subparsers(dest="tool", required=True)

    tp = tsub.add_parser("preprocess", help="expand references, anonymize names")
    tp.add_argument("game")
    tp.add_argument("--macros", default=None)
    tp.add_argument("-o", "--out", default=None)
    tp.set_defaults(fn=cmd_preprocess)

    ts = tsub.add_parser("stats", help="mutation novelty/validity table")
    ts.add_argument("--n", type=int, default=300)
    ts.add_argument("--seed", type=int, default=0)
    ts.add_argument("--library-p", type=float, nargs="*", default=[0.0, 0.5, 1.0])
    ts.add_argument("-o", "--out", default=None)
    ts.set_defaults(fn=cmd_stats)

    tw = tsub.add_parser("sweep", help="archive occupancy by dimension and size")
    tw.add_argument("--dims", default="2,3,4,5")
    tw.add_argument("--cells", default="100,500,1000,1500,2500,5000,10000")
    tw.add_argument("-o", "--out", default=None)
    _add_eval_flags(tw)
    tw.set_defaults(fn=cmd_sweep)

    th = tsub.add_parser("export-heatmap", help="best-fitness-per-cell matrix")
    th.add_argument("run_dir")
    th.add_argument("--regions", type=int, default=40)
    th.add_argument("-o", "--out", default=None)
    th.set_defaults(fn=cmd_heatmap)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
