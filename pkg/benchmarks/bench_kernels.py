"""Benchmark the JIT kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeat 200]

Each kernel runs on a realistic mid-game workload (an 8x8 board position
with both players at ~20 stones). The numba path is warmed before timing
so compilation cost is excluded; set LUDOFORGE_JIT=0 to check what the
package itself would fall back to.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ludoforge.engine.board import build_hex, build_square
from ludoforge.engine.kernels import _vector

try:
    from numba import njit

    from ludoforge.engine.kernels import _scalar

    JITTED = {
        name: njit(cache=True, nogil=True)(getattr(_scalar, name))
        for name in (
            "max_run_through", "line_anywhere", "enclosed_captures",
            "label_components", "hop_candidates", "step_candidates",
            "slide_candidates", "component_region_bits",
        )
    }
except ImportError:  # numba absent: compare the fallback against itself
    JITTED = None


def _position(board, rng):
    owner = np.zeros(board.n_sites, dtype=np.int8)
    picks = rng.choice(board.n_sites, size=min(40, board.n_sites // 2), replace=False)
    owner[picks[: len(picks) // 2]] = 1
    owner[picks[len(picks) // 2 :]] = 2
    return owner


def _workloads():
    rng = np.random.default_rng(0)
    square = build_square(8)
    hexb = build_hex(5)
    for board in (square, hexb):
        owner = _position(board, rng)
        froms = np.flatnonzero(owner == 1).astype(np.int32)
        dirs = board.all_dirs()
        empty = (owner == 0).astype(np.uint8)
        occ = (owner != 0).astype(np.uint8)
        target = (owner == 2).astype(np.uint8)
        rel = board.nbr[board.ortho_dirs]
        bits = rng.integers(0, 16, board.n_sites).astype(np.uint32)
        site = int(froms[0])
        yield board.shape, [
            ("max_run_through", (owner, site, 1, board.nbr, board.line_axes)),
            ("line_anywhere", (owner, 1, 4, board.nbr, board.line_axes)),
            ("enclosed_captures", (owner, target, site, rel)),
            ("label_components", (occ, rel)),
            ("hop_candidates", (froms, dirs, board.nbr, occ, empty)),
            ("step_candidates", (froms, dirs, board.nbr, empty)),
            ("slide_candidates", (froms, dirs, board.nbr, empty, empty)),
            ("component_region_bits", (owner, 1, site, rel, bits)),
        ]


def _time(fn, args, repeat):
    fn(*args)  # warm (and JIT-compile)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()
    print(f"{'kernel':<28} {'board':<7} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for shape, cases in _workloads():
        for name, case_args in cases:
            t_np = _time(getattr(_vector, name), case_args, args.repeat)
            if JITTED is None:
                print(f"{name:<28} {shape:<7} {t_np * 1e6:>10.1f}us {'-':>12} {'-':>9}")
                continue
            t_nb = _time(JITTED[name], case_args, args.repeat)
            print(
                f"{name:<28} {shape:<7} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us "
                f"{t_np / t_nb:>8.1f}x"
            )


if __name__ == "__main__":
    main()
