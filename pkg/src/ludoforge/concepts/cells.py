"""Archive cell assignment and rectangular archive geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CellCoord:
    i: int
    j: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


def _bucket(x: float, regions: int, lo: float, hi: float) -> int:
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x}")
    width = (hi - lo) / regions
    return min(max(int(math.floor((x - lo) / width)), 0), regions - 1)


def cell_of(
    x: float, y: float, regions_per_axis: int = 40, lo: float = -5.0, hi: float = 5.0
) -> CellCoord:
    """Clamping floor-bucket into an R x R grid over [lo, hi]^2."""
    return CellCoord(
        _bucket(x, regions_per_axis, lo, hi), _bucket(y, regions_per_axis, lo, hi)
    )


def bucket_nd(
    coords, regions: list[int], lo: float = -5.0, hi: float = 5.0
) -> tuple[int, ...]:
    return tuple(_bucket(float(c), r, lo, hi) for c, r in zip(coords, regions))


def _int_root(c: int, d: int) -> int:
    """Largest b with b**d <= c (exact integer arithmetic)."""
    b = max(1, int(round(c ** (1.0 / d))))
    while b**d > c:
        b -= 1
    while (b + 1) ** d <= c:
        b += 1
    return b


def archive_geometry(target_cells: int, dims: int) -> list[int]:
    """Per-axis region counts: every axis gets floor(C^(1/D)) regions, then
    the first axis grows as far as the total stays within the target."""
    if target_cells < 1 or dims < 1:
        raise ValueError(f"invalid geometry ({target_cells} cells, {dims} dims)")
    b = _int_root(target_cells, dims)
    first = target_cells // (b ** (dims - 1))
    return [first] + [b] * (dims - 1)
