"""Board topology: site indexing, adjacency tables, named regions.

Square boards index sites row-major with row 0 at the bottom. Hexagonal
boards are hex-of-hexagons with axial coordinates; a side-n board has
3n^2-3n+1 sites. Hex cells share edges only, so the Diagonal relation is
empty there and Adjacent coincides with Orthogonal.

Adjacency is stored as dense per-direction neighbor tables ``nbr[d, s]``
(-1 when off-board), which is what the hot kernels consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQUARE_DIRS = (
    ("N", (0, 1)), ("E", (1, 0)), ("S", (0, -1)), ("W", (-1, 0)),
    ("NE", (1, 1)), ("SE", (1, -1)), ("SW", (-1, -1)), ("NW", (-1, 1)),
)
HEX_DIRS = (
    ("E", (1, 0)), ("NE", (0, 1)), ("NW", (-1, 1)),
    ("W", (-1, 0)), ("SW", (0, -1)), ("SE", (1, -1)),
)

# mover-relative direction names, square boards only: name -> (P1 dir, P2 dir)
RELATIVE_DIRS = {
    "Forward": ("N", "S"),
    "Backward": ("S", "N"),
    "FL": ("NW", "SE"),
    "FR": ("NE", "SW"),
    "BL": ("SW", "NE"),
    "BR": ("SE", "NW"),
}


@dataclass(eq=False)
class BoardGraph:
    shape: str  # "square" | "hex"
    size: int
    rotation: int
    n_sites: int
    coords: np.ndarray  # (S, 2) float64 render coordinates, rotation applied
    dir_names: tuple[str, ...]  # order of the Adjacent direction set
    nbr: np.ndarray  # (D, S) int32 neighbor table over the Adjacent set
    ortho_dirs: np.ndarray  # int32 indices into the direction set
    diag_dirs: np.ndarray
    line_axes: np.ndarray  # (A, 2) int32 pairs (dir, opposite dir)
    line_axes_ortho: np.ndarray
    regions: dict[str, np.ndarray] = field(default_factory=dict)
    region_classes: dict[str, list[np.ndarray]] = field(default_factory=dict)

    def all_dirs(self) -> np.ndarray:
        return np.arange(len(self.dir_names), dtype=np.int32)

    def relation_dirs(self, relation: str) -> np.ndarray:
        if relation == "Orthogonal":
            return self.ortho_dirs
        if relation == "Diagonal":
            return self.diag_dirs
        if relation == "Adjacent":
            return self.all_dirs()
        raise ValueError(f"unknown relation {relation!r}")

    def direction_index(self, name: str, player: int) -> int | None:
        """Resolve a direction name for a player; None when undefined here."""
        if name in RELATIVE_DIRS:
            if self.shape != "square":
                return None
            name = RELATIVE_DIRS[name][player - 1]
        try:
            return self.dir_names.index(name)
        except ValueError:
            return None

    def neighbors_of(self, site: int, dirs: np.ndarray | None = None) -> np.ndarray:
        d = self.all_dirs() if dirs is None else dirs
        row = self.nbr[d, site]
        return row[row >= 0].astype(np.int32)


def _rotate_coords(coords: np.ndarray, degrees: int) -> np.ndarray:
    if degrees % 360 == 0:
        return coords
    center = coords.mean(axis=0)
    theta = math.radians(degrees)
    rot = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    )
    return (coords - center) @ rot.T + center


def build_square(n: int, rotation: int = 0) -> BoardGraph:
    s = n * n
    idx = lambda c, r: r * n + c
    coords = np.array([[c, r] for r in range(n) for c in range(n)], dtype=np.float64)
    names = tuple(name for name, _ in SQUARE_DIRS)
    nbr = np.full((len(names), s), -1, dtype=np.int32)
    for d, (_, (dc, dr)) in enumerate(SQUARE_DIRS):
        for r in range(n):
            for c in range(n):
                c2, r2 = c + dc, r + dr
                if 0 <= c2 < n and 0 <= r2 < n:
                    nbr[d, idx(c, r)] = idx(c2, r2)
    dir_of = {name: i for i, name in enumerate(names)}
    line_axes = np.array(
        [
            [dir_of["E"], dir_of["W"]],
            [dir_of["N"], dir_of["S"]],
            [dir_of["NE"], dir_of["SW"]],
            [dir_of["NW"], dir_of["SE"]],
        ],
        dtype=np.int32,
    )
    bottom = np.array([idx(c, 0) for c in range(n)], dtype=np.int32)
    top = np.array([idx(c, n - 1) for c in range(n)], dtype=np.int32)
    left = np.array([idx(0, r) for r in range(n)], dtype=np.int32)
    right = np.array([idx(n - 1, r) for r in range(n)], dtype=np.int32)
    corners = np.array(
        [idx(0, 0), idx(n - 1, 0), idx(0, n - 1), idx(n - 1, n - 1)], dtype=np.int32
    )
    corner_set = set(corners.tolist())
    side_no_c = [
        np.array([x for x in side.tolist() if x not in corner_set], dtype=np.int32)
        for side in (top, bottom, left, right)
    ]
    board = BoardGraph(
        shape="square",
        size=n,
        rotation=rotation,
        n_sites=s,
        coords=_rotate_coords(coords, rotation),
        dir_names=names,
        nbr=nbr,
        ortho_dirs=np.array([dir_of[d] for d in ("N", "E", "S", "W")], dtype=np.int32),
        diag_dirs=np.array([dir_of[d] for d in ("NE", "SE", "SW", "NW")], dtype=np.int32),
        line_axes=line_axes,
        line_axes_ortho=line_axes[:2],
        regions={
            "Top": top, "Bottom": bottom, "Left": left, "Right": right,
            "Corners": corners,
            "SidesNoCorners": np.concatenate(side_no_c) if n > 2 else np.array([], dtype=np.int32),
            "Board": np.arange(s, dtype=np.int32),
        },
        region_classes={
            "SidesNoCorners": side_no_c,
            "Corners": [np.array([c], dtype=np.int32) for c in corners.tolist()],
        },
    )
    return board


def build_hex(n: int, rotation: int = 0) -> BoardGraph:
    rng = n - 1
    cells = []
    for r in range(-rng, rng + 1):
        for q in range(-rng, rng + 1):
            if abs(q + r) <= rng:
                cells.append((q, r))
    index = {qr: i for i, qr in enumerate(cells)}
    s = len(cells)
    coords = np.array(
        [[q + r / 2.0, r * math.sqrt(3) / 2.0] for q, r in cells], dtype=np.float64
    )
    names = tuple(name for name, _ in HEX_DIRS)
    nbr = np.full((len(names), s), -1, dtype=np.int32)
    for d, (_, (dq, dr)) in enumerate(HEX_DIRS):
        for (q, r), i in index.items():
            j = index.get((q + dq, r + dr))
            if j is not None:
                nbr[d, i] = j
    dir_of = {name: i for i, name in enumerate(names)}
    line_axes = np.array(
        [
            [dir_of["E"], dir_of["W"]],
            [dir_of["NE"], dir_of["SW"]],
            [dir_of["NW"], dir_of["SE"]],
        ],
        dtype=np.int32,
    )
    corner_coords = [
        (rng, 0), (0, rng), (-rng, rng), (-rng, 0), (0, -rng), (rng, -rng),
    ]
    corners = np.array([index[qr] for qr in corner_coords], dtype=np.int32)
    # six sides between consecutive corners, corners excluded
    side_dirs = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)]
    sides: list[np.ndarray] = []
    for ci, (q, r) in enumerate(corner_coords):
        dq, dr = side_dirs[ci]
        side = []
        for step in range(1, rng):
            side.append(index[(q + dq * step, r + dr * step)])
        sides.append(np.array(side, dtype=np.int32))
    board = BoardGraph(
        shape="hex",
        size=n,
        rotation=rotation,
        n_sites=s,
        coords=_rotate_coords(coords, rotation),
        dir_names=names,
        nbr=nbr,
        ortho_dirs=np.arange(len(names), dtype=np.int32),
        diag_dirs=np.array([], dtype=np.int32),
        line_axes=line_axes,
        line_axes_ortho=line_axes,
        regions={
            "Corners": corners,
            "SidesNoCorners": np.concatenate(sides) if rng > 1 else np.array([], dtype=np.int32),
            "Board": np.arange(s, dtype=np.int32),
        },
        region_classes={
            "SidesNoCorners": sides,
            "Corners": [np.array([c], dtype=np.int32) for c in corners.tolist()],
        },
    )
    return board
