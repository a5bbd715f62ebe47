"""Occupancy sweep: how many distinct cells a corpus fills as the archive's
dimensionality and target size vary. Higher-dimensional archives of the
same total size collapse more games into shared cells."""

from __future__ import annotations

from .cells import archive_geometry, bucket_nd
from .extract import ConceptVector
from .pca import DegenerateCorpus, fit_projection_nd, project_nd


def occupancy_sweep(
    vectors: list[ConceptVector],
    dims: list[int],
    target_cells: list[int],
) -> dict[tuple[int, int], int]:
    """(dims, cells) -> number of unique occupied cells for the corpus."""
    out: dict[tuple[int, int], int] = {}
    for d in dims:
        try:
            proj = fit_projection_nd(vectors, d)
        except DegenerateCorpus:
            for c in target_cells:
                out[(d, c)] = 0
            continue
        coords = [project_nd(proj, v) for v in vectors]
        for c in target_cells:
            regions = archive_geometry(c, d)
            occupied = {bucket_nd(xy, regions) for xy in coords}
            out[(d, c)] = len(occupied)
    return out


def sweep_table(result: dict[tuple[int, int], int]) -> str:
    dims = sorted({d for d, _ in result})
    cells = sorted({c for _, c in result})
    header = "dims\\cells" + "".join(f"{c:>8}" for c in cells)
    lines = [header]
    for d in dims:
        lines.append(f"{d:>10}" + "".join(f"{result[(d, c)]:>8}" for c in cells))
    return "\n".join(lines) + "\n"
