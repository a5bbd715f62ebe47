"""Principal-component projection of concept vectors, from scratch.

Mean-centered eigendecomposition of the covariance matrix, top components
kept, each axis standardized by the corpus score deviation and stretched
by a fixed factor of 2 so a roughly bell-shaped corpus lands inside the
[-5, 5] archive range. Component signs are fixed deterministically
(largest-magnitude entry positive) so runs reproduce.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import CATALOG_VERSION
from .extract import ConceptVector

SPREAD = 2.0


class DegenerateCorpus(Exception):
    pass


class CatalogMismatch(Exception):
    pass


@dataclass(frozen=True)
class Projection:
    mean: np.ndarray  # (d,)
    components: np.ndarray  # (k, d) orthonormal rows
    scale: np.ndarray  # (k,) per-axis corpus score std
    explained_variance_ratio: np.ndarray  # (k,)
    catalog_version: str = CATALOG_VERSION

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def fit_projection_nd(vectors: list[ConceptVector], n_components: int) -> Projection:
    if len(vectors) < 3:
        raise DegenerateCorpus("need at least 3 corpus vectors")
    version = vectors[0].version
    x = np.stack([v.as_array() for v in vectors])
    mean = x.mean(axis=0)
    centered = x - mean
    cov = (centered.T @ centered) / (len(vectors) - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    if eigvals[min(n_components, len(eigvals)) - 1] <= 1e-12:
        raise DegenerateCorpus(
            f"corpus covariance has rank below {n_components}"
        )
    comps = eigvecs[:, :n_components].T.copy()
    for i in range(comps.shape[0]):
        j = int(np.argmax(np.abs(comps[i])))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    scores = centered @ comps.T
    scale = scores.std(axis=0, ddof=1)
    if (scale <= 0).any():
        raise DegenerateCorpus("zero variance along a kept component")
    total = float(eigvals.sum())
    evr = eigvals[:n_components] / total if total > 0 else np.zeros(n_components)
    return Projection(
        mean=mean,
        components=comps,
        scale=scale,
        explained_variance_ratio=np.asarray(evr, dtype=np.float64),
        catalog_version=version,
    )


def fit_projection(vectors: list[ConceptVector]) -> Projection:
    return fit_projection_nd(vectors, 2)


def project_nd(p: Projection, v: ConceptVector) -> np.ndarray:
    if v.version != p.catalog_version or len(v.bits) != p.mean.shape[0]:
        raise CatalogMismatch(
            f"vector catalog {v.version}/{len(v.bits)} vs projection "
            f"{p.catalog_version}/{p.mean.shape[0]}"
        )
    return ((v.as_array() - p.mean) @ p.components.T) / p.scale * SPREAD


def project(p: Projection, v: ConceptVector) -> tuple[float, float]:
    xy = project_nd(p, v)
    return float(xy[0]), float(xy[1])


def save_projection(p: Projection, path: str | Path) -> None:
    payload = {
        "schema": "ludoforge/projection/1",
        "catalog_version": p.catalog_version,
        "mean": p.mean.tolist(),
        "components": p.components.tolist(),
        "scale": p.scale.tolist(),
        "explained_variance_ratio": p.explained_variance_ratio.tolist(),
    }
    Path(path).write_text(json.dumps(payload, indent=1), encoding="utf-8")


def load_projection(path: str | Path) -> Projection:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return Projection(
        mean=np.array(payload["mean"], dtype=np.float64),
        components=np.array(payload["components"], dtype=np.float64),
        scale=np.array(payload["scale"], dtype=np.float64),
        explained_variance_ratio=np.array(
            payload["explained_variance_ratio"], dtype=np.float64
        ),
        catalog_version=payload["catalog_version"],
    )
