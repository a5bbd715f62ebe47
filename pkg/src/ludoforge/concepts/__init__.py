from .catalog import BEHAVIORAL_CONCEPTS, CATALOG_VERSION, CONCEPT_NAMES, DIMENSION, SYNTACTIC_CONCEPTS
from .cells import CellCoord, archive_geometry, bucket_nd, cell_of
from .extract import ConceptVector, extract_concepts
from .pca import (
    CatalogMismatch,
    DegenerateCorpus,
    Projection,
    fit_projection,
    fit_projection_nd,
    load_projection,
    project,
    project_nd,
    save_projection,
)
from .sweep import occupancy_sweep, sweep_table

__all__ = [
    "BEHAVIORAL_CONCEPTS", "CATALOG_VERSION", "CONCEPT_NAMES", "DIMENSION",
    "SYNTACTIC_CONCEPTS",
    "CellCoord", "archive_geometry", "bucket_nd", "cell_of",
    "ConceptVector", "extract_concepts",
    "CatalogMismatch", "DegenerateCorpus", "Projection",
    "fit_projection", "fit_projection_nd", "load_projection",
    "project", "project_nd", "save_projection",
    "occupancy_sweep", "sweep_table",
]
