"""Topology-preserving segmentation loss for 2D likelihood maps.

Persistence diagrams of superlevel-set filtrations, optimal diagram
matching, the per-pixel topological gradient, topology-aware evaluation
metrics, and a direct-descent repair demo.
"""

__version__ = "0.1.0"

from .grid import (BinaryMask, LikelihoodMap, Patch, ValidationError,
                   pad_frame, sample_patches)
from .grid_io import ParseError, load_map, save_map
from .loss import GradientMap, LossReport, bce_loss, topo_grad, total_loss
from .matching import (DIAGONAL, DiagramMatching, MatchPair, match_diagrams,
                       topo_loss_value)
from .metrics import (RegionLabeling, adapted_rand, betti_error, label_regions,
                      pixel_accuracy, variation_of_information)
from .oracle import oracle_diagram
from .persistence import (FiltrationCell, PersistenceDiagram, PersistenceDot,
                          betti_at_threshold, build_filtration, compute_diagram)

__all__ = [
    "__version__",
    "BinaryMask", "LikelihoodMap", "Patch", "ValidationError",
    "pad_frame", "sample_patches",
    "ParseError", "load_map", "save_map",
    "GradientMap", "LossReport", "bce_loss", "topo_grad", "total_loss",
    "DIAGONAL", "DiagramMatching", "MatchPair", "match_diagrams",
    "topo_loss_value",
    "RegionLabeling", "adapted_rand", "betti_error", "label_regions",
    "pixel_accuracy", "variation_of_information",
    "oracle_diagram",
    "FiltrationCell", "PersistenceDiagram", "PersistenceDot",
    "betti_at_threshold", "build_filtration", "compute_diagram",
]
