"""Geometric sensitivity analysis with Vietoris-Rips complexes."""
from .complex import (
    NeighborhoodGraph,
    RipsComplex,
    build_neighborhood_graph,
    build_rips_complex,
    covering_triangles,
    epsilon_from_quantile,
    pairwise_distances,
    rips_expansion,
)
from .geometry import (
    BBox,
    Point2,
    PolygonSet,
    Triangle2,
    area,
    boolean_op,
    bounding_box,
    triangle_area,
    union_triangles,
)
from .models import ModelSpec, generate_model
from .persistence import Barcode, Filtration, betti_at, build_filtration, compute_barcode
from .sensitivity import (
    AnalysisConfig,
    AnalysisResult,
    analyze_dataset,
    analyze_variable,
    geometric_correlation,
    geometric_index,
)
from .sobol import SobolEstimate, sobol_monte_carlo
from .symmetry import AffineMap2, recenter, reflect_complex, reflection_map, y_mid

__version__ = "0.1.0"
