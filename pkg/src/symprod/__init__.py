"""Finite point sets under the Hausdorff metric: cones, embeddings, retractions.

The toolkit treats card-<=n subsets of R^d as elements of the symmetric
product X^(n) with the Hausdorff metric and provides:

* the metric core (canonical point sets, Hausdorff and product metrics),
* additive and classical cone metrics with the Euclidean cone lift,
* an explicit recursive bi-Lipschitz embedding of line sets into R^{m(n)},
  m(n) = 2*floor((e-1) n!), plus its R^d generalization,
* an explicit Lipschitz retraction from card-<=n to card-<=k line sets,
* separating projection families for small sets in R^d,
* Lipschitz decomposition of set-valued maps and sphere-to-ball extension,
* a seeded distortion lab (random sampling plus adversarial search).
"""

from .cone import (
    APEX_EPS,
    ConeComparisonReport,
    ConePoint,
    check_cone_comparison,
    cone_distance,
    cone_distance_classic,
    euclidean_cone_lift,
)
from .distortion import (
    DistortionReport,
    MapUnderTest,
    adversarial_search,
    certified_bounds,
    circle_pinned_map,
    collect_ratio_pairs,
    embedding_map,
    estimate_distortion,
    identity_map,
    retraction_map,
    scaling_map,
    tomography_map,
)
from .errors import (
    BadRangeError,
    CapacityExceededError,
    DecompositionError,
    DegenerateFamilyError,
    DegenerateSampleError,
    DiameterViolationError,
    DimensionMismatchError,
    EmptyInputError,
    InvariantViolationError,
    NegativeParameterError,
    NonFiniteCoordinateError,
    NonUnitDirectionError,
    PreconditionError,
    SchemaError,
    SymprodError,
)
from .extension import (
    BallExtensionResult,
    BallGrid,
    RadialExtensionResult,
    SampledMap,
    ball_extension,
    circle_grid,
    decompose_map,
    make_ball_grid,
    make_sampled_map,
    measured_grid_constant,
    radial_extension,
    ray_constant,
    sphere_constant,
)
from .pipeline import (
    APEX,
    EmbeddingPipeline,
    PinnedSet,
    Stage,
    StageConstants,
    build_pipeline,
    circle_map,
    dimension,
    embed,
    embed_rd,
    embed_rd_certified_upper,
    embed_rd_output_dim,
    make_pinned,
    pinned_normalize,
    split_min,
)
from .pointset import (
    FinitePointSet,
    MetricSampler,
    canonicalize,
    from_values,
    hausdorff_distance,
    pointset_from_doc,
    product_distance,
    union,
)
from .retraction import GapProfile, min_gap, retract_once, retract_to
from .tomography import (
    LineFamily,
    SeparationCertificate,
    SeparationReport,
    check_pair_separation,
    complement_basis,
    family_distance,
    make_line_family,
    project_family,
    project_set,
    separation_constant,
    verify_separation,
)

__version__ = "0.1.0"
