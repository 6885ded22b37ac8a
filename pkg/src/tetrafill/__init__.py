"""Four-valent SU(2) intertwiners and the entropic-fill entanglement measure.

The pipeline: build coherent (or random) four-spin states, reduce them to
their seven bipartite von Neumann entropies, solve the entropic-tetrahedron
equations, and report the fill value F4 in [0, 1].  The experiments module
turns this into reproducible sampling and configuration-scan campaigns with
CSV output.
"""

from .entanglement import (
    Bipartition,
    BipartitionEntropies,
    bipartition_entropies,
    reduced_density,
    von_neumann_entropy,
)
from .errors import (
    DegenerateConfig,
    ExcessFailures,
    InvalidDensity,
    InvalidGeometry,
    NoConvergence,
    ZeroProjection,
)
from .fill import (
    FillResult,
    SigmaSet,
    entropic_fill,
    equation_residual,
    fill_from_entropies,
    solve_sigmas,
    tetrahedron_volume,
)
from .intertwiner import (
    FourSpinState,
    InvariantBasis,
    InvariantState,
    VectorConfiguration,
    build_basis,
    channel_labels,
    closure_defect,
    coherent_intertwiner,
    embed,
    group_average_quadrature,
    project,
)
from .sampling import (
    ClosedConfigParams,
    EnsembleKind,
    RngStream,
    closed_config_vectors,
    sample_arbitrary,
    sample_coherent_closed,
    sample_coherent_open,
    sample_invariant,
)
from .su2 import (
    CoherentSpinState,
    MagneticIndex,
    SphericalDirection,
    Spin,
    clebsch_gordan,
    coherent_state,
    log_factorial,
    wigner_rotation,
)

__version__ = "0.1.0"
