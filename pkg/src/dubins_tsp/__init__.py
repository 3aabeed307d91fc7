"""Dubins traveling salesman solver for point sets at least four turning radii apart."""
from ._backend import active_backend, use_backend
from .bounding import (
    DtspResult,
    DtspSettings,
    SharpTurn,
    alternating_tour,
    descend_with_flips,
    find_sharp_turns,
    solve_dtsp,
)
from .errors import (
    DegenerateSeed,
    DubinsTSPError,
    Infeasible,
    InvalidInstance,
    InvalidSequence,
    MixingFailure,
    NonConvergence,
    NotUnit,
    NumericalDegeneracy,
    SeparationTooSmall,
    TooLarge,
    TooManyFlips,
)
from .etsp import EtspQuery, EtspSolution, solve_etsp, solve_etsp_window
from .geometry import CSPath, DirectedPoint, DubinsPath, cs_path, csc_path, sample_path
from .instances import GenSpec, generate, scale_sweep
from .tour import (
    DescentResult,
    DescentSettings,
    Instance,
    TourConfig,
    TourEvaluation,
    evaluate,
    gap_bound,
    gradient,
    gradient_descent,
    position_gradient,
    project_velocity,
    seed_angles,
)

__version__ = "0.1.0"
