"""Absolute camera pose under planar motion.

Depth-aware minimal solvers (one point with depth plus one without, or two
points with depth), a robust sample-consensus estimator with probabilistic
solver selection, Gauss-Newton pose refinement, and a synthetic-world
benchmark harness.
"""

from planarloc.corrfile import (
    FORMAT_VERSION,
    CorrFile,
    ParseError,
    read_corr_file,
    write_corr_file,
)
from planarloc.geometry import (
    DEPTH_RELIABILITY_THRESHOLD,
    CameraModel,
    CheiralityViolation,
    CorrespondenceDP,
    CorrespondenceP,
    DegenerateRay,
    FramePoseGraph,
    NormalizedPoint,
    PlanarPose,
    RelativeTransform,
    UnknownFrame,
    ZeroBaseline,
    denormalize,
    normalize,
    pose_success,
    project,
    reprojection_residual,
    rotation_error,
    sampson_residual,
    translation_error,
    wrap_angle,
)
from planarloc.quartic import IdenticallyZero, solve_quartic
from planarloc.ransac import (
    EstimationFailed,
    InsufficientCorrespondences,
    RansacConfig,
    RansacResult,
    RefinementResult,
    expected_iterations,
    ransac_estimate,
    refine_pose,
)
from planarloc.selector import (
    EnvironmentProfile,
    MissingDenseRate,
    NoViableSolver,
    Setting,
    Solver,
    select_solver,
    trial_success_probability,
)
from planarloc.simulate import (
    CorrLabel,
    SimConfig,
    SimInstance,
    VisibilityExhausted,
    generate_instance,
    make_rig,
)
from planarloc.solvers import (
    DegenerateSample,
    PoseCandidateSet,
    build_relative_pose,
    solve_1p1dp,
    solve_2dp,
)

__version__ = "0.1.0"
