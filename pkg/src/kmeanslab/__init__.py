"""kmeanslab: an instrumented laboratory for the k-means (Lloyd) method
under Gaussian perturbation.

Runs the iteration with full per-step telemetry, computes the model's
structural constants and property predicates, and verifies its
per-iteration and probabilistic bounds empirically at desk scale.
"""

from .engine import (
    Epoch,
    InitSpec,
    IterationRecord,
    RunTrace,
    check_trace_invariants,
    detect_epochs,
    init_centers,
    lloyd_step,
    run,
)
from .geometry import (
    BisectorCrossing,
    ClusteringState,
    Instance,
    assign_nearest,
    bisector_distance,
    center_of_mass,
    min_center_distance,
    potential,
)
from .perturb import (
    PerturbationMeta,
    generate_means,
    hypercube_radius,
    perturb,
    rescale_for_large_sigma,
    tail_probability_check,
)
from .props import (
    PropertyVerdict,
    check_delta_sparse,
    check_eps_separated,
    check_eps_spreaded,
    crossing_margin_log,
    drop_lower_bounds,
    structure_constants,
)
from .oracles import (
    MCResult,
    brute_force_optimum,
    mc_delta_bound,
    mc_separation_bound,
    mc_single_point_bisector,
    mc_spreaded_bound,
)
from .sweep import SweepConfig, SweepResult, aggregate, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BisectorCrossing",
    "ClusteringState",
    "Epoch",
    "InitSpec",
    "Instance",
    "IterationRecord",
    "MCResult",
    "PerturbationMeta",
    "PropertyVerdict",
    "RunTrace",
    "SweepConfig",
    "SweepResult",
    "aggregate",
    "assign_nearest",
    "bisector_distance",
    "brute_force_optimum",
    "center_of_mass",
    "check_delta_sparse",
    "check_eps_separated",
    "check_eps_spreaded",
    "check_trace_invariants",
    "crossing_margin_log",
    "detect_epochs",
    "drop_lower_bounds",
    "generate_means",
    "hypercube_radius",
    "init_centers",
    "lloyd_step",
    "mc_delta_bound",
    "mc_separation_bound",
    "mc_single_point_bisector",
    "mc_spreaded_bound",
    "min_center_distance",
    "perturb",
    "potential",
    "rescale_for_large_sigma",
    "run",
    "run_sweep",
    "structure_constants",
    "tail_probability_check",
]
