"""Geometric pumping of driven two-level loops and two-band chains.

The package tracks one family of stroboscopic drives from three angles:
exact SU(2) algebra and its angle charts (`su2`), iterated pump
trajectories (`evolution`), closed-form long-run rates (`asymptotics`),
stability of rational rotations (`stability`), and the lattice model
whose Bloch loops realize those drives (`band`).  `cli` wraps it all in
deterministic tabular runs.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoteReport,
    RemovableSingularityWarning,
    asymptote_report,
    p_geometric,
    p_infinity,
    p_infinity_axis_route,
    phi_average,
)
from .band import (
    ChainParams,
    DriveCycle,
    GapClosedError,
    PumpProfile,
    TptEvent,
    bloch_vector,
    min_gap,
    pump_profile,
    theta_of_k,
    tpt_events,
    winding_number,
)
from .evolution import (
    FieldCycle1D,
    PumpEvent1D,
    PumpTrace,
    ZeroFieldError,
    build_loop_operator,
    cosine_cycle_zeros,
    propagate_state,
    pump_1d,
    pump_trace,
    trajectory_angles,
    z2_index,
)
from .sampling import make_rng, sample_loop_params
from .stability import (
    EmptyCurveError,
    PhaseDiagram,
    StabilityVerdict,
    StableCurve,
    classify,
    curve_order,
    fibonacci_poly,
    matrix_power_closed_form,
    off_diagonal_magnitude,
    phase_diagram,
    stable_curve,
    trace_parameter,
)
from .su2 import (
    AxisAngle,
    EulerAngles,
    IdentityRotationError,
    LoopParams,
    apply,
    axis_angle_from_euler,
    compose,
    dagger,
    euler_from_loop,
    excited_state,
    ground_state,
    is_su2,
    power,
    project_su2,
    rotation_from_axis_angle,
    su2_defect,
    su2_from_euler,
)

__all__ = [
    "AsymptoteReport",
    "AxisAngle",
    "ChainParams",
    "DriveCycle",
    "EmptyCurveError",
    "EulerAngles",
    "FieldCycle1D",
    "GapClosedError",
    "IdentityRotationError",
    "LoopParams",
    "PhaseDiagram",
    "PumpEvent1D",
    "PumpProfile",
    "PumpTrace",
    "RemovableSingularityWarning",
    "StabilityVerdict",
    "StableCurve",
    "TptEvent",
    "ZeroFieldError",
    "apply",
    "asymptote_report",
    "axis_angle_from_euler",
    "bloch_vector",
    "build_loop_operator",
    "classify",
    "compose",
    "cosine_cycle_zeros",
    "curve_order",
    "dagger",
    "euler_from_loop",
    "excited_state",
    "fibonacci_poly",
    "ground_state",
    "is_su2",
    "make_rng",
    "matrix_power_closed_form",
    "min_gap",
    "off_diagonal_magnitude",
    "p_geometric",
    "p_infinity",
    "p_infinity_axis_route",
    "phase_diagram",
    "phi_average",
    "power",
    "project_su2",
    "propagate_state",
    "pump_1d",
    "pump_profile",
    "pump_trace",
    "rotation_from_axis_angle",
    "sample_loop_params",
    "stable_curve",
    "su2_defect",
    "su2_from_euler",
    "theta_of_k",
    "tpt_events",
    "trace_parameter",
    "trajectory_angles",
    "winding_number",
    "z2_index",
]
