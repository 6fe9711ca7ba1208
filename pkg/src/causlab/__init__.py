"""Causality diagnostics for electromagnetic transmission through slabs.

The package decides whether a dispersive slab transmits signals causally:
it evaluates dielectric models at complex frequency, checks dispersion
relations and the spectral-weight sum rule, computes slab transmission
and reflection two independent ways, propagates front-limited pulses,
extracts the response kernel, and scans the upper half plane for the
singularities that Einstein causality forbids.
"""

from .dielectric import (
    FrequencyGrid,
    OscillatorSet,
    Resonance,
    Tabulated,
    Vacuum,
    eval_epsilon,
    kk_reconstruct,
    kk_roundtrip_error,
    PassivityResult,
    passivity_check,
    sum_rule,
)
from .refraction import BranchPoint, eval_eta, find_branch_points
from .slab import (
    SlabConfig,
    SpectralResponse,
    evaluate_spectrum,
    group_delay,
    reflection,
    transmission,
    transmission_via_transfer_matrix,
)
from .timedomain import (
    CausalityReport,
    KernelEstimate,
    Waveform,
    assess_causality,
    extract_kernel,
    front_leakage,
    propagate,
    synthesize_pulse,
)
from .analyticity import (
    ScanRegion,
    SingularityReport,
    certify,
    default_region,
    scan_upper_half_plane,
)
from .scenario import RunResult, ScenarioConfig, load_scenario, run_scenario

__version__ = "0.1.0"

__all__ = [
    "FrequencyGrid",
    "OscillatorSet",
    "Resonance",
    "Tabulated",
    "Vacuum",
    "eval_epsilon",
    "kk_reconstruct",
    "kk_roundtrip_error",
    "PassivityResult",
    "passivity_check",
    "sum_rule",
    "BranchPoint",
    "eval_eta",
    "find_branch_points",
    "SlabConfig",
    "SpectralResponse",
    "evaluate_spectrum",
    "group_delay",
    "reflection",
    "transmission",
    "transmission_via_transfer_matrix",
    "CausalityReport",
    "KernelEstimate",
    "Waveform",
    "assess_causality",
    "extract_kernel",
    "front_leakage",
    "propagate",
    "synthesize_pulse",
    "ScanRegion",
    "SingularityReport",
    "certify",
    "default_region",
    "scan_upper_half_plane",
    "RunResult",
    "ScenarioConfig",
    "load_scenario",
    "run_scenario",
    "__version__",
]
