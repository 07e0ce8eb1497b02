"""Steady-state optomechanical entanglement induced by backward stimulated Brillouin scattering."""

from .entanglement import (
    EntanglementResult,
    ModePair,
    compute_sigma,
    extract_pair_covariance,
    logarithmic_negativity,
    min_symplectic_eigenvalue_pt,
    physicality_check,
)
from .exceptions import (
    ConfigError,
    DivergenceError,
    NumericalError,
    ParameterError,
    SolverError,
    UnphysicalStateError,
    UnstableSystemError,
    UnsupportedFeatureError,
)
from .lyapunov import SolveReport, evolve_covariance, lyapunov_residual, solve_steady_covariance
from .model import (
    SystemParams,
    build_diffusion_matrix,
    build_drift_matrix,
    control_amplitude,
    effective_brillouin_coupling,
    thermal_occupancy,
)
from .stability import StabilityReport, assess_stability
from .sweep import SweepAxis, SweepRecord, run_sweep

__version__ = "0.1.0"
