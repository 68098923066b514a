"""Hard-edge Pearcey process: kernels, Fredholm determinants, asymptotics, dynamics."""

__version__ = "0.1.0"

from .asymptotics import (
    counting_mean_expansion,
    counting_variance_expansion,
    gap_log_expansion,
    hamiltonian_expansion,
    oscillation_amplitude,
    phase,
)
from .dynamics import (
    HamiltonianState,
    Trajectory,
    first_integral_residuals,
    gauge_hamiltonian,
    hamiltonian,
    identity_report,
    seed_large_s,
    solve_hamiltonian_flow,
)
from .fredholm import (
    GridSpec,
    counting_mean,
    counting_mgf,
    counting_variance,
    gap_log_probability,
    resolvent_at_endpoint,
)
from .pearcey import (
    ModelParams,
    NumericalInstabilityError,
    kernel_contour_oracle,
    kernel_point,
    pk_initial_values,
    psi_tilde,
)
from .specialfn import PrecisionConfig, beta_of_gamma, ln_barnes_g, ln_gamma

__all__ = [
    "__version__",
    "ModelParams",
    "NumericalInstabilityError",
    "PrecisionConfig",
    "GridSpec",
    "HamiltonianState",
    "Trajectory",
    "beta_of_gamma",
    "counting_mean",
    "counting_mean_expansion",
    "counting_mgf",
    "counting_variance",
    "counting_variance_expansion",
    "first_integral_residuals",
    "gap_log_expansion",
    "gap_log_probability",
    "gauge_hamiltonian",
    "hamiltonian",
    "hamiltonian_expansion",
    "identity_report",
    "kernel_contour_oracle",
    "kernel_point",
    "ln_barnes_g",
    "ln_gamma",
    "oscillation_amplitude",
    "phase",
    "pk_initial_values",
    "psi_tilde",
    "resolvent_at_endpoint",
    "seed_large_s",
    "solve_hamiltonian_flow",
]
